"""Special functions: log-factorials, Clebsch-Gordan coefficients, Wigner
rotation matrices, spherical Bessel functions and free spherical waves.

Angular momenta are handled internally as doubled integers (``two_j``) so
half-integer spins are exact. Public functions accept plain numbers
(``1``, ``0.5``, ``Fraction(3, 2)``) or :class:`AngularMomentum` instances.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Real

import numpy as np

from ._kernels import bessel_sweep

__all__ = [
    "AngularMomentum",
    "Helicity",
    "ln_factorial",
    "clebsch_gordan",
    "clebsch_gordan_table",
    "wigner_small_d",
    "wigner_small_d_matrix",
    "wigner_D",
    "sph_bessel_j",
    "sph_bessel_j_all",
    "free_spherical_wave",
    "asymptotic_wave",
]

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)

_LNF_TABLE_SIZE = 20001
# read-only after import, so concurrent readers see identical values
_LNF_TABLE = np.array([math.lgamma(n + 1.0) for n in range(_LNF_TABLE_SIZE)])
_LNF_TABLE[:2] = 0.0


@dataclass(frozen=True, order=True)
class AngularMomentum:
    """An angular-momentum quantum number stored as ``two_j = 2j``."""

    two_j: int

    def __post_init__(self):
        if not isinstance(self.two_j, (int, np.integer)) or self.two_j < 0:
            raise ValueError(f"two_j must be a non-negative integer, got {self.two_j!r}")

    @classmethod
    def of(cls, j) -> "AngularMomentum":
        return cls(_doubled(j))

    @property
    def j(self) -> float:
        return self.two_j / 2

    def projections(self):
        """Doubled projections ``two_m`` from ``-two_j`` to ``two_j``."""
        return range(-self.two_j, self.two_j + 1, 2)

    def allows(self, two_m: int) -> bool:
        return abs(two_m) <= self.two_j and (self.two_j - two_m) % 2 == 0


class Helicity(enum.IntEnum):
    """Photon helicity; only the two transverse values exist."""

    MINUS = -1
    PLUS = 1


def _doubled(x) -> int:
    if isinstance(x, AngularMomentum):
        return x.two_j
    if isinstance(x, (int, np.integer)):
        return 2 * int(x)
    if isinstance(x, Fraction):
        t = 2 * x
        if t.denominator != 1:
            raise ValueError(f"{x} is not a multiple of 1/2")
        return int(t)
    if isinstance(x, Real):
        t = 2.0 * float(x)
        n = round(t)
        if abs(t - n) > 1e-9:
            raise ValueError(f"{x} is not a multiple of 1/2")
        return int(n)
    raise TypeError(f"cannot interpret {x!r} as an angular-momentum value")


def _check_projection(two_j, two_m, name="m"):
    if abs(two_m) > two_j or (two_j - two_m) % 2:
        raise ValueError(f"invalid projection {name}={two_m / 2} for j={two_j / 2}")


def ln_factorial(n) -> float:
    """ln(n!) for integer n >= 0."""
    if isinstance(n, (float, np.floating)):
        if not float(n).is_integer():
            raise ValueError(f"ln_factorial needs an integer, got {n}")
        n = int(n)
    if n < 0:
        raise ValueError(f"ln_factorial needs n >= 0, got {n}")
    if n < _LNF_TABLE_SIZE:
        return float(_LNF_TABLE[n])
    return math.lgamma(n + 1.0)


def _ln_binom(n, k):
    return ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)


# ---------------------------------------------------------------------------
# Clebsch-Gordan coefficients
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _threej_first_slot(two_j2, two_j3, two_m2, two_m3):
    """3j symbols (j j2 j3; m1 m2 m3) for every allowed j, m1 = -m2 - m3.

    Three-term recurrence in j (Schulten-Gordon form), iterated forward from
    jmin while the magnitude grows and backward from jmax, joined by a
    least-squares match on the overlap. Returns ``(two_jmin, values)``.
    """
    two_m1 = -two_m2 - two_m3
    j2, j3, m1, m2, m3 = two_j2 / 2, two_j3 / 2, two_m1 / 2, two_m2 / 2, two_m3 / 2
    two_jmin = max(abs(two_j2 - two_j3), abs(two_m1))
    two_jmax = two_j2 + two_j3
    if two_jmin > two_jmax:
        return two_jmin, ()
    n = (two_jmax - two_jmin) // 2 + 1
    jmin = two_jmin / 2

    def A(j):
        return math.sqrt(max(0.0, (j * j - (j2 - j3) ** 2) * ((j2 + j3 + 1) ** 2 - j * j) * (j * j - m1 * m1)))

    def B(j):
        return -(2 * j + 1) * (j2 * (j2 + 1) * m1 - j3 * (j3 + 1) * m1 - j * (j + 1) * (m3 - m2))

    sign_top = -1.0 if ((two_j2 - two_j3 - two_m1) // 2) % 2 else 1.0
    if n == 1:
        return two_jmin, (sign_top / math.sqrt(2 * jmin + 1),)

    big, small = 1e100, 1e-100
    f = np.zeros(n)
    if two_jmin == 0:
        # j2 = j3, m1 = 0: the j = 0 equation is trivial, seed from closed forms
        ph = -1.0 if ((two_j2 - two_m2) // 2) % 2 else 1.0
        f[0] = ph / math.sqrt(2 * j2 + 1)
        f[1] = ph * m2 / math.sqrt(j2 * (j2 + 1) * (2 * j2 + 1))
    else:
        f[0] = 1.0
        f[1] = -B(jmin) / (jmin * A(jmin + 1))
    turn = n - 1
    for i in range(1, n - 1):
        j = jmin + i
        f[i + 1] = -(B(j) * f[i] + (j + 1) * A(j) * f[i - 1]) / (j * A(j + 1))
        if abs(f[i + 1]) > big:
            f[: i + 2] *= small
        if abs(f[i + 1]) < abs(f[i]):
            turn = i
            break

    vals = f.copy()
    if turn < n - 1:
        g = np.zeros(n)
        jmax = two_jmax / 2
        g[n - 1] = 1.0
        g[n - 2] = -B(jmax) / ((jmax + 1) * A(jmax))
        lo = max(0, turn - 1)
        for i in range(n - 2, lo, -1):
            j = jmin + i
            g[i - 1] = -(B(j) * g[i] + j * A(j + 1) * g[i + 1]) / ((j + 1) * A(j))
            if abs(g[i - 1]) > big:
                g[i - 1:] *= small
        hi = min(turn + 1, n - 1)
        num = float(np.dot(f[lo:hi + 1], g[lo:hi + 1]))
        den = float(np.dot(g[lo:hi + 1], g[lo:hi + 1]))
        vals[turn + 1:] = g[turn + 1:] * (num / den)
        vals[: turn + 1] = f[: turn + 1]

    js = jmin + np.arange(n)
    norm = math.sqrt(math.fsum((2 * js + 1) * vals * vals))
    vals /= norm
    if vals[-1] * sign_top < 0:
        vals = -vals
    return two_jmin, tuple(float(v) for v in vals)


def clebsch_gordan_table(j1, j2, m1, m2):
    """All coefficients <j1 m1 j2 m2 | J, m1+m2> as a dict keyed by ``two_J``."""
    t1, t2, tm1, tm2 = _doubled(j1), _doubled(j2), _doubled(m1), _doubled(m2)
    _check_projection(t1, tm1, "m1")
    _check_projection(t2, tm2, "m2")
    return dict(_cg_table(t1, t2, tm1, tm2))


@lru_cache(maxsize=4096)
def _cg_table(t1, t2, tm1, tm2):
    tM = tm1 + tm2
    two_jmin, vals = _threej_first_slot(t1, t2, tm1, tm2)
    out = {}
    for i, v in enumerate(vals):
        tJ = two_jmin + 2 * i
        phase = -1.0 if ((t1 - t2 + tM) // 2) % 2 else 1.0
        out[tJ] = phase * math.sqrt(tJ + 1) * v
    return out


def clebsch_gordan(j1, j2, m1, m2, J, M) -> float:
    """Clebsch-Gordan coefficient <j1 j2; m1 m2 | J M>, Condon-Shortley phases.

    Returns exactly 0.0 when ``m1 + m2 != M`` or the triangle rule fails.
    Invalid projections (|m| > j or wrong parity) raise ``ValueError``.
    """
    t1, t2, tJ = _doubled(j1), _doubled(j2), _doubled(J)
    tm1, tm2, tM = _doubled(m1), _doubled(m2), _doubled(M)
    _check_projection(t1, tm1, "m1")
    _check_projection(t2, tm2, "m2")
    _check_projection(tJ, tM, "M")
    if tm1 + tm2 != tM:
        return 0.0
    if tJ < abs(t1 - t2) or tJ > t1 + t2 or (t1 + t2 + tJ) % 2:
        return 0.0
    return _cg_table(t1, t2, tm1, tm2).get(tJ, 0.0)


# ---------------------------------------------------------------------------
# Wigner rotation matrices
# ---------------------------------------------------------------------------


def _jacobi(k, a, b, x):
    # forward three-term recurrence, stable on [-1, 1]
    x = np.asarray(x, dtype=float)
    p0 = np.ones_like(x)
    if k == 0:
        return p0
    p1 = (a + 1) + (a + b + 2) * (x - 1) / 2
    for n in range(1, k):
        s = 2 * n + a + b
        c1 = 2 * (n + 1) * (n + a + b + 1) * s
        c2 = (s + 1) * ((s + 2) * s * x + a * a - b * b)
        c3 = 2 * (n + a) * (n + b) * (s + 2)
        p0, p1 = p1, (c2 * p1 - c3 * p0) / c1
    return p1


def wigner_small_d(j, m1, m2, beta):
    """Wigner small-d element d^j_{m1 m2}(beta) = <j m1| exp(-i beta J_y) |j m2>.

    Evaluated through the Jacobi-polynomial representation with log-factorial
    prefactors. ``beta`` may be a scalar or an array.
    """
    tj, tmp, tm = _doubled(j), _doubled(m1), _doubled(m2)
    _check_projection(tj, tmp, "m1")
    _check_projection(tj, tm, "m2")
    beta_arr = np.asarray(beta, dtype=float)

    jpm, jmm = (tj + tm) // 2, (tj - tm) // 2
    jpmp, jmmp = (tj + tmp) // 2, (tj - tmp) // 2
    k = min(jpm, jmm, jpmp, jmmp)
    if k == jpm:
        a = (tmp - tm) // 2
        lam = a
    elif k == jmm:
        a = (tm - tmp) // 2
        lam = 0
    elif k == jpmp:
        a = (tm - tmp) // 2
        lam = 0
    else:
        a = (tmp - tm) // 2
        lam = a
    b = tj - 2 * k - a

    half = beta_arr / 2
    s, c = np.sin(half), np.cos(half)
    ln_pref = 0.5 * (_ln_binom(tj - k, k + a) - _ln_binom(k + b, b))
    # cos(beta) - 1 = -2 sin^2(beta/2) keeps precision near beta = 0
    x = 1.0 - 2.0 * s * s
    p = _jacobi(k, a, b, x)
    with np.errstate(divide="ignore", under="ignore"):
        ln_sc = (a * np.log(np.abs(s)) if a else 0.0) + (b * np.log(np.abs(c)) if b else 0.0)
    mag = np.exp(ln_pref + ln_sc)
    sgn = np.where(s < 0, (-1.0) ** a, 1.0) * np.where(c < 0, (-1.0) ** b, 1.0)
    val = (-1.0) ** lam * sgn * mag * p
    if np.ndim(val) == 0:
        return float(val)
    return val


def wigner_small_d_matrix(j, beta):
    """Full (2j+1)x(2j+1) d-matrix, rows/columns ordered m = j, j-1, ..., -j."""
    tj = _doubled(j)
    ms = list(range(tj, -tj - 1, -2))
    out = np.empty((len(ms), len(ms)) + np.shape(beta))
    for a, tm1 in enumerate(ms):
        for b, tm2 in enumerate(ms):
            out[a, b] = wigner_small_d(Fraction(tj, 2), Fraction(tm1, 2), Fraction(tm2, 2), beta)
    return out


def wigner_D(j, M, lam, theta, phi):
    """Matrix element of the rotation R_z(phi) R_y(theta) R_z(-phi).

    Equal to exp(-i M phi) d^j_{M lam}(theta) exp(+i lam phi).
    """
    tM, tl = _doubled(M), _doubled(lam)
    d = wigner_small_d(j, M, lam, theta)
    phase = np.exp(-0.5j * (tM - tl) * np.asarray(phi, dtype=float))
    val = phase * d
    if np.ndim(val) == 0:
        return complex(val)
    return val


# ---------------------------------------------------------------------------
# Spherical Bessel functions and free spherical waves
# ---------------------------------------------------------------------------


def _as_order(l):
    if isinstance(l, (float, np.floating)) and float(l).is_integer():
        l = int(l)
    if not isinstance(l, (int, np.integer)) or l < 0:
        raise ValueError(f"order l must be a non-negative integer, got {l!r}")
    return int(l)


def sph_bessel_j_all(lmax, x):
    """j_l(x) for l = 0..lmax; shape ``x.shape + (lmax + 1,)``."""
    lmax = _as_order(lmax)
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise ValueError("spherical Bessel argument must be >= 0")
    out = bessel_sweep(xa.ravel(), lmax)
    return out.reshape(xa.shape + (lmax + 1,))


def sph_bessel_j(l, x):
    """Spherical Bessel function of the first kind j_l(x), x >= 0.

    Values whose magnitude falls below 1e-280 are returned as 0.0.
    """
    l = _as_order(l)
    vals = sph_bessel_j_all(l, x)[..., l]
    if np.ndim(vals) == 0:
        return float(vals)
    return vals


def free_spherical_wave(l, p, r):
    """y_l(r, p) = sqrt(2/pi) p r j_l(p r)."""
    p_arr = np.asarray(p, dtype=float)
    r_arr = np.asarray(r, dtype=float)
    if np.any(p_arr <= 0):
        raise ValueError("momentum p must be > 0")
    if np.any(r_arr < 0):
        raise ValueError("separation r must be >= 0")
    x = p_arr * r_arr
    val = SQRT_2_OVER_PI * x * sph_bessel_j(l, x)
    if np.ndim(val) == 0:
        return float(val)
    return val


def asymptotic_wave(l, x):
    """Large-argument form sqrt(2/pi) sin(x - l pi/2) of the free spherical wave."""
    l = _as_order(l)
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise ValueError("asymptotic_wave needs x > 0")
    # reduce the quarter-period shift exactly instead of subtracting l*pi/2
    q = l % 4
    s, c = np.sin(xa), np.cos(xa)
    val = SQRT_2_OVER_PI * (s, -c, -s, c)[q]
    if np.ndim(val) == 0:
        return float(val)
    return val
