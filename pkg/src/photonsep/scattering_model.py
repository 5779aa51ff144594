"""Model two-photon wavepacket: partial-wave coefficients, separation
amplitudes (exact quadrature and closed-form asymptotics), J-sums and the
separation probability density.

Units are natural (hbar = c = 1); lengths are in units of 1/k0 when k0 = 1.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._kernels import weighted_wave_sums
from .photon_pair import PhotonChannel, as_helicity, ell_index
from .quadrature import DEFAULT_TOL, QuadratureError, integrate_windowed_sum
from .specfun import SQRT_2_OVER_PI

__all__ = [
    "EXACT",
    "ASYMPTOTIC",
    "J_SUM_TAIL_TOL",
    "RegimeWarning",
    "DegenerateProfileError",
    "WavepacketParams",
    "AmplitudeProfile",
    "DensityProfile",
    "partial_wave_coefficient",
    "j_max",
    "amplitude_exact",
    "amplitude_exchange_exact",
    "amplitude_asymptotic",
    "amplitude_exchange_asymptotic",
    "overlap_amplitude",
    "overlap_table",
    "amplitude_profile",
    "j_sum_direct",
    "j_sum_alternating",
    "default_r_grid",
    "separation_density",
    "expectation_separation",
]

EXACT = "exact"
ASYMPTOTIC = "asymptotic"
MODES = (EXACT, ASYMPTOTIC)
J_SUM_TAIL_TOL = 1e-20
INV_SQRT2 = 1.0 / math.sqrt(2.0)
# i**n for n mod 4, kept exact so equal-helicity cancellations are exact
_I_POW = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


class RegimeWarning(UserWarning):
    """Parameters outside the large-separation regime of the closed forms."""


class DegenerateProfileError(ValueError):
    """The density profile holds too little probability to define a mean."""


@dataclass(frozen=True)
class WavepacketParams:
    """Physical parameters of the head-on two-photon wavepacket.

    ``sigma_k = epsilon * k0`` is the momentum spread and
    ``sigma_r = 1 / (2 sigma_k)`` the spatial width. When ``R`` is omitted it
    defaults to ``1 / (2 epsilon**1.5 k0)``, so that R / sigma_r = 1/sqrt(epsilon).
    """

    k0: float = 1.0
    epsilon: float = 0.001
    lambda1: int = 1
    lambda2: int = -1
    R: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.k0) and self.k0 > 0):
            raise ValueError(f"k0 must be a positive finite momentum, got {self.k0}")
        if not (math.isfinite(self.epsilon) and 0 < self.epsilon <= 0.2):
            raise ValueError(f"epsilon must lie in (0, 0.2], got {self.epsilon}")
        object.__setattr__(self, "lambda1", int(as_helicity(self.lambda1)))
        object.__setattr__(self, "lambda2", int(as_helicity(self.lambda2)))
        if self.R is None:
            object.__setattr__(self, "R", 1.0 / (2.0 * self.epsilon ** 1.5 * self.k0))
        elif not (math.isfinite(self.R) and self.R > 0):
            raise ValueError(f"R must be a positive finite length, got {self.R}")

    @property
    def sigma_k(self) -> float:
        return self.epsilon * self.k0

    @property
    def sigma_r(self) -> float:
        return 1.0 / (2.0 * self.sigma_k)

    @property
    def delta_lambda(self) -> int:
        return abs(self.lambda1 - self.lambda2)

    @property
    def equal_helicities(self) -> bool:
        return self.lambda1 == self.lambda2

    @property
    def in_asymptotic_regime(self) -> bool:
        return self.R / self.sigma_r >= 3.0 and self.k0 * self.R >= 30.0

    def with_helicities(self, lambda1, lambda2) -> "WavepacketParams":
        return WavepacketParams(self.k0, self.epsilon, lambda1, lambda2, self.R)

    def as_dict(self) -> dict:
        return {
            "k0": self.k0,
            "epsilon": self.epsilon,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "R": self.R,
            "sigma_k": self.sigma_k,
            "sigma_r": self.sigma_r,
        }


@dataclass(frozen=True)
class AmplitudeProfile:
    channel: PhotonChannel
    r_grid: np.ndarray
    values: np.ndarray
    mode: str
    exchange: bool = False
    error_estimate: float = 0.0


@dataclass(frozen=True)
class DensityProfile:
    r_grid: np.ndarray
    rho: np.ndarray
    norm: float
    mode: str
    params: WavepacketParams | None = None
    j_max: int | None = None
    error_estimate: float = 0.0
    meta: dict = field(default_factory=dict)


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _j_weight(eps, J):
    J = np.asarray(J, dtype=float)
    return eps * np.sqrt(2 * J + 1) * np.exp(-0.5 * eps * eps * (J + 0.5) ** 2)


def _momentum_profile(params, kappa):
    s = params.sigma_k
    kappa = np.asarray(kappa, dtype=float)
    return np.exp(-((kappa - params.k0) ** 2) / (2 * s * s)) / (math.pi * s * s) ** 0.25


def partial_wave_coefficient(params: WavepacketParams, J, kappa):
    """Expansion coefficient of the wavepacket on the (kappa, J) basis."""
    if J < 0:
        raise ValueError("J must be >= 0")
    val = _momentum_profile(params, kappa) * np.exp(1j * np.asarray(kappa) * params.R) * _j_weight(params.epsilon, J)
    if np.ndim(val) == 0:
        return complex(val)
    return val


def j_max(epsilon, tail_tol=1e-16) -> int:
    """Smallest J with exp(-epsilon^2 (J + 1/2)^2) below ``tail_tol``."""
    if not 0 < tail_tol < 1:
        raise ValueError("tail_tol must lie in (0, 1)")
    if not epsilon > 0:
        raise ValueError("epsilon must be > 0")
    return max(0, int(math.ceil(math.sqrt(math.log(1.0 / tail_tol)) / epsilon - 0.5)))


# ---------------------------------------------------------------------------
# Exact amplitudes
# ---------------------------------------------------------------------------


def _radial_integrals(params, r, lmax, tol=DEFAULT_TOL):
    """int dkappa y_l(kappa r) g(kappa) exp(i kappa R) for l = 0..lmax."""
    if not r > 0:
        raise ValueError(f"separation r must be > 0, got {r}")

    def weighted_sum(nodes, weights):
        cw = weights * _momentum_profile(params, nodes) * np.exp(1j * nodes * params.R)
        # |y_l| stays below about sqrt(2/pi), which bounds the absolute integrand
        magnitude = SQRT_2_OVER_PI * float(np.sum(np.abs(cw)))
        return weighted_wave_sums(nodes, cw, float(r), int(lmax)), magnitude

    try:
        return integrate_windowed_sum(
            weighted_sum, params.k0, params.sigma_k, oscillation_scale=params.R + r, tol=tol,
        )
    except QuadratureError as exc:
        raise QuadratureError(
            f"{exc} (r={r:.6g}, partial waves l=0..{lmax})",
            value=exc.value, error_estimate=exc.error_estimate, panels=exc.panels,
        ) from exc


def amplitude_exact(params: WavepacketParams, J, r, tol=DEFAULT_TOL) -> complex:
    """Separation amplitude by quadrature over the momentum magnitude."""
    ell = ell_index(J, params.lambda1, params.lambda2)
    res = _radial_integrals(params, r, ell, tol)
    return complex(INV_SQRT2 * _j_weight(params.epsilon, J) * res.value[ell])


def amplitude_exchange_exact(params: WavepacketParams, J, r, tol=DEFAULT_TOL) -> complex:
    """Exchange-term amplitude: partial wave of order J and an extra (-1)^J."""
    if J < 0 or int(J) != J:
        raise ValueError("J must be a non-negative integer")
    J = int(J)
    res = _radial_integrals(params, r, J, tol)
    sign = -1.0 if J % 2 else 1.0
    return complex(sign * INV_SQRT2 * _j_weight(params.epsilon, J) * res.value[J])


# ---------------------------------------------------------------------------
# Asymptotic amplitudes
# ---------------------------------------------------------------------------


def _regime_check(params):
    if not params.in_asymptotic_regime:
        warnings.warn(
            f"R={params.R:.4g} is not large against sigma_r={params.sigma_r:.4g} and 1/k0; "
            "closed-form amplitudes are unreliable here",
            RegimeWarning, stacklevel=3,
        )


def _radial_envelope(params, r):
    r = np.asarray(r, dtype=float)
    sr = params.sigma_r
    return np.exp(-((r - params.R) ** 2) / (8 * sr * sr)) / (4 * math.pi * sr * sr) ** 0.25


def _asymptotic(params, ell, J, r, sign):
    phase = _I_POW[(ell - 1) % 4] * np.exp(-1j * params.k0 * np.asarray(r, dtype=float))
    val = sign * INV_SQRT2 * phase * _radial_envelope(params, r) * _j_weight(params.epsilon, J)
    if np.ndim(val) == 0:
        return complex(val)
    return val


def amplitude_asymptotic(params: WavepacketParams, J, r):
    """Closed-form large-separation amplitude; Gaussian in r about R with std 2 sigma_r."""
    ell = ell_index(J, params.lambda1, params.lambda2)
    _regime_check(params)
    return _asymptotic(params, ell, J, r, 1.0)


def amplitude_exchange_asymptotic(params: WavepacketParams, J, r):
    if J < 0 or int(J) != J:
        raise ValueError("J must be a non-negative integer")
    J = int(J)
    _regime_check(params)
    return _asymptotic(params, J, J, r, -1.0 if J % 2 else 1.0)


# ---------------------------------------------------------------------------
# Overlaps
# ---------------------------------------------------------------------------


def overlap_amplitude(params: WavepacketParams, J, r, mode=ASYMPTOTIC, tol=DEFAULT_TOL):
    """Overlap of a separation eigenvector with the symmetrized wavepacket.

    The exchange term only enters for equal helicities, where it equals
    (-1)^J times the direct term, so odd J cancel exactly.
    """
    _check_mode(mode)
    ell_index(J, params.lambda1, params.lambda2)
    if mode == ASYMPTOTIC:
        direct = amplitude_asymptotic(params, J, r)
        if params.equal_helicities:
            return direct + amplitude_exchange_asymptotic(params, J, r)
        return direct
    table, _ = overlap_table(params, [r], [J], mode=EXACT, tol=tol)
    return complex(table[0, 0])


def overlap_table(params: WavepacketParams, r_grid, J_values, mode=ASYMPTOTIC,
                  tol=DEFAULT_TOL, workers=1):
    """Overlap amplitudes on an (r, J) grid, shape ``(len(r_grid), len(J_values))``.

    In exact mode every radial integral for one r comes from a single
    quadrature of all needed partial waves. Returns ``(table, max_error)``
    where ``max_error`` is the largest relative quadrature error estimate.
    """
    _check_mode(mode)
    r_grid = np.asarray(r_grid, dtype=float)
    Js = np.asarray(J_values, dtype=int)
    for J in np.unique(Js):
        ell_index(int(J), params.lambda1, params.lambda2)
    dl = params.delta_lambda
    w = _j_weight(params.epsilon, Js)
    sign = np.where(Js % 2, -1.0, 1.0)
    ells = Js - dl

    if mode == ASYMPTOTIC:
        _regime_check(params)
        phase = np.array([_I_POW[(int(e) - 1) % 4] for e in ells])
        base = INV_SQRT2 * np.exp(-1j * params.k0 * r_grid)[:, None] * _radial_envelope(params, r_grid)[:, None]
        table = base * (phase * w)[None, :]
        if params.equal_helicities:
            table = table + table * sign[None, :]
        return table, 0.0

    lmax = int(ells.max()) if ells.size else 0

    def one(r):
        res = _radial_integrals(params, float(r), lmax, tol)
        scale = float(np.max(np.abs(res.value))) or 1.0
        return res.value, res.error_estimate / scale

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, r_grid))
    else:
        results = [one(r) for r in r_grid]

    table = np.empty((r_grid.size, Js.size), dtype=complex)
    max_err = 0.0
    for i, (vals, err) in enumerate(results):
        direct = INV_SQRT2 * w * vals[ells]
        if params.equal_helicities:
            direct = direct + sign * direct
        table[i] = direct
        max_err = max(max_err, err)
    return table, max_err


def amplitude_profile(params: WavepacketParams, J, r_grid, mode=ASYMPTOTIC,
                      exchange=False, tol=DEFAULT_TOL) -> AmplitudeProfile:
    """Direct (or exchange) amplitude of one J channel sampled on ``r_grid``."""
    _check_mode(mode)
    channel = PhotonChannel.overlap_channel(J, params.lambda1, params.lambda2)
    r_grid = np.asarray(r_grid, dtype=float)
    err = 0.0
    if mode == ASYMPTOTIC:
        fn = amplitude_exchange_asymptotic if exchange else amplitude_asymptotic
        values = np.asarray(fn(params, J, r_grid), dtype=complex)
    else:
        ell = J if exchange else channel.ell
        w = _j_weight(params.epsilon, J)
        sign = (-1.0 if J % 2 else 1.0) if exchange else 1.0
        values = np.empty(r_grid.size, dtype=complex)
        for i, r in enumerate(r_grid):
            res = _radial_integrals(params, float(r), ell, tol)
            values[i] = sign * INV_SQRT2 * w * res.value[ell]
            err = max(err, res.error_estimate / (float(np.max(np.abs(res.value))) or 1.0))
    return AmplitudeProfile(channel, r_grid, values, mode, exchange, err)


# ---------------------------------------------------------------------------
# J sums and the separation density
# ---------------------------------------------------------------------------


def _j_sum_terms(epsilon, J_min, J_max):
    if not 0 < epsilon <= 0.2:
        raise ValueError("epsilon must lie in (0, 0.2]")
    if J_min < 0:
        raise ValueError("J_min must be >= 0")
    J = np.arange(int(J_min), int(J_max) + 1, dtype=float)
    return J, epsilon * epsilon * (2 * J + 1) * np.exp(-epsilon * epsilon * (J + 0.5) ** 2)


def j_sum_direct(epsilon, J_min=0, tail_tol=J_SUM_TAIL_TOL, J_max=None) -> float:
    """sum_{J >= J_min} epsilon^2 (2J+1) exp(-epsilon^2 (J+1/2)^2).

    Truncated at :func:`j_max` (``epsilon``, ``tail_tol``) unless ``J_max``
    is given; summed with correctly rounded ``math.fsum``.
    """
    top = j_max(epsilon, tail_tol) if J_max is None else J_max
    _, terms = _j_sum_terms(epsilon, J_min, top)
    return math.fsum(terms)


def j_sum_alternating(epsilon, J_min=0, tail_tol=J_SUM_TAIL_TOL, J_max=None) -> float:
    """sum_{J >= J_min} (-1)^J epsilon^2 (2J+1) exp(-epsilon^2 (J+1/2)^2)."""
    top = j_max(epsilon, tail_tol) if J_max is None else J_max
    J, terms = _j_sum_terms(epsilon, J_min, top)
    return math.fsum(np.where(J % 2, -terms, terms))


def default_r_grid(params: WavepacketParams, points=201, half_width=6.0 * math.sqrt(2.0)):
    """Uniform grid over R +- half_width * sigma_r, clamped to r > 0."""
    lo = params.R - half_width * params.sigma_r
    hi = params.R + half_width * params.sigma_r
    lo = max(lo, 1e-6 * hi)
    return np.linspace(lo, hi, points)


def _orderings(params):
    # distinct helicity orderings of the separation eigenvectors: both
    # (l1, l2) and (l2, l1) carry the same |amplitude| when l1 != l2
    return 1 if params.equal_helicities else 2


def separation_density(params: WavepacketParams, r_grid=None, mode=ASYMPTOTIC,
                       tail_tol=J_SUM_TAIL_TOL, tol=DEFAULT_TOL, workers=1) -> DensityProfile:
    """Separation probability density summed over J and helicity orderings.

    Asymptotic mode uses the closed form: a normalized Gaussian of standard
    deviation sqrt(2) sigma_r about R times the J sums. Exact mode sums
    |overlap|^2 of quadrature amplitudes, J ascending, at every grid point.
    """
    _check_mode(mode)
    r_grid = default_r_grid(params) if r_grid is None else np.asarray(r_grid, dtype=float)
    if np.any(r_grid <= 0) or np.any(np.diff(r_grid) <= 0):
        raise ValueError("r_grid must be strictly increasing and positive")
    top = j_max(params.epsilon, tail_tol)
    J_min = params.delta_lambda
    err = 0.0

    if mode == ASYMPTOTIC:
        _regime_check(params)
        sr = params.sigma_r
        gauss = np.exp(-((r_grid - params.R) ** 2) / (4 * sr * sr)) / math.sqrt(4 * math.pi * sr * sr)
        total = j_sum_direct(params.epsilon, J_min, J_max=top)
        if params.equal_helicities:
            total += j_sum_alternating(params.epsilon, J_min, J_max=top)
        rho = gauss * total
    else:
        Js = np.arange(J_min, top + 1)
        table, err = overlap_table(params, r_grid, Js, mode=EXACT, tol=tol, workers=workers)
        weight = _orderings(params)
        sq = np.abs(table) ** 2
        rho = np.array([weight * math.fsum(row) for row in sq])

    norm = float(_trapezoid(rho, r_grid))
    return DensityProfile(
        r_grid=r_grid, rho=rho, norm=norm, mode=mode, params=params, j_max=top,
        error_estimate=err,
    )


def expectation_separation(profile: DensityProfile) -> float:
    """Mean separation int r rho dr / int rho dr over the profile grid."""
    if not profile.norm > 0.5:
        raise DegenerateProfileError(
            f"profile norm {profile.norm:.4g} <= 0.5; widen the grid around the peak"
        )
    num = float(_trapezoid(profile.r_grid * profile.rho, profile.r_grid))
    return num / profile.norm
