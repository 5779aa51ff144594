"""Built-in invariant suite.

Each check computes a single non-negative defect and compares it with a
pinned tolerance; ``run_checks`` returns a machine-readable report. The
``tamper`` argument exists for fault-injection tests: a tampered check has
its tolerance forced negative so it must fail.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import massive_pair, photon_pair, quadrature, scattering_model as sm, specfun

__all__ = ["Check", "CheckResult", "CHECKS", "check_names", "run_checks"]


@dataclass(frozen=True)
class Check:
    name: str
    tolerance: float
    measure: Callable[[], float]
    description: str = ""


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tolerance: float
    passed: bool
    seconds: float
    error: str | None = None

    def as_dict(self):
        return asdict(self)


def _cg_orthogonality():
    worst = 0.0
    for t1 in range(0, 9):
        for t2 in range(0, 9):
            for tM in range(-(t1 + t2), t1 + t2 + 1, 2):
                pairs = [(a, tM - a) for a in range(-t1, t1 + 1, 2) if abs(tM - a) <= t2]
                Js = [tJ for tJ in range(abs(t1 - t2), t1 + t2 + 1, 2) if abs(tM) <= tJ]
                C = np.array([[specfun.clebsch_gordan(t1 / 2, t2 / 2, a / 2, b / 2, tJ / 2, tM / 2)
                               for tJ in Js] for a, b in pairs])
                worst = max(worst, float(np.max(np.abs(C.T @ C - np.eye(len(Js))))),
                            float(np.max(np.abs(C @ C.T - np.eye(len(pairs))))))
    return worst


def _cg_known_values():
    expected = [
        ((0.5, 0.5, 0.5, -0.5, 0, 0), math.sqrt(0.5)),
        ((0.5, 0.5, -0.5, 0.5, 0, 0), -math.sqrt(0.5)),
        ((1, 1, 1, -1, 2, 0), math.sqrt(1 / 6)),
        ((1, 1, 0, 0, 1, 0), 0.0),
        ((1, 0.5, 1, -0.5, 1.5, 0.5), math.sqrt(1 / 3)),
    ]
    return max(abs(specfun.clebsch_gordan(*args) - v) for args, v in expected)


def _wigner_unitarity():
    worst = 0.0
    beta = np.linspace(0.0, math.pi, 50)
    for tj in range(0, 41):
        d = specfun.wigner_small_d_matrix(tj / 2, beta)
        gram = np.einsum("ikb,jkb->bij", d, d)
        worst = max(worst, float(np.max(np.abs(gram - np.eye(tj + 1)))))
    return worst


def _wigner_composition():
    worst = 0.0
    for tj in (1, 2, 5, 12):
        a = specfun.wigner_small_d_matrix(tj / 2, 0.4)
        b = specfun.wigner_small_d_matrix(tj / 2, 1.1)
        c = specfun.wigner_small_d_matrix(tj / 2, 1.5)
        worst = max(worst, float(np.max(np.abs(a @ b - c))))
    return worst


def _bessel_recurrence():
    worst = 0.0
    lmax = 60
    for x in (0.05, 0.7, 3.0, 25.0, 150.0, 1200.0):
        j = specfun.sph_bessel_j_all(lmax, x)
        l = np.arange(1, lmax)
        res = j[:-2] + j[2:] - (2 * l + 1) / x * j[1:-1]
        worst = max(worst, float(np.max(np.abs(res))))
    return worst


def _bessel_known_values():
    x = 1.0
    ref = [math.sin(x) / x, math.sin(x) / x ** 2 - math.cos(x) / x,
           (3 / x ** 2 - 1) * math.sin(x) / x - 3 * math.cos(x) / x ** 2]
    j = specfun.sph_bessel_j_all(2, x)
    return max(abs(a - b) for a, b in zip(j, ref))


def _ln_factorial():
    return max(abs(specfun.ln_factorial(n) - math.log(math.factorial(n))) / max(1.0, math.log(math.factorial(n)))
               for n in (0, 1, 5, 10, 50, 170))


def _gauss_legendre_exactness():
    rule = quadrature.gauss_legendre(8, -1.0, 2.0)
    worst = 0.0
    for k in range(16):
        exact = (2.0 ** (k + 1) - (-1.0) ** (k + 1)) / (k + 1)
        worst = max(worst, abs(rule.integrate(lambda x: x ** k) - exact) / max(1.0, abs(exact)))
    return worst


def _windowed_gaussian():
    c, w, R = 1.0, 0.01, 300.0
    res = quadrature.integrate_windowed(
        lambda k: np.exp(-((k - c) ** 2) / (2 * w * w)) * np.exp(1j * k * R), c, w, oscillation_scale=R)
    exact = math.sqrt(2 * math.pi) * w * math.exp(-0.5 * (w * R) ** 2) * complex(math.cos(c * R), math.sin(c * R))
    return abs(res.value - exact) / abs(exact)


def _coupling_orthonormality():
    chains = [massive_pair.coupling_chain(0.5, 0.5, 1, S, J) for S in (0, 1) for J in (0, 1, 2)]
    worst = 0.0
    for tM in (-2, 0, 2):
        cols = []
        for ch in chains:
            if abs(tM) > ch.J.two_j or not ch.table:
                continue
            col = {}
            for (a, b, m, _, M), v in ch.table.items():
                if M == tM:
                    col[(a, b, m)] = v
            cols.append(col)
        keys = sorted({k for c in cols for k in c})
        A = np.array([[c.get(k, 0.0) for c in cols] for k in keys])
        worst = max(worst, float(np.max(np.abs(A.T @ A - np.eye(A.shape[1])))))
    return worst


def _radial_ode():
    worst = 0.0
    for l in (0, 3, 10):
        for p, r in ((1.0, 7.5), (0.5, 31.0)):
            h = 0.005 * min(r, 1.0 / p)
            a = massive_pair.radial_ode_residual(l, p, r, h)
            b = massive_pair.radial_ode_residual(l, p, r, h / 2)
            worst = max(worst, abs(4 * b - a) / 3 / massive_pair.radial_ode_scale(l, p, r))
    return worst


def _closure():
    def g(r):
        return np.exp(-((r - 50.0) ** 2) / 50.0)
    return photon_pair.closure_defect(0, g, np.array([0.0, 100.0]), 10.0)


def _photon_channel_rules():
    bad = 0
    for J in (0, 1):
        try:
            photon_pair.PhotonChannel.overlap_channel(J, 1, -1)
            bad += 1
        except photon_pair.ChannelError:
            pass
    photon_pair.PhotonChannel.overlap_channel(2, 1, -1)
    photon_pair.PhotonChannel.overlap_channel(0, 1, 1)
    return float(bad)


def _j_max_values():
    return float(abs(sm.j_max(0.001, 1e-16) - 6070) + abs(sm.j_max(0.05, 1e-16) - 121))


def _j_sum_direct():
    return abs(sm.j_sum_direct(0.001, 0) - 1.0)


def _j_min_offset():
    return max(abs(sm.j_sum_direct(e, 2) - sm.j_sum_direct(e, 0)) / (5 * e * e) for e in (0.001, 0.01, 0.05))


def _density_norm():
    return abs(sm.separation_density(sm.WavepacketParams()).norm - 1.0)


def _density_shape():
    p = sm.WavepacketParams()
    r = np.linspace(p.R - 6 * math.sqrt(2) * p.sigma_r, p.R + 6 * math.sqrt(2) * p.sigma_r, 201)
    prof = sm.separation_density(p, r)
    step = r[1] - r[0]
    peak = abs(r[np.argmax(prof.rho)] - p.R) / step
    g = sm.separation_density(p, np.array([p.R, p.R + 2 * p.sigma_r])).rho
    return max(max(0.0, peak - 1.0), abs(g[1] / g[0] - math.exp(-1)))


def _helicity_independence():
    p = sm.WavepacketParams()
    a = sm.separation_density(p).rho
    b = sm.separation_density(p.with_helicities(1, 1)).rho
    return float(np.max(np.abs(a - b)) / np.max(a))


def _odd_j_cancellation():
    p = sm.WavepacketParams(epsilon=0.05, lambda1=1, lambda2=1)
    r = p.R
    peak = max(abs(sm.overlap_amplitude(p, J, r, mode=m)) for J in (0, 2, 4) for m in sm.MODES)
    odd = max(abs(sm.overlap_amplitude(p, J, r, mode=m)) for J in (1, 3, 5, 11) for m in sm.MODES)
    return odd / peak


def _exchange_identity():
    p = sm.WavepacketParams(epsilon=0.05, lambda1=-1, lambda2=-1)
    worst = 0.0
    for J in (0, 1, 2, 7):
        a = sm.amplitude_exact(p, J, p.R * 1.01)
        e = sm.amplitude_exchange_exact(p, J, p.R * 1.01)
        worst = max(worst, abs(e - (-1) ** J * a) / abs(a))
    return worst


def _envelope_bound():
    p = sm.WavepacketParams(epsilon=0.01)
    r = np.linspace(p.R - 200, p.R + 200, 9)
    worst = 0.0
    for J in (2, 30, 120):
        bound = (4 * math.pi * p.sigma_r ** 2) ** -0.25 * p.epsilon * math.sqrt(2 * J + 1)
        vals = np.abs(np.asarray(sm.amplitude_asymptotic(p, J, r)))
        worst = max(worst, float(np.max(vals)) / bound - 1.0)
    return max(0.0, worst)


def _mode_consistency():
    p = sm.WavepacketParams(epsilon=0.01)
    half = 4 * math.sqrt(2) * p.sigma_r
    r = np.linspace(p.R - half, p.R + half, 81)
    Js = np.arange(2, int(round(2 / p.epsilon)) + 1)
    ex, _ = sm.overlap_table(p, r, Js, mode=sm.EXACT)
    asy, _ = sm.overlap_table(p, r, Js, mode=sm.ASYMPTOTIC)
    return float(np.linalg.norm(np.abs(ex) - np.abs(asy)) / np.linalg.norm(np.abs(asy)))


def _scale_covariance():
    a = sm.WavepacketParams(k0=1.0, epsilon=0.01)
    b = sm.WavepacketParams(k0=2.5, epsilon=0.01)
    ra = sm.default_r_grid(a)
    pa = sm.separation_density(a, ra)
    pb = sm.separation_density(b, ra / 2.5)
    return float(np.max(np.abs(pb.rho - 2.5 * pa.rho)) / np.max(pb.rho))


CHECKS = (
    Check("ln_factorial", 1e-13, _ln_factorial, "log-factorial table against exact factorials"),
    Check("cg_orthogonality", 1e-11, _cg_orthogonality, "Clebsch-Gordan orthogonality, two_j <= 8"),
    Check("cg_known_values", 1e-14, _cg_known_values, "tabulated Clebsch-Gordan values"),
    Check("wigner_unitarity", 1e-11, _wigner_unitarity, "d d^T = 1 for two_j <= 40"),
    Check("wigner_composition", 1e-12, _wigner_composition, "d(a) d(b) = d(a + b)"),
    Check("bessel_recurrence", 1e-11, _bessel_recurrence, "three-term recurrence residual"),
    Check("bessel_known_values", 1e-15, _bessel_known_values, "j_0, j_1, j_2 at x = 1"),
    Check("gauss_legendre_exactness", 1e-13, _gauss_legendre_exactness, "degree <= 15 exact with 8 nodes"),
    Check("windowed_gaussian", 1e-9, _windowed_gaussian, "oscillatory Gaussian integral vs closed form"),
    Check("coupling_orthonormality", 1e-12, _coupling_orthonormality, "spin-1/2 pair coupling chains"),
    Check("radial_ode", 1e-8, _radial_ode, "extrapolated radial-equation residual"),
    Check("closure", 1e-3, _closure, "closure defect, l = 0"),
    Check("photon_channel_rules", 0.0, _photon_channel_rules, "J >= |lambda1 - lambda2| enforced"),
    Check("j_max_values", 0.0, _j_max_values, "truncation index examples"),
    Check("j_sum_direct", 1e-4, _j_sum_direct, "direct J-sum equals one"),
    Check("j_min_offset", 1.0, _j_min_offset, "J_min offset within 5 eps^2"),
    Check("density_norm", 1e-3, _density_norm, "trapezoid norm of the density"),
    Check("density_shape", 1e-3, _density_shape, "peak at R, e-folding at 2 sigma_r"),
    Check("helicity_independence", 1e-5, _helicity_independence, "equal vs opposite helicity densities"),
    Check("odd_j_cancellation", 1e-12, _odd_j_cancellation, "odd J vanish for equal helicities"),
    Check("exchange_identity", 1e-13, _exchange_identity, "exchange term is (-1)^J times direct"),
    Check("envelope_bound", 1e-12, _envelope_bound, "asymptotic amplitude envelope bound"),
    Check("scale_covariance", 1e-12, _scale_covariance, "k0 rescaling is a unit change"),
    Check("mode_consistency", 0.05, _mode_consistency, "exact vs asymptotic |amplitude|, relative L2"),
)


def check_names():
    return [c.name for c in CHECKS]


def run_checks(names=None, tamper=()):
    """Run the suite (or the named subset) and return a list of CheckResult."""
    selected = CHECKS if names is None else [c for c in CHECKS if c.name in set(names)]
    unknown = set(tamper) - set(check_names())
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(sorted(unknown))}")
    out = []
    for check in selected:
        tol = -1.0 if check.name in tamper else check.tolerance
        t0 = time.perf_counter()
        try:
            measured = float(check.measure())
            err = None
        except Exception as exc:  # a crashing check is a failing check
            measured, err = math.nan, f"{type(exc).__name__}: {exc}"
        dt = time.perf_counter() - t0
        passed = err is None and measured <= tol
        out.append(CheckResult(check.name, measured, tol, passed, dt, err))
    return out
