"""Separation basis for two massive particles: spin-orbit coupling
coefficients and the momentum-to-separation kernel with its radial equation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .specfun import (
    AngularMomentum,
    _doubled,
    clebsch_gordan,
    free_spherical_wave,
)

__all__ = [
    "CouplingChain",
    "coupling_chain",
    "coupling_coefficient",
    "momentum_separation_overlap",
    "radial_ode_residual",
    "radial_ode_scale",
]


def _triangle(ta, tb, tc):
    return abs(ta - tb) <= tc <= ta + tb and (ta + tb + tc) % 2 == 0


@dataclass(frozen=True)
class CouplingChain:
    """Coefficients <s1 s2 mu1 mu2|S M_S><l S m M_S|J M> for fixed (s1, s2, l, S, J).

    ``table`` maps doubled projections ``(mu1, mu2, m, M_S, M)`` to the
    coefficient; only entries with mu1 + mu2 = M_S and m + M_S = M appear,
    and the table is empty when either triangle rule fails.
    """

    s1: AngularMomentum
    s2: AngularMomentum
    l: AngularMomentum
    S: AngularMomentum
    J: AngularMomentum
    table: dict = field(default_factory=dict, repr=False)


def coupling_chain(s1, s2, l, S, J) -> CouplingChain:
    s1, s2, l, S, J = (AngularMomentum.of(x) for x in (s1, s2, l, S, J))
    table = {}
    if _triangle(s1.two_j, s2.two_j, S.two_j) and _triangle(l.two_j, S.two_j, J.two_j):
        for tmu1 in s1.projections():
            for tmu2 in s2.projections():
                tMS = tmu1 + tmu2
                if abs(tMS) > S.two_j:
                    continue
                for tm in l.projections():
                    tM = tm + tMS
                    if abs(tM) > J.two_j:
                        continue
                    c = _coefficient(s1.two_j, s2.two_j, tmu1, tmu2, l.two_j, tm, S.two_j, J.two_j, tM)
                    table[(tmu1, tmu2, tm, tMS, tM)] = c
    return CouplingChain(s1, s2, l, S, J, table)


def _coefficient(ts1, ts2, tmu1, tmu2, tl, tm, tS, tJ, tM):
    tMS = tmu1 + tmu2
    if tm + tMS != tM or abs(tMS) > tS:
        return 0.0
    h = lambda t: t / 2  # noqa: E731
    spin = clebsch_gordan(h(ts1), h(ts2), h(tmu1), h(tmu2), h(tS), h(tMS))
    if spin == 0.0:
        return 0.0
    return spin * clebsch_gordan(h(tl), h(tS), h(tm), h(tMS), h(tJ), h(tM))


def coupling_coefficient(s1, s2, mu1, mu2, l, m, S, J, M) -> float:
    """<s1 s2 mu1 mu2 | S, mu1+mu2> <l S m, mu1+mu2 | J M>.

    Zero whenever m + mu1 + mu2 != M. The orbital index l must be an integer.
    """
    ts1, ts2, tl, tS, tJ = (_doubled(x) for x in (s1, s2, l, S, J))
    tmu1, tmu2, tm, tM = (_doubled(x) for x in (mu1, mu2, m, M))
    if tl % 2:
        raise ValueError("orbital angular momentum l must be an integer")
    for tj, tmj, name in ((ts1, tmu1, "mu1"), (ts2, tmu2, "mu2"), (tl, tm, "m"), (tJ, tM, "M")):
        if abs(tmj) > tj or (tj - tmj) % 2:
            raise ValueError(f"invalid projection {name}={tmj / 2} for j={tj / 2}")
    return _coefficient(ts1, ts2, tmu1, tmu2, tl, tm, tS, tJ, tM)


def momentum_separation_overlap(l, p, r) -> float:
    """Overlap of momentum-magnitude and separation-magnitude eigenvectors.

    Diagonal in (J, M, l, S); the non-trivial factor is the free spherical
    wave sqrt(2/pi) p r j_l(p r).
    """
    if p <= 0 or r <= 0:
        raise ValueError("momentum_separation_overlap needs p > 0 and r > 0")
    return free_spherical_wave(l, p, r)


def radial_ode_residual(l, p, r, h) -> float:
    """Central-difference residual of -y'' + l(l+1)/r^2 y - p^2 y for y = y_l(., p).

    Pure discretization error, O(h^2).
    """
    if not h > 0:
        raise ValueError("step h must be > 0")
    if not r > h:
        raise ValueError(f"need r > h, got r={r}, h={h}")
    ym, y0, yp = (free_spherical_wave(l, p, rr) for rr in (r - h, r, r + h))
    d2 = (yp - 2.0 * y0 + ym) / (h * h)
    return -d2 + l * (l + 1) / (r * r) * y0 - p * p * y0


def radial_ode_scale(l, p, r) -> float:
    """Size of the individual ODE terms near r, used to make residuals relative.

    With q^2 = p^2 + l(l+1)/r^2 this is q^2 sqrt(y^2 + (y'/q)^2): the local
    amplitude in the oscillatory region, |y''| in the evanescent one, and
    never zero at a node of y.
    """
    q2 = p * p + l * (l + 1) / (r * r)
    y = free_spherical_wave(l, p, r)
    h = 1e-4 * min(r, 1.0 / p)
    dy = (free_spherical_wave(l, p, r + h) - free_spherical_wave(l, p, r - h)) / (2 * h)
    return q2 * math.hypot(y, dy / math.sqrt(q2))
