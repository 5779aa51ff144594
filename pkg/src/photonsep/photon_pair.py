"""Two-photon separation basis in the helicity formalism.

The separation eigenvectors of a photon pair are built with the same free
spherical wave as for massive particles, indexed by the effective orbital
number ell = J - |lambda1 - lambda2|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import bessel_sweep
from .quadrature import QuadratureError, composite_rule
from .specfun import SQRT_2_OVER_PI, Helicity, free_spherical_wave, wigner_D

__all__ = [
    "ChannelError",
    "PhotonChannel",
    "as_helicity",
    "ell_index",
    "separation_kernel",
    "closure_defect",
    "exchange_phase",
    "basis_weight",
]


class ChannelError(ValueError):
    """Quantum numbers outside the allowed two-photon channel set."""


def as_helicity(lam) -> Helicity:
    try:
        return Helicity(int(lam))
    except (ValueError, TypeError):
        raise ValueError(f"photon helicity must be +1 or -1, got {lam!r}") from None


@dataclass(frozen=True)
class PhotonChannel:
    J: int
    M: int
    lambda1: Helicity
    lambda2: Helicity

    def __post_init__(self):
        object.__setattr__(self, "lambda1", as_helicity(self.lambda1))
        object.__setattr__(self, "lambda2", as_helicity(self.lambda2))
        dl = abs(self.lambda1 - self.lambda2)
        if self.J < dl:
            raise ChannelError(f"J={self.J} below |lambda1 - lambda2| = {dl}")
        if abs(self.M) > self.J:
            raise ChannelError(f"|M|={abs(self.M)} exceeds J={self.J}")

    @classmethod
    def overlap_channel(cls, J, lambda1, lambda2):
        """The channel M = lambda1 - lambda2, the only one a head-on pair populates."""
        return cls(J, int(lambda1) - int(lambda2), lambda1, lambda2)

    @property
    def ell(self) -> int:
        return ell_index(self.J, self.lambda1, self.lambda2)


def ell_index(J, lambda1, lambda2) -> int:
    """Effective orbital index J - |lambda1 - lambda2|."""
    dl = abs(as_helicity(lambda1) - as_helicity(lambda2))
    if int(J) != J or J < dl:
        raise ChannelError(f"J={J} not allowed for |lambda1 - lambda2| = {dl}")
    return int(J) - dl


def separation_kernel(channel: PhotonChannel, k, r):
    """<r, Q | k, Q> = sqrt(2/pi) k r j_ell(k r), diagonal in every channel label."""
    return free_spherical_wave(channel.ell, k, r)


def exchange_phase(J, lambda1, lambda2) -> int:
    """(-1)^(J + lambda1 - lambda2), the sign picked up under particle exchange."""
    ell_index(J, lambda1, lambda2)
    return -1 if (int(J) + int(lambda1) - int(lambda2)) % 2 else 1


def basis_weight(channel: PhotonChannel, theta, phi):
    """Angular weight of the helicity partial-wave projection.

    exp(-i lambda2 (2 phi + pi)) sqrt((2J+1)/(4 pi)) conj(D^J_{M, lambda1-lambda2}).
    """
    lam = int(channel.lambda1) - int(channel.lambda2)
    d = wigner_D(channel.J, channel.M, lam, theta, phi)
    phase = np.exp(-1j * int(channel.lambda2) * (2 * np.asarray(phi, dtype=float) + math.pi))
    val = phase * math.sqrt((2 * channel.J + 1) / (4 * math.pi)) * np.conj(d)
    if np.ndim(val) == 0:
        return complex(val)
    return val


def _wave_matrix(ell, k, r):
    x = np.multiply.outer(k, r)
    j = bessel_sweep(x.ravel(), ell)[:, ell].reshape(x.shape)
    return SQRT_2_OVER_PI * x * j


def _panels_for(length, freq, order):
    # eight nodes per period of the fastest oscillation, plus a floor
    per = 8.0 * length * freq / (2 * math.pi) / order
    return max(8, int(math.ceil(per)))


def closure_defect(ell, g, r_grid, k_max, tol=1e-8, order=16):
    """Relative L2 error of g against its truncated double transform.

    g_hat(r) = int_0^k_max dk y_ell(k r) int dr' y_ell(k r') g(r'), with the
    r integrals over [min(r_grid), max(r_grid)]. Both transforms are checked
    by panel doubling; a change larger than ``tol`` raises QuadratureError.
    """
    if ell < 0 or int(ell) != ell:
        raise ValueError("ell must be a non-negative integer")
    ell = int(ell)
    if not k_max > 0:
        raise ValueError("k_max must be > 0")
    r_grid = np.asarray(r_grid, dtype=float)
    a, b = float(r_grid.min()), float(r_grid.max())
    if not 0 <= a < b:
        raise ValueError("r_grid must span an interval inside [0, inf)")

    nr = _panels_for(b - a, k_max, order)
    nk = _panels_for(k_max, b, order)
    R1, R2 = composite_rule(a, b, nr, order), composite_rule(a, b, 2 * nr, order)
    K1, K2 = composite_rule(0.0, k_max, nk, order), composite_rule(0.0, k_max, 2 * nk, order)

    g2 = np.asarray(g(R2.nodes), dtype=float)
    norm = math.sqrt(float(np.dot(R2.weights, g2 * g2)))
    if norm == 0.0:
        return 0.0
    g1 = np.asarray(g(R1.nodes), dtype=float)

    Y22 = _wave_matrix(ell, K2.nodes, R2.nodes)
    G_fine = Y22 @ (R2.weights * g2)
    G_coarse = _wave_matrix(ell, K2.nodes, R1.nodes) @ (R1.weights * g1)
    inner = np.max(np.abs(G_fine - G_coarse)) / max(np.max(np.abs(G_fine)), 1e-300)
    if inner > tol:
        raise QuadratureError(f"inner transform unconverged: change {inner:.3g} > tol {tol:.3g}",
                              error_estimate=float(inner), panels=2 * nr)

    ghat = Y22.T @ (K2.weights * G_fine)
    Y12 = _wave_matrix(ell, K1.nodes, R2.nodes)
    ghat_coarse = Y12.T @ (K1.weights * (Y12 @ (R2.weights * g2)))
    outer = np.max(np.abs(ghat - ghat_coarse)) / max(np.max(np.abs(ghat)), 1e-300)
    if outer > tol:
        raise QuadratureError(f"outer transform unconverged: change {outer:.3g} > tol {tol:.3g}",
                              error_estimate=float(outer), panels=2 * nk)

    diff = ghat - g2
    return math.sqrt(float(np.dot(R2.weights, diff * diff))) / norm
