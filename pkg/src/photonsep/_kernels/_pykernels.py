"""Pure numpy implementations of the hot kernels.

Same signatures and algorithm as the compiled ``_ckernels`` module; used when
the extension is not built or when ``PHOTONSEP_PURE_PYTHON`` is set.
"""

import math

import numpy as np

UNDERFLOW = 1e-280
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def downward_margin(lmax):
    """Extra orders above ``lmax`` where the downward ratio recurrence starts."""
    return int(math.ceil(20.0 + 10.0 * math.log1p(lmax) + 4.0 * (lmax + 1.0) ** (1.0 / 3.0)))


def bessel_sweep(x, lmax):
    """Spherical Bessel j_l(x) for every l in 0..lmax.

    Returns an array of shape ``(len(x), lmax + 1)``. Upward recurrence is used
    up to l = floor(x); above that the ratios j_l/j_{l-1} come from a downward
    recurrence anchored on whichever of the two top upward values is larger.
    """
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    if np.any(x < 0) or np.any(~np.isfinite(x)):
        raise ValueError("bessel_sweep requires finite x >= 0")
    n = x.size
    out = np.zeros((n, lmax + 1))
    if n == 0:
        return out

    pos = x > 0
    out[~pos, 0] = 1.0
    xp = x[pos]
    if xp.size == 0:
        return out

    s, c = np.sin(xp), np.cos(xp)
    up = np.zeros((xp.size, lmax + 1))
    up[:, 0] = s / xp
    # floor(x) caps the upward sweep; beyond it the recurrence is unstable
    top = np.minimum(np.floor(xp), lmax).astype(np.int64)
    if lmax >= 1:
        up[:, 1] = np.where(top >= 1, (s / xp - c) / xp, 0.0)
        for l in range(1, lmax):
            nxt = (2 * l + 1) / xp * up[:, l] - up[:, l - 1]
            up[:, l + 1] = np.where(top >= l + 1, nxt, 0.0)

    need = top < lmax
    if np.any(need):
        xd = xp[need]
        td = top[need]
        rows = np.arange(xd.size)
        jt = up[need][rows, td]
        jt1 = np.where(td >= 1, up[need][rows, np.maximum(td - 1, 0)], 0.0)
        anchor = np.where((td >= 1) & (np.abs(jt1) > np.abs(jt)), td - 1, td)
        anchor_val = np.where(anchor == td, jt, jt1)

        start = lmax + downward_margin(lmax)
        ratio = np.zeros((xd.size, lmax + 1))
        rho = np.zeros(xd.size)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            for l in range(start, 0, -1):
                rho = xd / ((2 * l + 1) - xd * rho)
                if l <= lmax:
                    ratio[:, l] = rho
        cols = np.arange(lmax + 1)
        mask = cols[None, :] <= anchor[:, None]
        ratio[mask] = 1.0
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            vals = anchor_val[:, None] * np.cumprod(ratio, axis=1)
        vals[np.abs(vals) < UNDERFLOW] = 0.0
        sub = up[need]
        sub = np.where(mask, sub, vals)
        up[need] = sub

    out[pos] = up
    return out


def weighted_wave_sums(kappa, cweights, r, lmax):
    """Sum_i cweights[i] * y_l(kappa[i] * r) for l = 0..lmax.

    y_l(x) = sqrt(2/pi) x j_l(x) is the free spherical wave at unit momentum.
    """
    kappa = np.ascontiguousarray(kappa, dtype=np.float64)
    cweights = np.ascontiguousarray(cweights, dtype=np.complex128)
    x = kappa * r
    jl = bessel_sweep(x, lmax)
    y = SQRT_2_OVER_PI * x[:, None] * jl
    return cweights @ y
