"""Backend selection for the hot kernels.

The compiled Cython extension is preferred; the numpy implementation is used
when the extension is missing or ``PHOTONSEP_PURE_PYTHON`` is set to a
non-empty value other than ``0``.
"""

import os

from . import _pykernels

_force_pure = os.environ.get("PHOTONSEP_PURE_PYTHON", "") not in ("", "0")

if _force_pure:
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

bessel_sweep = _impl.bessel_sweep
weighted_wave_sums = _impl.weighted_wave_sums

__all__ = ["BACKEND", "bessel_sweep", "weighted_wave_sums"]
