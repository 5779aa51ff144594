import os
import subprocess
import sys

import numpy as np
import pytest

from photonsep import _kernels
from photonsep._kernels import _pykernels

ckernels = pytest.importorskip("photonsep._kernels._ckernels")


@pytest.mark.parametrize("lmax", [0, 1, 5, 60, 700])
def test_bessel_sweep_backends_agree(lmax):
    rng = np.random.default_rng(lmax)
    x = np.concatenate([[0.0, 1e-8, 0.5], rng.uniform(0, 2 * lmax + 5, 40), [float(lmax), lmax + 0.5]])
    a = ckernels.bessel_sweep(x, lmax)
    b = _pykernels.bessel_sweep(x, lmax)
    scale = np.maximum(np.abs(a), np.abs(b))
    mask = scale > 1e-250
    assert np.all(np.abs(a - b)[mask] <= 1e-12 * scale[mask])
    assert np.array_equal(a[~mask] == 0, b[~mask] == 0)


def test_weighted_sums_backends_agree():
    rng = np.random.default_rng(5)
    kappa = np.sort(rng.uniform(0.9, 1.1, 300))
    cw = rng.normal(size=300) + 1j * rng.normal(size=300)
    a = ckernels.weighted_wave_sums(kappa, cw, 812.5, 150)
    b = _pykernels.weighted_wave_sums(kappa, cw, 812.5, 150)
    assert np.allclose(a, b, rtol=1e-11, atol=1e-11 * np.max(np.abs(a)))


def test_compiled_backend_selected():
    assert _kernels.BACKEND == "cython"


def test_environment_forces_fallback():
    env = dict(os.environ, PHOTONSEP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import photonsep; print(photonsep.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"


def test_fallback_reproduces_density():
    code = (
        "import numpy as np; from photonsep.scattering_model import *; "
        "p = WavepacketParams(epsilon=0.05); r = default_r_grid(p, 7); "
        "print(repr(separation_density(p, r, mode='exact').rho.tolist()))"
    )
    runs = []
    for flag in ("1", "0"):
        env = dict(os.environ, PHOTONSEP_PURE_PYTHON=flag)
        out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
        runs.append(np.array(eval(out.stdout)))
    assert np.allclose(runs[0], runs[1], rtol=1e-10, atol=0)
