import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import cg_exact, sph_jn_mp
from photonsep.massive_pair import (
    coupling_chain,
    coupling_coefficient,
    momentum_separation_overlap,
    radial_ode_residual,
    radial_ode_scale,
)


def test_spinless_reduction():
    for l, m, J, M in [(2, 1, 2, 1), (3, 0, 3, 0), (1, -1, 2, -1), (2, 0, 2, 1)]:
        expected = 1.0 if (l == J and m == M) else 0.0
        assert coupling_coefficient(0, 0, 0, 0, l, m, 0, J, M) == pytest.approx(expected, abs=1e-15)
    assert coupling_coefficient(0, 0, 0, 0, 2, 0, 1, 2, 0) == 0.0


def test_stretched_spin_half_pair():
    assert coupling_coefficient(0.5, 0.5, 0.5, 0.5, 0, 0, 1, 1, 1) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("mu1, mu2, m, M", [(0.5, 0.5, 0, 0), (0.5, -0.5, 1, 0), (-0.5, -0.5, 1, 1)])
def test_projection_selection_rule(mu1, mu2, m, M):
    assert coupling_coefficient(0.5, 0.5, mu1, mu2, 1, m, 1, 2, M) == 0.0


def test_rejects_half_integer_orbital():
    with pytest.raises(ValueError):
        coupling_coefficient(0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 1, 1.5, 1.5)


def test_against_racah_product():
    # independent oracle: product of two exact Racah values
    for ts1, ts2, tl in [(1, 1, 2), (2, 1, 4), (3, 2, 2)]:
        for tS in range(abs(ts1 - ts2), ts1 + ts2 + 1, 2):
            for tJ in range(abs(tl - tS), tl + tS + 1, 2):
                for tmu1, tmu2, tm in itertools.product(range(-ts1, ts1 + 1, 2), range(-ts2, ts2 + 1, 2),
                                                        range(-tl, tl + 1, 2)):
                    tMS, tM = tmu1 + tmu2, tmu1 + tmu2 + tm
                    if abs(tMS) > tS or abs(tM) > tJ:
                        continue
                    ref = cg_exact(ts1, ts2, tmu1, tmu2, tS, tMS) * cg_exact(tl, tS, tm, tMS, tJ, tM)
                    got = coupling_coefficient(ts1 / 2, ts2 / 2, tmu1 / 2, tmu2 / 2, tl / 2, tm / 2,
                                               tS / 2, tJ / 2, tM / 2)
                    assert got == pytest.approx(ref, abs=1e-14)


@pytest.mark.parametrize("s1, s2, l", [(0.5, 0.5, 0), (0.5, 0.5, 3), (1, 0.5, 2), (1.5, 1, 1)])
def test_coupling_completeness(s1, s2, l):
    ts1, ts2, tl = int(2 * s1), int(2 * s2), 2 * l
    for tmu1, tmu2, tm in itertools.product(range(-ts1, ts1 + 1, 2), range(-ts2, ts2 + 1, 2), range(-tl, tl + 1, 2)):
        total = 0.0
        for tS in range(abs(ts1 - ts2), ts1 + ts2 + 1, 2):
            for tJ in range(abs(tl - tS), tl + tS + 1, 2):
                tM = tmu1 + tmu2 + tm
                if abs(tM) <= tJ:
                    total += coupling_coefficient(s1, s2, tmu1 / 2, tmu2 / 2, l, tm / 2, tS / 2, tJ / 2, tM / 2) ** 2
        assert total == pytest.approx(1.0, abs=1e-11)


def test_coupling_chain_table():
    chain = coupling_chain(0.5, 0.5, 1, 1, 2)
    assert chain.table[(1, 1, 2, 2, 4)] == pytest.approx(1.0)
    assert all(mu1 + mu2 == MS and m + MS == M for (mu1, mu2, m, MS, M) in chain.table)
    assert coupling_chain(0.5, 0.5, 1, 2, 2).table == {}


def test_overlap_values():
    assert momentum_separation_overlap(0, 1.0, math.pi) == pytest.approx(0.0, abs=1e-15)
    ref = math.sqrt(2 / math.pi) * (math.pi / 2) * sph_jn_mp(1, math.pi / 2)
    assert momentum_separation_overlap(1, 1.0, math.pi / 2) == pytest.approx(ref, rel=1e-14)
    assert abs(momentum_separation_overlap(2, 1e-9, 3.0)) < 1e-20


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 40), st.floats(0.01, 20), st.floats(0.01, 200), st.floats(0.2, 5))
def test_overlap_depends_on_product(l, p, r, alpha):
    a = momentum_separation_overlap(l, p, r)
    b = momentum_separation_overlap(l, alpha * p, r / alpha)
    assert b == pytest.approx(a, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("p, r", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0)])
def test_overlap_domain(p, r):
    with pytest.raises(ValueError):
        momentum_separation_overlap(1, p, r)


def test_ode_residual_l0():
    assert abs(radial_ode_residual(0, 1.0, 5.0, 1e-3)) < 1e-5


def test_ode_residual_extrapolates_to_zero():
    h = 0.005 * min(10.0, 0.5)
    a, b = radial_ode_residual(5, 2.0, 10.0, h), radial_ode_residual(5, 2.0, 10.0, h / 2)
    assert abs(4 * b - a) / 3 < 1e-8 * radial_ode_scale(5, 2.0, 10.0)


@pytest.mark.parametrize("l", range(0, 11))
@pytest.mark.parametrize("p", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("r", [1.0, 10.0, 100.0])
def test_ode_second_order_convergence(l, p, r):
    h = 0.005 * min(r, 1.0 / p)
    res = [radial_ode_residual(l, p, r, h / 2 ** k) for k in range(3)]
    scale = radial_ode_scale(l, p, r)
    for a, b in zip(res, res[1:]):
        if abs(a) > 1e-7 * scale:
            assert 3.5 < a / b < 4.5
    assert abs(4 * res[2] - res[1]) / 3 < 1e-8 * scale


def test_ode_rejects_bad_step():
    with pytest.raises(ValueError):
        radial_ode_residual(1, 1.0, 0.1, 0.2)
    with pytest.raises(ValueError):
        radial_ode_residual(1, 1.0, 1.0, 0.0)


def test_ode_scale_positive_at_node():
    # r = pi is a node of y_0 at p = 1
    assert radial_ode_scale(0, 1.0, math.pi) > 0.5
    assert np.isfinite(radial_ode_scale(10, 0.5, 1.0))
