import cmath
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from veechmix.errors import BadConvergent, BadParameters
from veechmix.exactnum import RealBasis
from veechmix.flow import Direction
from veechmix.iet import IET, Permutation, rational_iet
from veechmix.spectral import (ALMOST_INTEGRABLE, WEAK_MIXING, Observable, birkhoff_correlation,
                               cesaro_mixing_indicator, fundamental_rectangle_count, hv_classify, hv_eigenvalues,
                               rectangle_counts, special_flow_correlation, verify_hv_eigenfunction, weyl_sum)
from veechmix.surface.builders import build_hv_surface

ROT35 = rational_iet([F(2, 5), F(3, 5)], [2, 1])
GOLD = (math.sqrt(5) - 1) / 2


def irrational_rotation(omega=GOLD):
    basis = RealBasis.of(w=1 - omega)
    w = basis.symbol("w")
    return IET([w, 1 - w], Permutation((2, 1)))


def test_identity_correlation_constant():
    iet = rational_iet([F(1, 3), F(2, 3)], [1, 2])
    f = Observable.indicator(0, F(1, 2), mean_zero=True)
    rep = birkhoff_correlation(iet, f, f, 20, 2000, seed=1)
    assert np.allclose(rep.correlations, rep.correlations[0])


def test_rotation_correlation_period_five():
    f = Observable.indicator(0, 0.4, mean_zero=True)
    rep = birkhoff_correlation(ROT35, f, f, 15, 5000, seed=2)
    # oracle: enumerate the 5-periodic orbit of the start exactly
    c = rep.correlations
    assert np.allclose(c[:5], c[5:10]) and np.allclose(c[5:10], c[10:15])
    assert c[0].real == pytest.approx(0.4 * 0.6, abs=1e-12)


def test_cauchy_schwarz():
    f = Observable.fourier(3, mean_zero=True)
    rep = birkhoff_correlation(irrational_rotation(), f, f, 50, 5000, seed=3)
    assert np.all(np.abs(rep.correlations) <= abs(rep.correlations[0]) + 1e-12)


def test_rotation_closed_form():
    a, omega, M = 0.3, GOLD, 20000
    f = Observable.indicator(0, a, mean_zero=True)
    rep = birkhoff_correlation(irrational_rotation(omega), f, f, 30, M, seed=4)
    for n in range(31):
        d = (n * omega) % 1
        exact = max(0.0, a - d) + max(0.0, a - (1 - d)) - a * a
        assert abs(rep.correlations[n].real - exact) < 3 / math.sqrt(M)


def test_cesaro_constant_is_zero():
    f = Observable.constant(2.0)
    rep = birkhoff_correlation(ROT35, f, f, 10, 100, seed=0)
    assert np.allclose(rep.cesaro, 0)


def test_cesaro_eigenfunction_no_decay():
    f = Observable.fourier(1)
    rep = birkhoff_correlation(irrational_rotation(), f, f, 2000, 2000, seed=5)
    assert rep.cesaro[-1] == pytest.approx(1.0)
    assert np.all(rep.cesaro >= 0)


def test_cesaro_formula():
    c = [1 + 0j, 0.5j, -0.25]
    out = cesaro_mixing_indicator(c, (0.5, 0.5))
    assert out == pytest.approx([0.75, (0.75 + abs(0.5j - 0.25)) / 2, (0.75 + abs(0.5j - 0.25) + 0.5) / 3])


def test_seeded_reproducible():
    f = Observable.indicator(0, 0.3, mean_zero=True)
    a = birkhoff_correlation(irrational_rotation(), f, f, 40, 3000, seed=9, restarts=3)
    b = birkhoff_correlation(irrational_rotation(), f, f, 40, 3000, seed=9, restarts=3)
    assert np.array_equal(a.correlations, b.correlations) and np.array_equal(a.spread, b.spread)
    assert a.to_json() == b.to_json()


def test_weyl_rotation_eigenvalue():
    f = Observable.fourier(1)
    assert weyl_sum(ROT35, f, 0.6, 1000, seed=1) == pytest.approx(1.0)


def test_weyl_rotation_off_eigenvalue():
    f = Observable.fourier(1)
    N = 1000
    # geometric-sum bound: |sum e(n d)| / N <= 1 / (N |sin(pi d)|)
    d = 0.1234
    bound = 1 / (N * abs(math.sin(math.pi * d)))
    assert weyl_sum(ROT35, f, 0.6 + d, N, seed=1) <= bound + 1e-12


def test_weyl_constant():
    assert weyl_sum(ROT35, Observable.constant(0.7), 0.0, 50, seed=1) == pytest.approx(0.7)


@settings(max_examples=25)
@given(st.floats(0, 5), st.integers(1, 500), st.integers(-3, 3))
def test_weyl_bounded(alpha, N, j):
    w = weyl_sum(irrational_rotation(), Observable.fourier(j), alpha, N, seed=0)
    assert 0 <= w <= 1 + 1e-12


def test_weyl_mean_zero_tends_to_zero():
    f = Observable.indicator(0, 0.25, mean_zero=True)
    assert weyl_sum(irrational_rotation(), f, 0.0, 10 ** 5, samples=2, seed=3) < 0.05


def test_special_flow_constant_roof_is_rotation():
    # with unit roof sampled at dt = 1 the flow samples are the map orbit
    f = Observable.fourier(1)
    rep = special_flow_correlation(irrational_rotation(), [1, 1], f, 100, 1000, dt=1.0, seed=1)
    assert rep.cesaro[-1] == pytest.approx(1.0, abs=1e-9)


def test_observable_parse():
    assert Observable.parse("fourier:2") == Observable.fourier(2)
    assert Observable.parse("indicator:0:1/2:0") == Observable.indicator(0, 0.5, mean_zero=True)
    assert Observable.parse("const:2").value == 2


# -- horizontal-vertical analytics ---------------------------------------------------------

def test_hv_classify(beta):
    assert hv_classify(1, 2) == ALMOST_INTEGRABLE
    assert hv_classify(beta.const(1), beta.combo(1, b1=1)) == WEAK_MIXING
    assert hv_classify(F(2, 3), F(4, 3)) == ALMOST_INTEGRABLE
    with pytest.raises(BadParameters):
        hv_classify(2, 1)


def test_hv_eigenvalues_angles():
    for j, k, a in hv_eigenvalues(math.pi / 2, range(-2, 3), range(-2, 3)):
        assert a == pytest.approx(k, abs=1e-12)
    for j, k, a in hv_eigenvalues(math.pi / 4, range(-2, 3), range(-2, 3)):
        assert a == pytest.approx((j + k) / math.sqrt(2))
    assert hv_eigenvalues(0.3, [0], [0]) == [(0, 0, 0.0)]


def test_hv_eigenvalues_exact_direction():
    q = RealBasis.rational()
    d = Direction((q.const(F(3, 5)), q.const(F(4, 5))))
    table = hv_eigenvalues(d, [1, 2], [1])
    assert table == [(1, 1, F(7, 5)), (2, 1, F(2))]


def test_eigenfunction_trivial_pair():
    assert verify_hv_eigenfunction(build_hv_surface(1, 2), 0, 0, 0.7, sample_count=5, t_max=10, seed=1) == 0


def test_eigenfunction_b_equals_2a():
    r = verify_hv_eigenfunction(build_hv_surface(1, 2), 1, 0, 0.7, sample_count=20, t_max=50, seed=2)
    assert r < 1e-9


def test_eigenfunction_fails_for_irrational_ratio(beta):
    s = build_hv_surface(beta.const(1), beta.combo(1, b1=1))
    r = verify_hv_eigenfunction(s, 1, 0, 0.7, sample_count=20, t_max=50, seed=2)
    assert r > 0.1


def test_rectangle_count():
    assert fundamental_rectangle_count(1, 2) == 3
    assert fundamental_rectangle_count(3, 5) == 16
    n, side = fundamental_rectangle_count(1, 2, b=F(4))
    assert (n, side) == (3, F(2))
    for bad in ((2, 2), (0, 3), (3, 2), (2, 4)):
        with pytest.raises(BadConvergent):
            fundamental_rectangle_count(*bad)


def test_rectangle_counts_grow():
    rows = rectangle_counts(math.sqrt(2) / 2, 10)
    assert len(rows) == 10
    counts = [r[2] for r in rows]
    assert all(a < b for a, b in zip(counts, counts[1:]))
    assert all(N == m * m - n * n for n, m, N in rows)
