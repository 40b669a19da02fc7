import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from veechmix.errors import ReducibleInput, UnrepresentableProduct
from veechmix.exactnum import RealBasis, rank_over_q
from veechmix.flow import Direction, Section
from veechmix.iet import IET, Permutation, rational_iet
from veechmix.surface.builders import base_section, suspend, unit_torus
from veechmix.surface.presets import fig1_surface
from veechmix.weakmix import (EXCLUDED, INCONCLUSIVE, NOT_EXCLUDED, WEAKLY_MIXING_AE, check_surface_weak_mixing,
                              check_weak_mixing, exclude_eigenvalue, nu_obstructions, scale_times,
                              veech_obstruction_set)

P4231 = Permutation((4, 2, 3, 1))


def iet4231(basis):
    return IET([basis.const(x) for x in (F(1, 5), F(1, 4), F(3, 10), F(1, 4))], P4231)


def test_obstruction_set():
    assert veech_obstruction_set(P4231) == [((0, 3), (1, 0, -1, 1)), ((1, 4), (-1, 1, 0, -1)),
                                            ((2,), (0, -1, 1, 0))]
    assert veech_obstruction_set(Permutation((2, 1))) == [((0, 1, 2), (0, 0))]
    with pytest.raises(ReducibleInput):
        veech_obstruction_set(Permutation((1, 2)))


def test_exclusion_examples(q):
    iet = iet4231(q)
    ones = [q.const(1)] * 4
    half = exclude_eigenvalue(iet, ones, F(1, 2))
    assert half.status == EXCLUDED and half.witness == (0, 3) and half.value == q.const(F(1, 2))
    assert exclude_eigenvalue(iet, ones, 1).status == NOT_EXCLUDED
    assert exclude_eigenvalue(iet, ones, 0).status == NOT_EXCLUDED


def test_exclusion_symbolic_alpha(beta):
    iet = iet4231(beta)
    t = [beta.const(1)] * 4
    res = exclude_eigenvalue(iet, t, beta.symbol("b1"))
    assert res.status == EXCLUDED
    with pytest.raises(UnrepresentableProduct):
        exclude_eigenvalue(iet, [beta.symbol("b2")] * 4, beta.symbol("b1"))


def test_spec_certificate(beta):
    t = [beta.const(1), beta.symbol("b1"), beta.symbol("b2"), beta.const(1)]
    v = check_weak_mixing(iet4231(beta), t)
    assert v.status == WEAKLY_MIXING_AE
    assert v.pair == (0, 1)
    assert v.u == beta.combo(2, b2=-1)
    assert v.v == beta.combo(-2, b1=1)
    assert v.rank_uv == 2 and v.rank_1uv == 3
    assert rank_over_q([v.u.coords, v.v.coords]) == 2
    assert len(v.entries) == 3 and len(v.caveats) == 2
    assert "almost every" in v.caveats[0]


def test_equal_times_inconclusive(q):
    v = check_weak_mixing(iet4231(q), [q.const(1)] * 4)
    assert v.status == INCONCLUSIVE and v.pair is None
    assert [e.value for e in v.entries] == [q.const(1), q.const(-1), q.zero()]


def test_rotation_inconclusive(beta):
    iet = IET([beta.const(1), beta.symbol("b1")], Permutation((2, 1)))
    assert check_weak_mixing(iet, [beta.const(1), beta.symbol("b2")]).status == INCONCLUSIVE


def test_reducible_rejected(q):
    with pytest.raises(ReducibleInput):
        check_weak_mixing(rational_iet([F(1, 2), F(1, 2)], [1, 2]), [q.const(1)] * 2)


def test_nu_general(q):
    iet = iet4231(q)
    nu = [q.const(F(1, 3)), q.zero(), q.zero(), q.zero()]
    bad = nu_obstructions(iet, nu)
    assert [cyc for cyc, _ in bad] == [(0, 3), (1, 4)]
    assert nu_obstructions(iet, [q.const(1)] * 4) == []


def test_surface_torus_inconclusive():
    T = unit_torus()
    b = T.basis
    z = b.zero()
    v = check_surface_weak_mixing(T, Direction((b.const(F(2, 7)), b.const(1))),
                                  Section((z, z), (b.const(1), z), loop=True))
    assert v.status == INCONCLUSIVE


def test_surface_suspension(beta):
    iet = iet4231(beta)
    d = Direction((beta.zero(), beta.const(1)))
    ones = suspend(iet, [1, 1, 1, 1])
    assert check_surface_weak_mixing(ones, d, base_section(iet)).status == INCONCLUSIVE
    t = [beta.const(1), beta.symbol("b1"), beta.symbol("b2"), beta.const(1)]
    v = check_surface_weak_mixing(suspend(iet, t), d, base_section(iet))
    assert v.status == WEAKLY_MIXING_AE
    assert list(v.return_map.times) == t


def test_fig1_generic_weakly_mixing():
    S = fig1_surface(generic=True)
    b = S.basis
    z = b.zero()
    v = check_surface_weak_mixing(S, Direction((z, b.const(1))), Section((z, z), (b.const(1), z), loop=True))
    assert v.status == WEAKLY_MIXING_AE
    assert list(v.return_map.iet.perm.images) == [4, 2, 3, 1]
    doc = v.to_json()
    assert doc["status"] == WEAKLY_MIXING_AE and doc["rank_uv"] == 2


def test_fig1_rational_inconclusive():
    S = fig1_surface()
    b = S.basis
    z = b.zero()
    v = check_surface_weak_mixing(S, Direction((z, b.const(1))), Section((z, z), (b.const(1), z), loop=True))
    assert v.status == INCONCLUSIVE


def test_render_mentions_ranks(beta):
    t = [beta.const(1), beta.symbol("b1"), beta.symbol("b2"), beta.const(1)]
    text = check_weak_mixing(iet4231(beta), t).render()
    assert "rank_Q(u, v) = 2" in text and "status: WeaklyMixingAE" in text


# -- properties ---------------------------------------------------------------------

BASIS = RealBasis.of(b1=math.sqrt(2), b2=math.sqrt(3))
coef = st.fractions(min_value=0, max_value=3, max_denominator=6)


@st.composite
def times(draw):
    out = []
    for _ in range(4):
        c0 = draw(st.fractions(min_value=F(1, 2), max_value=3, max_denominator=6))
        out.append(BASIS.combo(c0, b1=draw(coef), b2=draw(coef)))
    return out


@given(times(), st.fractions(min_value=F(1, 9), max_value=10, max_denominator=9))
def test_scaling_covariance(t, c):
    iet = iet4231(BASIS)
    assert check_weak_mixing(iet, t).status == check_weak_mixing(iet, scale_times(t, c)).status


@given(times())
def test_certificate_rank_two(t):
    v = check_weak_mixing(iet4231(BASIS), t)
    if v.status == WEAKLY_MIXING_AE:
        assert rank_over_q([v.u.coords, v.v.coords]) == 2
        assert not v.u.is_zero() and not v.v.is_zero()


@given(st.lists(st.fractions(min_value=F(1, 10), max_value=5, max_denominator=12), min_size=4, max_size=4))
def test_rational_times_never_certify(ts):
    v = check_weak_mixing(iet4231(BASIS), [BASIS.const(x) for x in ts])
    assert v.status == INCONCLUSIVE
