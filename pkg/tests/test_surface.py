import json
import re
from fractions import Fraction as F

import pytest

from veechmix.errors import (BadParameters, InvalidSurface, NonPositiveHeight, NonRationalAngle, OverlappingSlits,
                             ReducibleInput, SlitOutsideSquare, UnknownPreset)
from veechmix.exactnum import RealBasis
from veechmix.geometry import polygon_exact_area, vneg
from veechmix.iet import rational_iet
from veechmix.surface.builders import (SlitPair, build_hv_surface, build_slitted_torus, slit_chain, suspend,
                                       unit_torus)
from veechmix.surface.coxeter import (BUILTIN_POLYGONS, RationalPolygon, coxeter_group, l_shape, rectangle,
                                      regular_triangle, right_isosceles_triangle, square, unfold)
from veechmix.surface.model import Pairing, TranslationSurface
from veechmix.surface.presets import PRESETS, SlitFamily, fig1_slit_pairs, load_preset
from veechmix.surface.svg import line_plot_svg, surface_svg


def P(x, y, basis=None):
    basis = basis or RealBasis.rational()
    return (basis.const(F(x)), basis.const(F(y)))


def cone_angles(surface):
    return sorted(c.angle_over_pi for c in surface.cone_points)


def assert_translation_pairings(surface):
    for pr in surface.pairings:
        assert surface.edge_vector(pr.poly_a, pr.edge_a) == vneg(surface.edge_vector(pr.poly_b, pr.edge_b))


# -- Coxeter groups and unfolding -----------------------------------------------------

@pytest.mark.parametrize("polygon,order", [(rectangle(2, 1), 4), (regular_triangle(), 6),
                                           (right_isosceles_triangle(), 8)])
def test_coxeter_order(polygon, order):
    assert coxeter_group(polygon).order == order


def test_rectangle_group_is_reflections_about_axes():
    g = coxeter_group(rectangle(1, 1))
    theta = 0.3
    assert g.orbit(theta) == sorted({round(x % 6.283185307179586, 12)
                                     for x in (theta, -theta, 3.141592653589793 - theta,
                                               3.141592653589793 + theta)})


def test_bad_angles():
    b = RealBasis.rational()
    with pytest.raises(NonRationalAngle):
        RationalPolygon((P(0, 0), P(1, 0), P(0, 1)), (F(1, 2), F(1, 2), F(1, 2)))


def test_unfold_square():
    s = unfold(square())
    assert len(s.polygons) == 4 and s.genus == 1 and s.cone_points == ()


def test_unfold_regular_triangle():
    s = unfold(regular_triangle())
    assert len(s.polygons) == 6 and s.genus == 1


def test_unfold_l_shape():
    s = unfold(l_shape())
    assert s.genus == 2
    assert cone_angles(s) == [6]


@pytest.mark.parametrize("name", sorted(BUILTIN_POLYGONS))
def test_unfolding_invariants(name):
    poly = BUILTIN_POLYGONS[name]()
    s = unfold(poly)
    order = coxeter_group(poly).order
    assert len(s.polygons) == order
    assert s.area() == polygon_exact_area(poly.vertices).scale(order)
    assert_translation_pairings(s)
    integrable = name in ("square", "rectangle", "regular-triangle", "right-isosceles")
    assert (s.genus == 1) if integrable else (s.genus > 1)


# -- genus ----------------------------------------------------------------------------

def test_genus_torus():
    assert unit_torus().genus == 1


def test_genus_two_cone_points():
    s = unfold(BUILTIN_POLYGONS["obtuse-isosceles"]())
    assert cone_angles(s) == [4, 4] and s.genus == 2


def test_invalid_pairing_rejected():
    b = RealBasis.rational()
    sq = [P(0, 0), P(1, 0), P(1, 1), P(0, 1)]
    with pytest.raises(InvalidSurface):
        TranslationSurface(b, [sq], [Pairing(0, 0, 0, 1), Pairing(0, 2, 0, 3)])


# -- suspension -----------------------------------------------------------------------

def test_suspend_rotation_is_torus():
    s = suspend(rational_iet([F(2, 5), F(3, 5)], [2, 1]), [1, 1])
    assert s.genus == 1 and s.area() == s.basis.const(1)


def test_suspend_rejects_reducible():
    with pytest.raises(ReducibleInput):
        suspend(rational_iet([F(1, 2), F(1, 2)], [1, 2]), [1, 1])


def test_suspend_rejects_bad_heights():
    iet = rational_iet([F(1, 2), F(1, 2)], [2, 1])
    with pytest.raises(NonPositiveHeight):
        suspend(iet, [1, 0])
    with pytest.raises(NonPositiveHeight):
        suspend(iet, [1])


# -- slitted torus -----------------------------------------------------------------------

def test_no_slits_is_torus():
    s = build_slitted_torus([])
    assert s.genus == 1


def test_one_horizontal_slit_pair_genus_two():
    s = build_slitted_torus([SlitPair(P(F(1, 5), F(1, 4)), P(F(1, 5), F(3, 4)), P(F(1, 2), 0))])
    assert s.genus == 2
    assert cone_angles(s) == [4, 4]
    assert_translation_pairings(s)


def test_slit_outside():
    with pytest.raises(SlitOutsideSquare):
        build_slitted_torus([SlitPair(P(F(3, 4), F(1, 4)), P(F(1, 5), F(3, 4)), P(F(1, 2), 0))])


def test_slits_crossing():
    with pytest.raises(OverlappingSlits):
        build_slitted_torus([SlitPair(P(F(1, 5), F(1, 2)), P(F(1, 5), F(3, 4)), P(F(1, 2), 0)),
                             SlitPair(P(F(2, 5), F(1, 4)), P(F(1, 10), F(1, 10)), P(0, F(1, 2)))])


def test_slit_chain_wraps():
    pieces = slit_chain([P(F(4, 5), F(1, 5)), P(F(6, 5), F(2, 5))], P(0, F(1, 2)))
    assert len(pieces) == 2
    total = sum(float(p.vector[0]) for p in pieces)
    assert total == pytest.approx(0.4)


# -- horizontal-vertical surface ------------------------------------------------------

def test_hv_surface():
    s = build_hv_surface(1, 2)
    assert s.genus == 2 and cone_angles(s) == [6]
    assert_translation_pairings(s)
    with pytest.raises(BadParameters):
        build_hv_surface(2, 1)
    with pytest.raises(BadParameters):
        build_hv_surface(0, 1)


def test_hv_surface_symbolic(beta):
    s = build_hv_surface(beta.const(1), beta.combo(1, b1=1))
    assert s.genus == 2
    assert_translation_pairings(s)


# -- presets -----------------------------------------------------------------------------

def test_fig1_preset_shape():
    family, prov = load_preset("fig1-default")
    assert PRESETS == ("fig1-default",)
    assert list(family.perm.images) == [4, 2, 3, 1]
    assert len(fig1_slit_pairs()) == 5
    assert sum(family.widths) == 1
    assert "seed" in json.dumps(prov)
    assert family.surface().genus == 5


def test_fig1_json_roundtrip():
    family, _ = load_preset()
    assert SlitFamily.from_json(family.to_json()) == family


def test_unknown_preset():
    with pytest.raises(UnknownPreset):
        load_preset("fig7")


def test_surface_json_roundtrip(beta):
    s = build_hv_surface(beta.const(1), beta.combo(1, b1=1))
    doc = json.loads(json.dumps(s.to_json()))
    t = TranslationSurface.from_json(doc)
    assert t.polygons == s.polygons and t.pairings == s.pairings and t.provenance == s.provenance


# -- svg ----------------------------------------------------------------------------------

def test_fig1_svg_has_five_colored_pairs():
    family, _ = load_preset()
    text = surface_svg(family.surface(), slits=family.slits())
    slits = re.findall(r'class="slit" data-pair="(\d+)"[^>]*stroke="(#[0-9a-f]{6})"', text)
    assert len(slits) == 10
    colors = {}
    for k, c in slits:
        colors.setdefault(k, set()).add(c)
    assert len(colors) == 5 and all(len(v) == 1 for v in colors.values())
    assert len({next(iter(v)) for v in colors.values()}) == 5
    assert text.count('class="cone"') > 0


def test_pairing_svg_colors_match():
    text = surface_svg(unfold(l_shape()))
    pairs = re.findall(r'class="pairing" data-pair="(\d+)"', text)
    assert len(pairs) == 2 * len(unfold(l_shape()).pairings)


def test_line_plot():
    text = line_plot_svg([1, 2, 3], [1.0, 0.5, 0.25], title="M(N)")
    assert text.startswith("<svg") and "polyline" in text
