"""Rational polygons, their reflection groups, and unfolding.

A direction action ``theta -> s*theta + c*pi`` is stored as ``(s, c)`` with
``s = +-1`` and ``c`` a rational taken mod 2.  The reflection in a line at
angle ``phi*pi`` is ``(-1, 2*phi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from ..errors import DataError, NonRationalAngle, UnsupportedUnfolding
from ..exactnum import FieldElement, RealBasis
from ..geometry import polygon_float_area, segments_properly_cross
from .model import Pairing, TranslationSurface

ANGLE_TOL = 1e-9

# quadratic fields used for exact rotations, keyed by the root's label
_ROOTS = {"sqrt2": 2, "sqrt3": 3}


@dataclass(frozen=True)
class RationalPolygon:
    """Counterclockwise polygon with interior angles ``p_i * pi / q_i``.

    ``angle_fractions[i]`` is the angle at ``vertices[i]``.  Edge 0 must be
    horizontal so that every side direction is a rational multiple of pi.
    """

    vertices: tuple
    angle_fractions: tuple

    def __post_init__(self):
        verts = tuple(tuple(v) for v in self.vertices)
        fracs = tuple(Fraction(*f) if isinstance(f, tuple) else Fraction(f)
                      for f in self.angle_fractions)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "angle_fractions", fracs)
        n = len(verts)
        if n < 3 or len(fracs) != n:
            raise DataError("need at least 3 vertices and one angle per vertex")
        for f in fracs:
            if not 0 < f < 2:
                raise NonRationalAngle(f"interior angle {f}*pi is out of range")
        if sum(fracs) != n - 2:
            raise NonRationalAngle(
                f"interior angles sum to {sum(fracs)}*pi, expected {n - 2}*pi")
        if polygon_float_area(verts) <= 0:
            raise DataError("vertices must be counterclockwise")
        fv = [(float(x), float(y)) for x, y in verts]
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if segments_properly_cross(fv[i], fv[(i + 1) % n], fv[j], fv[(j + 1) % n]):
                    raise DataError("polygon is not simple")
        for i in range(n):
            ax, ay = fv[i - 1][0] - fv[i][0], fv[i - 1][1] - fv[i][1]
            bx, by = fv[(i + 1) % n][0] - fv[i][0], fv[(i + 1) % n][1] - fv[i][1]
            # interior angle: CCW from the outgoing edge to the reversed incoming one
            ang = math.atan2(bx * ay - by * ax, bx * ax + by * ay) % (2 * math.pi)
            if abs(ang - float(fracs[i]) * math.pi) > ANGLE_TOL * 10:
                raise NonRationalAngle(
                    f"angle at vertex {i} is {ang / math.pi:.12f}*pi, declared {fracs[i]}*pi")
        if fv[1][1] != fv[0][1] or fv[1][0] <= fv[0][0]:
            raise DataError("edge 0 must point in the +x direction")

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def denominators(self) -> tuple[int, ...]:
        return tuple(f.denominator for f in self.angle_fractions)

    def side_angles(self) -> tuple[Fraction, ...]:
        """Direction of each side as a multiple of pi, taken mod 2."""
        phis = [Fraction(0)]
        for j in range(1, self.n):
            phis.append((phis[-1] + 1 - self.angle_fractions[j]) % 2)
        return tuple(phis)

    @property
    def basis(self) -> RealBasis:
        for v in self.vertices:
            for c in v:
                if isinstance(c, FieldElement):
                    return c.basis
        return RealBasis.rational()


def _compose(g, h):
    return (g[0] * h[0], (g[0] * h[1] + g[1]) % 2)


@dataclass(frozen=True)
class CoxeterGroup:
    elements: tuple
    generators: tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, g) -> int:
        return self.elements.index(g)

    def act(self, g, theta: float) -> float:
        return (g[0] * theta + float(g[1]) * math.pi) % (2 * math.pi)

    def orbit(self, theta: float) -> list[float]:
        """Directions reached from ``theta`` by the group."""
        return sorted({round(self.act(g, theta), 12) for g in self.elements})


def coxeter_group(polygon: RationalPolygon) -> CoxeterGroup:
    """Closure of the side reflections acting on directions."""
    gens = tuple((-1, (2 * phi) % 2) for phi in polygon.side_angles())
    identity = (1, Fraction(0))
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for r in gens:
                h = _compose(g, r)
                if h not in seen:
                    seen.add(h)
                    elements.append(h)
                    nxt.append(h)
        frontier = nxt
    expected = 2 * reduce(math.lcm, polygon.denominators, 1)
    if len(elements) != expected:
        raise NonRationalAngle(
            f"group order {len(elements)} differs from 2*lcm(q_i) = {expected}")
    return CoxeterGroup(tuple(elements), gens)


# -- exact rotations ----------------------------------------------------------

def _cos_sin(c: Fraction) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction], str | None]:
    """``cos(c*pi)`` and ``sin(c*pi)`` as ``a + b*sqrt(d)`` pairs plus the root label."""
    q = c.denominator
    k = c.numerator % (2 * q)
    half = Fraction(1, 2)
    if q in (1, 2):
        table = {(1, 0): (1, 0), (1, 1): (-1, 0), (2, 0): (1, 0), (2, 1): (0, 1),
                 (2, 2): (-1, 0), (2, 3): (0, -1)}
        co, si = table[(q, k)]
        return (Fraction(co), Fraction(0)), (Fraction(si), Fraction(0)), None
    if q == 4:
        # odd multiples of pi/4
        signs = {1: (1, 1), 3: (-1, 1), 5: (-1, -1), 7: (1, -1)}[k]
        return (Fraction(0), signs[0] * half), (Fraction(0), signs[1] * half), "sqrt2"
    if q == 3:
        # k in 1,2,4,5: angles 60,120,240,300 degrees
        co = {1: half, 2: -half, 4: -half, 5: half}[k]
        si = {1: half, 2: half, 4: -half, 5: -half}[k]
        return (co, Fraction(0)), (Fraction(0), si), "sqrt3"
    if q == 6:
        # odd multiples of 30 degrees
        co = {1: half, 5: -half, 7: -half, 11: half}[k]
        si = {1: half, 5: half, 7: -half, 11: -half}[k]
        return (Fraction(0), co), (si, Fraction(0)), "sqrt3"
    raise UnsupportedUnfolding(f"no exact rotation by {c}*pi in the supported fields")


def _qmul(x: FieldElement, a: Fraction, b: Fraction, root: str | None) -> FieldElement:
    """``x * (a + b*sqrt(d))`` where ``x`` lives in ``{1, sqrt(d)}``."""
    if b == 0:
        return x.scale(a)
    basis = x.basis
    if basis.labels != ("1", root):
        raise UnsupportedUnfolding(f"exact rotation needs the basis {{1, {root}}}")
    d = _ROOTS[root]
    x0, x1 = x.coords
    return basis.element((a * x0 + d * b * x1, a * x1 + b * x0))


def _target_basis(polygon: RationalPolygon, group: CoxeterGroup) -> tuple[RealBasis, str | None]:
    roots = {_cos_sin(g[1])[2] for g in group.elements} - {None}
    if len(roots) > 1:
        raise UnsupportedUnfolding("rotations need two different square roots")
    basis = polygon.basis
    if not roots:
        return basis, None
    root = roots.pop()
    if basis.labels == ("1",):
        return RealBasis(("1", root), (1.0, math.sqrt(_ROOTS[root]))), root
    if basis.labels == ("1", root):
        return basis, root
    raise UnsupportedUnfolding(f"polygon basis {basis.labels} cannot host {root}")


def _lift_point(basis: RealBasis, v):
    out = []
    for c in v:
        if isinstance(c, FieldElement):
            if c.basis == basis:
                out.append(c)
            elif c.is_rational():
                out.append(basis.const(c.coords[0]))
            else:
                out.append(basis.element(list(c.coords) + [0] * (len(basis) - len(c.coords))))
        else:
            out.append(basis.const(c))
    return tuple(out)


def unfold(polygon: RationalPolygon, gap: int = 1) -> TranslationSurface:
    """Translation surface made of one copy of ``polygon`` per group element.

    Copy ``g = (s, c)`` is the polygon reflected in the x-axis when
    ``s = -1`` and then rotated by ``c*pi``.  Side ``j`` of copy ``g`` is
    glued to side ``j`` of copy ``g * r_j``.  Copies are laid out left to
    right with integer offsets.
    """
    group = coxeter_group(polygon)
    basis, root = _target_basis(polygon, group)
    verts = [_lift_point(basis, v) for v in polygon.vertices]
    n = polygon.n
    fv = [(float(x), float(y)) for x, y in verts]
    radius = max(math.hypot(x, y) for x, y in fv)
    step = 2 * math.ceil(radius) + gap
    polygons = []
    edge_index = []  # edge_index[g][j]: index of original side j in copy g
    for idx, g in enumerate(group.elements):
        s, c = g
        (ca, cb), (sa, sb), _ = _cos_sin(c)
        offset = basis.const(step * idx)
        img = []
        for x, y in verts:
            y = y if s == 1 else -y
            nx = _qmul(x, ca, cb, root) - _qmul(y, sa, sb, root)
            ny = _qmul(x, sa, sb, root) + _qmul(y, ca, cb, root)
            img.append((nx + offset, ny))
        if s == 1:
            polygons.append(img)
            edge_index.append(list(range(n)))
        else:
            polygons.append(img[::-1])
            edge_index.append([(n - 2 - j) % n for j in range(n)])
    pairings = []
    done = set()
    for idx, g in enumerate(group.elements):
        for j, r in enumerate(group.generators):
            other = group.index(_compose(g, r))
            key = frozenset([(idx, j), (other, j)])
            if key in done:
                continue
            done.add(key)
            if other == idx:
                raise UnsupportedUnfolding("a side reflection fixes a copy")
            pairings.append(Pairing(idx, edge_index[idx][j], other, edge_index[other][j]))
    return TranslationSurface(basis, polygons, pairings,
                              provenance=f"unfolding of a {n}-gon, group order {group.order}")


# -- built-in polygons ----------------------------------------------------------

def square() -> RationalPolygon:
    return rectangle(1, 1)


def rectangle(w=1, h=1) -> RationalPolygon:
    b = RealBasis.rational()
    z, W, H = b.const(0), b.const(w), b.const(h)
    q = Fraction(1, 2)
    return RationalPolygon(((z, z), (W, z), (W, H), (z, H)), (q, q, q, q))


def _sqrt3_basis() -> RealBasis:
    return RealBasis(("1", "sqrt3"), (1.0, math.sqrt(3)))


def _sqrt2_basis() -> RealBasis:
    return RealBasis(("1", "sqrt2"), (1.0, math.sqrt(2)))


def regular_triangle() -> RationalPolygon:
    b = _sqrt3_basis()
    z, o = b.const(0), b.const(1)
    third = Fraction(1, 3)
    return RationalPolygon(((z, z), (o, z), (b.const(Fraction(1, 2)), b.symbol("sqrt3", Fraction(1, 2)))),
                           (third, third, third))


def right_isosceles_triangle() -> RationalPolygon:
    """The (pi/4, pi/4, pi/2) triangle."""
    b = RealBasis.rational()
    z, o = b.const(0), b.const(1)
    return RationalPolygon(((z, z), (o, z), (z, o)),
                           (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)))


def l_shape(a=1, b=2) -> RationalPolygon:
    """``[0,b]^2`` with the upper-right ``a x a`` square removed."""
    basis = RealBasis.rational()
    z, A, B = basis.const(0), basis.const(a), basis.const(b)
    c = B - A
    q = Fraction(1, 2)
    return RationalPolygon(((z, z), (B, z), (B, c), (c, c), (c, B), (z, B)),
                           (q, q, q, Fraction(3, 2), q, q))


def obtuse_isosceles_triangle() -> RationalPolygon:
    """The (pi/6, pi/6, 2*pi/3) triangle."""
    b = _sqrt3_basis()
    z, o = b.const(0), b.const(1)
    apex = (b.const(Fraction(1, 2)), b.symbol("sqrt3", Fraction(1, 6)))
    sixth = Fraction(1, 6)
    return RationalPolygon(((z, z), (o, z), apex), (sixth, sixth, Fraction(2, 3)))


BUILTIN_POLYGONS = {
    "square": square,
    "rectangle": rectangle,
    "regular-triangle": regular_triangle,
    "right-isosceles": right_isosceles_triangle,
    "l-shape": l_shape,
    "obtuse-isosceles": obtuse_isosceles_triangle,
}

# polygons whose billiard is not integrable (unfolding genus > 1)
NON_INTEGRABLE = ("l-shape", "obtuse-isosceles")


def polygon_from_json(data: dict) -> RationalPolygon:
    if "builtin" in data:
        name = data["builtin"]
        if name not in BUILTIN_POLYGONS:
            raise DataError(f"unknown built-in polygon {name!r}")
        return BUILTIN_POLYGONS[name](**data.get("params", {}))
    try:
        basis = RealBasis.from_json(data) if "basis" in data else RealBasis.rational()
        verts = [tuple(FieldElement.from_json({"coords": c}, basis) for c in v)
                 for v in data["vertices"]]
        fracs = [Fraction(int(p), int(q)) for p, q in data["angles"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed polygon JSON: {exc}") from exc
    return RationalPolygon(tuple(verts), tuple(fracs))


def polygon_to_json(polygon: RationalPolygon) -> dict:
    return {
        **polygon.basis.to_json(),
        "vertices": [[c.coords_json() for c in v] for v in polygon.vertices],
        "angles": [[f.numerator, f.denominator] for f in polygon.angle_fractions],
    }
