"""Planar predicates shared by the surface and flow modules.

Scalars are either :class:`FieldElement` (exact mode) or ``float``.  Exact
products exist only when a factor is rational; any predicate that needs a
non-representable product falls back to float hints and refuses near-ties
with :class:`AmbiguousComparison`.
"""

from __future__ import annotations

import math
from typing import Optional, Union

from .errors import AmbiguousComparison, UnrepresentableProduct
from .exactnum import TIE_TOLERANCE, FieldElement, fe_mul

Scalar = Union[FieldElement, float]
Point = tuple  # (x, y) of Scalars

FLOAT_SNAP = 1e-12


def is_exact(x) -> bool:
    return isinstance(x, FieldElement)


def fl(x) -> float:
    return float(x)


def vsub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def vadd(p: Point, q: Point) -> Point:
    return (p[0] + q[0], p[1] + q[1])


def vneg(p: Point) -> Point:
    return (-p[0], -p[1])


def fpoint(p: Point) -> tuple[float, float]:
    return (float(p[0]), float(p[1]))


def try_mul(a, b) -> Optional[Scalar]:
    """Exact product when representable, ``None`` otherwise; floats multiply."""
    if is_exact(a) and is_exact(b):
        try:
            return fe_mul(a, b)
        except UnrepresentableProduct:
            return None
    if is_exact(a) or is_exact(b):
        # mixed: promote the plain number into the element's basis
        fe, other = (a, b) if is_exact(a) else (b, a)
        if isinstance(other, float):
            return None
        return fe.scale(other)
    return a * b


def try_div(a, b) -> Optional[Scalar]:
    if is_exact(a) and is_exact(b):
        if b.is_rational():
            return a / b.coords[0]
        return None
    if is_exact(a) or is_exact(b):
        return None
    return a / b


def try_cross(u: Point, v: Point) -> Optional[Scalar]:
    p = try_mul(u[0], v[1])
    if p is None:
        return None
    r = try_mul(u[1], v[0])
    if r is None:
        return None
    return p - r


def try_dot(u: Point, v: Point) -> Optional[Scalar]:
    p = try_mul(u[0], v[0])
    if p is None:
        return None
    r = try_mul(u[1], v[1])
    if r is None:
        return None
    return p + r


def _guarded_float_sign(terms: list[float]) -> int:
    value = math.fsum(terms)
    scale = math.fsum(abs(t) for t in terms)
    if abs(value) <= TIE_TOLERANCE * scale:
        raise AmbiguousComparison(
            "sign of a non-representable product is within the tie band")
    return 1 if value > 0 else -1


def sign(x) -> int:
    if is_exact(x):
        return x.sign()
    if abs(x) <= FLOAT_SNAP:
        return 0
    return 1 if x > 0 else -1


def cross_sign(u: Point, v: Point) -> int:
    c = try_cross(u, v)
    if c is not None:
        return sign(c)
    return _guarded_float_sign([float(u[0]) * float(v[1]), -float(u[1]) * float(v[0])])


def dot_sign(u: Point, v: Point) -> int:
    c = try_dot(u, v)
    if c is not None:
        return sign(c)
    return _guarded_float_sign([float(u[0]) * float(v[0]), float(u[1]) * float(v[1])])


def compare(a, b) -> int:
    """Sign of ``a - b`` for scalars that may be inexact floats."""
    if is_exact(a) and is_exact(b):
        return (a - b).sign()
    if is_exact(a) or is_exact(b):
        fa, fb = float(a), float(b)
        return _guarded_float_sign([fa, -fb])
    d = a - b
    if abs(d) <= FLOAT_SNAP * max(1.0, abs(a), abs(b)):
        return 0
    return 1 if d > 0 else -1


def _half(a: Point, v: Point) -> int:
    """0 when the CCW angle from ``a`` to ``v`` lies in [0, pi), else 1."""
    c = cross_sign(a, v)
    if c > 0:
        return 0
    if c < 0:
        return 1
    return 0 if dot_sign(a, v) > 0 else 1


def angle_less(a: Point, v: Point, w: Point) -> bool:
    """CCW angle from ``a`` to ``v`` is strictly less than from ``a`` to ``w``."""
    hv, hw = _half(a, v), _half(a, w)
    if hv != hw:
        return hv < hw
    return cross_sign(v, w) > 0


def in_sector(a: Point, b: Point, d: Point) -> bool:
    """``d`` lies in the half-open CCW sector ``[a, b)``."""
    if cross_sign(a, d) == 0 and dot_sign(a, d) > 0:
        return True
    return angle_less(a, d, b)


def parallel_same(u: Point, v: Point) -> bool:
    return cross_sign(u, v) == 0 and dot_sign(u, v) > 0


def float_angle(v: Point) -> float:
    return math.atan2(float(v[1]), float(v[0]))


def polygon_float_area(vertices) -> float:
    pts = [fpoint(v) for v in vertices]
    n = len(pts)
    return 0.5 * math.fsum(pts[i][0] * pts[(i + 1) % n][1] - pts[(i + 1) % n][0] * pts[i][1]
                           for i in range(n))


def polygon_exact_area(vertices) -> Optional[FieldElement]:
    """Shoelace area when every product is representable, else ``None``."""
    if not vertices or not is_exact(vertices[0][0]):
        return None
    n = len(vertices)
    total = vertices[0][0].basis.zero()
    for i in range(n):
        c = try_cross(vertices[i], vertices[(i + 1) % n])
        if c is None:
            return None
        total = total + c
    return total / 2


def segments_properly_cross(p1, p2, q1, q2) -> bool:
    """Interiors of two segments meet in a single point (float predicate)."""
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if abs(v) <= 1e-13:
            return 0
        return 1 if v > 0 else -1

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    return o1 * o2 < 0 and o3 * o4 < 0


def point_on_open_segment(p, a, b) -> bool:
    cr = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
    if abs(cr) > 1e-12:
        return False
    dt = (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])
    ln = (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2
    return 1e-12 < dt < ln - 1e-12
