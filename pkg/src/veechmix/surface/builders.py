"""Concrete translation surfaces: tori, suspensions and the HV surface."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import (
    BadParameters,
    DataError,
    InvalidSurface,
    NonPositiveHeight,
    OverlappingSlits,
    ReducibleInput,
    SlitOutsideSquare,
    UnrepresentableProduct,
)
from ..exactnum import FieldElement, RealBasis, common_basis
from ..geometry import point_on_open_segment, segments_properly_cross, try_div
from ..iet import IET, is_irreducible
from .model import Pairing, TranslationSurface


def _lift(basis: RealBasis, x) -> FieldElement:
    if isinstance(x, FieldElement):
        return x
    return basis.const(x)


def unit_torus(basis: RealBasis | None = None) -> TranslationSurface:
    """The unit square with opposite sides glued."""
    basis = basis or RealBasis.rational()
    z, o = basis.const(0), basis.const(1)
    square = [(z, z), (o, z), (o, o), (z, o)]
    return TranslationSurface(basis, [square], [Pairing(0, 0, 0, 2), Pairing(0, 1, 0, 3)],
                              provenance="unit torus")


def suspend(iet: IET, heights: Sequence) -> TranslationSurface:
    """Surface whose vertical flow returns to the base as ``iet`` after ``heights``.

    Rectangle ``j`` stands on the domain interval ``I_j`` with height
    ``t_j``.  Runs of consecutive rectangles with equal height form one
    cylinder (outer vertical sides glued together, inner ones shared).  The
    top of rectangle ``j`` is glued to the base at ``T(I_j)``; both top and
    base are subdivided at the common refinement of the two partitions.
    """
    if not is_irreducible(iet.perm):
        raise ReducibleInput(f"permutation {iet.perm} is reducible")
    basis = iet.basis
    t = [_lift(basis, h) for h in heights]
    if len(t) != iet.m:
        raise NonPositiveHeight(f"{len(t)} heights for {iet.m} intervals")
    if common_basis(t) != basis:
        raise NonPositiveHeight("heights must share the IET basis")
    for h in t:
        if h.sign() <= 0:
            raise NonPositiveHeight(f"heights must be positive, got {h}")
    m = iet.m
    left = list(iet.left_endpoints) + [iet.total]
    w = iet.translations
    img_left = [left[j] + w[j] for j in range(m)]
    breaks = sorted(set(left[1:-1]) | set(img_left[j] for j in range(m)) - {basis.zero()})
    breaks = [b for b in breaks if b.sign() > 0 and b < iet.total]

    def inner(lo, hi):
        return [b for b in breaks if lo < b < hi]

    zero = basis.zero()
    polygons = []
    bottom_pieces = []  # (x_start, x_end, poly, edge)
    top_pieces = []     # (x_start_on_base, poly, edge): top piece mapped to base start
    side_edges = []     # (right_edge, left_edge) per rectangle
    for j in range(m):
        a, b, h = left[j], left[j + 1], t[j]
        bottom = [a] + inner(a, b) + [b]
        top_on_base = [img_left[j]] + inner(img_left[j], img_left[j] + iet.lengths[j]) \
            + [img_left[j] + iet.lengths[j]]
        top = [x - w[j] for x in top_on_base]
        verts = [(x, zero) for x in bottom]
        nb = len(bottom) - 1
        for k in range(nb):
            bottom_pieces.append((bottom[k], bottom[k + 1], j, k))
        right_edge = nb
        verts += [(x, h) for x in reversed(top)]
        nt = len(top) - 1
        # edge index of the top piece [top[k], top[k+1]] read right to left
        for k in range(nt):
            top_pieces.append((top_on_base[k], j, nb + 1 + (nt - 1 - k)))
        left_edge = nb + 1 + nt
        side_edges.append((right_edge, left_edge))
        polygons.append(verts)
    pairings = []
    by_start = {x0: (p, e) for x0, _, p, e in bottom_pieces}
    for x0, p, e in top_pieces:
        q, f = by_start[x0]
        pairings.append(Pairing(p, e, q, f))
    # cylinders: maximal runs of equal heights
    j = 0
    while j < m:
        k = j
        while k + 1 < m and t[k + 1] == t[j]:
            k += 1
        for i in range(j, k):
            pairings.append(Pairing(i, side_edges[i][0], i + 1, side_edges[i + 1][1]))
        pairings.append(Pairing(k, side_edges[k][0], j, side_edges[j][1]))
        j = k + 1
    return TranslationSurface(basis, polygons, pairings,
                              provenance=f"suspension of {iet.perm} over rectangles")


def base_section(iet: IET):
    """The base loop of :func:`suspend` as a flow section."""
    from ..flow import Section

    z = iet.basis.zero()
    return Section((z, z), (iet.total, z), loop=True)


def build_hv_surface(a, b, basis: RealBasis | None = None) -> TranslationSurface:
    """The L-shaped surface ``[0,b]^2`` minus ``[b-a,b]^2`` with opposite sides glued.

    Two rectangles: the column ``[0,b-a] x [0,b]`` and the foot
    ``[b-a,b] x [0,b-a]``.  Horizontal sides are glued vertically and
    vertical sides horizontally.
    """
    if basis is None:
        basis = a.basis if isinstance(a, FieldElement) else (
            b.basis if isinstance(b, FieldElement) else RealBasis.rational())
    try:
        a, b = _lift(basis, a), _lift(basis, b)
        ok = a.sign() > 0 and b.sign() > 0 and a < b
    except (TypeError, ValueError) as exc:
        raise BadParameters(str(exc)) from exc
    if not ok:
        raise BadParameters(f"need 0 < a < b, got a={a}, b={b}")
    z = basis.zero()
    c = b - a
    column = [(z, z), (c, z), (c, c), (c, b), (z, b), (z, c)]
    foot = [(c, z), (b, z), (b, c), (c, c)]
    pairings = [
        Pairing(0, 0, 0, 3),  # column bottom / top
        Pairing(0, 1, 1, 3),  # shared wall
        Pairing(0, 2, 0, 4),  # upper strip right / left
        Pairing(0, 5, 1, 1),  # lower strip left / foot right
        Pairing(1, 0, 1, 2),  # foot bottom / top
    ]
    return TranslationSurface(basis, [column, foot], pairings,
                              provenance=f"horizontal-vertical surface a={a}, b={b}")


# -- slitted torus ---------------------------------------------------------------

@dataclass(frozen=True)
class SlitPair:
    """Two copies of the segment ``vector``: from ``anchor_a`` and from ``anchor_b``."""

    anchor_a: tuple
    anchor_b: tuple
    vector: tuple

    def segments(self):
        a0, b0, v = self.anchor_a, self.anchor_b, self.vector
        return ((a0, (a0[0] + v[0], a0[1] + v[1])), (b0, (b0[0] + v[0], b0[1] + v[1])))


def _floor_shift(p, q):
    """Integer translation taking the segment ``p``-``q`` into the unit square."""
    mx = (float(p[0]) + float(q[0])) / 2
    my = (float(p[1]) + float(q[1])) / 2
    return math.floor(mx), math.floor(my)


def slit_chain(vertices: Sequence, offset, basis: RealBasis | None = None) -> list[SlitPair]:
    """Slit pairs for a polygonal path on the torus and its translate by ``offset``.

    ``vertices`` are points in the plane, unwrapped; consecutive segments of
    both copies are folded into the unit square.  A segment of either copy
    that crosses a side of the square is cut there, which needs an exact
    division and so a rational slope in the crossing coordinate.  The cut
    and interior junction points are marked points of the surface since all
    pieces share one gluing translation.
    """
    if basis is None:
        exact = [c for v in (*vertices, offset) for c in v if isinstance(c, FieldElement)]
        basis = common_basis(exact) if exact else RealBasis.rational()
    pts = [(_lift(basis, x), _lift(basis, y)) for x, y in vertices]
    off = (_lift(basis, offset[0]), _lift(basis, offset[1]))
    if len(pts) < 2:
        raise DataError("a slit chain needs at least two vertices")
    out = []
    for a, b in zip(pts[:-1], pts[1:]):
        v = (b[0] - a[0], b[1] - a[1])
        params = {Fraction(0), Fraction(1)}
        for base in (a, (a[0] + off[0], a[1] + off[1])):
            for ax in (0, 1):
                lo, hi = sorted((float(base[ax]), float(base[ax] + v[ax])))
                for k in range(math.floor(lo) + 1, math.ceil(hi)):
                    s = try_div(basis.const(k) - base[ax], v[ax])
                    if s is None or not s.is_rational():
                        raise UnrepresentableProduct(
                            "slit crosses a side of the square at a non-rational parameter")
                    params.add(s.coords[0])
        params = sorted(params)
        for s0, s1 in zip(params[:-1], params[1:]):
            p = (a[0] + v[0].scale(s0), a[1] + v[1].scale(s0))
            w = (v[0].scale(s1 - s0), v[1].scale(s1 - s0))
            q = (p[0] + off[0], p[1] + off[1])
            fa = _floor_shift(p, (p[0] + w[0], p[1] + w[1]))
            fb = _floor_shift(q, (q[0] + w[0], q[1] + w[1]))
            out.append(SlitPair((p[0] - fa[0], p[1] - fa[1]), (q[0] - fb[0], q[1] - fb[1]), w))
    return out


def _fkey(p) -> tuple[float, float]:
    return (float(p[0]), float(p[1]))


def build_slitted_torus(slits: Sequence[SlitPair], basis: RealBasis | None = None,
                        provenance: str | None = None) -> TranslationSurface:
    """Unit torus cut along both copies of every slit, copies glued crosswise.

    The square is triangulated with every slit copy as a constrained edge.
    The side of copy A to the left of ``vector`` is glued to the side of
    copy B to the right of it, and vice versa.  Slits may share end points
    (chains) but must not otherwise meet.
    """
    if basis is None:
        basis = RealBasis.rational()
        for s in slits:
            for c in (*s.anchor_a, *s.anchor_b, *s.vector):
                if isinstance(c, FieldElement):
                    basis = c.basis
                    break
    z, o = basis.zero(), basis.const(1)
    corners = [(z, z), (o, z), (o, o), (z, o)]
    points: list = list(corners)
    index: dict = {}
    for p in corners:
        index[p] = len(index)

    def add(p):
        p = (_lift(basis, p[0]), _lift(basis, p[1]))
        if p not in index:
            index[p] = len(points)
            points.append(p)
        return index[p]

    constrained = []  # (i, j, slit, copy)
    for k, s in enumerate(slits):
        if float(s.vector[0]) == 0 and float(s.vector[1]) == 0:
            raise OverlappingSlits(f"slit {k} has zero length")
        for copy, (p, q) in enumerate(s.segments()):
            for pt in (p, q):
                x, y = float(pt[0]), float(pt[1])
                if not (0 <= x <= 1 and 0 <= y <= 1):
                    raise SlitOutsideSquare(f"slit {k} end point {(x, y)} is outside the square")
            for axis in (0, 1):
                for side in (z, o):
                    if _lift(basis, p[axis]) == side and _lift(basis, q[axis]) == side:
                        raise SlitOutsideSquare(f"slit {k} runs along a side of the square")
            constrained.append((add(p), add(q), k, copy))
    # end points on a side also exist on the opposite side
    for p in list(points):
        x, y = p
        for c, m in ((x, (o if x == z else z, y)), (y, (x, o if y == z else z))):
            if c == z or c == o:
                add(m)
    for p in list(points):
        x, y = p
        if (x == z or x == o) and (y == z or y == o):
            continue
        for c, m in ((x, (o if x == z else z, y)), (y, (x, o if y == z else z))):
            if c == z or c == o:
                add(m)
    fp = [_fkey(p) for p in points]
    bottom = sorted((i for i, p in enumerate(points) if p[1] == z), key=lambda i: fp[i][0])
    top = sorted((i for i, p in enumerate(points) if p[1] == o), key=lambda i: fp[i][0])
    left = sorted((i for i, p in enumerate(points) if p[0] == z), key=lambda i: fp[i][1])
    right = sorted((i for i, p in enumerate(points) if p[0] == o), key=lambda i: fp[i][1])
    side_pairs = {}
    boundary = []
    for lo, hi in ((bottom, top), (right, left)):
        for k in range(len(lo) - 1):
            # interior lies to the left: bottom runs +x, right runs +y
            e_lo = (lo[k], lo[k + 1])
            e_hi = (hi[k + 1], hi[k])
            side_pairs[e_lo] = e_hi
            side_pairs[e_hi] = e_lo
            boundary += [e_lo, e_hi]
    # slit copies may only meet at shared end points
    for x in range(len(constrained)):
        i, j = constrained[x][:2]
        for y in range(x + 1, len(constrained)):
            u, v = constrained[y][:2]
            if {i, j} == {u, v}:
                raise OverlappingSlits("two slit copies coincide")
            if segments_properly_cross(fp[i], fp[j], fp[u], fp[v]):
                raise OverlappingSlits(f"slit copies {constrained[x][2:]} and {constrained[y][2:]} cross")
            for w in (u, v):
                if w not in (i, j) and point_on_open_segment(fp[w], fp[i], fp[j]):
                    raise OverlappingSlits("a slit end point lies on another slit")
            for w in (i, j):
                if w not in (u, v) and point_on_open_segment(fp[w], fp[u], fp[v]):
                    raise OverlappingSlits("a slit end point lies on another slit")
    edges = _greedy_triangulation(fp, [(c[0], c[1]) for c in constrained] + boundary)
    triangles = _faces(fp, edges)
    polygons = [[points[i] for i in tri] for tri in triangles]
    # half-edge (i -> j) -> (triangle, edge index)
    half = {}
    for t, tri in enumerate(triangles):
        for e in range(3):
            half[(tri[e], tri[(e + 1) % 3])] = (t, e)
    slit_of = {}
    for i, j, k, copy in constrained:
        slit_of[(i, j)] = (k, copy)
    pairings = []
    done = set()
    for (i, j), (t, e) in half.items():
        if (i, j) in done:
            continue
        if (i, j) in slit_of or (j, i) in slit_of:
            forward = (i, j) in slit_of
            k, copy = slit_of[(i, j)] if forward else slit_of[(j, i)]
            a, b = [c for c in constrained if c[2] == k and c[3] == 1 - copy][0][:2]
            # left side of one copy goes to the right side of the other
            partner = (b, a) if forward else (a, b)
        elif (i, j) in side_pairs:
            partner = side_pairs[(i, j)]
        else:
            partner = (j, i)
        done.add((i, j))
        done.add(partner)
        t2, e2 = half[partner]
        pairings.append(Pairing(t, e, t2, e2))
    return TranslationSurface(basis, polygons, pairings,
                              provenance=provenance or f"unit torus with {len(slits)} slit pairs")


def _greedy_triangulation(fp, constrained) -> set:
    """Constrained greedy triangulation of the unit square (float predicates)."""
    n = len(fp)
    edges = {tuple(sorted(e)) for e in constrained}
    cands = []
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) in edges:
                continue
            d = (fp[i][0] - fp[j][0]) ** 2 + (fp[i][1] - fp[j][1]) ** 2
            cands.append((d, i, j))
    cands.sort()
    accepted = list(edges)
    for _, i, j in cands:
        if any(point_on_open_segment(fp[w], fp[i], fp[j]) for w in range(n) if w not in (i, j)):
            continue
        ok = True
        for (u, v) in accepted:
            if u in (i, j) or v in (i, j):
                continue
            if segments_properly_cross(fp[i], fp[j], fp[u], fp[v]):
                ok = False
                break
        if ok:
            accepted.append((i, j))
    return set(accepted)


def _faces(fp, edges) -> list[tuple[int, int, int]]:
    """Bounded faces of a triangulated planar graph, counterclockwise."""
    import math

    nbrs: dict = {}
    for i, j in edges:
        nbrs.setdefault(i, []).append(j)
        nbrs.setdefault(j, []).append(i)
    for i in nbrs:
        nbrs[i].sort(key=lambda j: math.atan2(fp[j][1] - fp[i][1], fp[j][0] - fp[i][0]))
    seen = set()
    faces = []
    for i, j in list(edges) + [(j, i) for i, j in edges]:
        if (i, j) in seen:
            continue
        face = [i]
        a, b = i, j
        while True:
            seen.add((a, b))
            # next edge: turn to the previous neighbour of b before a (CCW face on the left)
            lst = nbrs[b]
            k = lst.index(a)
            c = lst[(k - 1) % len(lst)]
            a, b = b, c
            if (a, b) == (i, j):
                break
            face.append(a)
        area = 0.5 * sum(fp[face[k]][0] * fp[face[(k + 1) % len(face)]][1]
                         - fp[face[(k + 1) % len(face)]][0] * fp[face[k]][1]
                         for k in range(len(face)))
        if area > 0:
            if len(face) != 3:
                raise InvalidSurface(f"triangulation produced a {len(face)}-gon face")
            faces.append(tuple(face))
    return faces
