"""Translation surfaces glued from planar polygons.

Polygons are stored counterclockwise in one shared plane layout; edge ``i``
of a polygon runs from vertex ``i`` to vertex ``i + 1``.  A pairing glues two
edges whose vectors are exact opposites, so the gluing is a pure
translation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from ..errors import DataError, InvalidSurface, NonIntegerGenus
from ..exactnum import FieldElement, RealBasis
from ..geometry import (
    Point,
    in_sector,
    polygon_exact_area,
    polygon_float_area,
    vneg,
    vsub,
)


@dataclass(frozen=True)
class Pairing:
    poly_a: int
    edge_a: int
    poly_b: int
    edge_b: int


@dataclass(frozen=True)
class ConePoint:
    corners: tuple[tuple[int, int], ...]
    angle_multiple: int  # total angle is angle_multiple * 2*pi

    @property
    def angle_over_pi(self) -> int:
        return 2 * self.angle_multiple


class TranslationSurface:
    """Polygons, edge pairings and derived vertex data.

    Construction validates the pairing set: every edge is paired exactly
    once, paired edge vectors are exact opposites, the gluing graph is
    connected, and the cone angles satisfy Gauss-Bonnet for an integer genus.
    """

    def __init__(self, basis: RealBasis, polygons: Sequence[Sequence[Point]],
                 pairings: Sequence[Pairing], provenance: str | None = None,
                 validate: bool = True):
        self.basis = basis
        self.polygons = tuple(tuple(tuple(v) for v in poly) for poly in polygons)
        self.pairings = tuple(Pairing(*p) if not isinstance(p, Pairing) else p
                              for p in pairings)
        self.provenance = provenance
        self._partner: dict[tuple[int, int], tuple[int, int, Point]] = {}
        self._pair_index: dict[tuple[int, int], int] = {}
        self._build_partner_map()
        if validate:
            self.validate()

    # -- construction helpers ----------------------------------------------
    def edge(self, p: int, e: int) -> tuple[Point, Point]:
        poly = self.polygons[p]
        return poly[e], poly[(e + 1) % len(poly)]

    def edge_vector(self, p: int, e: int) -> Point:
        a, b = self.edge(p, e)
        return vsub(b, a)

    def _build_partner_map(self):
        for idx, pr in enumerate(self.pairings):
            for key in ((pr.poly_a, pr.edge_a), (pr.poly_b, pr.edge_b)):
                p, e = key
                if not (0 <= p < len(self.polygons)) or not (0 <= e < len(self.polygons[p])):
                    raise InvalidSurface(f"pairing {idx} references missing edge {key}")
                if key in self._pair_index:
                    raise InvalidSurface(f"edge {key} appears in more than one pairing")
                self._pair_index[key] = idx
            a0, _ = self.edge(pr.poly_a, pr.edge_a)
            b0, b1 = self.edge(pr.poly_b, pr.edge_b)
            _, a1 = self.edge(pr.poly_a, pr.edge_a)
            # translation carrying edge a onto edge b (start of a -> end of b)
            self._partner[(pr.poly_a, pr.edge_a)] = (pr.poly_b, pr.edge_b, vsub(b1, a0))
            self._partner[(pr.poly_b, pr.edge_b)] = (pr.poly_a, pr.edge_a, vsub(a1, b0))

    def partner(self, p: int, e: int) -> tuple[int, int, Point]:
        """``(q, f, tau)``: the glued edge and the translation onto it."""
        return self._partner[(p, e)]

    def pairing_index(self, p: int, e: int) -> int:
        return self._pair_index[(p, e)]

    # -- validation ---------------------------------------------------------
    def validate(self):
        for p, poly in enumerate(self.polygons):
            if len(poly) < 3:
                raise InvalidSurface(f"polygon {p} has fewer than 3 vertices")
            for v in poly:
                for c in v:
                    if isinstance(c, FieldElement) and c.basis != self.basis:
                        raise InvalidSurface("polygon coordinates use a foreign basis")
            if polygon_float_area(poly) <= 0:
                raise InvalidSurface(f"polygon {p} is not counterclockwise")
            for e in range(len(poly)):
                if (p, e) not in self._pair_index:
                    raise InvalidSurface(f"edge ({p}, {e}) is not paired")
        for idx, pr in enumerate(self.pairings):
            va = self.edge_vector(pr.poly_a, pr.edge_a)
            vb = self.edge_vector(pr.poly_b, pr.edge_b)
            if va != vneg(vb):
                raise InvalidSurface(
                    f"pairing {idx}: edge vectors are not exact opposites")
        if not self.is_connected():
            raise InvalidSurface("surface is not connected")
        # genus raises NonIntegerGenus on inconsistent data
        g = self.genus
        chi = len(self.vertex_classes) - len(self.pairings) + len(self.polygons)
        if chi != 2 - 2 * g:
            raise InvalidSurface(
                f"Euler characteristic {chi} disagrees with Gauss-Bonnet genus {g}")

    def is_connected(self) -> bool:
        n = len(self.polygons)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for pr in self.pairings:
            parent[find(pr.poly_a)] = find(pr.poly_b)
        return len({find(i) for i in range(n)}) == 1

    # -- vertex data ---------------------------------------------------------
    @cached_property
    def vertex_classes(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Corners ``(polygon, vertex)`` grouped by identified vertex."""
        corners = [(p, i) for p, poly in enumerate(self.polygons) for i in range(len(poly))]
        parent = {c: c for c in corners}

        def find(c):
            while parent[c] != c:
                parent[c] = parent[parent[c]]
                c = parent[c]
            return c

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for pr in self.pairings:
            na = len(self.polygons[pr.poly_a])
            nb = len(self.polygons[pr.poly_b])
            union((pr.poly_a, pr.edge_a), (pr.poly_b, (pr.edge_b + 1) % nb))
            union((pr.poly_a, (pr.edge_a + 1) % na), (pr.poly_b, pr.edge_b))
        groups: dict = {}
        for c in corners:
            groups.setdefault(find(c), []).append(c)
        return tuple(tuple(sorted(g)) for g in sorted(groups.values()))

    @cached_property
    def _class_of(self) -> dict[tuple[int, int], int]:
        return {c: k for k, cls in enumerate(self.vertex_classes) for c in cls}

    def class_of(self, p: int, i: int) -> int:
        return self._class_of[(p, i)]

    def corner_sector(self, p: int, i: int) -> tuple[Point, Point]:
        """Outgoing edge direction and reversed incoming edge direction."""
        poly = self.polygons[p]
        n = len(poly)
        v = poly[i]
        return vsub(poly[(i + 1) % n], v), vsub(poly[(i - 1) % n], v)

    def corner_contains(self, p: int, i: int, d: Point) -> bool:
        a, b = self.corner_sector(p, i)
        return in_sector(a, b, d)

    @cached_property
    def angle_multiples(self) -> tuple[int, ...]:
        """Total angle of each vertex class as a multiple of 2*pi (exact)."""
        one, zero = self._unit()
        east = (one, zero)
        out = []
        for cls in self.vertex_classes:
            k = sum(1 for (p, i) in cls if self.corner_contains(p, i, east))
            out.append(k)
        return tuple(out)

    def _unit(self):
        return self.basis.const(1), self.basis.const(0)

    @property
    def cone_points(self) -> tuple[ConePoint, ...]:
        return tuple(ConePoint(cls, k) for cls, k in zip(self.vertex_classes, self.angle_multiples)
                     if k != 1)

    @property
    def all_vertices(self) -> tuple[ConePoint, ...]:
        return tuple(ConePoint(cls, k) for cls, k in zip(self.vertex_classes, self.angle_multiples))

    @cached_property
    def genus(self) -> int:
        ks = self.angle_multiples
        if any(k < 1 for k in ks):
            raise NonIntegerGenus("a vertex class has total angle below 2*pi")
        excess = sum(k - 1 for k in ks)  # sum of (angle - 2pi) / 2pi = 2g - 2
        if excess % 2:
            raise NonIntegerGenus(f"cone excess {excess}*2pi is not 2pi(2g-2)")
        return excess // 2 + 1

    def area(self):
        """Exact total area when representable, else a float."""
        exact = [polygon_exact_area(poly) for poly in self.polygons]
        if all(a is not None for a in exact):
            total = self.basis.zero()
            for a in exact:
                total = total + a
            return total
        return sum(polygon_float_area(poly) for poly in self.polygons)

    # -- serialization -------------------------------------------------------
    def to_json(self) -> dict:
        data = {
            **self.basis.to_json(),
            "polygons": [[[x.coords_json(), y.coords_json()] for x, y in poly]
                         for poly in self.polygons],
            "pairings": [[p.poly_a, p.edge_a, p.poly_b, p.edge_b] for p in self.pairings],
        }
        if self.provenance:
            data["provenance"] = self.provenance
        return data

    @classmethod
    def from_json(cls, data: dict) -> "TranslationSurface":
        try:
            basis = RealBasis.from_json(data)
            polys = [[(FieldElement.from_json({"coords": x}, basis),
                       FieldElement.from_json({"coords": y}, basis)) for x, y in poly]
                     for poly in data["polygons"]]
            pairings = [Pairing(*map(int, p)) for p in data["pairings"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed surface JSON: {exc}") from exc
        return cls(basis, polys, pairings, data.get("provenance"))

    def __repr__(self):
        return (f"TranslationSurface(polygons={len(self.polygons)}, "
                f"pairings={len(self.pairings)}, genus={self.genus})")
