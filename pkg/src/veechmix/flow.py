"""Straight-line flow on translation surfaces and first-return maps.

Two arithmetic modes are available.  ``exact`` keeps positions as
:class:`FieldElement` points and decides every branch exactly when the
products involved are representable (always the case for rational flow
directions against any polygon).  ``float`` converts the surface to doubles
and snaps within ``1e-12``; it is meant for plots and long diagnostics.

A ray is stored as an anchor ``q`` and anchor time ``t0`` so that its plane
position at time ``t`` is ``q + (t - t0) * d``.  Crossing a paired edge
translates the anchor; direction never changes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DataError,
    NoReturn,
    SingularOrbit,
    SingularSection,
    TimeBudgetExceeded,
    UnrepresentableProduct,
)
from .exactnum import FieldElement
from .geometry import (
    Point,
    compare,
    cross_sign,
    dot_sign,
    in_sector,
    is_exact,
    polygon_float_area,
    sign,
    try_cross,
    try_div,
    try_mul,
    vadd,
    vneg,
    vsub,
)
from .iet import IET, Permutation
from .surface.model import TranslationSurface

MODES = ("exact", "float")


@dataclass(frozen=True)
class Direction:
    vector: Point

    def __post_init__(self):
        if sign(self.vector[0]) == 0 and sign(self.vector[1]) == 0:
            raise DataError("direction vector must be nonzero")

    @property
    def float_angle(self) -> float:
        return math.atan2(float(self.vector[1]), float(self.vector[0]))

    @property
    def unit(self) -> tuple[float, float]:
        x, y = float(self.vector[0]), float(self.vector[1])
        n = math.hypot(x, y)
        return (x / n, y / n)

    @classmethod
    def from_angle(cls, theta: float) -> "Direction":
        return cls((math.cos(theta), math.sin(theta)))

    def reversed(self) -> "Direction":
        return Direction(vneg(self.vector))

    def scaled(self, s) -> "Direction":
        return Direction((self.vector[0] * s, self.vector[1] * s))


@dataclass(frozen=True)
class Section:
    """Horizontal or vertical segment ``start -> end`` in the plane layout.

    Points are parametrized by their offset from ``start`` along the axis,
    so the parameter range is ``[0, length)``.  With ``loop=True`` the end
    point is identified with the start on the surface.
    """

    start: Point
    end: Point
    loop: bool = False

    def __post_init__(self):
        dx = sign(self.end[0] - self.start[0])
        dy = sign(self.end[1] - self.start[1])
        if dy == 0 and dx > 0:
            axis = 0
        elif dx == 0 and dy > 0:
            axis = 1
        else:
            raise DataError("sections must run in the +x or +y direction")
        object.__setattr__(self, "_axis", axis)

    @property
    def axis(self) -> int:
        return self._axis

    @property
    def length(self):
        return self.end[self.axis] - self.start[self.axis]

    def point_at(self, x) -> Point:
        if self.axis == 0:
            return (self.start[0] + x, self.start[1])
        return (self.start[0], self.start[1] + x)

    def param(self, p: Point):
        return p[self.axis] - self.start[self.axis]

    def to_float(self) -> "Section":
        return Section(tuple(map(float, self.start)), tuple(map(float, self.end)), self.loop)

    def to_json(self) -> dict:
        def enc(v):
            return v.coords_json() if is_exact(v) else v
        return {"start": [enc(c) for c in self.start], "end": [enc(c) for c in self.end],
                "loop": self.loop}


@dataclass
class Segment:
    """Piece of a trajectory inside one polygon."""

    polygon: int
    anchor: Point
    anchor_time: object
    t_in: object
    t_out: object


@dataclass
class Event:
    time: object
    kind: str  # "edge", "vertex", "section", "end"
    polygon: int
    index: int  # edge or vertex index within the polygon
    point: Optional[Point] = None


@dataclass
class Trajectory:
    direction: Direction
    mode: str
    segments: list = field(default_factory=list)
    events: list = field(default_factory=list)

    def position(self, t) -> tuple[int, Point]:
        """Polygon and plane position at time ``t`` (float mode positions)."""
        tf = float(t)
        d = self.direction.vector
        for seg in self.segments:
            if float(seg.t_in) - 1e-12 <= tf <= float(seg.t_out) + 1e-12:
                q = seg.anchor
                dt = tf - float(seg.anchor_time)
                return seg.polygon, (float(q[0]) + dt * float(d[0]), float(q[1]) + dt * float(d[1]))
        raise ValueError(f"time {t} outside the traced range")

    def crossings(self) -> list:
        return [e for e in self.events if e.kind == "edge"]


@dataclass(frozen=True)
class ReturnMapResult:
    iet: IET
    times: tuple
    section: Section
    direction: Direction
    mode: str
    cut_points: tuple = ()
    stray: int = 0

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "iet": self.iet.to_json(),
            "times": [t.coords_json() if is_exact(t) else float(t) for t in self.times],
            "section": self.section.to_json(),
            "direction": [v.coords_json() if is_exact(v) else v for v in self.direction.vector],
        }


class _State:
    __slots__ = ("poly", "q", "t0", "t", "kind", "index")

    def __init__(self, poly, q, t0, t, kind, index):
        self.poly = poly
        self.q = q
        self.t0 = t0
        self.t = t
        self.kind = kind  # "interior" | "edge" | "vertex"
        self.index = index


class Flow:
    """Directional flow on a surface in a fixed arithmetic mode."""

    def __init__(self, surface: TranslationSurface, direction: Direction, mode: str = "exact"):
        if mode not in MODES:
            raise DataError(f"mode must be one of {MODES}")
        self.surface = surface
        self.mode = mode
        if mode == "float":
            self.polygons = tuple(tuple((float(x), float(y)) for x, y in poly)
                                  for poly in surface.polygons)
            self.d = (float(direction.vector[0]), float(direction.vector[1]))
            self.zero = 0.0
        else:
            self.polygons = surface.polygons
            d = direction.vector
            basis = surface.basis
            self.d = tuple(c if is_exact(c) else basis.const(c) for c in d)
            if any(isinstance(c, float) for c in d):
                raise DataError("exact mode needs an exact direction vector")
            self.zero = basis.zero()
        self.direction = Direction(self.d)
        self._translations = {}
        for (p, e), (q, f, tau) in surface._partner.items():
            if mode == "float":
                tau = (float(tau[0]), float(tau[1]))
            self._translations[(p, e)] = (q, f, tau)
        self._classes = surface.vertex_classes
        self._multiples = surface.angle_multiples
        # time axis: a direction component that divides exactly
        self._taxis = self._pick_time_axis()

    def reversed(self) -> "Flow":
        """The same flow run backwards in time, sharing all surface data."""
        back = object.__new__(Flow)
        back.__dict__.update(self.__dict__)
        back.d = vneg(self.d)
        back.direction = Direction(back.d)
        return back

    # -- small helpers --------------------------------------------------------
    def _pick_time_axis(self) -> int:
        d = self.d
        if self.mode == "float":
            return 0 if abs(d[0]) >= abs(d[1]) else 1
        for k in (1, 0):
            if sign(d[k]) != 0 and d[k].is_rational():
                return k
        for k in (1, 0):
            if sign(d[k]) != 0:
                return k
        return 0

    def _div_time(self, num):
        """``num / d[axis]`` for the time axis; inexact results become floats."""
        den = self.d[self._taxis]
        r = try_div(num, den)
        if r is None:
            return float(num) / float(den)
        return r

    def _time_at_point(self, q, t0, point):
        k = self._taxis
        return self._add_time(t0, self._div_time(point[k] - q[k]))

    def _add_time(self, a, b):
        if is_exact(a) and is_exact(b):
            return a + b
        return float(a) + float(b)

    def _point_at(self, q, t0, t) -> Point:
        dt = t - t0 if (is_exact(t) and is_exact(t0)) else float(t) - float(t0)
        x = try_mul(dt, self.d[0]) if is_exact(dt) else None
        y = try_mul(dt, self.d[1]) if is_exact(dt) else None
        if x is None or y is None:
            if self.mode == "exact":
                raise UnrepresentableProduct("trajectory point is not representable")
            dt = float(dt)
            return (q[0] + dt * self.d[0], q[1] + dt * self.d[1])
        return (q[0] + x, q[1] + y)

    def _lift(self, p: Point) -> Point:
        if self.mode == "float":
            return (float(p[0]), float(p[1]))
        basis = self.surface.basis
        return tuple(c if is_exact(c) else basis.const(c) for c in p)

    def _lift_scalar(self, x):
        if self.mode == "float":
            return float(x)
        return x if is_exact(x) else self.surface.basis.const(x)

    def corner_contains(self, p: int, i: int, d) -> bool:
        poly = self.polygons[p]
        n = len(poly)
        v = poly[i]
        return in_sector(vsub(poly[(i + 1) % n], v), vsub(poly[(i - 1) % n], v), d)

    def is_singular_vertex(self, p: int, i: int) -> bool:
        return self._multiples[self.surface.class_of(p, i)] != 1

    def _corner_for(self, p: int, i: int, d) -> tuple[int, int, Point]:
        """Corner of the vertex class of ``(p, i)`` whose sector holds ``d``.

        Returns ``(p', i', delta)`` where ``delta`` translates the plane copy
        of the vertex in ``p`` to the copy in ``p'``.
        """
        cls = self._classes[self.surface.class_of(p, i)]
        v = self.polygons[p][i]
        for (pp, ii) in cls:
            if self.corner_contains(pp, ii, d):
                return pp, ii, vsub(self.polygons[pp][ii], v)
        raise SingularOrbit(f"no corner of vertex ({p}, {i}) contains the direction")

    # -- locating a start point ----------------------------------------------
    def locate(self, point: Point, d=None):
        """State for a ray leaving ``point`` in direction ``d`` (default: flow)."""
        d = self.d if d is None else d
        point = self._lift(point)
        for p, poly in enumerate(self.polygons):
            n = len(poly)
            for i, v in enumerate(poly):
                if v == point or (self.mode == "float" and
                                  abs(v[0] - point[0]) <= 1e-12 and abs(v[1] - point[1]) <= 1e-12):
                    pp, ii, delta = self._corner_for(p, i, d)
                    return pp, ii, "vertex", vadd(point, delta)
        for p, poly in enumerate(self.polygons):
            n = len(poly)
            for k in range(n):
                a, b = poly[k], poly[(k + 1) % n]
                e = vsub(b, a)
                if cross_sign(e, vsub(point, a)) != 0:
                    continue
                if dot_sign(e, vsub(point, a)) <= 0 or dot_sign(e, vsub(point, b)) >= 0:
                    continue
                c = cross_sign(e, d)
                if c > 0:
                    return p, k, "edge", point
                if c == 0:
                    raise SingularOrbit("start point ray runs along an edge")
        for p, poly in enumerate(self.polygons):
            if _inside(poly, point):
                return p, None, "interior", point
        raise DataError(f"point {point} is not on the surface or has no outgoing polygon")

    def start_state(self, point: Point, t=None, d=None) -> _State:
        t = self.zero if t is None else self._lift_scalar(t)
        p, idx, kind, q = self.locate(point, d)
        if kind == "vertex" and self.is_singular_vertex(p, idx):
            raise SingularOrbit("trajectory starts at a cone point")
        return _State(p, q, t, t, kind, idx)

    def vertex_state(self, p: int, i: int, t=None, d=None) -> _State:
        """Ray leaving the corner ``(p, i)``; ``d`` must lie in its sector."""
        t = self.zero if t is None else t
        return _State(p, self.polygons[p][i], t, t, "vertex", i)

    # -- one traversal --------------------------------------------------------
    def _exit(self, st: _State, d):
        """Exit of the ray from the current polygon.

        Returns ``(kind, index, t_out)`` with kind ``"edge"`` or ``"vertex"``.
        """
        poly = self.polygons[st.poly]
        n = len(poly)
        q = st.q
        if st.kind == "vertex":
            i = st.index
            out_vec = vsub(poly[(i + 1) % n], poly[i])
            if cross_sign(out_vec, d) == 0 and dot_sign(out_vec, d) > 0:
                j = (i + 1) % n
                return "vertex", j, self._time_at_point(q, st.t0, poly[j])
            skip = {i, (i - 1) % n}
        elif st.kind == "edge":
            skip = {st.index}
        else:
            skip = set()
        cands = []
        for k in range(n):
            if k in skip:
                continue
            a, b = poly[k], poly[(k + 1) % n]
            e = vsub(b, a)
            if cross_sign(e, d) >= 0:
                continue
            sa = cross_sign(vsub(q, a), d)
            if sa > 0:
                continue
            sb = cross_sign(vsub(q, b), d)
            if sb < 0:
                continue
            cands.append((k, sa, sb))
        if not cands:
            raise SingularOrbit(f"ray cannot leave polygon {st.poly}")
        if len(cands) > 1:
            cands = self._first_candidates(st, cands, d)
        k, sa, sb = cands[0]
        if sa == 0:
            return "vertex", k, self._time_at_point(q, st.t0, poly[k])
        if sb == 0:
            j = (k + 1) % n
            return "vertex", j, self._time_at_point(q, st.t0, poly[j])
        return "edge", k, self._edge_time(st, k, d)

    def _edge_time(self, st: _State, k: int, d):
        poly = self.polygons[st.poly]
        a, b = poly[k], poly[(k + 1) % len(poly)]
        e = vsub(b, a)
        # axis-parallel edges give the time from a single coordinate
        for k in (1, 0):
            if sign(e[k]) == 0 and sign(d[k]) != 0:
                r = try_div(a[k] - st.q[k], d[k])
                if r is not None:
                    return self._add_time(st.t0, r)
        num = try_cross(vsub(a, st.q), e)
        den = try_cross(d, e)
        if num is not None and den is not None:
            r = try_div(num, den)
            if r is not None:
                return self._add_time(st.t0, r)
        fa = vsub(a, st.q)
        numf = float(fa[0]) * float(e[1]) - float(fa[1]) * float(e[0])
        denf = float(d[0]) * float(e[1]) - float(d[1]) * float(e[0])
        return float(st.t0) + numf / denf

    def _first_candidates(self, st, cands, d):
        # several outward edges meet the line: keep the earliest ahead of t
        poly = self.polygons[st.poly]
        n = len(poly)
        timed = []
        for k, sa, sb in cands:
            if sa == 0:
                t = self._time_at_point(st.q, st.t0, poly[k])
            elif sb == 0:
                t = self._time_at_point(st.q, st.t0, poly[(k + 1) % n])
            else:
                t = self._edge_time(st, k, d)
            if compare(t, st.t) > 0:
                timed.append((t, (k, sa, sb)))
        if not timed:
            raise SingularOrbit("no exit ahead of the ray")
        best = timed[0]
        for item in timed[1:]:
            c = compare(item[0], best[0])
            if c < 0:
                best = item
        # vertex exits show up as two candidates with equal times; keep one
        return [best[1]]

    def _section_hit(self, st: _State, t_out, section: Section, d, t_min, strict_end=False):
        """Section crossing inside ``[st.t, t_out]`` later than ``t_min``."""
        ax = section.axis
        other = 1 - ax
        if sign(d[other]) == 0:
            return None
        # the section lies on the line  coordinate[other] == start[other]
        num = section.start[other] - st.q[other]
        r = try_div(num, d[other])
        if r is None:
            r = float(num) / float(d[other])
        t_sec = self._add_time(st.t0, r)
        if compare(t_sec, st.t) < 0:
            return None
        c = compare(t_sec, t_out)
        if c > 0 or (strict_end and c == 0):
            return None
        if compare(t_sec, t_min) <= 0:
            return None
        p = self._point_at(st.q, st.t0, t_sec)
        x = section.param(p)
        if sign(x) < 0:
            return None
        cl = compare(x, section.length)
        if cl > 0 or (cl == 0 and not section.loop):
            return None
        if cl == 0:
            x = self.zero
            p = section.start
        return t_sec, x, p

    # -- tracing --------------------------------------------------------------
    def run(self, st: _State, d=None, *, section: Section | None = None, t_min=None,
            max_time=None, max_events: int = 200000, record: bool = False,
            traj: Trajectory | None = None):
        """Advance a ray until the section is hit or ``max_time`` is reached.

        Returns ``("section", t, x, point)`` or ``("time", t, None, None)``.
        """
        d = self.d if d is None else d
        t_min = st.t if t_min is None else t_min
        for _ in range(max_events):
            kind, idx, t_out = self._exit(st, d)
            if max_time is not None and compare(t_out, max_time) > 0:
                t_out_eff = max_time
            else:
                t_out_eff = None
            if section is not None:
                hit = self._section_hit(st, t_out if t_out_eff is None else t_out_eff,
                                        section, d, t_min)
                if hit is not None:
                    if record:
                        traj.segments.append(Segment(st.poly, st.q, st.t0, st.t, hit[0]))
                        traj.events.append(Event(hit[0], "section", st.poly, -1, hit[2]))
                    return ("section",) + hit
            if t_out_eff is not None:
                if record:
                    traj.segments.append(Segment(st.poly, st.q, st.t0, st.t, max_time))
                    traj.events.append(Event(max_time, "end", st.poly, -1))
                return ("time", max_time, None, None)
            if record:
                traj.segments.append(Segment(st.poly, st.q, st.t0, st.t, t_out))
            if kind == "edge":
                q2, f, tau = self._translations[(st.poly, idx)]
                if record:
                    traj.events.append(Event(t_out, "edge", st.poly, idx))
                if self.mode == "float":
                    exit_pt = self._point_at(st.q, st.t0, t_out)
                    st = _State(q2, vadd(exit_pt, tau), t_out, t_out, "edge", f)
                else:
                    st = _State(q2, vadd(st.q, tau), st.t0, t_out, "edge", f)
            else:
                if record:
                    traj.events.append(Event(t_out, "vertex", st.poly, idx))
                if self.is_singular_vertex(st.poly, idx):
                    raise SingularOrbit(
                        f"trajectory hits a cone point at vertex ({st.poly}, {idx})")
                pp, ii, delta = self._corner_for(st.poly, idx, d)
                v_new = self.polygons[pp][ii]
                if self.mode == "float":
                    st = _State(pp, v_new, t_out, t_out, "vertex", ii)
                else:
                    st = _State(pp, vadd(st.q, delta), st.t0, t_out, "vertex", ii)
                    if st.q is None:
                        st.q = v_new
        raise TimeBudgetExceeded(f"more than {max_events} polygon crossings")


def trace(surface: TranslationSurface, point: Point, direction: Direction, max_time,
          mode: str = "exact", max_events: int = 200000) -> Trajectory:
    """Trajectory of ``point`` up to ``max_time`` with every crossing event."""
    flow = Flow(surface, direction, mode)
    st = flow.start_state(point)
    traj = Trajectory(flow.direction, mode)
    flow.run(st, max_time=flow._lift_scalar(max_time), max_events=max_events,
             record=True, traj=traj)
    return traj


def _vertex_on_section(flow: Flow, section: Section, p: int, i: int) -> bool:
    v = flow.polygons[p][i]
    ax = section.axis
    if v[1 - ax] != section.start[1 - ax]:
        return False
    x = section.param(v)
    return sign(x) >= 0 and compare(x, section.length) <= 0


def _backward_cut(back: Flow, st: _State, section: Section, max_events, max_time):
    """Section parameter where a separatrix traced backward first lands.

    ``None`` when the budget runs out: the separatrix then lies in a part of
    the surface that the section's orbits never enter.
    """
    try:
        res = back.run(st, section=section, max_time=max_time, max_events=max_events)
    except SingularOrbit as exc:
        raise SingularSection(f"separatrix meets a vertex before the section: {exc}") from exc
    except TimeBudgetExceeded:
        return None
    if res[0] != "section":
        return None
    return res[2]


def first_return_map(surface: TranslationSurface, direction: Direction, section: Section,
                     mode: str = "exact", max_events: int = 200000,
                     separatrix_budget=None) -> ReturnMapResult:
    """First-return IET of the flow to ``section`` with its return times.

    Cut points are the cone points lying on the section, the first backward
    hits of every cone-point separatrix and of the section end points.  Each
    resulting interval is traced forward from its midpoint, and neighbours
    that return with the same translation and time are merged, so the
    intervals are maximal.

    A separatrix that has not reached the section within
    ``separatrix_budget`` time units (default 64 times the mean return time
    area/length) is taken to live in an invariant part of the surface the
    section never sees; such separatrices are counted in ``stray``.  Every
    interval is then re-checked near both ends with a float trace, so a cut
    missed this way is reported instead of silently merged.
    """
    flow = Flow(surface, direction, mode)
    if mode == "float":
        section = section.to_float()
    else:
        section = Section(flow._lift(section.start), flow._lift(section.end), section.loop)
    d = flow.d
    other = 1 - section.axis
    if sign(d[other]) == 0:
        raise NoReturn("direction is parallel to the section")
    back = flow.reversed()
    dback = back.d
    L = section.length
    if separatrix_budget is None:
        separatrix_budget = Fraction(math.ceil(64 * sum(polygon_float_area(p) for p in surface.polygons) / float(L)) + 1)
    budget = flow._lift_scalar(separatrix_budget)
    stray = 0
    cuts = [flow.zero]
    for cls, k in zip(surface.vertex_classes, surface.angle_multiples):
        if k == 1:
            continue
        for (p, i) in cls:
            if _vertex_on_section(flow, section, p, i):
                x = section.param(flow.polygons[p][i])
                if compare(x, L) < 0:
                    cuts.append(x)
            if flow.corner_contains(p, i, dback):
                st = flow.vertex_state(p, i, d=dback)
                try:
                    x = _backward_cut(back, st, section, max_events, budget)
                except SingularSection:
                    # a saddle connection: the lower cone point's own
                    # separatrices already carry this cut
                    continue
                if x is None:
                    stray += 1
                else:
                    cuts.append(x)
    # the points flowing into the section end points
    ends = [section.start] + ([] if section.loop else [section.end])
    for pt in ends:
        p, idx, kind, q = back.locate(pt)
        st = _State(p, q, flow.zero, flow.zero, kind, idx)
        try:
            x = _backward_cut(back, st, section, max_events, budget)
        except SingularSection:
            # the end point lies on a separatrix, whose own trace gives the cut
            continue
        if x is not None:
            cuts.append(x)
    cuts = _sorted_unique(cuts)
    bounds = cuts + [L]
    lengths, images, times = [], [], []
    for a, b in zip(bounds[:-1], bounds[1:]):
        lam = b - a
        if sign(lam) <= 0:
            raise SingularSection("degenerate interval between cut points")
        mid = (a + b) / 2
        st = flow.start_state(section.point_at(mid))
        try:
            res = flow.run(st, section=section, max_events=max_events)
        except TimeBudgetExceeded as exc:
            raise NoReturn(str(exc)) from exc
        except SingularOrbit as exc:
            raise SingularSection(f"interval midpoint meets a cone point: {exc}") from exc
        if res[0] != "section":
            raise NoReturn("orbit did not return to the section")
        _, t, y, _ = res
        image = a + (y - mid)
        # cut points that are not discontinuities (marked points, seams
        # of the layout) leave neighbours with equal translation and time
        if lengths and compare(images[-1] + lengths[-1], image) == 0 \
                and compare(times[-1], t) == 0:
            lengths[-1] = lengths[-1] + lam
            continue
        lengths.append(lam)
        images.append(image)
        times.append(t)
    m = len(lengths)
    order = sorted(range(m), key=lambda j: _SortKey(images[j]))
    perm = [0] * m
    for rank, j in enumerate(order, start=1):
        perm[j] = rank
    # images must tile [0, L) exactly
    acc = flow.zero
    for j in order:
        if compare(images[j], acc) != 0:
            raise SingularSection("return intervals do not tile the section")
        acc = acc + lengths[j]
    if mode == "exact":
        for t in times:
            if not is_exact(t):
                raise UnrepresentableProduct("return time is not representable exactly")
        iet = IET(lengths, Permutation(tuple(perm)))
    else:
        iet = _FloatIET(lengths, Permutation(tuple(perm)))
    _check_ends(surface, flow.direction, section, lengths, images, max_events)
    return ReturnMapResult(iet, tuple(times), section, flow.direction, mode, tuple(cuts), stray)


def _check_ends(surface, direction, section, lengths, images, max_events):
    """Float traces just inside both ends of every interval must land where
    the exact map says; a mismatch means a discontinuity was missed."""
    flow = Flow(surface, direction, "float")
    sec = section.to_float()
    a = 0.0
    for lam, img in zip(lengths, images):
        lam, img = float(lam), float(img)
        eps = min(1e-7, lam / 4)
        for x in (a + eps, a + lam - eps):
            try:
                res = flow.run(flow.start_state(sec.point_at(x)), section=sec,
                               max_events=max_events)
            except (SingularOrbit, TimeBudgetExceeded):
                continue
            y = res[2] if res[0] == "section" else None
            want = img + (x - a)
            if y is None or min(abs(y - want), abs(abs(y - want) - sec.length)) > 1e-6:
                raise SingularSection(
                    f"float check: point {x:.9g} returns to {y}, expected {want:.9g}")
        a += lam


def _inside(poly, point) -> bool:
    """Strict interior test; exact on convex polygons, ray casting otherwise."""
    n = len(poly)
    signs = [cross_sign(vsub(poly[(k + 1) % n], poly[k]), vsub(point, poly[k]))
             for k in range(n)]
    if all(s > 0 for s in signs):
        return True
    if 0 in signs:
        return False
    x, y = float(point[0]), float(point[1])
    inside = False
    for k in range(n):
        x1, y1 = float(poly[k][0]), float(poly[k][1])
        x2, y2 = float(poly[(k + 1) % n][0]), float(poly[(k + 1) % n][1])
        if (y1 > y) != (y2 > y):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xc > x:
                inside = not inside
    return inside


class _SortKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return compare(self.v, other.v) < 0


def _sorted_unique(values):
    vals = sorted(values, key=_SortKey)
    out = []
    for v in vals:
        if out and compare(v, out[-1]) == 0:
            continue
        out.append(v)
    return out


class _FloatIET:
    """Float-mode stand-in exposing the IET attributes the diagnostics use."""

    def __init__(self, lengths, perm: Permutation):
        self.lengths = tuple(float(x) for x in lengths)
        self.perm = perm
        self.total = math.fsum(self.lengths)

    @property
    def m(self):
        return self.perm.m

    def float_data(self):
        left = [0.0]
        for lam in self.lengths[:-1]:
            left.append(left[-1] + lam)
        inv = self.perm.inverse().images
        image_left = [0.0] * self.m
        acc = 0.0
        for j in inv:
            image_left[j - 1] = acc
            acc += self.lengths[j - 1]
        return left, [image_left[j] - left[j] for j in range(self.m)], self.total

    def to_json(self):
        return {"perm": list(self.perm.images), "lengths": list(self.lengths)}

    def __repr__(self):
        return f"FloatIET(perm={self.perm}, lengths={self.lengths})"


def return_times_vector(result: ReturnMapResult) -> tuple:
    return tuple(result.times)
