"""``veechmix`` command-line tool.

Exit codes: 0 success, 2 Inconclusive (weakmix and demo), 64 usage error,
65 bad input data or a geometric failure on it, 70 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import re
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .errors import DataError, VeechmixError
from .exactnum import FieldElement, RealBasis, common_basis

EXIT_OK = 0
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_INTERNAL = 70

log = logging.getLogger("veechmix")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- workspace ----------------------------------------------------------------

@dataclass
class Workspace:
    basis: RealBasis = field(default_factory=RealBasis.rational)
    mode: str = "exact"
    out_dir: Path = Path(".")
    seed: int = 0
    as_json: bool = False

    @classmethod
    def from_args(cls, args) -> "Workspace":
        if not 0 <= args.seed < 2 ** 64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        return cls(parse_basis(args.basis), args.mode, Path(args.out_dir), args.seed, args.json)

    def path(self, name: str) -> Path:
        p = Path(name)
        return p if p.is_absolute() else self.out_dir / p

    def write(self, name: str, text: str) -> Path:
        """Atomic write: temp file in the target directory, then rename."""
        target = self.path(name)
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        log.info("wrote %s", target)
        return target


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise DataError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from exc


# -- number parsing ---------------------------------------------------------------

def parse_basis(text: Optional[str]) -> RealBasis:
    """``beta1=1.41421356,beta2=1.7320508`` declares symbols with float hints."""
    if not text:
        return RealBasis.rational()
    hints = {}
    for item in text.split(","):
        name, _, value = item.partition("=")
        name = name.strip()
        if not re.fullmatch(r"[A-Za-z_]\w*", name) or not value:
            raise UsageError(f"bad basis entry {item!r}; expected name=hint")
        try:
            hints[name] = float(value)
        except ValueError as exc:
            raise UsageError(f"bad hint in {item!r}") from exc
    return RealBasis.of(**hints)


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:\.\d*)?(?:/\d+)?)\s*\*?\s*)?([A-Za-z_]\w*)?\s*")


def parse_scalar(text: str, basis: RealBasis) -> FieldElement:
    """Rational linear combination of basis symbols, e.g. ``1 + 2/3*beta1 - beta2``."""
    s = text.strip()
    if not s:
        raise DataError("empty number")
    acc = basis.zero()
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (not first and m.group(1) is None) \
                or (m.group(2) is None and m.group(3) is None):
            raise DataError(f"cannot parse number {text!r}")
        sgn = -1 if m.group(1) == "-" else 1
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            try:
                term = basis.symbol(m.group(3), sgn * coef)
            except (KeyError, ValueError) as exc:
                raise DataError(f"unknown symbol {m.group(3)!r}; declare it with --basis") from exc
        else:
            term = basis.const(sgn * coef)
        acc = acc + term
        pos = m.end()
        first = False
    return acc


def parse_pair(text: str, basis: RealBasis) -> tuple[FieldElement, FieldElement]:
    parts = text.split(",")
    if len(parts) != 2:
        raise DataError(f"expected two comma-separated numbers, got {text!r}")
    return parse_scalar(parts[0], basis), parse_scalar(parts[1], basis)


def parse_section(text: str, basis: RealBasis):
    """``x0,y0:x1,y1`` with an optional ``:loop`` suffix."""
    from .flow import Section

    parts = text.split(":")
    loop = parts[-1] == "loop"
    if loop:
        parts = parts[:-1]
    if len(parts) != 2:
        raise DataError(f"section must look like x0,y0:x1,y1[:loop], got {text!r}")
    return Section(parse_pair(parts[0], basis), parse_pair(parts[1], basis), loop)


def load_vector(path: str, basis: RealBasis, key: str = "values") -> list[FieldElement]:
    """Numbers from JSON: a plain list, or ``{"basis", "hints", "<key>" | "coords"}``.

    Plain entries may be numbers, strings parsed like command-line numbers,
    or ``[[p, q], ...]`` coordinate lists in ``basis``.
    """
    doc = read_json(path)
    if isinstance(doc, dict):
        if "basis" in doc:
            own = RealBasis.from_json(doc)
            if own != basis:
                raise DataError(f"{path}: basis differs from the IET basis")
        doc = next((doc[k] for k in (key, "values", "times", "heights", "coords") if k in doc), None)
        if doc is None:
            raise DataError(f"{path}: no value list found")
    if not isinstance(doc, list):
        raise DataError(f"{path}: expected a list of numbers")
    out = []
    for v in doc:
        if isinstance(v, list):
            out.append(FieldElement.from_json({"coords": v}, basis))
        elif isinstance(v, dict):
            out.append(FieldElement.from_json(v, basis))
        elif isinstance(v, (int, str)):
            out.append(parse_scalar(str(v), basis))
        elif isinstance(v, float):
            out.append(basis.const(Fraction(str(v))))
        else:
            raise DataError(f"{path}: cannot read {v!r} as a number")
    return out


def load_iet(path: str, basis: Optional[RealBasis] = None):
    from .iet import IET, Permutation

    doc = read_json(path)
    try:
        raw = doc["lengths"]
        if raw and all(isinstance(x, (int, str)) for x in raw):
            # shorthand: plain rationals or expressions in the --basis symbols
            basis = RealBasis.from_json(doc) if "basis" in doc else (basis or RealBasis.rational())
            return IET([parse_scalar(str(x), basis) for x in raw], Permutation(tuple(doc["perm"])))
        return IET.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DataError):
            raise
        raise DataError(f"{path}: malformed IET: {exc}") from exc


def load_surface(path: str):
    from .surface.model import TranslationSurface

    return TranslationSurface.from_json(read_json(path))


def _direction(text: str, basis: RealBasis, mode: str):
    from .flow import Direction

    if text.startswith("angle="):
        return Direction.from_angle(float(text[6:]))
    d = parse_pair(text, basis)
    if mode == "float":
        d = (float(d[0]), float(d[1]))
    return Direction(d)


# -- output helpers -------------------------------------------------------------------

def emit(ws: Workspace, doc: dict, text: str):
    sys.stdout.write(dumps(doc) if ws.as_json else text.rstrip("\n") + "\n")


def _csv_text(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _surface_summary(surface) -> str:
    cones = surface.cone_points
    lines = [f"polygons: {len(surface.polygons)}", f"pairings: {len(surface.pairings)}",
             f"genus: {surface.genus}",
             f"cone points: {len(cones)}" + (
                 " (angles " + ", ".join(f"{2 * c.angle_multiple}pi" for c in cones) + ")" if cones else "")]
    if surface.provenance:
        lines.append(f"provenance: {surface.provenance}")
    return "\n".join(lines)


def _surface_doc(surface) -> dict:
    return {"surface": surface.to_json(), "genus": surface.genus,
            "cone_angles_over_pi": [c.angle_over_pi for c in surface.cone_points]}


def _finish_surface(ws: Workspace, args, surface, slits=None, trajectory=None):
    from .surface.svg import surface_svg

    if getattr(args, "out", None):
        ws.write(args.out, dumps(surface.to_json()))
    if getattr(args, "svg", None):
        ws.write(args.svg, surface_svg(surface, slits=slits, trajectory=trajectory))
    emit(ws, _surface_doc(surface), _surface_summary(surface))


# -- iet ------------------------------------------------------------------------

def cmd_iet_analyze(ws: Workspace, args) -> int:
    from .iet import Permutation, SigmaDecomposition, is_irreducible

    if args.iet:
        iet = load_iet(args.iet, ws.basis)
        perm = iet.perm
    elif args.perm:
        perm = Permutation.parse(args.perm)
        iet = None
    else:
        raise UsageError("iet analyze needs --perm or --iet")
    dec = SigmaDecomposition.of(perm)
    m = perm.m
    doc = {"perm": list(perm.images), "irreducible": is_irreducible(perm), **dec.to_json(),
           "r": dec.r}
    if iet is not None:
        doc["iet"] = iet.to_json()
    lines = [f"pi = ({', '.join(map(str, perm.images))})",
             "irreducible: " + ("yes" if doc["irreducible"] else "no"),
             "  i      " + " ".join(f"{i:>3}" for i in range(m + 1)),
             "  sigma  " + " ".join(f"{s:>3}" for s in dec.sigma),
             "Sigma_pi = {" + ",".join("{" + ",".join(map(str, c)) + "}" for c in dec.cycles) + "}",
             f"#Sigma_pi = {dec.r}",
             "  S" + " " * 12 + " ".join(f"{'b' + str(i):>3}" for i in range(1, m + 1))]
    for c, b in zip(dec.cycles, dec.b_vectors):
        label = "{" + ",".join(map(str, c)) + "}"
        lines.append(f"  {label:<13}" + " ".join(f"{x:>3}" for x in b))
    emit(ws, doc, "\n".join(lines))
    return EXIT_OK


# -- surface ------------------------------------------------------------------

def cmd_surface_unfold(ws: Workspace, args) -> int:
    from .surface.coxeter import BUILTIN_POLYGONS, coxeter_group, polygon_from_json, unfold

    if args.builtin:
        if args.builtin not in BUILTIN_POLYGONS:
            raise DataError(f"unknown polygon {args.builtin!r}; choose from {', '.join(BUILTIN_POLYGONS)}")
        poly = BUILTIN_POLYGONS[args.builtin]()
    elif args.polygon:
        poly = polygon_from_json(read_json(args.polygon))
    else:
        raise UsageError("surface unfold needs --polygon or --builtin")
    group = coxeter_group(poly)
    surface = unfold(poly)
    if ws.as_json:
        emit(ws, {**_surface_doc(surface), "group_order": group.order}, "")
        if args.out:
            ws.write(args.out, dumps(surface.to_json()))
        return EXIT_OK
    sys.stdout.write(f"group order: {group.order}\n")
    _finish_surface(ws, args, surface)
    return EXIT_OK


def cmd_surface_suspend(ws: Workspace, args) -> int:
    from .surface.builders import suspend

    iet = load_iet(args.iet, ws.basis)
    heights = load_vector(args.heights, iet.basis, "heights")
    _finish_surface(ws, args, suspend(iet, heights))
    return EXIT_OK


def cmd_surface_fig1(ws: Workspace, args) -> int:
    from .surface.builders import build_slitted_torus
    from .surface.presets import load_preset, slits_from_json

    if args.slits:
        slits = slits_from_json(read_json(args.slits), ws.basis)
        surface = build_slitted_torus(slits, ws.basis, provenance=f"slits from {args.slits}")
    else:
        family, prov = load_preset(args.preset)
        if args.generic:
            family = family.generic()
        slits = family.slits()
        surface = family.surface(provenance=f"{args.preset}: {prov.get('summary', '')}".strip())
    _finish_surface(ws, args, surface, slits=slits)
    return EXIT_OK


def cmd_surface_hv(ws: Workspace, args) -> int:
    from .surface.builders import build_hv_surface

    a, b = parse_scalar(args.a, ws.basis), parse_scalar(args.b, ws.basis)
    _finish_surface(ws, args, build_hv_surface(a, b, ws.basis))
    return EXIT_OK


# -- flow ---------------------------------------------------------------------

def cmd_flow_trace(ws: Workspace, args) -> int:
    from .flow import trace
    from .geometry import fpoint
    from .surface.svg import surface_svg

    surface = load_surface(args.surface)
    basis = surface.basis
    d = _direction(args.dir, basis, ws.mode)
    start = parse_pair(args.start, basis)
    tmax = parse_scalar(args.tmax, basis)
    if ws.mode == "float":
        start, tmax = (float(start[0]), float(start[1])), float(tmax)
    traj = trace(surface, start, d, tmax, mode=ws.mode, max_events=args.max_events)
    events = [{"time": str(e.time), "time_float": float(e.time), "kind": e.kind,
               "polygon": e.polygon, "index": e.index,
               "point": list(fpoint(e.point)) if e.point is not None else None}
              for e in traj.events]
    doc = {"mode": ws.mode, "events": events, "crossings": len(traj.crossings())}
    lines = [f"{len(traj.events)} events, {len(traj.crossings())} edge crossings"]
    for e in events[: args.show]:
        lines.append(f"  t={e['time']:<24} {e['kind']:<8} polygon {e['polygon']} index {e['index']}")
    if len(events) > args.show:
        lines.append(f"  ... ({len(events) - args.show} more; use --json for all)")
    if args.svg:
        ws.write(args.svg, surface_svg(surface, trajectory=traj))
    emit(ws, doc, "\n".join(lines))
    return EXIT_OK


def _return_map(ws: Workspace, args):
    from .flow import first_return_map

    surface = load_surface(args.surface)
    d = _direction(args.dir, surface.basis, ws.mode)
    section = parse_section(args.section, surface.basis)
    return first_return_map(surface, d, section, mode=ws.mode, max_events=args.max_events)


def _render_return_map(res) -> str:
    lines = [f"permutation: ({', '.join(map(str, res.iet.perm.images))})"]
    for j, (lam, t) in enumerate(zip(res.iet.lengths, res.times), start=1):
        lines.append(f"  I{j}: length {lam}   time {t}")
    if res.stray:
        lines.append(f"  ({res.stray} separatrices never reach the section)")
    return "\n".join(lines)


def cmd_flow_return_map(ws: Workspace, args) -> int:
    res = _return_map(ws, args)
    if args.out:
        ws.write(args.out, dumps(res.to_json()))
    emit(ws, res.to_json(), _render_return_map(res))
    return EXIT_OK


# -- weakmix ------------------------------------------------------------------

def cmd_weakmix_check(ws: Workspace, args) -> int:
    from .weakmix import WEAKLY_MIXING_AE, check_surface_weak_mixing, check_weak_mixing

    if args.iet:
        if not args.times:
            raise UsageError("weakmix check --iet needs --times")
        iet = load_iet(args.iet, ws.basis)
        verdict = check_weak_mixing(iet, load_vector(args.times, iet.basis, "times"))
    elif args.surface:
        if not args.section:
            raise UsageError("weakmix check --surface needs --section")
        surface = load_surface(args.surface)
        verdict = check_surface_weak_mixing(
            surface, _direction(args.dir, surface.basis, "exact"),
            parse_section(args.section, surface.basis), max_events=args.max_events)
    else:
        raise UsageError("weakmix check needs --iet/--times or --surface/--section")
    if args.out:
        ws.write(args.out, dumps(verdict.to_json()))
    emit(ws, verdict.to_json(), verdict.render())
    return EXIT_OK if verdict.status == WEAKLY_MIXING_AE else EXIT_INCONCLUSIVE


def cmd_weakmix_exclude(ws: Workspace, args) -> int:
    from .weakmix import exclude_eigenvalue

    iet = load_iet(args.iet, ws.basis)
    times = load_vector(args.times, iet.basis, "times")
    res = exclude_eigenvalue(iet, times, parse_scalar(args.alpha, iet.basis))
    text = f"alpha = {res.alpha}: {res.status}"
    if res.witness is not None:
        text += f"\n  witness S={list(res.witness)} b={list(res.witness_b)} b.(alpha t) = {res.value}"
    emit(ws, res.to_json(), text)
    return EXIT_OK


# -- spectrum -----------------------------------------------------------------

def _float_list(path: Optional[str], basis) -> Optional[list[float]]:
    return None if path is None else [float(x) for x in load_vector(path, basis, "times")]


def cmd_spectrum_correlate(ws: Workspace, args) -> int:
    from .spectral import Observable, birkhoff_correlation, special_flow_correlation
    from .surface.svg import line_plot_svg

    iet = load_iet(args.iet, ws.basis)
    f = Observable.parse(args.f)
    g = Observable.parse(args.g or args.f)
    times = _float_list(args.times, iet.basis)
    if times is not None:
        if args.g and args.g != args.f:
            raise UsageError("special-flow correlations use one observable (omit --g)")
        rep = special_flow_correlation(iet, times, f, args.lags, args.samples, dt=args.dt, seed=ws.seed)
    else:
        rep = birkhoff_correlation(iet, f, g, args.lags, args.samples, seed=ws.seed,
                                   restarts=args.restarts)
    if args.csv:
        ws.write(args.csv, _csv_text(rep.csv_rows()))
    if args.svg:
        ws.write(args.svg, line_plot_svg(list(range(1, len(rep.cesaro) + 1)), list(rep.cesaro),
                                         title="Cesaro indicator M(N)"))
    c = rep.cesaro
    text = "\n".join([
        f"samples {rep.sample_count}, lags 0..{args.lags}, seed {ws.seed}",
        f"M(1) = {c[0]:.6g}   M(N) = {c[-1]:.6g}   ratio {c[-1] / c[0] if c[0] else float('nan'):.4g}",
        f"note: {rep.notes[0]}"])
    doc = rep.to_json()
    if not args.full_json:
        doc.pop("correlations")
        doc["cesaro"] = {"first": float(c[0]), "last": float(c[-1])}
    emit(ws, doc, text)
    return EXIT_OK


def _grid(text: str) -> list[float]:
    try:
        a, b, step = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"alpha grid must be a:b:step, got {text!r}") from exc
    if step <= 0 or b < a:
        raise UsageError("alpha grid needs a <= b and step > 0")
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return [a + k * step for k in range(n)]


def cmd_spectrum_weyl(ws: Workspace, args) -> int:
    from .spectral import Observable, weyl_scan

    iet = load_iet(args.iet, ws.basis)
    f = Observable.parse(args.f)
    alphas = _grid(args.alpha_grid) if args.alpha_grid else [float(parse_scalar(args.alpha, iet.basis))]
    times = _float_list(args.times, iet.basis)
    rows = weyl_scan(iet, f, alphas, args.N, args.samples, ws.seed, times)
    if args.csv:
        ws.write(args.csv, _csv_text([("alpha", "weyl_abs")] + [(a, w) for a, w in rows]))
    doc = {"N": args.N, "samples": args.samples, "seed": ws.seed,
           "rows": [{"alpha": a, "weyl_abs": w} for a, w in rows]}
    best = max(rows, key=lambda r: r[1])
    text = f"{len(rows)} alphas, N={args.N}; largest |W| = {best[1]:.4g} at alpha = {best[0]:.6g}"
    emit(ws, doc, text)
    return EXIT_OK


def _chart_period(a: FieldElement, b: FieldElement) -> Fraction:
    # gluing jumps are a, b - a and b; with rational sides they are multiples of this
    if not (a.is_rational() and b.is_rational()):
        raise DataError("eigenfunctions e(jx+ky) need rational side lengths")
    x, y = a.rational_value(), b.rational_value()
    den = x.denominator * y.denominator // math.gcd(x.denominator, y.denominator)
    return Fraction(math.gcd(int(x * den), int(y * den)), den)


def hv_report(ws: Workspace, a: FieldElement, b: FieldElement, theta: float, jk: int,
              samples: int, t_max: float) -> tuple[dict, str]:
    from .spectral import ALMOST_INTEGRABLE, hv_classify, hv_eigenvalues, verify_hv_eigenfunction
    from .surface.builders import build_hv_surface

    status = hv_classify(a, b)
    doc = {"a": str(a), "b": str(b), "theta": theta, "status": status}
    lines = [f"a = {a}, b = {b}: {status}"]
    if status == ALMOST_INTEGRABLE:
        period = _chart_period(a, b)
        table = hv_eigenvalues(theta, range(-jk, jk + 1), range(-jk, jk + 1), period=period)
        surface = build_hv_surface(a, b)
        grid = [(j, k) for j, k, _ in table]
        resid = verify_hv_eigenfunction(surface, 0, 0, theta, sample_count=samples, t_max=t_max,
                                        seed=ws.seed, period=float(period), jk_grid=grid)
        doc.update({"chart_period": str(period), "max_residual": resid,
                    "eigenvalues": [{"j": j, "k": k, "alpha": float(al)} for j, k, al in table]})
        lines.append(f"eigenfunctions e((jx+ky)/{period}), alpha_jk = (j cos + k sin)/{period}")
        lines.append("   j   k        alpha")
        lines.extend(f"  {j:>2}  {k:>2}  {float(al):>11.6f}" for j, k, al in table if j >= 0)
        lines.append(f"max residual over |j|,|k| <= {jk}: {resid:.3g} ({samples} samples, t <= {t_max})")
    return doc, "\n".join(lines)


def cmd_spectrum_hv(ws: Workspace, args) -> int:
    a, b = parse_scalar(args.a, ws.basis), parse_scalar(args.b, ws.basis)
    doc, text = hv_report(ws, a, b, args.theta, args.jk, args.samples, args.tmax)
    emit(ws, doc, text)
    return EXIT_OK


# -- demo ---------------------------------------------------------------------

def cmd_demo(ws: Workspace, args) -> int:
    from .flow import Direction, Section, first_return_map
    from .iet import Permutation, SigmaDecomposition
    from .spectral import Observable, special_flow_correlation
    from .surface.presets import load_preset
    from .weakmix import WEAKLY_MIXING_AE, check_weak_mixing

    if args.hv:
        a, b = parse_scalar(args.a, ws.basis), parse_scalar(args.b, ws.basis)
        doc, text = hv_report(ws, a, b, args.theta, 3, args.samples, 50.0)
        emit(ws, doc, text)
        return EXIT_OK

    lines = []
    target = Permutation((4, 2, 3, 1))
    dec = SigmaDecomposition.of(target)
    lines.append("step 1: permutation (4, 2, 3, 1)")
    lines.append("  Sigma_pi = {" + ",".join("{" + ",".join(map(str, c)) + "}" for c in dec.cycles)
                 + f"}} ({dec.r} cycles, at least 3 needed)")
    family, prov = load_preset(args.preset)
    family = family.generic()
    surface = family.surface(provenance=args.preset)
    lines.append(f"step 2: surface {args.preset} with generic symbolic parameters")
    lines.append(f"  genus {surface.genus}, {len(surface.polygons)} triangles, "
                 f"{len(family.slits())} slit pairs")
    z = surface.basis.zero()
    one = surface.basis.const(1)
    res = first_return_map(surface, Direction((z, one)), Section((z, z), (one, z), loop=True))
    lines.append(f"  vertical first return to the bottom side: permutation "
                 f"({', '.join(map(str, res.iet.perm.images))})")
    if res.iet.perm != target:
        raise DataError(f"preset {args.preset} does not induce (4, 2, 3, 1)")
    times = list(res.times)
    if args.times_equal:
        times = [surface.basis.const(1)] * len(times)
        lines.append("  return times overridden to (1, 1, 1, 1)")
    for j, t in enumerate(times, start=1):
        lines.append(f"  t{j} = {t}")
    verdict = check_weak_mixing(res.iet, times)
    lines.append("step 3: eigenvalue obstructions")
    lines.extend("  " + ln for ln in verdict.render().splitlines())
    rep = special_flow_correlation(res.iet, [float(t) for t in times], Observable.fourier(1),
                                   args.lags, args.lags, dt=1.0, seed=ws.seed)
    c = rep.cesaro
    lines.append(f"spectral check (heuristic): M(1) = {c[0]:.4g}, M({len(c)}) = {c[-1]:.4g}, "
                 f"ratio {c[-1] / c[0]:.3g}")
    doc = {"preset": args.preset, "provenance": prov, "sigma": dec.to_json(),
           "return_map": res.to_json(), "verdict": verdict.to_json(),
           "spectral": {"lags": args.lags, "seed": ws.seed, "M1": float(c[0]), "MN": float(c[-1]),
                        "note": rep.notes[0]}}
    if args.out:
        ws.write(args.out, dumps(doc))
    emit(ws, doc, "\n".join(lines))
    return EXIT_OK if verdict.status == WEAKLY_MIXING_AE else EXIT_INCONCLUSIVE


# -- parser -------------------------------------------------------------------

def _globals(p: argparse.ArgumentParser, top: bool):
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--mode", choices=("exact", "float"), default=d("exact"),
                   help="arithmetic mode for flow commands")
    p.add_argument("--seed", type=int, default=d(0), help="seed for all randomness")
    p.add_argument("--out-dir", default=d("."), help="directory for relative output paths")
    p.add_argument("--json", action="store_true", default=d(False), help="print JSON instead of text")
    p.add_argument("--basis", default=d(None), help="symbols with float hints: name=hint,...")
    p.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="veechmix", description="Weak-mixing certificates for translation flows.")
    top.add_argument("--version", action="version", version=f"veechmix {__version__}")
    _globals(top, True)
    common = _Parser(add_help=False)
    _globals(common, False)
    sub = top.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def group(name, help_):
        g = sub.add_parser(name, help=help_)
        return g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def leaf(gsub, name, func, help_):
        p = gsub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=func)
        return p

    g = group("iet", "interval exchange combinatorics")
    p = leaf(g, "analyze", cmd_iet_analyze, "sigma_pi, its cycles and the b_S vectors")
    p.add_argument("--perm", help="permutation, e.g. 4,2,3,1")
    p.add_argument("--iet", help="IET JSON file")

    g = group("surface", "build translation surfaces")
    p = leaf(g, "unfold", cmd_surface_unfold, "unfold a rational polygon")
    p.add_argument("--polygon")
    p.add_argument("--builtin")
    p = leaf(g, "suspend", cmd_surface_suspend, "suspension of an IET")
    p.add_argument("--iet", required=True)
    p.add_argument("--heights", required=True)
    p = leaf(g, "fig1", cmd_surface_fig1, "slitted torus realizing (4,2,3,1)")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", default="fig1-default")
    src.add_argument("--slits")
    p.add_argument("--generic", action="store_true", help="replace parameters by independent symbols")
    p = leaf(g, "hv", cmd_surface_hv, "horizontal-vertical L-shaped surface")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    for name in ("unfold", "suspend", "fig1", "hv"):
        sp = g.choices[name]
        sp.add_argument("--out", help="surface JSON output")
        sp.add_argument("--svg", help="SVG drawing output")

    g = group("flow", "straight-line flow")
    p = leaf(g, "trace", cmd_flow_trace, "trace one trajectory")
    p.add_argument("--surface", required=True)
    p.add_argument("--dir", required=True, help="dx,dy or angle=radians")
    p.add_argument("--start", required=True)
    p.add_argument("--tmax", required=True)
    p.add_argument("--svg")
    p.add_argument("--show", type=int, default=20)
    p = leaf(g, "return-map", cmd_flow_return_map, "first-return IET to a section")
    p.add_argument("--surface", required=True)
    p.add_argument("--dir", default="0,1")
    p.add_argument("--section", required=True, help="x0,y0:x1,y1[:loop]")
    p.add_argument("--out")
    for name in ("trace", "return-map"):
        g.choices[name].add_argument("--max-events", type=int, default=200000)

    g = group("weakmix", "weak-mixing certificate")
    p = leaf(g, "check", cmd_weakmix_check, "two-cycle independence test")
    p.add_argument("--iet")
    p.add_argument("--times")
    p.add_argument("--surface")
    p.add_argument("--dir", default="0,1")
    p.add_argument("--section")
    p.add_argument("--out")
    p.add_argument("--max-events", type=int, default=200000)
    p = leaf(g, "exclude", cmd_weakmix_exclude, "is alpha ruled out as an eigenvalue")
    p.add_argument("--iet", required=True)
    p.add_argument("--times", required=True)
    p.add_argument("--alpha", required=True)

    g = group("spectrum", "numerical spectral diagnostics")
    p = leaf(g, "correlate", cmd_spectrum_correlate, "correlations and Cesaro indicator")
    p.add_argument("--iet", required=True)
    p.add_argument("--f", default="fourier:1")
    p.add_argument("--g")
    p.add_argument("--lags", type=int, default=1000)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--times", help="roof heights: correlate the special flow instead")
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.add_argument("--full-json", action="store_true")
    p = leaf(g, "weyl", cmd_spectrum_weyl, "Weyl sums over an alpha grid")
    p.add_argument("--iet", required=True)
    p.add_argument("--f", default="fourier:1")
    p.add_argument("--alpha-grid")
    p.add_argument("--alpha", default="0")
    p.add_argument("--N", type=int, default=100000)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--times")
    p.add_argument("--csv")
    p = leaf(g, "hv", cmd_spectrum_hv, "horizontal-vertical surface analytics")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--theta", type=float, default=0.7)
    p.add_argument("--jk", type=int, default=3)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--tmax", type=float, default=50.0)

    p = sub.add_parser("demo", help="end-to-end weak-mixing pipeline", parents=[common])
    p.set_defaults(func=cmd_demo)
    p.add_argument("--preset", default="fig1-default")
    p.add_argument("--times-equal", action="store_true", help="replace return times by ones")
    p.add_argument("--hv", action="store_true", help="run the horizontal-vertical variant")
    p.add_argument("--a", default="1")
    p.add_argument("--b", default="2")
    p.add_argument("--theta", type=float, default=0.7)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--lags", type=int, default=20000)
    p.add_argument("--out")
    return top


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        ws = Workspace.from_args(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="veechmix: %(message)s", stream=sys.stderr)
    log.info("seed %d, mode %s", ws.seed, ws.mode)
    try:
        return args.func(ws, args)
    except UsageError as exc:
        print(f"veechmix: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (VeechmixError, ValueError, KeyError, OSError) as exc:
        print(f"veechmix: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001 - last-resort report
        print(f"veechmix: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
