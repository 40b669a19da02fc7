"""Eigenvalue exclusion and the two-cycle sufficient condition for weak mixing.

For an IET ``(lambda, pi)`` with return times ``t``, every cycle ``S`` of
``sigma_pi`` gives an integer vector ``b_S``.  A measurable eigenfunction of
the special flow with eigenvalue ``alpha`` forces ``b_S . (alpha t)`` to be
an integer for every ``S`` (for almost every ``lambda``).  So:

* ``alpha`` is excluded as soon as one ``b_S . (alpha t)`` is not an integer;
* if two of the numbers ``b_S . t`` are linearly independent over Q, no
  nonzero ``alpha`` survives and the flow is weakly mixing, again for almost
  every ``lambda``.

Both tests are exact over the coordinates of the working basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .errors import DataError, NonPositiveInput, ReducibleInput
from .exactnum import FieldElement, common_basis, fe_mul, rank_over_q
from .iet import IET, Permutation, SigmaDecomposition, is_irreducible

WEAKLY_MIXING_AE = "WeaklyMixingAE"
INCONCLUSIVE = "Inconclusive"
EXCLUDED = "Excluded"
NOT_EXCLUDED = "NotExcluded"

CAVEATS = (
    "Weak mixing is asserted for almost every length vector lambda with this "
    "permutation and these return times; the particular lambda is not certified.",
    "Independence is decided on basis coordinates, assuming the basis reals "
    "are linearly independent over Q.",
)


def veech_obstruction_set(perm: Permutation) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every cycle ``S`` of ``sigma_pi`` with its vector ``b_S``."""
    if not is_irreducible(perm):
        raise ReducibleInput(f"permutation {perm} is reducible")
    dec = SigmaDecomposition.of(perm)
    return list(zip(dec.cycles, dec.b_vectors))


def _dot(b: Sequence[int], xs: Sequence[FieldElement]) -> FieldElement:
    acc = xs[0].basis.zero()
    for c, x in zip(b, xs):
        if c:
            acc = acc + x.scale(c)
    return acc


def is_integer(x: FieldElement) -> bool:
    return x.is_rational() and x.coords[0].denominator == 1


def _check_times(iet: IET, t: Sequence[FieldElement]) -> list[FieldElement]:
    t = list(t)
    if len(t) != iet.m:
        raise DataError(f"{len(t)} return times for {iet.m} intervals")
    common_basis(t)
    for x in t:
        if x.sign() <= 0:
            raise NonPositiveInput(f"return times must be positive, got {x}")
    return t


def nu_obstructions(iet: IET, nu: Sequence[FieldElement]) -> list[tuple[tuple[int, ...], FieldElement]]:
    """Cycles whose ``b_S . nu`` is not an integer (general cocycle data).

    Each returned cycle rules out an eigenfunction for the cocycle
    ``phi = e(nu_j)`` on interval ``j``.
    """
    if len(nu) != iet.m:
        raise DataError(f"nu has {len(nu)} entries for {iet.m} intervals")
    out = []
    for cyc, b in veech_obstruction_set(iet.perm):
        val = _dot(b, nu)
        if not is_integer(val):
            out.append((cyc, val))
    return out


@dataclass(frozen=True)
class Exclusion:
    status: str
    alpha: FieldElement
    witness: Optional[tuple[int, ...]] = None
    witness_b: Optional[tuple[int, ...]] = None
    value: Optional[FieldElement] = None

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "alpha": self.alpha.to_json(),
            "witness": list(self.witness) if self.witness is not None else None,
            "b": list(self.witness_b) if self.witness_b is not None else None,
            "value": self.value.to_json() if self.value is not None else None,
        }


def exclude_eigenvalue(iet: IET, t: Sequence[FieldElement], alpha) -> Exclusion:
    """Is ``alpha`` ruled out as an eigenvalue of the special flow?

    ``alpha`` is a rational or a rational multiple of one basis symbol; the
    products ``alpha * t_j`` must stay in the basis.
    """
    t = _check_times(iet, t)
    basis = t[0].basis
    if not isinstance(alpha, FieldElement):
        alpha = basis.const(alpha)
    if alpha.basis != basis:
        raise DataError("alpha must use the basis of the return times")
    nu = [fe_mul(alpha, x) for x in t]
    for cyc, b in veech_obstruction_set(iet.perm):
        val = _dot(b, nu)
        if not is_integer(val):
            return Exclusion(EXCLUDED, alpha, cyc, b, val)
    return Exclusion(NOT_EXCLUDED, alpha)


@dataclass(frozen=True)
class CycleEntry:
    cycle: tuple[int, ...]
    b: tuple[int, ...]
    value: FieldElement

    def to_json(self) -> dict:
        return {"S": list(self.cycle), "b": list(self.b), "b_dot_t": self.value.to_json(),
                "b_dot_t_str": str(self.value)}


@dataclass(frozen=True)
class WeakMixVerdict:
    status: str
    entries: tuple[CycleEntry, ...]
    pair: Optional[tuple[int, int]] = None
    rank_uv: Optional[int] = None
    rank_1uv: Optional[int] = None
    caveats: tuple[str, ...] = CAVEATS
    return_map: object = field(default=None, compare=False)

    @property
    def u(self) -> Optional[FieldElement]:
        return self.entries[self.pair[0]].value if self.pair else None

    @property
    def v(self) -> Optional[FieldElement]:
        return self.entries[self.pair[1]].value if self.pair else None

    def to_json(self) -> dict:
        doc = {
            "status": self.status,
            "cycles": [e.to_json() for e in self.entries],
            "pair": list(self.pair) if self.pair else None,
            "u": self.u.to_json() if self.pair else None,
            "v": self.v.to_json() if self.pair else None,
            "rank_uv": self.rank_uv,
            "rank_1uv": self.rank_1uv,
            "caveats": list(self.caveats),
        }
        if self.return_map is not None:
            doc["return_map"] = self.return_map.to_json()
        return doc

    def render(self) -> str:
        lines = [f"status: {self.status}"]
        w = max(len(str(list(e.cycle))) for e in self.entries)
        for k, e in enumerate(self.entries):
            mark = " *" if self.pair and k in self.pair else ""
            lines.append(f"  S={str(list(e.cycle)):<{w}}  b={list(e.b)}  b.t={e.value}{mark}")
        if self.pair:
            lines.append(f"u = {self.u}")
            lines.append(f"v = {self.v}")
            lines.append(f"rank_Q(u, v) = {self.rank_uv}; rank_Q(1, u, v) = {self.rank_1uv}")
        for c in self.caveats:
            lines.append(f"note: {c}")
        return "\n".join(lines)


def _rank_with_one(u: FieldElement, v: FieldElement) -> int:
    one = u.basis.const(1)
    return rank_over_q([one.coords, u.coords, v.coords])


def check_weak_mixing(iet: IET, t: Sequence[FieldElement]) -> WeakMixVerdict:
    """Scan cycle pairs in order for two Q-independent values of ``b_S . t``."""
    t = _check_times(iet, t)
    entries = tuple(CycleEntry(cyc, b, _dot(b, t)) for cyc, b in veech_obstruction_set(iet.perm))
    for j, k in combinations(range(len(entries)), 2):
        u, v = entries[j].value, entries[k].value
        if u.is_zero() or v.is_zero():
            continue
        r = rank_over_q([u.coords, v.coords])
        if r == 2:
            return WeakMixVerdict(WEAKLY_MIXING_AE, entries, (j, k), r, _rank_with_one(u, v))
    return WeakMixVerdict(INCONCLUSIVE, entries)


def check_surface_weak_mixing(surface, direction, section, mode: str = "exact",
                              max_events: int = 200000) -> WeakMixVerdict:
    """First-return map of the flow, then :func:`check_weak_mixing` on it."""
    from .flow import first_return_map

    if mode != "exact":
        raise DataError("the weak mixing certificate needs exact mode")
    res = first_return_map(surface, direction, section, mode="exact", max_events=max_events)
    verdict = check_weak_mixing(res.iet, res.times)
    return WeakMixVerdict(verdict.status, verdict.entries, verdict.pair, verdict.rank_uv,
                          verdict.rank_1uv, verdict.caveats, res)


def scale_times(t: Sequence[FieldElement], c: Fraction) -> list[FieldElement]:
    return [x.scale(c) for x in t]
