"""Slitted-torus presets whose vertical flow returns to the x-axis as a chosen IET.

Each interval ``I_j`` of the base gets a slit pair.  The lower copy lies
over ``I_j`` at height ``low[j]``, the upper copy over ``T(I_j)`` at
``high[j]``.  With every lower copy below every upper copy, a vertical
orbit from ``x`` in ``I_j`` crosses the lower copy, leaves the upper copy
above ``T(x)`` and reaches the top side, so the first return is ``T`` with
time ``1 + low[j] - high[j]``.  An interval may be covered by a chain of
several slits sharing one gluing translation; the joints are marked points.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Sequence

from ..errors import DataError, UnknownPreset
from ..exactnum import FieldElement, RealBasis
from ..iet import Permutation
from .builders import SlitPair, build_slitted_torus
from .model import TranslationSurface

PRESETS = ("fig1-default",)


@dataclass(frozen=True)
class SlitFamily:
    """Parameters of the slit construction described in the module docstring.

    ``widths`` and ``rises`` are the components of the individual slit
    vectors; ``groups[j]`` lists the slits covering interval ``j``.
    """

    perm: Permutation
    groups: tuple[tuple[int, ...], ...]
    widths: tuple
    rises: tuple
    low: tuple
    high: tuple

    def __post_init__(self):
        m = self.perm.m
        k = len(self.widths)
        if len(self.groups) != m or len(self.low) != m or len(self.high) != m:
            raise DataError("groups, low and high need one entry per interval")
        if len(self.rises) != k:
            raise DataError("widths and rises must have the same length")
        if sorted(i for g in self.groups for i in g) != list(range(k)):
            raise DataError("groups must cover every slit exactly once")

    @property
    def lengths(self) -> list:
        return [sum((self.widths[i] for i in g[1:]), self.widths[g[0]]) for g in self.groups]

    @property
    def times(self) -> list:
        return [1 + lo - hi for lo, hi in zip(self.low, self.high)]

    def slits(self) -> list[SlitPair]:
        lengths = self.lengths
        m = len(lengths)
        left = []
        acc = 0 * lengths[0]
        for lam in lengths:
            left.append(acc)
            acc = acc + lam
        image = [None] * m
        acc = 0 * lengths[0]
        for j in sorted(range(m), key=lambda j: self.perm.images[j]):
            image[j] = acc
            acc = acc + lengths[j]
        out = []
        for j, g in enumerate(self.groups):
            x, y = left[j], self.low[j]
            dx, dy = image[j] - left[j], self.high[j] - self.low[j]
            for i in g:
                v = (self.widths[i], self.rises[i])
                out.append(SlitPair((x, y), (x + dx, y + dy), v))
                x, y = x + v[0], y + v[1]
        return out

    def surface(self, provenance: str | None = None) -> TranslationSurface:
        basis = _basis_of(self)
        return build_slitted_torus(self.slits(), basis, provenance=provenance)

    # -- serialization --------------------------------------------------------
    def to_json(self) -> dict:
        def enc(xs):
            return [str(x) for x in xs]
        return {"perm": list(self.perm.images), "groups": [list(g) for g in self.groups],
                "widths": enc(self.widths), "rises": enc(self.rises),
                "low": enc(self.low), "high": enc(self.high)}

    @classmethod
    def from_json(cls, doc: dict) -> "SlitFamily":
        try:
            def dec(xs):
                return tuple(Fraction(x) for x in xs)
            return cls(Permutation(tuple(doc["perm"])), tuple(tuple(g) for g in doc["groups"]),
                       dec(doc["widths"]), dec(doc["rises"]), dec(doc["low"]), dec(doc["high"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise DataError(f"malformed slit family: {exc}") from exc

    def generic(self) -> "SlitFamily":
        """Same combinatorics with every free parameter an independent symbol.

        Widths except the last, rises and heights become basis symbols whose
        float hints sit slightly off the rational values, so the layout is
        unchanged while the exact data has no rational relations beyond the
        widths summing to 1.
        """
        names = ([f"w{i}" for i in range(len(self.widths) - 1)]
                 + [f"r{i}" for i in range(len(self.rises))]
                 + [f"lo{j}" for j in range(len(self.low))]
                 + [f"hi{j}" for j in range(len(self.high))])
        values = list(self.widths[:-1]) + list(self.rises) + list(self.low) + list(self.high)
        hints = {n: float(v) + _nudge(k) for k, (n, v) in enumerate(zip(names, values))}
        basis = RealBasis.of(**hints)
        sym = [basis.symbol(n) for n in names]
        k = len(self.widths)
        widths = sym[:k - 1]
        widths.append(basis.const(1) - sum(widths[1:], widths[0]))
        rises = sym[k - 1:2 * k - 1]
        m = len(self.low)
        low = sym[2 * k - 1:2 * k - 1 + m]
        high = sym[2 * k - 1 + m:]
        return SlitFamily(self.perm, self.groups, tuple(widths), tuple(rises),
                          tuple(low), tuple(high))


def _nudge(k: int) -> float:
    # small offsets from the golden-ratio sequence keep float hints off ties
    return 1e-4 * (0.1 + ((k + 1) * (math.sqrt(5) - 1) / 2) % 1.0)


def _basis_of(family: SlitFamily) -> RealBasis:
    for x in (*family.widths, *family.rises, *family.low, *family.high):
        if isinstance(x, FieldElement):
            return x.basis
    return RealBasis.rational()


def load_preset(name: str = "fig1-default") -> tuple[SlitFamily, dict]:
    """Stored family and its provenance record."""
    if name not in PRESETS:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    text = resources.files("veechmix.data").joinpath(f"{name}.json").read_text()
    doc = json.loads(text)
    return SlitFamily.from_json(doc["family"]), doc.get("provenance", {})


def fig1_surface(preset: str = "fig1-default", generic: bool = False) -> TranslationSurface:
    family, prov = load_preset(preset)
    if generic:
        family = family.generic()
    note = f"{preset} ({'generic symbols' if generic else 'rational'}): {prov.get('summary', '')}"
    return family.surface(provenance=note.strip())


def fig1_slit_pairs(preset: str = "fig1-default") -> list[SlitPair]:
    return load_preset(preset)[0].slits()


def slits_from_json(doc: Sequence[dict], basis: RealBasis | None = None) -> list[SlitPair]:
    """``[{"anchor_a": [x, y], "anchor_b": [x, y], "vector": [x, y]}, ...]``."""
    basis = basis or RealBasis.rational()

    def pt(v):
        if len(v) != 2:
            raise DataError("points need two coordinates")
        return tuple(FieldElement.from_json(c, basis) if isinstance(c, dict)
                     else basis.const(Fraction(str(c))) for c in v)
    try:
        return [SlitPair(pt(s["anchor_a"]), pt(s["anchor_b"]), pt(s["vector"])) for s in doc]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise DataError(f"malformed slit list: {exc}") from exc
