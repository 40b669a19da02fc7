"""Exact scalars over a declared Q-basis of real numbers.

A :class:`FieldElement` is a rational vector of coordinates over a
:class:`RealBasis`.  The basis symbols are *assumed* linearly independent
over Q; that assumption is what makes integral independence decidable.
Float hints attached to the basis are only used to order elements and to
render them, never to decide equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

from .errors import (
    AmbiguousComparison,
    BasisMismatch,
    DataError,
    EmptyInput,
    NonPositiveInput,
    UnrepresentableProduct,
)

Rational = Fraction

# relative width of the band in which float hints cannot order two values
TIE_TOLERANCE = 1e-9
CF_GUARD = 1e-12
CF_MAX_COUNT = 40


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


@dataclass(frozen=True)
class RealBasis:
    """Named reals ``labels`` with double-precision ``hints``; label 0 is 1."""

    labels: tuple[str, ...]
    hints: tuple[float, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        hints = tuple(float(h) for h in self.hints)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "hints", hints)
        if not labels or labels[0] != "1":
            raise DataError("basis label 0 must be the constant '1'")
        if len(labels) != len(hints):
            raise DataError("one float hint per basis label is required")
        if len(set(labels)) != len(labels):
            raise DataError("basis labels must be unique")
        if hints[0] != 1.0:
            raise DataError("hint of the constant label must be 1.0")
        for h in hints:
            if not math.isfinite(h) or h == 0.0:
                raise DataError("basis hints must be finite and nonzero")

    @classmethod
    def rational(cls) -> "RealBasis":
        return cls(("1",), (1.0,))

    @classmethod
    def of(cls, **symbols: float) -> "RealBasis":
        """``RealBasis.of(b1=math.sqrt(2))`` builds ``{1, b1}``."""
        return cls(("1", *symbols), (1.0, *symbols.values()))

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def zero(self) -> "FieldElement":
        return FieldElement(self, (Fraction(0),) * len(self))

    def const(self, value) -> "FieldElement":
        coords = [Fraction(0)] * len(self)
        coords[0] = as_rational(value)
        return FieldElement(self, tuple(coords))

    def symbol(self, label: str, coeff=1) -> "FieldElement":
        coords = [Fraction(0)] * len(self)
        coords[self.index(label)] = as_rational(coeff)
        return FieldElement(self, tuple(coords))

    def element(self, coords: Iterable) -> "FieldElement":
        return FieldElement(self, tuple(as_rational(c) for c in coords))

    def combo(self, const=0, **terms) -> "FieldElement":
        """``basis.combo(1, b1=2)`` is ``1 + 2*b1``."""
        coords = [Fraction(0)] * len(self)
        coords[0] = as_rational(const)
        for label, c in terms.items():
            coords[self.index(label)] += as_rational(c)
        return FieldElement(self, tuple(coords))

    def extended(self, label: str, hint: float) -> "RealBasis":
        if label in self.labels:
            return self
        return RealBasis(self.labels + (label,), self.hints + (hint,))

    def to_json(self) -> dict:
        return {"basis": list(self.labels), "hints": list(self.hints)}

    @classmethod
    def from_json(cls, data: dict) -> "RealBasis":
        return cls(tuple(data["basis"]), tuple(data["hints"]))


class FieldElement:
    """Immutable rational combination of basis reals."""

    __slots__ = ("basis", "coords", "_hash")

    def __init__(self, basis: RealBasis, coords: Sequence[Fraction]):
        coords = tuple(coords)
        if len(coords) != len(basis):
            raise DataError(
                f"expected {len(basis)} coordinates, got {len(coords)}")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.basis != self.basis:
                raise BasisMismatch(
                    f"bases differ: {self.basis.labels} vs {other.basis.labels}")
            return other
        return self.basis.const(other)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return FieldElement(self.basis, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return FieldElement(self.basis, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElement(self.basis, tuple(-a for a in self.coords))

    def __pos__(self):
        return self

    def scale(self, factor) -> "FieldElement":
        f = as_rational(factor)
        return FieldElement(self.basis, tuple(a * f for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return fe_mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, FieldElement):
            if other.basis != self.basis:
                raise BasisMismatch("bases differ")
            if not other.is_rational():
                raise UnrepresentableProduct("division by an irrational element")
            other = other.coords[0]
        d = as_rational(other)
        if d == 0:
            raise ZeroDivisionError("division by zero")
        return self.scale(1 / d)

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element has irrational coordinates")
        return self.coords[0]

    def __float__(self) -> float:
        return math.fsum(float(c) * h for c, h in zip(self.coords, self.basis.hints))

    def magnitude_scale(self) -> float:
        return math.fsum(abs(float(c) * h) for c, h in zip(self.coords, self.basis.hints))

    def sign(self) -> int:
        """Sign of the real value, certified by exact zero test on near-ties."""
        if self.is_rational():
            c = self.coords[0]
            return (c > 0) - (c < 0)
        value = float(self)
        if abs(value) <= TIE_TOLERANCE * self.magnitude_scale():
            if self.is_zero():
                return 0
            raise AmbiguousComparison(
                f"cannot order {self} against zero from float hints")
        return 1 if value > 0 else -1

    # -- comparisons (exact equality, hint-certified ordering) --------------
    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.basis == other.basis and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.basis.labels, self.coords))
            object.__setattr__(self, "_hash", h)
        return h

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    # -- display and serialization -----------------------------------------
    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        parts = []
        for c, label in zip(self.coords, self.basis.labels):
            if c == 0:
                continue
            if label == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(label)
            elif c == -1:
                parts.append(f"-{label}")
            else:
                parts.append(f"{c}*{label}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")

    def coords_json(self) -> list[list[str]]:
        return [[str(c.numerator), str(c.denominator)] for c in self.coords]

    def to_json(self) -> dict:
        return {**self.basis.to_json(), "coords": self.coords_json()}

    @classmethod
    def from_json(cls, data: dict, basis: RealBasis | None = None) -> "FieldElement":
        if basis is None:
            basis = RealBasis.from_json(data)
        return cls(basis, tuple(_parse_coord(c) for c in data["coords"]))


def _parse_coord(c) -> Fraction:
    if isinstance(c, (list, tuple)):
        if len(c) != 2:
            raise DataError(f"coordinate must be [p, q], got {c!r}")
        q = int(c[1])
        if q <= 0:
            raise DataError("coordinate denominators must be positive")
        return Fraction(int(c[0]), q)
    if isinstance(c, float):
        raise DataError("float coordinates are not exact")
    return Fraction(c)


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """Product, available only when one factor is rational."""
    if a.basis != b.basis:
        raise BasisMismatch("bases differ")
    if a.is_rational():
        return b.scale(a.coords[0])
    if b.is_rational():
        return a.scale(b.coords[0])
    raise UnrepresentableProduct(f"({a})*({b}) leaves the rational span")


def fe_arith(a: FieldElement, b, op: str) -> FieldElement:
    """Dispatch helper: ``op`` in {add, sub, scale, negate}."""
    if op == "add":
        return a + a._coerce(b)
    if op == "sub":
        return a - a._coerce(b)
    if op == "scale":
        return a.scale(b)
    if op == "negate":
        return -a
    raise ValueError(f"unknown op {op!r}")


def common_basis(values: Iterable[FieldElement]) -> RealBasis:
    bases = {v.basis for v in values}
    if len(bases) != 1:
        raise BasisMismatch("elements do not share one basis")
    return bases.pop()


# -- linear algebra over Q --------------------------------------------------

def rank_over_q(vectors: Sequence[Sequence]) -> int:
    """Rank of a list of rational row vectors by exact Gaussian elimination."""
    rows = [[as_rational(x) for x in v] for v in vectors]
    if not rows:
        raise EmptyInput("rank of an empty list")
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise DataError("all vectors must have the same dimension")
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            f = rows[i][col]
            if f:
                f = f / p
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def integrally_independent(u: FieldElement, v: FieldElement) -> bool:
    """True iff no nonzero integer pair (p, q) gives p*u + q*v == 0."""
    if u.basis != v.basis:
        raise BasisMismatch("bases differ")
    return rank_over_q([u.coords, v.coords]) == 2


def lengths_rank(values: Sequence[FieldElement]) -> int:
    return rank_over_q([v.coords for v in values])


# -- continued fractions ------------------------------------------------------

def _exact_convergents(x: Fraction, count: int) -> list[tuple[int, int]]:
    out = []
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    while len(out) < count:
        a = math.floor(x)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if h > 0:
            out.append((h, k))
        frac = x - a
        if frac == 0:
            break
        x = 1 / frac
    return out


def _float_convergents(x: float, count: int) -> list[tuple[int, int]]:
    out = []
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    for _ in range(CF_MAX_COUNT + 1):
        a = math.floor(x)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if h > 0:
            out.append((h, k))
            if len(out) >= count:
                break
        frac = x - a
        if frac < CF_GUARD:
            break
        x = 1.0 / frac
    return out


def continued_fraction_convergents(x, count: int) -> list[tuple[int, int]]:
    """First ``count`` convergents ``(n, m)`` of ``x > 0`` with ``n >= 1``.

    The leading ``0/1`` convergent of numbers below one is skipped.  Exact
    rationals terminate early; irrational field elements and floats use the
    float value with a ``1e-12`` guard and at most 40 terms.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if isinstance(x, FieldElement):
        if x.sign() <= 0:
            raise NonPositiveInput(f"x must be positive, got {x}")
        if x.is_rational():
            return _exact_convergents(x.coords[0], count)
        return _float_convergents(float(x), min(count, CF_MAX_COUNT))
    if isinstance(x, (int, Fraction)):
        if x <= 0:
            raise NonPositiveInput(f"x must be positive, got {x}")
        return _exact_convergents(Fraction(x), count)
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise NonPositiveInput(f"x must be positive, got {x}")
    return _float_convergents(x, min(count, CF_MAX_COUNT))
