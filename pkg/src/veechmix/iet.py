"""Interval exchange transformations and Veech's sigma combinatorics.

Permutations use 1-indexed semantics: ``images[j - 1] == pi(j)``.  The
auxiliary permutation ``sigma`` lives on ``{0, ..., m}`` and is stored
0-indexed as is.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DataError, InvalidPermutation, OutOfDomain
from .exactnum import FieldElement, RealBasis, common_basis, lengths_rank


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise InvalidPermutation(f"{list(images)} is not a bijection of 1..{len(images)}")

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))

    @property
    def m(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.m
        for j, pj in enumerate(self.images, start=1):
            inv[pj - 1] = j
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.m + 1))

    def __str__(self):
        return ",".join(map(str, self.images))


def is_irreducible(perm: Permutation) -> bool:
    """No proper prefix ``{1..k}`` (k < m) is mapped onto itself."""
    top = 0
    for k, pk in enumerate(perm.images[:-1], start=1):
        top = max(top, pk)
        if top == k:
            return False
    return True


def sigma_pi(perm: Permutation) -> tuple[int, ...]:
    """``sigma(i) = pi^-1(pi(i) + 1) - 1`` on ``{0..m}`` with pi(0)=0, pi(m+1)=m+1."""
    m = perm.m
    ext = (0, *perm.images, m + 1)
    inv = [0] * (m + 2)
    for i, v in enumerate(ext):
        inv[v] = i
    return tuple(inv[ext[i] + 1] - 1 for i in range(m + 1))


def invariant_sets(sigma: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycles of ``sigma`` as sorted tuples, listed by ascending minimum."""
    n = len(sigma)
    if sorted(sigma) != list(range(n)):
        raise InvalidPermutation("sigma is not a bijection of 0..m")
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = []
        i = start
        while not seen[i]:
            seen[i] = True
            cyc.append(i)
            i = sigma[i]
        cycles.append(tuple(sorted(cyc)))
    return cycles


def b_vectors(cycles: Sequence[Sequence[int]], m: int) -> list[tuple[int, ...]]:
    """``b_S[i] = chi_S(i - 1) - chi_S(i)`` for ``1 <= i <= m``."""
    out = []
    for cyc in cycles:
        s = set(cyc)
        out.append(tuple(int(i - 1 in s) - int(i in s) for i in range(1, m + 1)))
    return out


@dataclass(frozen=True)
class SigmaDecomposition:
    sigma: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...]
    b_vectors: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, perm: Permutation) -> "SigmaDecomposition":
        sigma = sigma_pi(perm)
        cycles = invariant_sets(sigma)
        return cls(sigma, tuple(cycles), tuple(b_vectors(cycles, perm.m)))

    @property
    def r(self) -> int:
        return len(self.cycles)

    def to_json(self) -> dict:
        return {
            "sigma": list(self.sigma),
            "cycles": [list(c) for c in self.cycles],
            "b_vectors": [list(b) for b in self.b_vectors],
        }


class IET:
    """The map ``T_(lambda, pi)`` on ``[0, |lambda|)``."""

    def __init__(self, lengths: Sequence[FieldElement], perm: Permutation):
        lengths = tuple(lengths)
        if len(lengths) != perm.m:
            raise DataError(f"{len(lengths)} lengths for a permutation on {perm.m} letters")
        if not lengths:
            raise DataError("an IET needs at least one interval")
        self.basis = common_basis(lengths)
        for lam in lengths:
            if lam.sign() <= 0:
                raise DataError(f"lengths must be positive, got {lam}")
        self.lengths = lengths
        self.perm = perm
        zero = self.basis.zero()
        # left endpoints of the domain intervals, in domain order
        self._left = [zero]
        for lam in lengths[:-1]:
            self._left.append(self._left[-1] + lam)
        self.total = self._left[-1] + lengths[-1]
        # left endpoint of the image of interval j
        order = perm.inverse().images
        image_left = [zero] * perm.m
        acc = zero
        for j in order:
            image_left[j - 1] = acc
            acc = acc + lengths[j - 1]
        self._image_left = image_left
        self.translations = tuple(image_left[j] - self._left[j] for j in range(perm.m))
        self._left_f = [float(x) for x in self._left]
        self._image_left_f = sorted((float(x), j) for j, x in enumerate(image_left))

    @property
    def m(self) -> int:
        return self.perm.m

    def __repr__(self):
        return f"IET(perm={self.perm}, lengths=[{', '.join(map(str, self.lengths))}])"

    def __eq__(self, other):
        return (isinstance(other, IET) and self.perm == other.perm
                and self.lengths == other.lengths)

    def __hash__(self):
        return hash((self.perm, self.lengths))

    @property
    def left_endpoints(self) -> tuple[FieldElement, ...]:
        return tuple(self._left)

    def _locate(self, x: FieldElement, lefts, lefts_f) -> int:
        # float bisection then exact correction around the guess
        j = max(bisect.bisect_right(lefts_f, float(x)) - 1, 0)
        while j > 0 and x < lefts[j]:
            j -= 1
        while j + 1 < len(lefts) and x >= lefts[j + 1]:
            j += 1
        return j

    def _check_domain(self, x: FieldElement):
        if x.basis != self.basis:
            x = self._lift(x)
        if x.sign() < 0 or x >= self.total:
            raise OutOfDomain(f"{x} is outside [0, {self.total})")
        return x

    def _lift(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.is_rational():
                return self.basis.const(x.coords[0])
            raise DataError("point and lengths use different bases")
        return self.basis.const(x)

    def interval_index(self, x) -> int:
        """0-based index of the domain interval containing ``x``."""
        x = self._check_domain(self._lift(x) if not isinstance(x, FieldElement) else x)
        return self._locate(x, self._left, self._left_f)

    def __call__(self, x) -> FieldElement:
        return apply(self, x)

    def inverse(self) -> "IET":
        inv = self.perm.inverse()
        order = inv.images
        return IET(tuple(self.lengths[j - 1] for j in order), inv)

    def to_json(self) -> dict:
        return {
            "perm": list(self.perm.images),
            **self.basis.to_json(),
            "lengths": [lam.coords_json() for lam in self.lengths],
        }

    @classmethod
    def from_json(cls, data: dict) -> "IET":
        perm = Permutation(tuple(data["perm"]))
        raw = data["lengths"]
        if "basis" in data:
            basis = RealBasis.from_json(data)
            lengths = [FieldElement.from_json({"coords": c}, basis) for c in raw]
        else:
            lengths = [FieldElement.from_json(c) for c in raw]
        return cls(lengths, perm)

    def float_data(self):
        """Left endpoints, translations and total as floats (for fast paths)."""
        return ([float(x) for x in self._left],
                [float(w) for w in self.translations],
                float(self.total))


def apply(iet: IET, x) -> FieldElement:
    """``T(x) = x + w_j`` for the interval ``I_j`` containing ``x``."""
    if not isinstance(x, FieldElement):
        x = iet.basis.const(x)
    x = iet._check_domain(x)
    j = iet._locate(x, iet._left, iet._left_f)
    return x + iet.translations[j]


def apply_inverse(iet: IET, y) -> FieldElement:
    if not isinstance(y, FieldElement):
        y = iet.basis.const(y)
    y = iet._check_domain(y)
    order = [j for _, j in iet._image_left_f]
    lefts = [iet._image_left[j] for j in order]
    k = iet._locate(y, lefts, [float(v) for v in lefts])
    return y - iet.translations[order[k]]


def orbit(iet: IET, x, n: int) -> list[FieldElement]:
    """``[x, T(x), ..., T^n(x)]`` in exact arithmetic."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if not isinstance(x, FieldElement):
        x = iet.basis.const(x)
    out = [iet._check_domain(x)]
    for _ in range(n):
        out.append(apply(iet, out[-1]))
    return out


def float_orbit(iet: IET, x: float, n: int):
    """Float fast path: returns ``(points, interval_indices)`` arrays of length n."""
    import numpy as np

    left, trans, total = iet.float_data()
    left = np.asarray(left)
    trans = np.asarray(trans)
    pts = np.empty(n)
    idx = np.empty(n, dtype=np.int64)
    x = float(x)
    for k in range(n):
        j = int(np.searchsorted(left, x, side="right")) - 1
        if j < 0:
            j = 0
        pts[k] = x
        idx[k] = j
        x = x + trans[j]
        if x >= total or x < 0.0:
            x = x % total
    return pts, idx


def lengths_rationally_independent(iet: IET) -> bool:
    return lengths_rank(iet.lengths) == iet.m


def rational_iet(lengths: Sequence, perm: Sequence[int] | Permutation) -> IET:
    """Convenience constructor for IETs with rational lengths."""
    basis = RealBasis.rational()
    if not isinstance(perm, Permutation):
        perm = Permutation(tuple(perm))
    return IET([basis.const(Fraction(x)) for x in lengths], perm)
