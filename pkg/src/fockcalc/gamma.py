"""Canonical finite subsets of the nonnegative integers and their weights.

The chaos expansion machinery in this package indexes everything by finite
subsets of {0, 1, 2, ...}.  A subset sigma carries the weight

    weight(sigma) = product of (k + 1) over k in sigma,   weight(empty) = 1,

which generates the whole chain of weighted norms used elsewhere.  This module
owns the subset encoding, deterministic enumeration of all subsets below a
bound, and the weight-sum evaluations (truncated, and certified upper bounds
for the untruncated series).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from .errors import CapExceededError, DivergentSeriesError, NegativeIndexError, WeightOverflowError

#: Hard cap on exhaustive subset enumeration (2**cap subsets must stay desk-scale).
GAMMA_HARD_CAP = 24

#: Number of leading terms summed before switching to the integral tail bound.
SERIES_CUTOFF = 10**6


class SubsetIndex:
    """An immutable finite subset of the nonnegative integers.

    Elements are stored as a strictly increasing tuple; a bit-mask (bit k set
    iff k is a member) backs the set operations.  Two values are equal iff
    their element tuples are identical.
    """

    __slots__ = ("elements", "_mask", "_hash", "_weight")

    elements: tuple[int, ...]

    def __init__(self, elements: Iterable[int]):
        elems = tuple(sorted(set(elements)))
        if elems and elems[0] < 0:
            raise NegativeIndexError(f"subset elements must be >= 0, got {elems[0]}")
        object.__setattr__(self, "elements", elems)
        mask = 0
        for k in elems:
            mask |= 1 << k
        object.__setattr__(self, "_mask", mask)
        object.__setattr__(self, "_hash", hash(elems))
        object.__setattr__(self, "_weight", None)

    @classmethod
    def _from_sorted(cls, elems: tuple[int, ...], mask: int) -> "SubsetIndex":
        # Fast path for internally produced, already-canonical tuples.
        self = object.__new__(cls)
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "_mask", mask)
        object.__setattr__(self, "_hash", hash(elems))
        object.__setattr__(self, "_weight", None)
        return self

    @classmethod
    def from_mask(cls, mask: int) -> "SubsetIndex":
        """Build the subset whose members are the set bits of ``mask``."""
        if mask < 0:
            raise NegativeIndexError("bit-mask must be nonnegative")
        elems = []
        k = 0
        m = mask
        while m:
            if m & 1:
                elems.append(k)
            m >>= 1
            k += 1
        return cls._from_sorted(tuple(elems), mask)

    @property
    def mask(self) -> int:
        return self._mask

    def __setattr__(self, name, value):
        raise AttributeError("SubsetIndex is immutable")

    def __contains__(self, k: int) -> bool:
        return k >= 0 and (self._mask >> k) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubsetIndex):
            return NotImplemented
        return self.elements == other.elements

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"SubsetIndex({list(self.elements)})"

    @property
    def max_element(self) -> int:
        """Largest member, or -1 for the empty set.

        The -1 convention stands in for "minus infinity": every conditioning
        level k >= -1 keeps the empty set, which is exactly what the
        conditional-expectation truncation requires.
        """
        return self.elements[-1] if self.elements else -1

    def with_element(self, k: int) -> "SubsetIndex":
        """The union sigma | {k}; returns self when k is already a member."""
        if k < 0:
            raise NegativeIndexError(f"subset elements must be >= 0, got {k}")
        if k in self:
            return self
        return SubsetIndex.from_mask(self._mask | (1 << k))

    def without_element(self, k: int) -> "SubsetIndex":
        """The difference sigma \\ {k}; returns self when k is not a member."""
        if k not in self:
            return self
        return SubsetIndex.from_mask(self._mask & ~(1 << k))

    def symmetric_difference(self, other: "SubsetIndex") -> "SubsetIndex":
        return SubsetIndex.from_mask(self._mask ^ other._mask)


#: The empty subset (weight 1; the index of the constant chaos term).
EMPTY_SET = SubsetIndex(())


def canonical_subset(indices: Iterable[int]) -> SubsetIndex:
    """Sort and deduplicate ``indices`` into a canonical subset.

    Raises NegativeIndexError on any entry below zero.
    """
    return SubsetIndex(indices)


@dataclass(frozen=True)
class GammaCursor:
    """Bounds for exhaustive subset enumeration.

    ``max_index`` is an exclusive upper bound on the elements (subsets of
    {0, ..., max_index - 1}); ``max_cardinality`` optionally caps the subset
    size.  Enumeration order is ascending by bit-mask value, so the empty set
    comes first, then {0}, {1}, {0,1}, {2}, ...
    """

    max_index: int
    max_cardinality: Optional[int] = None

    def __post_init__(self):
        if self.max_index < 0:
            raise ValueError(f"max_index must be >= 0, got {self.max_index}")
        if self.max_index > GAMMA_HARD_CAP:
            raise CapExceededError(
                f"max_index {self.max_index} exceeds the hard cap {GAMMA_HARD_CAP}"
            )
        if self.max_cardinality is not None and self.max_cardinality < 0:
            raise ValueError("max_cardinality must be >= 0 when given")


def enumerate_gamma(cursor: GammaCursor) -> Iterator[SubsetIndex]:
    """Yield every subset within the cursor bounds exactly once.

    Order is ascending bit-mask value.  Without a cardinality cap the count is
    2**max_index.
    """
    cap = cursor.max_cardinality
    for mask in range(1 << cursor.max_index):
        if cap is not None and mask.bit_count() > cap:
            continue
        yield SubsetIndex.from_mask(mask)


def lambda_weight(sigma: SubsetIndex) -> float:
    """Weight of a subset: the product of (k + 1) over its members.

    The empty set weighs 1; every weight is >= 1.  Computed in floating point;
    raises WeightOverflowError instead of returning infinity.  The value is
    memoized on the subset (subsets are immutable and shared across maps).
    """
    cached = sigma._weight
    if cached is not None:
        return cached
    w = 1.0
    for k in sigma.elements:
        w *= float(k + 1)
    if math.isinf(w):
        raise WeightOverflowError(f"weight of {sigma!r} overflows a double")
    object.__setattr__(sigma, "_weight", w)
    return w


def gamma_weight_sum(p: float, max_index: int) -> float:
    """Sum of weight(sigma)**(-p) over all subsets of {0, ..., max_index - 1}.

    Enumerates all 2**max_index terms (one per bit-mask) and sums them; the
    factorized closed form prod_{k=1..max_index} (1 + k**-p) agrees to within
    1e-12 relative and serves as an independent cross-check in the tests.
    """
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    if max_index < 0:
        raise ValueError(f"max_index must be >= 0, got {max_index}")
    if max_index > GAMMA_HARD_CAP:
        raise CapExceededError(
            f"max_index {max_index} exceeds the hard cap {GAMMA_HARD_CAP}"
        )
    terms = np.empty(1 << max_index)
    terms[0] = 1.0
    width = 1
    for k in range(max_index):
        # Masks with bit k set mirror the masks below them, scaled by the
        # new element's weight factor.
        terms[width : 2 * width] = terms[:width] * float(k + 1) ** (-p)
        width *= 2
    return float(np.sum(terms))


def weight_sum_bound(p: float, cutoff: int = SERIES_CUTOFF) -> float:
    """Upper bound exp(sum_{k>=1} k**-p) for the untruncated weight sum.

    The exponent is evaluated as the partial sum of the first ``cutoff`` terms
    plus the integral tail estimate cutoff**(1-p)/(p-1), so the result is a
    certified upper bound.  Requires p > 1; below that the series diverges.
    """
    if p <= 1:
        raise DivergentSeriesError(f"sum of k**-p diverges for p = {p}")
    k = np.arange(cutoff, 0, -1, dtype=np.float64)
    partial = float(np.sum(k ** (-p)))
    tail = cutoff ** (1.0 - p) / (p - 1.0)
    return math.exp(partial + tail)


def gamma_weight_sum_limit(p: float, cutoff: int = SERIES_CUTOFF) -> float:
    """Certified upper evaluation of the full-lattice sum of weight**(-p).

    Over all finite subsets the sum factorizes into prod_{m>=1} (1 + m**-p);
    this evaluates the log of the first ``cutoff`` factors exactly and covers
    the rest with the integral tail bound, so the result dominates the true
    series while staying far sharper than ``weight_sum_bound``.
    """
    if p <= 1:
        raise DivergentSeriesError(f"the full weight sum diverges for p = {p}")
    m = np.arange(cutoff, 0, -1, dtype=np.float64)
    partial = float(np.sum(np.log1p(m ** (-p))))
    tail = cutoff ** (1.0 - p) / (p - 1.0)
    return math.exp(partial + tail)
