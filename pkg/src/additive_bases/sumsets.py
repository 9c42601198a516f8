"""
Finite sets of scalars, k-fold sumsets and sum certificates.

Sums always allow repetition: kB is every b_1 + ... + b_k with each b_i in B.
"""

from bisect import bisect_left
from fractions import Fraction
from math import comb
from typing import Any, Dict, Iterable, Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator
from pydantic_core import core_schema

from .arith import Scalar, format_rational, parse_rational
from .errors import InputFormatError, InvalidParameterError


class ElementSet:
    """Immutable, strictly increasing tuple of fractions."""

    __slots__ = ("_elements",)

    def __init__(self, elements: Iterable[Any] = ()):
        self._elements: Tuple[Fraction, ...] = tuple(sorted({parse_rational(e) for e in elements}))

    @classmethod
    def coerce(cls, value: Any) -> "ElementSet":
        """Accept an ElementSet or any iterable of scalars (e.g. parsed JSON)."""
        if isinstance(value, ElementSet):
            return value
        if isinstance(value, (str, bytes)) or not isinstance(value, Iterable):
            raise InputFormatError(f"Expected an array of scalars, got {value!r}")
        return cls(value)

    @classmethod
    def __get_pydantic_core_schema__(cls, source_type, handler):
        return core_schema.no_info_plain_validator_function(
            cls.coerce,
            serialization=core_schema.plain_serializer_function_ser_schema(lambda s: s.to_json()),
        )

    @property
    def elements(self) -> Tuple[Fraction, ...]:
        return self._elements

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._elements)

    def __len__(self) -> int:
        return len(self._elements)

    def __bool__(self) -> bool:
        return bool(self._elements)

    def __contains__(self, value: Any) -> bool:
        try:
            value = parse_rational(value)
        except InputFormatError:
            return False
        index = bisect_left(self._elements, value)
        return index < len(self._elements) and self._elements[index] == value

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ElementSet):
            return self._elements == other._elements
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._elements)

    def __repr__(self) -> str:
        return f"ElementSet([{', '.join(format_rational(e) for e in self._elements)}])"

    def min(self) -> Fraction:
        return self._elements[0]

    def max(self) -> Fraction:
        return self._elements[-1]

    def union(self, *others: Iterable[Any]) -> "ElementSet":
        values = list(self._elements)
        for other in others:
            values.extend(other)
        return ElementSet(values)

    def issubset(self, other: "ElementSet") -> bool:
        return all(e in other for e in self._elements)

    def scale(self, factor: Any) -> "ElementSet":
        factor = parse_rational(factor)
        return ElementSet(factor * e for e in self._elements)

    def shift(self, offset: Any) -> "ElementSet":
        offset = parse_rational(offset)
        return ElementSet(e + offset for e in self._elements)

    def integers(self) -> "ElementSet":
        return ElementSet(e for e in self._elements if e.denominator == 1)

    def naturals(self) -> "ElementSet":
        return ElementSet(e for e in self._elements if e.denominator == 1 and e >= 0)

    def nonnegative(self) -> "ElementSet":
        return ElementSet(e for e in self._elements if e >= 0)

    def to_json(self) -> List[str]:
        return [format_rational(e) for e in self._elements]


class SumCertificate(BaseModel):
    """Explicit witness target = parts[0] + ... + parts[k-1]."""

    model_config = ConfigDict(frozen=True)

    target: Scalar
    parts: Tuple[Scalar, ...]

    @model_validator(mode="after")
    def _parts_sum_to_target(self):
        if not self.parts:
            raise ValueError("A sum certificate needs at least one part")
        if sum(self.parts, Fraction(0)) != self.target:
            raise ValueError(
                f"Parts {[format_rational(p) for p in self.parts]} do not sum to {format_rational(self.target)}"
            )
        return self

    def is_valid_for(self, basis: ElementSet, k: int) -> bool:
        """Check that the certificate has k parts, all drawn from `basis`."""
        return len(self.parts) == k and all(p in basis for p in self.parts)


def _check_order(k: int) -> None:
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise InvalidParameterError(f"Sumset order must be a positive integer, got {k!r}")


def k_fold_sumset(basis: ElementSet, k: int) -> ElementSet:
    """
    Materialize kB by k-1 successive pairwise merges.

    Args:
        basis: The set B
        k: Number of summands, at least 1

    Returns:
        The sorted, deduplicated set of all sums of k elements of B

    Raises:
        InvalidParameterError: If k < 1
    """
    _check_order(k)
    values = set(basis)
    for _ in range(k - 1):
        values = {s + b for s in values for b in basis}
    return ElementSet(values)


def signed_closure(basis: ElementSet) -> ElementSet:
    """Return B together with -B."""
    return ElementSet(list(basis) + [-b for b in basis])


def sumset_size_bound(n: int, k: int) -> int:
    """Number of k-multisets of an n-set, an upper bound on |kB|."""
    return comb(n + k - 1, k)


def k_sum_membership(target: Any, basis: ElementSet, k: int) -> Optional[SumCertificate]:
    """
    Decide whether target lies in kB without materializing kB.

    Depth-first search over non-decreasing part sequences; a branch is cut
    as soon as the remaining sum cannot be reached by the remaining parts,
    each of which lies between the current element and max(B). The first
    hit is the lexicographically smallest certificate.

    Args:
        target: The scalar to represent
        basis: The set B
        k: Number of summands, at least 1

    Returns:
        A certificate with non-decreasing parts, or None if target is not in kB
    """
    _check_order(k)
    target = parse_rational(target)
    values = basis.elements
    if not values:
        return None
    largest = values[-1]

    def search(start: int, count: int, remaining: Fraction) -> Optional[List[Fraction]]:
        if count == 1:
            index = bisect_left(values, remaining, lo=start)
            if index < len(values) and values[index] == remaining:
                return [remaining]
            return None
        for i in range(start, len(values)):
            value = values[i]
            if count * value > remaining:
                break
            if value + (count - 1) * largest < remaining:
                continue
            rest = search(i, count - 1, remaining - value)
            if rest is not None:
                return [value] + rest
        return None

    parts = search(0, k, target)
    if parts is None:
        return None
    return SumCertificate(target=target, parts=tuple(parts))


def is_k_basis(
    basis: ElementSet, targets: ElementSet, k: int
) -> Tuple[bool, Dict[Fraction, Optional[SumCertificate]]]:
    """
    Check whether every target is a sum of k elements of the basis.

    Args:
        basis: Candidate basis B
        targets: The set A to cover
        k: Number of summands

    Returns:
        Tuple of (True iff A is contained in kB, certificate or None per target)
    """
    _check_order(k)
    certificates = {a: k_sum_membership(a, basis, k) for a in targets}
    return all(c is not None for c in certificates.values()), certificates


def failing_elements(certificates: Dict[Fraction, Optional[SumCertificate]]) -> List[Fraction]:
    return sorted(a for a, c in certificates.items() if c is None)
