"""Rational to integer bases by rounding every element both ways."""

from fractions import Fraction
from math import ceil, floor
from typing import Optional, Sequence, Tuple

from ..arith import floor_ceil, format_rational, parse_rational
from ..errors import InvalidParameterError
from ..sumsets import ElementSet, k_fold_sumset
from .base_construction import BaseConstruction


def round_to_integer_basis(basis: ElementSet, k: int) -> ElementSet:
    """
    Replace every element by its floor and its ceiling.

    Any integer sum of k rationals from the basis is also a sum of k of
    these integers, so the result is an integer k-basis of kB ∩ Z with at
    most 2|B| elements.

    Args:
        basis: Rational basis B
        k: Order of the sums to preserve

    Returns:
        The integer set {floor(b)} ∪ {ceil(b)}
    """
    if k < 1:
        raise InvalidParameterError(f"k must be at least 1, got {k}")
    values = []
    for b in basis:
        values.extend(floor_ceil(b))
    return ElementSet(values)


def rounded_certificate(parts: Sequence, target) -> Tuple[int, ...]:
    """
    Turn a rational certificate of an integer target into an integer one.

    Start from the floors of all parts; their sum falls short of the target
    by exactly the sum of the fractional parts, an integer smaller than the
    number of non-integral parts. Raising that many parts to their ceilings
    closes the gap.

    Args:
        parts: Rationals summing to target
        target: An integer

    Returns:
        One floor or ceiling per part, summing to target

    Raises:
        InvalidParameterError: If target is not integral or the parts do not
            sum to it
    """
    parts = [parse_rational(p) for p in parts]
    target = parse_rational(target)
    if target.denominator != 1:
        raise InvalidParameterError(f"Target {format_rational(target)} is not an integer")
    if sum(parts, Fraction(0)) != target:
        raise InvalidParameterError(f"Parts do not sum to {format_rational(target)}")

    rounded = [floor(p) for p in parts]
    deficit = int(target) - sum(rounded)
    for index, p in enumerate(parts):
        if deficit == 0:
            break
        if p.denominator != 1:
            rounded[index] = ceil(p)
            deficit -= 1
    return tuple(rounded)


def integer_basis_lower_bound(n: int, k: int) -> float:
    """
    2n - k^4 n^(1 - 1/k): some rational basis of size n needs about this many
    integers, so doubling is the right order. Negative (vacuous) for small n.
    """
    if n < 1 or k < 1:
        raise InvalidParameterError(f"Need n >= 1 and k >= 1, got n={n}, k={k}")
    return 2 * n - k ** 4 * n ** (1 - 1 / k)


class RoundingConstruction(BaseConstruction):
    name = "round"

    def build(self, basis: ElementSet, k: int, targets: Optional[ElementSet] = None) -> ElementSet:
        return round_to_integer_basis(basis, k)

    def targets(self, basis: ElementSet, k: int) -> ElementSet:
        return k_fold_sumset(basis, k).integers()

    def bound(self, n: int, k: int) -> float:
        return float(2 * n)

    def lower_bound(self, n: int, k: int) -> float:
        return integer_basis_lower_bound(n, k)
