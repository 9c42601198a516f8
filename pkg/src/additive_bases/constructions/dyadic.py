"""
Integer 2-bases to natural 2-bases through dyadic index blocks.

Every element of B is ±x_i for distinct magnitudes x_1 < ... < x_n. A target
x_r - x_t (r > t) splits at the highest binary digit where r and t differ,
and both halves are differences x_r - x_s inside one dyadic block, so the
new basis only needs O(n log n) such differences.
"""

from math import log2
from typing import List, Optional, Sequence, Tuple

from ..arith import format_rational
from ..errors import InvalidParameterError
from ..sumsets import ElementSet, k_fold_sumset
from ..utils.log import get_logger
from .base_construction import BaseConstruction


logger = get_logger(__name__)


def magnitudes(basis: ElementSet) -> List:
    return sorted({abs(b) for b in basis})


def dyadic_two_basis(basis: ElementSet) -> ElementSet:
    """
    Build a natural 2-basis for (B+B) ∩ N from an integer set B.

    Args:
        basis: Nonempty set of integers

    Returns:
        (B ∩ N) together with the level-j differences x_r - x_s for
        s = 2^j floor(r / 2^j) and for r = 2^j ceil(s / 2^j)

    Raises:
        InvalidParameterError: If B is empty or has a non-integer element
    """
    if not basis:
        raise InvalidParameterError("Dyadic construction needs a nonempty basis")
    fractional = [b for b in basis if b.denominator != 1]
    if fractional:
        raise InvalidParameterError(f"Element {format_rational(fractional[0])} is not an integer")

    x = magnitudes(basis)
    n = len(x)
    values = set(basis.naturals())
    # 1-based indices, as in x_1 < ... < x_n
    for j in range(n.bit_length()):
        step = 1 << j
        for r in range(1, n + 1):
            s = step * (r // step)
            if s >= 1:
                values.add(x[r - 1] - x[s - 1])
        for s in range(1, n + 1):
            r = step * -(-s // step)
            if r <= n:
                values.add(x[r - 1] - x[s - 1])
        logger.debug("Dyadic level", level=j, size=len(values))
    return ElementSet(values)


def dyadic_split(x: Sequence, r: int, t: int) -> Tuple[int, object, object]:
    """
    Write x_r - x_t as (x_r - x_s) + (x_s - x_t) with both terms in the basis.

    s keeps the binary digits of r from the highest digit where r and t
    differ upwards and clears the rest.

    Args:
        x: Increasing magnitudes x_1 < ... < x_n, given 0-based
        r: 1-based index of the larger element
        t: 1-based index of the smaller element, t < r

    Returns:
        Tuple of (s, x_r - x_s, x_s - x_t)
    """
    if not 1 <= t < r <= len(x):
        raise InvalidParameterError(f"Need 1 <= t < r <= {len(x)}, got r={r}, t={t}")
    j = (r ^ t).bit_length() - 1
    s = (r >> j) << j
    return s, x[r - 1] - x[s - 1], x[s - 1] - x[t - 1]


def dyadic_size_bound(n: int) -> int:
    """n + 2n(1 + floor(log2 n)), the count the construction never exceeds."""
    return n + 2 * n * n.bit_length()


class DyadicConstruction(BaseConstruction):
    name = "dyadic"

    def build(self, basis: ElementSet, k: int = 2, targets: Optional[ElementSet] = None) -> ElementSet:
        self._check_order(k)
        return dyadic_two_basis(basis)

    def targets(self, basis: ElementSet, k: int = 2) -> ElementSet:
        self._check_order(k)
        return k_fold_sumset(basis, 2).naturals()

    def bound(self, n: int, k: int = 2) -> float:
        return 3 * n + 2 * n * log2(n) if n >= 1 else 0.0

    def size_parameter(self, basis: ElementSet) -> int:
        return len(magnitudes(basis))

    @staticmethod
    def _check_order(k: int) -> None:
        if k != 2:
            raise InvalidParameterError(f"The dyadic construction builds 2-bases, got k={k}")
