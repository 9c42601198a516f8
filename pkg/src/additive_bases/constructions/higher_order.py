"""
Natural k-bases from integer k-bases by separating scales.

Given non-negative B, the construction repeatedly:

1. normalizes so that max(B) = 1,
2. approximates B by an arithmetic progression with step L
   (x_i = y_i L + z_i, tiny z_i, z_1 = z_n),
3. covers every non-negative element of k(B ∪ -B) that is at least L/2 with
   a dyadic quantization of B (levels m with 2^m up to 3k/L),
4. hands the elements below L/2 to the next round, which only has to cover
   k(B' ∪ -B') for the remainders B' = {|z_i|}, a set with fewer elements.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, log2
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from ..arith import Scalar, format_rational, fractional_part, parse_rational
from ..errors import ConstructionError, InvalidParameterError, InvalidWitnessError
from ..sumsets import ElementSet, SumCertificate, is_k_basis, k_fold_sumset, signed_closure
from ..utils.log import get_logger
from .base_construction import BaseConstruction
from .rounding import round_to_integer_basis


logger = get_logger(__name__)


class ApDecomposition(BaseModel):
    """x_i = y_i * L + z_i for the normalized input x."""

    model_config = ConfigDict(frozen=True)

    x: Tuple[Scalar, ...]
    L: Scalar
    y: Tuple[int, ...]
    z: Tuple[Scalar, ...]
    C: int

    def check_invariants(self) -> None:
        """
        Raise ConstructionError unless every decomposition invariant holds.

        Checks the exact identity, |z_i| <= L/C, z_1 = z_n and L >= C^(-n-1).
        """
        n = len(self.x)
        if not (len(self.y) == len(self.z) == n):
            raise ConstructionError("Decomposition vectors have mismatched lengths")
        for xi, yi, zi in zip(self.x, self.y, self.z):
            if xi != yi * self.L + zi:
                raise ConstructionError(f"x = {format_rational(xi)} is not y*L + z")
            if abs(zi) > self.L / self.C:
                raise ConstructionError(f"Remainder {format_rational(zi)} exceeds L/C")
        if self.z[0] != self.z[-1]:
            raise ConstructionError("First and last remainders differ")
        if self.L < Fraction(1, self.C ** (n + 1)):
            raise ConstructionError(f"Step {format_rational(self.L)} is below C^(-n-1)")


@dataclass(frozen=True)
class DyadicCoverSpec:
    """Per-level quantization sets X_0, ..., X_{m_max}."""

    m_max: int
    levels: Tuple[ElementSet, ...]

    def union(self) -> ElementSet:
        return ElementSet().union(*self.levels)


@dataclass(frozen=True)
class HigherOrderStage:
    """One round of the recursion, in the units of the original input."""

    n: int
    k: int
    case: str  # "near-constant", "progression" or "base"
    scale: Fraction
    L: Optional[Fraction]
    m_max: Optional[int]
    added: ElementSet

    @property
    def published_bound(self) -> Optional[float]:
        if self.L is None:
            return None
        return large_scale_published_bound(self.n, self.L, self.k)

    @property
    def published_ratio(self) -> Optional[float]:
        bound = self.published_bound
        return len(self.added) / bound if bound else None


def _check_normalized(x: Sequence[Fraction], allow_single: bool = False) -> Tuple[Fraction, ...]:
    x = tuple(parse_rational(v) for v in x)
    if not x or (len(x) < 2 and not allow_single):
        raise InvalidParameterError(f"Need at least {1 if allow_single else 2} coordinates, got {len(x)}")
    if any(a >= b for a, b in zip(x, x[1:])):
        raise InvalidParameterError("Coordinates must be strictly increasing")
    if x[0] < 0:
        raise InvalidParameterError("Coordinates must be non-negative")
    if x[-1] != 1:
        raise InvalidParameterError(f"Largest coordinate must be 1, got {format_rational(x[-1])}")
    return x


def find_ap_approximation(x: Sequence, C: int) -> ApDecomposition:
    """
    Approximate x by an arithmetic progression through 0 with step L.

    The multipliers λ with λx_1 ≡ λx_n (mod 1) are the multiples of
    α = 1/(1 - x_1). Among λ = 0, α, ..., C^n α two land in the same box
    of the grid of side 1/C on the fractional parts (pigeonhole); their
    difference λ* puts every λ*x_i within 1/C of an integer y_i, and
    L = 1/λ*.

    Args:
        x: Strictly increasing, x_1 >= 0, x_n = 1, x_1 <= 1 - 1/C
        C: Accuracy parameter, at least 2

    Returns:
        A decomposition satisfying all of its invariants

    Raises:
        InvalidParameterError: If a precondition fails
    """
    if isinstance(C, bool) or not isinstance(C, int) or C < 2:
        raise InvalidParameterError(f"C must be an integer >= 2, got {C!r}")
    x = _check_normalized(x)
    if x[0] > 1 - Fraction(1, C):
        raise InvalidParameterError(f"x_1 = {format_rational(x[0])} exceeds 1 - 1/{C}")

    n = len(x)
    alpha = 1 / (1 - x[0])
    seen = {}
    step = None
    for i in range(C ** n + 1):
        lam = i * alpha
        box = tuple(floor(C * fractional_part(lam * xi)) for xi in x)
        if box in seen:
            step = i - seen[box]
            break
        seen[box] = i
    if step is None:
        raise ConstructionError("No box collision among C^n + 1 multipliers")

    lam_star = step * alpha
    L = 1 / lam_star
    y = tuple(round(lam_star * xi) for xi in x)
    z = tuple(xi - yi * L for xi, yi in zip(x, y))
    decomposition = ApDecomposition(x=x, L=L, y=y, z=z, C=C)
    decomposition.check_invariants()
    logger.debug("Found progression", n=n, C=C, L=format_rational(L), multiplier=step)
    return decomposition


def small_scale_reduction(decomposition: ApDecomposition) -> ElementSet:
    """The remainders {|z_i|}; z_1 = z_n leaves at most n - 1 of them."""
    return ElementSet(abs(z) for z in decomposition.z)


def _cover_parameters(x: Sequence, L, k: int) -> Tuple[Tuple[Fraction, ...], Fraction]:
    if isinstance(k, bool) or not isinstance(k, int) or k < 2:
        raise InvalidParameterError(f"k must be an integer >= 2, got {k!r}")
    L = parse_rational(L)
    if L <= 0 or L > 1:
        raise InvalidParameterError(f"Step L must lie in (0, 1], got {format_rational(L)}")
    return _check_normalized(x, allow_single=True), L


def dyadic_level_count(L, k: int) -> int:
    """Smallest m >= 0 with 2^m * L >= 3k, i.e. ceil(log2(3k/L))."""
    L = parse_rational(L)
    m = 0
    while (1 << m) * L < 3 * k:
        m += 1
    return m


def dyadic_cover_levels(x: Sequence, L, k: int) -> DyadicCoverSpec:
    """
    Build the quantization sets X_m for m = 0 .. ceil(log2(3k/L)).

    X_m = {x_i - (floor(2^m x_i) - p) / 2^m : 0 <= p < k}
          ∪ {ceil(2^m x_i) / 2^m - x_i}

    Args:
        x: Strictly increasing non-negative coordinates with x_n = 1
        L: Scale in (0, 1]
        k: Order, at least 2

    Returns:
        The per-level sets; every element is non-negative
    """
    x, L = _cover_parameters(x, L, k)
    m_max = dyadic_level_count(L, k)
    levels = []
    for m in range(m_max + 1):
        scale = 1 << m
        values = []
        for xi in x:
            low = floor(scale * xi)
            values.extend(xi - Fraction(low - p, scale) for p in range(k))
            values.append(Fraction(ceil(scale * xi), scale) - xi)
        levels.append(ElementSet(v for v in values if v >= 0))
    return DyadicCoverSpec(m_max=m_max, levels=tuple(levels))


def large_scale_cover(x: Sequence, L, k: int) -> ElementSet:
    """
    Cover every element of k(B ∪ -B) that is at least L/2, B = {x_i}.

    Returns:
        X with |X| <= n(k+1)(ceil(log2(3k/L)) + 1)
    """
    return dyadic_cover_levels(x, L, k).union()


def large_scale_size_bound(n: int, L, k: int) -> int:
    return n * (k + 1) * (dyadic_level_count(L, k) + 1)


def large_scale_published_bound(n: int, L, k: int) -> float:
    """nk log2(3k/L), without the ceiling family or rounding of the level count."""
    return n * k * log2(3 * k / parse_rational(L))


def large_scale_certificate(
    x: Sequence, L, k: int, positive: Sequence[int], negative: Sequence[int]
) -> Tuple[int, SumCertificate]:
    """
    Express Σ x_positive - Σ x_negative as a sum of k elements of one level.

    At level m the integer D_m = Σ floor(2^m x_i) - Σ ceil(2^m x_j) is the
    quantization error to redistribute. The first m with D_m >= 0 has
    D_m <= q(k-1) for q positive terms, so D_m splits into offsets
    p in 0..k-1 over the positive terms.

    Args:
        x: Normalized coordinates
        L: Scale in (0, 1]
        k: Order
        positive: 0-based indices of the added terms
        negative: 0-based indices of the subtracted terms; k indices in total

    Returns:
        Tuple of (level m0, certificate with parts drawn from X_m0)

    Raises:
        InvalidParameterError: If the index counts do not add up to k
        ConstructionError: If no level admits a certificate
    """
    x, L = _cover_parameters(x, L, k)
    if len(positive) + len(negative) != k:
        raise InvalidParameterError(f"Need k = {k} indices, got {len(positive) + len(negative)}")
    target = sum((x[i] for i in positive), Fraction(0)) - sum((x[j] for j in negative), Fraction(0))
    q = len(positive)

    for m in range(dyadic_level_count(L, k) + 1):
        scale = 1 << m
        lows = [floor(scale * x[i]) for i in positive]
        highs = [ceil(scale * x[j]) for j in negative]
        offset = sum(lows) - sum(highs)
        if not 0 <= offset <= q * (k - 1):
            continue
        parts = []
        remaining = offset
        for i, low in zip(positive, lows):
            p = min(k - 1, remaining)
            remaining -= p
            parts.append(x[i] - Fraction(low - p, scale))
        for j, high in zip(negative, highs):
            parts.append(Fraction(high, scale) - x[j])
        return m, SumCertificate(target=target, parts=tuple(sorted(parts)))

    raise ConstructionError(
        f"No dyadic level up to {dyadic_level_count(L, k)} certifies {format_rational(target)}"
    )


def _run_higher_order(basis: ElementSet, k: int) -> Tuple[ElementSet, List[HigherOrderStage]]:
    if isinstance(k, bool) or not isinstance(k, int) or k < 2:
        raise InvalidParameterError(f"k must be an integer >= 2, got {k!r}")
    if not basis:
        raise InvalidParameterError("Higher-order construction needs a nonempty basis")
    if basis.min() < 0:
        raise InvalidParameterError(f"Basis element {format_rational(basis.min())} is negative")

    C = 3 * k
    pending = basis
    factor = Fraction(1)
    output = set()
    stages: List[HigherOrderStage] = []

    while True:
        if pending.max() == 0:
            added = ElementSet([0])
            output.update(added)
            stages.append(HigherOrderStage(len(pending), k, "base", factor, None, None, added))
            break

        top = pending.max()
        scale = factor * top
        x = tuple(v / top for v in pending)
        n = len(x)
        if n == 1:
            added = ElementSet([0, scale])
            output.update(added)
            stages.append(HigherOrderStage(n, k, "base", scale, None, None, added))
            break

        if x[0] >= 1 - Fraction(1, C):
            case, L = "near-constant", Fraction(1)
            reduced = ElementSet(1 - xi for xi in x)
        else:
            decomposition = find_ap_approximation(x, C)
            case, L = "progression", decomposition.L
            reduced = small_scale_reduction(decomposition)

        cover = dyadic_cover_levels(x, L, k)
        added = cover.union().scale(scale)
        output.update(added)
        stages.append(HigherOrderStage(n, k, case, scale, L, cover.m_max, added))
        logger.debug(
            "Higher-order stage", n=n, case=case, L=format_rational(L), levels=cover.m_max + 1,
            added=len(added), remainders=len(reduced),
        )
        pending = reduced
        factor = scale

    return ElementSet(output), stages


def higher_order_nonneg_basis(basis: ElementSet, k: int) -> ElementSet:
    """
    Find X >= 0 with (k(B ∪ -B)) ∩ [0, ∞) ⊆ kX for non-negative B.

    Args:
        basis: Nonempty set of non-negative rationals
        k: Order, at least 2

    Returns:
        The set X, in the units of the input
    """
    return _run_higher_order(basis, k)[0]


def higher_order_stages(basis: ElementSet, k: int) -> List[HigherOrderStage]:
    """The recursion stages behind higher_order_nonneg_basis(basis, k)."""
    return _run_higher_order(basis, k)[1]


def higher_order_size_bound(stages: Sequence[HigherOrderStage], k: int) -> int:
    """Sum of the per-stage level-set sizes plus the two base-case elements."""
    total = 2
    for stage in stages:
        if stage.m_max is not None:
            total += stage.n * (k + 1) * (stage.m_max + 1)
    return total


def higher_order_published_bound(n: int, k: int) -> float:
    return 2 * n ** 3 * k * log2(k)


def natural_k_basis(A: ElementSet, basis: ElementSet, k: int) -> ElementSet:
    """
    Find a natural k-basis for A ⊆ kB ∩ N given an integer k-basis B.

    Args:
        A: Non-negative integer targets
        basis: Integer set with A ⊆ kB
        k: Order, at least 2

    Returns:
        A set of naturals X with A ⊆ kX

    Raises:
        InvalidParameterError: If A or B leaves its domain
        InvalidWitnessError: If some a in A is not a sum of k elements of B
    """
    if any(a.denominator != 1 or a < 0 for a in A):
        raise InvalidParameterError("Targets must be natural numbers")
    if any(b.denominator != 1 for b in basis):
        raise InvalidParameterError("Basis elements must be integers")
    covered, certificates = is_k_basis(basis, A, k)
    if not covered:
        failing = min(a for a, c in certificates.items() if c is None)
        raise InvalidWitnessError(
            f"{format_rational(failing)} is not a sum of {k} basis elements", failing_element=failing
        )
    if not basis:
        return ElementSet()

    magnitudes = ElementSet(abs(b) for b in basis)
    return round_to_integer_basis(higher_order_nonneg_basis(magnitudes, k), k)


def signed_targets(basis: ElementSet, k: int) -> ElementSet:
    """(k(B ∪ -B)) ∩ [0, ∞), the set the higher-order construction covers."""
    return k_fold_sumset(signed_closure(basis), k).nonnegative()


class HigherOrderConstruction(BaseConstruction):
    name = "higher"

    def build(self, basis: ElementSet, k: int, targets: Optional[ElementSet] = None) -> ElementSet:
        return higher_order_nonneg_basis(basis, k)

    def targets(self, basis: ElementSet, k: int) -> ElementSet:
        return signed_targets(basis, k)

    def bound(self, n: int, k: int) -> float:
        return higher_order_published_bound(n, k)

    def diagnostics(self, basis: ElementSet, k: int) -> Dict[str, Any]:
        stages = []
        for stage in higher_order_stages(basis, k):
            stages.append({
                "n": stage.n,
                "case": stage.case,
                "L": stage.L,
                "m_max": stage.m_max,
                "size": len(stage.added),
                "published_bound": stage.published_bound,
                "published_ratio": stage.published_ratio,
            })
        ratios = [s["published_ratio"] for s in stages if s["published_ratio"] is not None]
        return {"stages": stages, "max_stage_ratio": max(ratios) if ratios else None}


class NaturalConstruction(BaseConstruction):
    name = "natural"

    def build(self, basis: ElementSet, k: int, targets: Optional[ElementSet] = None) -> ElementSet:
        if targets is None:
            targets = self.targets(basis, k)
        return natural_k_basis(targets, basis, k)

    def targets(self, basis: ElementSet, k: int) -> ElementSet:
        return k_fold_sumset(basis, k).naturals()

    def bound(self, n: int, k: int) -> float:
        return 16 * k * log2(k) * n ** 3
