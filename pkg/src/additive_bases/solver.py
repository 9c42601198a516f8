"""
Exact minimum k-basis search over a finite ground set.

The search is iterative deepening on the basis size. Each size level runs a
depth-first search over ground indices in increasing order, so the first
basis found is the lexicographically smallest of that size. Targets are
pre-compiled into "supports": bitmasks of the ground indices used by one way
of writing the target as a sum of k ground elements.
"""

from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from fractions import Fraction
from math import comb, lcm
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .arith import format_rational
from .errors import BudgetExhaustedError, InvalidInstanceError, InvalidParameterError
from .sumsets import ElementSet, SumCertificate, is_k_basis
from .utils.log import get_logger


logger = get_logger(__name__)

DEFAULT_NODE_BUDGET = 2_000_000
DEFAULT_WINDOW_MULTIPLIER = 2


class Domain(str, Enum):
    NATURAL_NUMBERS = "N"
    INTEGERS = "Z"
    SCALED_RATIONALS = "Q"


class Exactness(str, Enum):
    PROVEN_SUFFICIENT = "ProvenSufficient"
    HEURISTIC_WINDOW = "HeuristicWindow"


class BasisInstance(BaseModel):
    """Targets A, order k and the domain the basis must be drawn from."""

    model_config = ConfigDict(frozen=True)

    A: ElementSet
    k: int
    domain: Domain = Domain.NATURAL_NUMBERS
    denominator: Optional[int] = None

    @field_validator("k")
    @classmethod
    def _positive_order(cls, k: int) -> int:
        if k < 1:
            raise ValueError(f"k must be at least 1, got {k}")
        return k

    @model_validator(mode="after")
    def _targets_match_domain(self):
        if self.domain == Domain.NATURAL_NUMBERS:
            bad = [a for a in self.A if a.denominator != 1 or a < 0]
        elif self.domain == Domain.INTEGERS:
            bad = [a for a in self.A if a.denominator != 1]
        else:
            bad = []
            if self.denominator is not None:
                if self.denominator < 1:
                    raise ValueError(f"denominator must be positive, got {self.denominator}")
                bad = [a for a in self.A if (a * self.denominator).denominator != 1]
        if bad:
            raise ValueError(
                f"Targets {[format_rational(a) for a in bad]} do not belong to domain {self.domain.value}"
            )
        return self


class GroundSet(BaseModel):
    """The finite candidate pool searched by min_basis."""

    model_config = ConfigDict(frozen=True)

    elements: ElementSet
    exactness: Exactness


class SolveResult(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    optimal_size: int = Field(alias="size")
    witness: ElementSet = Field(alias="basis")
    exact: bool
    certificates: Tuple[SumCertificate, ...] = ()
    nodes_explored: int = Field(default=0, alias="nodes")


def default_ground_set(
    instance: BasisInstance, window_multiplier: int = DEFAULT_WINDOW_MULTIPLIER
) -> GroundSet:
    """
    Choose the ground set the solver searches for an instance.

    Over the naturals every part of a sum of non-negative elements is at most
    the sum, so {0, ..., max(A)} provably contains an optimal basis. Over the
    integers and the scaled rationals no such argument exists and a symmetric
    window of radius window_multiplier * max|A| is used instead.

    Args:
        instance: The instance to solve
        window_multiplier: Window radius as a multiple of max|A|

    Returns:
        The ground set with its exactness tag

    Raises:
        InvalidInstanceError: If A is empty
        InvalidParameterError: If the multiplier is not positive
    """
    if not instance.A:
        raise InvalidInstanceError("Cannot build a ground set for an empty target set")
    if window_multiplier < 1:
        raise InvalidParameterError(f"Window multiplier must be positive, got {window_multiplier}")

    if instance.domain == Domain.NATURAL_NUMBERS:
        top = int(instance.A.max())
        return GroundSet(elements=ElementSet(range(top + 1)), exactness=Exactness.PROVEN_SUFFICIENT)

    radius = window_multiplier * max(abs(a) for a in instance.A)
    if instance.domain == Domain.INTEGERS:
        radius = int(radius)
        return GroundSet(
            elements=ElementSet(range(-radius, radius + 1)), exactness=Exactness.HEURISTIC_WINDOW
        )

    denominator = instance.denominator or lcm(*(a.denominator for a in instance.A))
    steps = int(radius * denominator)
    return GroundSet(
        elements=ElementSet(Fraction(j, denominator) for j in range(-steps, steps + 1)),
        exactness=Exactness.HEURISTIC_WINDOW,
    )


def _check_ground(instance: BasisInstance, ground: GroundSet) -> None:
    if instance.domain == Domain.NATURAL_NUMBERS:
        outside = [g for g in ground.elements if g.denominator != 1 or g < 0]
    elif instance.domain == Domain.INTEGERS:
        outside = [g for g in ground.elements if g.denominator != 1]
    else:
        outside = []
    if outside:
        raise InvalidInstanceError(
            f"Ground set element {format_rational(outside[0])} lies outside domain {instance.domain.value}"
        )


def _supports(target: Fraction, values: Tuple[Fraction, ...], k: int) -> List[int]:
    """All minimal index bitmasks of k-multisets of `values` summing to target."""
    found = set()
    largest = values[-1]

    def walk(start: int, count: int, remaining: Fraction, mask: int) -> None:
        for i in range(start, len(values)):
            value = values[i]
            if count * value > remaining:
                break
            if value + (count - 1) * largest < remaining:
                continue
            if count == 1:
                if value == remaining:
                    found.add(mask | (1 << i))
                continue
            walk(i, count - 1, remaining - value, mask | (1 << i))

    walk(0, k, target, 0)
    ordered = sorted(found, key=lambda m: (bin(m).count("1"), m))
    minimal: List[int] = []
    for mask in ordered:
        if not any(kept & mask == kept for kept in minimal):
            minimal.append(mask)
    return minimal


def _indices(mask: int) -> List[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


class _Exhausted(Exception):
    pass


class _CoverSearch:
    """Fixed-size cover search shared by every branch of one size level."""

    def __init__(self, supports: List[List[int]], ground_size: int):
        self.supports = supports
        self.ground_size = ground_size
        self.full = (1 << ground_size) - 1

    def covers(self, chosen: int) -> bool:
        return all(any(s & ~chosen == 0 for s in options) for options in self.supports)

    def feasible(self, chosen: int, start: int, slots: int) -> bool:
        """Can every target still be covered using `slots` more indices >= start?"""
        suffix = self.full & ~((1 << start) - 1)
        for options in self.supports:
            ok = False
            for s in options:
                missing = s & ~chosen
                if missing & ~suffix == 0 and bin(missing).count("1") <= slots:
                    ok = True
                    break
            if not ok:
                return False
        return True

    def branch(self, first: int, size: int, limit: int) -> Tuple[Optional[int], int, bool]:
        """
        Search every basis of `size` indices whose smallest index is `first`.

        Returns:
            Tuple of (witness mask or None, nodes visited, budget exhausted)
        """
        nodes = 0

        def dfs(chosen: int, count: int, start: int) -> Optional[int]:
            nonlocal nodes
            nodes += 1
            if nodes > limit:
                raise _Exhausted()
            if count == size:
                return chosen if self.covers(chosen) else None
            for idx in range(start, self.ground_size - (size - count) + 1):
                if not self.feasible(chosen, idx, size - count):
                    break
                hit = dfs(chosen | (1 << idx), count + 1, idx + 1)
                if hit is not None:
                    return hit
            return None

        try:
            return dfs(1 << first, 1, first + 1), nodes, False
        except _Exhausted:
            return None, nodes, True


def _greedy_cover(supports: List[List[int]]) -> int:
    chosen = 0
    for options in supports:
        if any(s & ~chosen == 0 for s in options):
            continue
        best = min(options, key=lambda s: (bin(s & ~chosen).count("1"), _indices(s)))
        chosen |= best
    return chosen


def _lower_bound(target_count: int, k: int) -> int:
    size = 1
    while comb(size + k - 1, k) < target_count:
        size += 1
    return size


def min_basis(
    instance: BasisInstance,
    ground: GroundSet,
    budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
) -> SolveResult:
    """
    Find a smallest subset of the ground set that is a k-basis for A.

    A greedy cover provides the upper bound; sizes from the multiset counting
    lower bound up to it are tried in turn. The first-level branches of each
    size may run on a thread pool. Every branch gets the budget left at the
    start of its level and the results are merged in index order, so the
    witness and node count never depend on the number of threads.

    Args:
        instance: Targets, order and domain
        ground: Candidate pool
        budget: Maximum number of search nodes
        threads: Worker threads for first-level branches

    Returns:
        The optimal size, the lexicographically smallest witness and its
        sum certificates

    Raises:
        InvalidInstanceError: If the ground set is outside the domain or no
            subset of it covers A
        BudgetExhaustedError: If the node budget runs out before optimality
            is proven; carries the greedy upper bound
    """
    _check_ground(instance, ground)
    exact = ground.exactness == Exactness.PROVEN_SUFFICIENT
    targets = list(instance.A)
    values = ground.elements.elements

    if not targets:
        return SolveResult(optimal_size=0, witness=ElementSet(), exact=exact, nodes_explored=0)
    if not values:
        raise InvalidInstanceError("Ground set is empty but the target set is not")

    supports = [_supports(a, values, instance.k) for a in targets]
    uncoverable = [a for a, options in zip(targets, supports) if not options]
    if uncoverable:
        raise InvalidInstanceError(
            f"No subset of the ground set represents {format_rational(uncoverable[0])} "
            f"as a sum of {instance.k} elements"
        )

    greedy = _greedy_cover(supports)
    greedy_size = bin(greedy).count("1")
    greedy_witness = tuple(values[i] for i in _indices(greedy))
    search = _CoverSearch(supports, len(values))

    nodes = 0
    witness_mask = None
    for size in range(_lower_bound(len(targets), instance.k), greedy_size + 1):
        if size > len(values):
            break
        logger.debug("Searching basis size", size=size, nodes=nodes, greedy=greedy_size)
        nodes += 1
        limit = budget - nodes
        if nodes > budget:
            raise BudgetExhaustedError(
                f"Node budget {budget} exhausted before size {size}",
                best_size=greedy_size, best_witness=greedy_witness, nodes=nodes,
            )

        firsts = []
        for first in range(0, len(values) - size + 1):
            if not search.feasible(0, first, size):
                break
            firsts.append(first)

        if threads > 1 and len(firsts) > 1:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                outcomes = list(executor.map(lambda f: search.branch(f, size, limit), firsts))
        else:
            outcomes = []
            for first in firsts:
                outcome = search.branch(first, size, limit)
                outcomes.append(outcome)
                if outcome[0] is not None or outcome[2]:
                    break

        # Ordered merge; the running total is held to the budget even on a hit
        for hit, branch_nodes, exhausted in outcomes:
            nodes += branch_nodes
            if exhausted or nodes > budget:
                logger.warning("Solver budget exhausted", budget=budget, size=size, best=greedy_size)
                raise BudgetExhaustedError(
                    f"Node budget {budget} exhausted while searching size {size}",
                    best_size=greedy_size, best_witness=greedy_witness, nodes=nodes,
                )
            if hit is not None:
                witness_mask = hit
                break
        if witness_mask is not None:
            break

    if witness_mask is None:
        witness_mask = greedy

    witness = ElementSet(values[i] for i in _indices(witness_mask))
    covered, certificates = is_k_basis(witness, instance.A, instance.k)
    if not covered:
        raise InvalidInstanceError("Search returned a basis that does not cover the targets")
    logger.info("Solved instance", size=len(witness), nodes=nodes, exact=exact)
    return SolveResult(
        optimal_size=len(witness),
        witness=witness,
        exact=exact,
        certificates=tuple(certificates[a] for a in targets),
        nodes_explored=nodes,
    )


def ell_over_domain(
    A: ElementSet,
    k: int,
    domain: Domain = Domain.NATURAL_NUMBERS,
    window_multiplier: int = DEFAULT_WINDOW_MULTIPLIER,
    budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
    denominator: Optional[int] = None,
) -> SolveResult:
    """Solve A over the default ground set of its domain."""
    instance = BasisInstance(A=A, k=k, domain=Domain(domain), denominator=denominator)
    ground = default_ground_set(instance, window_multiplier)
    return min_basis(instance, ground, budget=budget, threads=threads)

