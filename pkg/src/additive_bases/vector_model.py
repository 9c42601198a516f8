"""
The vector model of rational k-bases.

Targets are sums of k standard basis vectors of Q^n; a family B_0, ..., B_{k-1}
of rational vectors covers them when every target is some
b_{i_1} + ... + b_{i_k} + floor((i_1 + ... + i_k)/k) * (1, ..., 1)
with i_1 + ... + i_k ≡ 1 (mod k).
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from .arith import RationalMatrix, Scalar, as_vector, kernel, rank, row_echelon, solve_linear
from .errors import InvalidParameterError
from .utils.log import get_logger


logger = get_logger(__name__)

Vector = Tuple[Fraction, ...]


class VectorFamily(BaseModel):
    """Sets B_0, ..., B_{k-1} of rational n-vectors."""

    model_config = ConfigDict(frozen=True)

    n: int
    k: int
    parts: Tuple[Tuple[Tuple[Scalar, ...], ...], ...]

    @model_validator(mode="after")
    def _shape(self):
        if self.k < 2:
            raise ValueError(f"k must be at least 2, got {self.k}")
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        if len(self.parts) != self.k:
            raise ValueError(f"Expected {self.k} parts, got {len(self.parts)}")
        for part in self.parts:
            for vector in part:
                if len(vector) != self.n:
                    raise ValueError(f"Vector of dimension {len(vector)} in a family of dimension {self.n}")
        return self

    @property
    def total_size(self) -> int:
        return sum(len(set(part)) for part in self.parts)


@dataclass(frozen=True)
class CoordinateSubspace:
    """span{e_i : i in indices} inside Q^n."""

    n: int
    indices: Tuple[int, ...]

    def basis(self) -> List[Vector]:
        return [unit_vector(self.n, i) for i in self.indices]


@dataclass(frozen=True)
class VectorWitness:
    indices: Tuple[int, ...]
    vectors: Tuple[Vector, ...]
    offset: int


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))


def delta_offset(indices: Sequence[int], k: Optional[int] = None) -> int:
    """floor((i_1 + ... + i_k) / k); k defaults to the tuple length."""
    k = len(indices) if k is None else k
    if k < 1:
        raise InvalidParameterError("Offset needs a positive order")
    return sum(indices) // k


def k_fold_targets(n: int, k: int) -> List[Vector]:
    """Every sum of k standard basis vectors (repetition allowed), in lexicographic index order."""
    targets = []
    for combo in combinations_with_replacement(range(n), k):
        counts = [0] * n
        for i in combo:
            counts[i] += 1
        targets.append(tuple(Fraction(c) for c in counts))
    return targets


def check_vector_cover(family: VectorFamily) -> Tuple[bool, Dict[Vector, Optional[VectorWitness]]]:
    """
    Decide whether the family covers every k-fold sum of basis vectors.

    Index tuples are enumerated non-decreasing, since the Minkowski sum of the
    chosen parts does not depend on their order.

    Returns:
        Tuple of (all covered, witness or None per target)
    """
    n, k = family.n, family.k
    parts = [sorted(set(part)) for part in family.parts]
    reachable: Dict[Vector, VectorWitness] = {}
    for indices in combinations_with_replacement(range(k), k):
        if sum(indices) % k != 1 % k:
            continue
        offset = delta_offset(indices, k)
        for vectors in product(*(parts[i] for i in indices)):
            total = tuple(sum(coords, Fraction(0)) + offset for coords in zip(*vectors))
            if total not in reachable:
                reachable[total] = VectorWitness(indices=indices, vectors=tuple(vectors), offset=offset)

    witnesses = {t: reachable.get(t) for t in k_fold_targets(n, k)}
    return all(w is not None for w in witnesses.values()), witnesses


def _spanning_matrix(spanning: Sequence[Sequence], n: int) -> RationalMatrix:
    rows = [as_vector(v) for v in spanning]
    if any(len(row) != n for row in rows):
        raise InvalidParameterError(f"All spanning vectors must have dimension {n}")
    return RationalMatrix.from_rows(rows, cols=n)


def codimension(spanning: Sequence[Sequence], n: int) -> int:
    """n minus the dimension of span(spanning)."""
    return n - rank(_spanning_matrix(spanning, n))


def coord_subspace(spanning: Sequence[Sequence], n: int) -> CoordinateSubspace:
    """
    Find a coordinate subspace W with dim W = codim V and W ∩ V = {0}.

    V = span(spanning) is the common zero set of the kernel vectors of the
    spanning matrix; in reduced echelon form those equations have one pivot
    coordinate each, and the pivot coordinates span W.

    Args:
        spanning: Vectors spanning V
        n: Ambient dimension

    Returns:
        The coordinate subspace
    """
    equations = kernel(_spanning_matrix(spanning, n))
    if not equations:
        return CoordinateSubspace(n=n, indices=())
    _, pivots = row_echelon(RationalMatrix.from_rows(equations, cols=n))
    return CoordinateSubspace(n=n, indices=tuple(pivots))


def pair_cover_lower_bound(first: Sequence[Sequence], n: int) -> int:
    """
    Minimum |B1| for B0 + B1 to contain every e_i + e_j, given B0.

    With d = codim span(B0) and W the coordinate subspace from coord_subspace,
    the C(d+1, 2) targets inside W need pairwise distinct partners: two
    targets sharing a partner differ by an element of span(B0) ∩ W = {0}.
    """
    d = codimension(first, n)
    return comb(d + 1, 2)


def min_partner_size(
    first: Sequence[Sequence], n: int, limit: Optional[int] = None
) -> Optional[Tuple[int, List[Vector]]]:
    """
    Smallest B1 ⊂ Q^n with B0 + B1 ⊇ {e_i + e_j : i <= j}, for a fixed B0.

    Every useful partner has the form t - b0 for a target t, so this is a
    minimum hitting set over the sets {t - b0 : b0 in B0}, searched by
    iterative deepening from the codimension lower bound.

    Args:
        first: The set B0
        n: Dimension
        limit: Largest size to try; defaults to the number of targets

    Returns:
        Tuple of (size, partner vectors), or None when no partner set of
        size <= limit exists
    """
    first = sorted({as_vector(v) for v in first})
    targets = k_fold_targets(n, 2)
    if limit is None:
        limit = len(targets)
    if not first:
        return None
    options = [sorted({tuple(a - b for a, b in zip(t, b0)) for b0 in first}) for t in targets]
    first_set = set(first)

    def hit(chosen: List[Vector], t: Vector) -> bool:
        return any(tuple(a - b for a, b in zip(t, c)) in first_set for c in chosen)

    def search(chosen: List[Vector], slots: int) -> Optional[List[Vector]]:
        for target_index, t in enumerate(targets):
            if not hit(chosen, t):
                break
        else:
            return list(chosen)
        if slots == 0:
            return None
        for candidate in options[target_index]:
            chosen.append(candidate)
            found = search(chosen, slots - 1)
            chosen.pop()
            if found is not None:
                return found
        return None

    start = max(pair_cover_lower_bound(first, n), 1)
    for size in range(start, limit + 1):
        found = search([], size)
        if found is not None:
            return len(found), sorted(found)
    return None


def check_parity_counterexample(bound: int = 4) -> bool:
    """
    Check the three systems 2x = c_1, 2x = c_2, 2x = c_1 + c_2 over a box.

    Over the box {-bound, ..., bound}^2 some system has an integer solution
    for every c (one of c_1, c_2, c_1 + c_2 is even), yet each single system
    fails for some c.

    Returns:
        True iff both halves hold
    """
    coefficient = RationalMatrix.from_rows([[2]])
    systems = [
        lambda c: c[0],
        lambda c: c[1],
        lambda c: c[0] + c[1],
    ]
    box = list(product(range(-bound, bound + 1), repeat=2))

    def solvable(system, c) -> bool:
        solution = solve_linear(coefficient, [system(c)])
        return solution is not None and all(v.denominator == 1 for v in solution)

    union_covers = all(any(solvable(s, c) for s in systems) for c in box)
    each_fails = all(any(not solvable(s, c) for c in box) for s in systems)
    return union_covers and each_fails


class PairCoverReport(BaseModel):
    """Outcome of a pair-cover search over a finite rational grid."""

    model_config = ConfigDict(frozen=True)

    n: int
    sizes: Tuple[int, int]
    coord_bound: int
    denom_bound: int
    seed: int
    found: bool
    family: Optional[VectorFamily] = None
    grid_complete: bool
    budget_exhausted: bool
    candidates_examined: int
    random_trials: int
    random_coord_bound: int
    random_denom_bound: int
    below_conjectured_bound: bool
    extension_threshold: Optional[int] = None
    below_extension_threshold: Optional[bool] = None


def grid_scalars(coord_bound: int, denom_bound: int) -> List[Fraction]:
    """All p/q with 1 <= q <= denom_bound and |p/q| <= coord_bound, sorted."""
    values = {
        Fraction(p, q)
        for q in range(1, denom_bound + 1)
        for p in range(-coord_bound * q, coord_bound * q + 1)
    }
    return sorted(values)


def grid_vectors(n: int, coord_bound: int, denom_bound: int) -> List[Vector]:
    return [tuple(v) for v in product(grid_scalars(coord_bound, denom_bound), repeat=n)]


def probe_pair_cover(
    n: int,
    sizes: Tuple[int, int],
    coord_bound: int = 1,
    denom_bound: int = 1,
    budget: int = 20000,
    seed: int = 0,
    random_trials: int = 200,
) -> PairCoverReport:
    """
    Look for B0, B1 ⊂ Q^n of the given sizes with B0 + B1 ⊇ {e_i + e_j}.

    B0 runs over all s0-subsets of the grid (skipping those whose codimension
    bound already exceeds s1) and B1 is optimized exactly over Q^n. If the
    grid is exhausted without a hit, seeded random B0 are drawn from the
    grid one step wider in both bounds.

    Args:
        n: Dimension, at least 2
        sizes: (|B0|, largest |B1| allowed)
        coord_bound: Largest |coordinate| on the grid
        denom_bound: Largest coordinate denominator on the grid
        budget: Maximum number of B0 candidates examined
        seed: Seed for the random phase
        random_trials: Cap on random candidates

    Returns:
        A report with the family when one was found
    """
    if n < 2:
        raise InvalidParameterError(f"n must be at least 2, got {n}")
    s0, s1 = sizes
    if s0 < 0 or s1 < 0:
        raise InvalidParameterError(f"Sizes must be non-negative, got {sizes}")
    if coord_bound < 0 or denom_bound < 1:
        raise InvalidParameterError("Grid needs coord_bound >= 0 and denom_bound >= 1")

    examined = 0
    trials = 0
    family = None
    exhausted = False

    def try_first(first: Tuple[Vector, ...]) -> Optional[VectorFamily]:
        if pair_cover_lower_bound(first, n) > s1:
            return None
        partner = min_partner_size(first, n, limit=s1)
        if partner is None:
            return None
        return VectorFamily(n=n, k=2, parts=(tuple(first), tuple(partner[1])))

    grid = grid_vectors(n, coord_bound, denom_bound)
    grid_complete = True
    for first in combinations(grid, s0):
        if examined >= budget:
            exhausted = True
            grid_complete = False
            break
        examined += 1
        family = try_first(first)
        if family is not None:
            break
    logger.info("Pair-cover grid phase", n=n, sizes=sizes, examined=examined, found=family is not None)

    wide = grid_vectors(n, coord_bound + 1, denom_bound + 1)
    if family is None and grid_complete and s0 <= len(wide):
        rng = random.Random(seed)
        while trials < random_trials and examined < budget:
            trials += 1
            examined += 1
            first = tuple(sorted(rng.sample(wide, s0)))
            family = try_first(first)
            if family is not None:
                break
        if family is None and trials < random_trials:
            exhausted = True
        logger.info("Pair-cover random phase", trials=trials, found=family is not None)

    threshold = None
    below = None
    if s0 <= n:
        t = n - s0
        threshold = n + comb(t + 1, 2)
        below = s1 < threshold

    return PairCoverReport(
        n=n,
        sizes=(s0, s1),
        coord_bound=coord_bound,
        denom_bound=denom_bound,
        seed=seed,
        found=family is not None,
        family=family,
        grid_complete=grid_complete,
        budget_exhausted=exhausted,
        candidates_examined=examined,
        random_trials=trials,
        random_coord_bound=coord_bound + 1,
        random_denom_bound=denom_bound + 1,
        below_conjectured_bound=s0 + s1 < 2 * n,
        extension_threshold=threshold,
        below_extension_threshold=below,
    )
