"""Seeded generators for instance families and random test inputs."""

import random
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd, log2
from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import InvalidParameterError
from .sumsets import ElementSet, k_fold_sumset


class Family(str, Enum):
    POWER_FAMILY = "PowerFamily"
    RANDOM_RATIONAL_BASIS = "RandomRationalBasis"
    RANDOM_SIGNED_INTEGER = "RandomSignedInteger"


class GeneratorSpec(BaseModel):
    """Everything needed to regenerate an instance."""

    model_config = ConfigDict(frozen=True)

    family: Family
    n: int
    k: int = 2
    seed: int = 0
    parameters: Dict[str, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _sizes(self):
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        if self.k < 2:
            raise ValueError(f"k must be at least 2, got {self.k}")
        return self


def gen_power_family(n: int, base: int = 4) -> Tuple[ElementSet, ElementSet]:
    """
    The signed powers C = {±base^r : 1 <= r <= n} and A = (C + C) ∩ N.

    C is an integer 2-basis of A of size 2n.

    Args:
        n: Number of powers, at least 1
        base: Growth factor, at least 2

    Returns:
        Tuple of (C, A)
    """
    if n < 1:
        raise InvalidParameterError(f"n must be at least 1, got {n}")
    if base < 2:
        raise InvalidParameterError(f"base must be at least 2, got {base}")
    powers = [base ** r for r in range(1, n + 1)]
    C = ElementSet(powers + [-p for p in powers])
    return C, k_fold_sumset(C, 2).naturals()


def power_family_differences(n: int, base: int = 4) -> ElementSet:
    """{x_r - x_t : 1 <= t < r <= n} for x_r = base^r."""
    powers = [base ** r for r in range(1, n + 1)]
    return ElementSet(powers[r] - powers[t] for r in range(n) for t in range(r))


def power_family_lower_bound(n: int) -> float:
    """n log2 n / 25 - n / 5, the published lower bound for natural 2-bases of the family."""
    return n * log2(n) / 25 - n / 5 if n >= 1 else 0.0


@lru_cache(maxsize=32)
def _rational_grid(denominator_bound: int, magnitude_bound: int) -> Tuple[Fraction, ...]:
    # Reduced fractions only, each value once
    return tuple(sorted(
        Fraction(p, q)
        for q in range(1, denominator_bound + 1)
        for p in range(-magnitude_bound * q, magnitude_bound * q + 1)
        if gcd(p, q) == 1
    ))


def gen_random_rational_basis(
    n: int, denominator_bound: int, magnitude_bound: int, seed: int
) -> ElementSet:
    """
    Draw n distinct rationals p/q with 1 <= q <= denominator_bound and |p/q| <= magnitude_bound.

    Raises:
        InvalidParameterError: If a bound is invalid or the grid has fewer than n points
    """
    if denominator_bound < 1 or magnitude_bound < 0:
        raise InvalidParameterError("Need denominator_bound >= 1 and magnitude_bound >= 0")
    grid = _rational_grid(denominator_bound, magnitude_bound)
    if n < 1 or n > len(grid):
        raise InvalidParameterError(f"Cannot draw {n} distinct points from a grid of {len(grid)}")
    return ElementSet(random.Random(seed).sample(grid, n))


def gen_random_signed_integer_basis(n: int, magnitude_bound: int, seed: int) -> ElementSet:
    """
    Draw n distinct magnitudes in 1..magnitude_bound, each with a random nonempty sign pattern.

    Raises:
        InvalidParameterError: If magnitude_bound < n
    """
    if n < 1 or magnitude_bound < n:
        raise InvalidParameterError(f"Need 1 <= n <= magnitude_bound, got n={n}, bound={magnitude_bound}")
    rng = random.Random(seed)
    values = []
    for magnitude in sorted(rng.sample(range(1, magnitude_bound + 1), n)):
        values.extend(rng.choice([(magnitude,), (-magnitude,), (magnitude, -magnitude)]))
    return ElementSet(values)


def gen_normalized_vector(n: int, denominator_bound: int, seed: int) -> Tuple[Fraction, ...]:
    """
    Draw a strictly increasing vector in [0, 1] whose last entry is 1.

    Raises:
        InvalidParameterError: If [0, 1) holds fewer than n - 1 grid points
    """
    grid = sorted({Fraction(p, q) for q in range(1, denominator_bound + 1) for p in range(q)})
    if n < 1 or n - 1 > len(grid):
        raise InvalidParameterError(f"Cannot draw {n - 1} distinct points below 1 from {len(grid)}")
    rng = random.Random(seed)
    return tuple(sorted(rng.sample(grid, n - 1))) + (Fraction(1),)


def generate(spec: GeneratorSpec) -> ElementSet:
    """Produce the basis a GeneratorSpec describes."""
    params = spec.parameters
    if spec.family == Family.POWER_FAMILY:
        return gen_power_family(spec.n, params.get("base", 4))[0]
    if spec.family == Family.RANDOM_RATIONAL_BASIS:
        return gen_random_rational_basis(
            spec.n, params.get("denominator_bound", 10), params.get("magnitude_bound", 3), spec.seed
        )
    return gen_random_signed_integer_basis(spec.n, params.get("magnitude_bound", 4 * spec.n), spec.seed)
