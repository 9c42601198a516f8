import time
from fractions import Fraction as F

import pytest
from pydantic import ValidationError

from additive_bases.errors import InvalidParameterError
from additive_bases.instances import (
    Family,
    GeneratorSpec,
    _rational_grid,
    gen_normalized_vector,
    gen_power_family,
    gen_random_rational_basis,
    gen_random_signed_integer_basis,
    generate,
    power_family_differences,
    power_family_lower_bound,
)
from additive_bases.sumsets import ElementSet


class TestPowerFamily:
    def test_small_example(self):
        C, A = gen_power_family(2)
        assert C == ElementSet([-16, -4, 4, 16])
        assert A == ElementSet([0, 8, 12, 20, 32])

    @pytest.mark.parametrize("n", [1, 3, 6])
    def test_shape(self, n):
        C, A = gen_power_family(n)
        assert len(C) == 2 * n
        assert A.min() == 0
        assert A.max() == 2 * 4 ** n
        assert power_family_differences(n).issubset(A)

    def test_growth(self):
        powers = [x for x in gen_power_family(5)[0] if x > 0]
        assert all(b > 2 * a for a, b in zip(powers, powers[1:]))
        doubling = [x for x in gen_power_family(5, base=2)[0] if x > 0]
        assert not all(b > 2 * a for a, b in zip(doubling, doubling[1:]))

    def test_rejects_bad_parameters(self):
        with pytest.raises(InvalidParameterError):
            gen_power_family(0)
        with pytest.raises(InvalidParameterError):
            gen_power_family(3, base=1)

    def test_lower_bound(self):
        assert power_family_lower_bound(1) == pytest.approx(-0.2)
        assert power_family_lower_bound(1024) == pytest.approx(1024 * 10 / 25 - 1024 / 5)


class TestRandomBases:
    def test_rational_basis(self):
        basis = gen_random_rational_basis(6, 5, 2, seed=1)
        assert len(basis) == 6
        assert all(b.denominator <= 5 and abs(b) <= 2 for b in basis)
        assert basis == gen_random_rational_basis(6, 5, 2, seed=1)

    def test_rational_grid_is_reduced_and_cached(self):
        grid = _rational_grid(2, 1)
        assert grid == (F(-1), F(-1, 2), F(0), F(1, 2), F(1))
        assert _rational_grid(50, 3) is _rational_grid(50, 3)
        assert len(set(_rational_grid(50, 3))) == len(_rational_grid(50, 3))

    def test_rational_basis_draws_are_fast(self):
        started = time.perf_counter()
        for seed in range(200):
            gen_random_rational_basis(8, 50, 3, seed)
        assert time.perf_counter() - started < 5

    def test_rational_grid_too_small(self):
        with pytest.raises(InvalidParameterError):
            gen_random_rational_basis(10, 1, 1, seed=0)

    def test_signed_integer_basis(self):
        basis = gen_random_signed_integer_basis(8, 20, seed=4)
        assert all(b.denominator == 1 and b != 0 and abs(b) <= 20 for b in basis)
        assert len({abs(b) for b in basis}) == 8
        assert basis == gen_random_signed_integer_basis(8, 20, seed=4)

    def test_signed_bound_below_n(self):
        with pytest.raises(InvalidParameterError):
            gen_random_signed_integer_basis(5, 4, seed=0)

    @pytest.mark.parametrize("seed", range(5))
    def test_normalized_vector(self, seed):
        x = gen_normalized_vector(4, 6, seed)
        assert x[-1] == 1
        assert x[0] >= 0
        assert all(a < b for a, b in zip(x, x[1:]))

    def test_normalized_vector_needs_room(self):
        with pytest.raises(InvalidParameterError):
            gen_normalized_vector(5, 2, seed=0)


class TestGenerate:
    def test_dispatch(self):
        power = generate(GeneratorSpec(family=Family.POWER_FAMILY, n=2))
        assert power == ElementSet([-16, -4, 4, 16])

        spec = GeneratorSpec(family="RandomRationalBasis", n=3, seed=2, parameters={"denominator_bound": 3})
        assert generate(spec) == gen_random_rational_basis(3, 3, 3, 2)

        spec = GeneratorSpec(family=Family.RANDOM_SIGNED_INTEGER, n=3, seed=7)
        assert generate(spec) == gen_random_signed_integer_basis(3, 12, 7)

    def test_spec_validation(self):
        with pytest.raises(ValidationError):
            GeneratorSpec(family=Family.POWER_FAMILY, n=0)
        with pytest.raises(ValidationError):
            GeneratorSpec(family=Family.POWER_FAMILY, n=2, k=1)
