from math import log2

import pytest

from additive_bases.constructions.dyadic import (
    DyadicConstruction,
    dyadic_size_bound,
    dyadic_split,
    dyadic_two_basis,
    magnitudes,
)
from additive_bases.errors import InvalidParameterError
from additive_bases.instances import gen_power_family, gen_random_signed_integer_basis
from additive_bases.sumsets import ElementSet, is_k_basis


def split_covers(basis, output):
    """Every non-negative x_r - x_t splits into two output elements."""
    x = magnitudes(basis)
    for r in range(2, len(x) + 1):
        for t in range(1, r):
            _, high, low = dyadic_split(x, r, t)
            if high not in output or low not in output:
                return False
    return True


class TestDyadicTwoBasis:
    def test_signed_powers_of_two(self):
        basis = ElementSet([-8, -4, -2, -1, 1, 2, 4, 8])
        output = dyadic_two_basis(basis)
        assert 0 in output
        assert 7 in output
        assert all(b >= 0 for b in output)
        assert len(output) <= dyadic_size_bound(4)
        covered, _ = DyadicConstruction().certify(basis, 2, output=output)
        assert covered

    def test_single_element(self):
        assert dyadic_two_basis(ElementSet([3])) == ElementSet([0, 3])

    def test_negative_only(self):
        assert dyadic_two_basis(ElementSet([-1, -2])) == ElementSet([0, 1])

    def test_rejects_empty_and_fractional(self):
        with pytest.raises(InvalidParameterError):
            dyadic_two_basis(ElementSet())
        with pytest.raises(InvalidParameterError):
            dyadic_two_basis(ElementSet(["1/2"]))

    def test_rejects_other_orders(self):
        with pytest.raises(InvalidParameterError):
            DyadicConstruction().build(ElementSet([1]), 3)

    def test_power_family(self):
        C, A = gen_power_family(4)
        output = dyadic_two_basis(C)
        covered, _ = is_k_basis(output, A, 2)
        assert covered


class TestDyadicSplit:
    def test_example(self):
        x = [1, 2, 4, 8]
        assert dyadic_split(x, 4, 1) == (4, 0, 7)
        assert dyadic_split(x, 3, 2) == (3, 0, 2)
        assert dyadic_split(x, 3, 1) == (2, 2, 1)

    def test_index_check(self):
        with pytest.raises(InvalidParameterError):
            dyadic_split([1, 2], 1, 2)


class TestDyadicProperties:
    @pytest.mark.parametrize("seed", range(20))
    def test_small_inputs_cover_exactly(self, seed):
        for n in (2, 4, 8, 16):
            basis = gen_random_signed_integer_basis(n, 4 * n, seed)
            covered, _ = DyadicConstruction().certify(basis, 2)
            assert covered

    @pytest.mark.parametrize("seed", range(20))
    def test_splits_and_size_bound(self, seed):
        for n in (2, 4, 8, 16, 32, 64, 128, 256):
            basis = gen_random_signed_integer_basis(n, 4 * n, seed)
            output = dyadic_two_basis(basis)
            assert split_covers(basis, output)
            assert basis.naturals().issubset(output)
            assert len(output) <= dyadic_size_bound(n) <= 3 * n + 2 * n * log2(n)
