import random
from fractions import Fraction as F

import pytest

from additive_bases.constructions.rounding import (
    RoundingConstruction,
    integer_basis_lower_bound,
    round_to_integer_basis,
    rounded_certificate,
)
from additive_bases.errors import InvalidParameterError
from additive_bases.instances import gen_random_rational_basis
from additive_bases.sumsets import ElementSet, is_k_basis, k_fold_sumset, k_sum_membership


class TestRoundToIntegerBasis:
    def test_examples(self):
        assert round_to_integer_basis(ElementSet(["1/2"]), 2) == ElementSet([0, 1])
        assert round_to_integer_basis(ElementSet(["1/3", "2/3"]), 3) == ElementSet([0, 1])
        assert round_to_integer_basis(ElementSet([1, 2, 3]), 2) == ElementSet([1, 2, 3])
        assert round_to_integer_basis(ElementSet(["-3/2"]), 2) == ElementSet([-2, -1])

    def test_bad_order(self):
        with pytest.raises(InvalidParameterError):
            round_to_integer_basis(ElementSet([1]), 0)

    def test_size_never_exceeds_twice_input(self):
        basis = ElementSet(["1/2", "3/2", "5/2"])
        output = round_to_integer_basis(basis, 2)
        assert output == ElementSet([0, 1, 2, 3])
        assert len(output) <= RoundingConstruction().bound(len(basis), 2)

    def test_covers_random_bases(self):
        rng = random.Random(0)
        construction = RoundingConstruction()
        for seed in range(200):
            n = rng.randint(1, 8)
            k = rng.randint(2, 4)
            basis = gen_random_rational_basis(n, 50, 3, seed)
            output = construction.build(basis, k)
            assert all(c.denominator == 1 for c in output)
            assert len(output) <= 2 * len(basis)
            covered, _ = is_k_basis(output, construction.targets(basis, k), k)
            assert covered


class TestLowerBound:
    def test_vacuous_for_small_n(self):
        assert integer_basis_lower_bound(10, 2) < 0
        assert RoundingConstruction().lower_bound(10, 2) == integer_basis_lower_bound(10, 2)

    def test_approaches_doubling(self):
        n = 10 ** 8
        assert integer_basis_lower_bound(n, 2) == pytest.approx(2 * n - 16 * 10 ** 4)
        assert integer_basis_lower_bound(n, 2) <= RoundingConstruction().bound(n, 2)

    def test_no_bound_elsewhere(self):
        from additive_bases.constructions import get_construction
        assert get_construction("dyadic").lower_bound(4, 2) is None

    def test_rejects_bad_sizes(self):
        with pytest.raises(InvalidParameterError):
            integer_basis_lower_bound(0, 2)


class TestRoundedCertificate:
    def test_thirds(self):
        assert rounded_certificate([F(1, 3)] * 3, 1) == (1, 0, 0)

    def test_integral_parts_untouched(self):
        assert rounded_certificate([2, F(1, 2), F(1, 2)], 3) == (2, 1, 0)

    def test_rejects_non_integer_target(self):
        with pytest.raises(InvalidParameterError):
            rounded_certificate([F(1, 4), F(1, 4)], F(1, 2))

    def test_rejects_wrong_sum(self):
        with pytest.raises(InvalidParameterError):
            rounded_certificate([F(1, 2), F(1, 2)], 2)

    @pytest.mark.parametrize("seed", range(10))
    def test_rounded_parts_come_from_output(self, seed):
        basis = gen_random_rational_basis(5, 12, 2, seed)
        k = 3
        output = round_to_integer_basis(basis, k)
        for target in k_fold_sumset(basis, k).integers():
            cert = k_sum_membership(target, basis, k)
            rounded = rounded_certificate(cert.parts, target)
            assert sum(rounded) == target
            assert all(r in output for r in rounded)
