import random
from fractions import Fraction as F
from itertools import combinations

import pytest
from pydantic import ValidationError

from additive_bases.errors import BudgetExhaustedError, InvalidInstanceError, InvalidParameterError
from additive_bases.solver import (
    BasisInstance,
    Domain,
    Exactness,
    GroundSet,
    default_ground_set,
    ell_over_domain,
    min_basis,
)
from additive_bases.sumsets import ElementSet, is_k_basis, k_fold_sumset


POWER_TARGETS = ElementSet([0, 8, 12, 20, 32])


def naive_min_size(targets, ground, k):
    """Smallest subset size of ground whose k-fold sumset contains targets."""
    for size in range(1, len(ground) + 1):
        for subset in combinations(ground, size):
            if targets.issubset(k_fold_sumset(ElementSet(subset), k)):
                return size
    return None


class TestBasisInstance:
    def test_rejects_non_naturals(self):
        with pytest.raises(ValidationError):
            BasisInstance(A=[-1, 2], k=2, domain=Domain.NATURAL_NUMBERS)
        with pytest.raises(ValidationError):
            BasisInstance(A=["1/2"], k=2, domain=Domain.INTEGERS)

    def test_rejects_bad_order(self):
        with pytest.raises(ValidationError):
            BasisInstance(A=[1], k=0)

    def test_rational_denominator(self):
        BasisInstance(A=["1/2"], k=2, domain=Domain.SCALED_RATIONALS, denominator=4)
        with pytest.raises(ValidationError):
            BasisInstance(A=["1/3"], k=2, domain=Domain.SCALED_RATIONALS, denominator=4)

    def test_parses_json_document(self):
        instance = BasisInstance.model_validate({"k": 2, "domain": "Z", "A": ["3", "-1"]})
        assert instance.domain == Domain.INTEGERS
        assert instance.A == ElementSet([-1, 3])


class TestDefaultGroundSet:
    def test_naturals(self):
        ground = default_ground_set(BasisInstance(A=[0, 3], k=2))
        assert ground.elements == ElementSet(range(4))
        assert ground.exactness == Exactness.PROVEN_SUFFICIENT

    def test_integers(self):
        ground = default_ground_set(BasisInstance(A=[-1, 2], k=2, domain="Z"), window_multiplier=2)
        assert ground.elements == ElementSet(range(-4, 5))
        assert ground.exactness == Exactness.HEURISTIC_WINDOW

    def test_rationals(self):
        ground = default_ground_set(BasisInstance(A=["1/2"], k=2, domain="Q"))
        assert ground.elements == ElementSet(["-1", "-1/2", "0", "1/2", "1"])
        assert ground.exactness == Exactness.HEURISTIC_WINDOW

    def test_empty_targets(self):
        with pytest.raises(InvalidInstanceError):
            default_ground_set(BasisInstance(A=[], k=2))

    def test_bad_multiplier(self):
        with pytest.raises(InvalidParameterError):
            default_ground_set(BasisInstance(A=[1], k=2), window_multiplier=0)


class TestMinBasis:
    def test_small_naturals(self):
        result = ell_over_domain(ElementSet([0, 1, 2]), 2)
        assert result.optimal_size == 2
        assert result.witness == ElementSet([0, 1])
        assert result.exact

    def test_zero_only(self):
        result = ell_over_domain(ElementSet([0]), 2)
        assert result.optimal_size == 1
        assert result.witness == ElementSet([0])

    def test_integer_window_prefers_smallest_witness(self):
        result = ell_over_domain(ElementSet([1]), 2, domain=Domain.INTEGERS)
        assert result.optimal_size == 2
        assert result.witness == ElementSet([-1, 2])
        assert not result.exact

        result = ell_over_domain(ElementSet([2]), 2, domain=Domain.INTEGERS)
        assert result.optimal_size == 1
        assert result.witness == ElementSet([1])

    def test_power_family(self):
        result = ell_over_domain(POWER_TARGETS, 2)
        assert result.optimal_size == 4
        assert result.exact
        covered, _ = is_k_basis(result.witness, POWER_TARGETS, 2)
        assert covered
        assert [c.target for c in result.certificates] == list(POWER_TARGETS)
        assert all(c.is_valid_for(result.witness, 2) for c in result.certificates)

    def test_empty_targets(self):
        instance = BasisInstance(A=[], k=2)
        ground = GroundSet(elements=ElementSet([0, 1]), exactness=Exactness.PROVEN_SUFFICIENT)
        result = min_basis(instance, ground)
        assert result.optimal_size == 0
        assert result.witness == ElementSet()

    def test_uncoverable_target(self):
        instance = BasisInstance(A=[5], k=2)
        ground = GroundSet(elements=ElementSet([0, 1]), exactness=Exactness.PROVEN_SUFFICIENT)
        with pytest.raises(InvalidInstanceError):
            min_basis(instance, ground)

    def test_ground_outside_domain(self):
        instance = BasisInstance(A=[2], k=2)
        ground = GroundSet(elements=ElementSet([-1, 1, 3]), exactness=Exactness.HEURISTIC_WINDOW)
        with pytest.raises(InvalidInstanceError):
            min_basis(instance, ground)

    def test_budget_exhausted_reports_greedy_bound(self):
        with pytest.raises(BudgetExhaustedError) as excinfo:
            ell_over_domain(POWER_TARGETS, 2, budget=1)
        error = excinfo.value
        assert error.best_size >= 4
        covered, _ = is_k_basis(ElementSet(error.best_witness), POWER_TARGETS, 2)
        assert covered

    @pytest.mark.parametrize("seed", range(20))
    @pytest.mark.parametrize("threads", [1, 4])
    def test_budget_bounds_nodes_explored(self, seed, threads):
        rng = random.Random(seed)
        targets = ElementSet(rng.sample(range(30), 6))
        nodes = ell_over_domain(targets, 2, threads=threads).nodes_explored

        exact = ell_over_domain(targets, 2, budget=nodes, threads=threads)
        assert exact.nodes_explored == nodes
        with pytest.raises(BudgetExhaustedError):
            ell_over_domain(targets, 2, budget=nodes - 1, threads=threads)

    def test_thread_count_does_not_change_result(self):
        single = ell_over_domain(POWER_TARGETS, 2, threads=1)
        multi = ell_over_domain(POWER_TARGETS, 2, threads=4)
        assert single.model_dump(mode="json") == multi.model_dump(mode="json")

    def test_json_uses_short_names(self):
        dumped = ell_over_domain(ElementSet([0, 1, 2]), 2).model_dump(mode="json", by_alias=True)
        assert set(dumped) == {"size", "basis", "exact", "certificates", "nodes"}
        assert dumped["basis"] == ["0", "1"]

    @pytest.mark.parametrize("seed", range(15))
    def test_matches_exhaustive_enumeration(self, seed):
        rng = random.Random(seed)
        width = rng.randint(8, 18)
        ground = ElementSet(range(width))
        k = rng.choice([2, 3])
        targets = ElementSet(rng.sample(range(k * (width - 1) + 1), rng.randint(1, 5)))
        instance = BasisInstance(A=targets, k=k)
        result = min_basis(instance, GroundSet(elements=ground, exactness=Exactness.PROVEN_SUFFICIENT))
        assert result.optimal_size == naive_min_size(targets, list(ground), k)

    @pytest.mark.parametrize("seed", range(10))
    def test_monotone_in_targets(self, seed):
        rng = random.Random(seed)
        targets = ElementSet(rng.sample(range(13), rng.randint(2, 6)))
        subset = ElementSet(list(targets)[: len(targets) // 2 + 1])
        assert ell_over_domain(subset, 2).optimal_size <= ell_over_domain(targets, 2).optimal_size

    def test_translation_invariance_over_integers(self):
        targets = ElementSet([1, 3])
        ground = GroundSet(elements=ElementSet(range(-4, 5)), exactness=Exactness.HEURISTIC_WINDOW)
        shifted_ground = GroundSet(elements=ElementSet(range(-1, 8)), exactness=Exactness.HEURISTIC_WINDOW)
        base = min_basis(BasisInstance(A=targets, k=2, domain="Z"), ground)
        moved = min_basis(BasisInstance(A=targets.shift(6), k=2, domain="Z"), shifted_ground)
        assert base.optimal_size == moved.optimal_size
        assert moved.witness == base.witness.shift(3)

    def test_rational_domain(self):
        result = ell_over_domain(ElementSet(["1/2", "1"]), 2, domain=Domain.SCALED_RATIONALS)
        covered, _ = is_k_basis(result.witness, ElementSet(["1/2", "1"]), 2)
        assert covered
        assert all((b * 2).denominator == 1 for b in result.witness)
        assert result.optimal_size == 2
