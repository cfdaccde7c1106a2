import numpy as np
import pytest

from designsearch.fitness import (
    EleganceConfig,
    FitnessError,
    MoWeights,
    UndefinedRatioError,
    atmr_fitness,
    coupling_fitness,
    evaluate_design,
    mo_fitness,
    nac_fitness,
)
from designsearch.problem import Design, DesignProblem


class TestCoupling:
    def test_all_internal_scores_100(self):
        problem = DesignProblem(
            "p", ("a0", "a1"), ("m0", "m1"), ((0, 0), (1, 1)), class_count=2
        )
        design = Design.from_classes([[0, 2], [1, 3]], 2)
        assert coupling_fitness(design, problem) == 100.0

    def test_toy_enumerated_values(self, toy):
        # brute force over both feasible 2-class pairings fixes these values
        best = Design.from_classes([[0, 2], [1, 3]], 2)
        other = Design.from_classes([[0, 3], [1, 2]], 2)
        assert coupling_fitness(best, toy) == pytest.approx(200 / 3)
        assert coupling_fitness(other, toy) == pytest.approx(100 / 3)

    def test_no_uses_is_an_error(self):
        problem = DesignProblem("p", ("a0",), ("m0",), (), class_count=1)
        design = Design.from_classes([[0, 1]], 1)
        with pytest.raises(FitnessError, match="no uses"):
            coupling_fitness(design, problem)

    def test_each_crossing_use_costs_100_over_u(self):
        # method 3 has exactly one use, so moving it across the boundary
        # changes the crossing count by exactly one
        problem = DesignProblem(
            "p",
            tuple(f"a{i}" for i in range(4)),
            tuple(f"m{i}" for i in range(4)),
            ((0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (2, 0), (3, 3)),
            class_count=2,
        )
        base = Design.from_classes([[0, 1, 4, 5], [2, 3, 6, 7]], 4)
        moved = Design.from_classes([[0, 1, 4, 5, 7], [2, 3, 6]], 4)
        delta = coupling_fitness(base, problem) - coupling_fitness(moved, problem)
        assert delta == pytest.approx(100 / 8)

    def test_invariant_under_class_relabeling(self, cbs_dim):
        rng = np.random.default_rng(5)
        design = cbs_dim.manual_design
        base = coupling_fitness(design, cbs_dim)
        for _ in range(10):
            order = rng.permutation(len(design.classes))
            shuffled = Design.from_classes(
                [sorted(design.classes[k]) for k in order], cbs_dim.attribute_count
            )
            assert coupling_fitness(shuffled, cbs_dim) == base


class TestElegance:
    def test_equal_sizes_score_100(self):
        design = Design.from_classes([[0, 2], [1, 3]], 2)
        assert nac_fitness(design) == 100.0

    def test_sizes_two_and_four(self):
        design = Design.from_classes([[0, 2], [1, 3, 4, 5]], 2)
        # population std of {2, 4} is 1.0
        assert nac_fitness(design) == pytest.approx(100 * (6 - 1) / 6)

    def test_ratio_spread(self):
        # ratios 1.0 and 3.0 -> population std 1.0
        design = Design.from_classes([[0, 4], [1, 2, 3, 5]], 4)
        assert atmr_fitness(design) == pytest.approx(100 * (6 - 1) / 6)

    def test_equal_ratios_score_100(self):
        design = Design.from_classes([[0, 2], [1, 3]], 2)
        assert atmr_fitness(design) == 100.0

    def test_zero_method_class_is_undefined(self):
        design = Design.from_classes([[0, 1], [2, 3]], 2)
        with pytest.raises(UndefinedRatioError):
            atmr_fitness(design)

    def test_unclamped_scores_can_go_negative(self):
        # ratios 15.0 and 1.0: population std 7.0 exceeds the scale of 6
        design = Design.from_classes(
            [list(range(15)) + [16], [15, 17]], attribute_count=16
        )
        assert atmr_fitness(design) == pytest.approx(100 * (6 - 7) / 6)

    def test_clamping_floors_at_zero(self):
        design = Design.from_classes(
            [list(range(15)) + [16], [15, 17]], attribute_count=16
        )
        clamped = EleganceConfig(clamp=True)
        assert atmr_fitness(design, clamped) == 0.0
        assert 0.0 <= nac_fitness(design, clamped) <= 100.0

    def test_scale_must_be_positive(self):
        with pytest.raises(ValueError):
            EleganceConfig(scale=0.0)


class FixedUniformRng:
    """Duck-typed stand-in whose uniform() returns a chosen value."""

    def __init__(self, value):
        self.value = value

    def uniform(self, low, high):
        assert low <= self.value <= high
        return self.value


class TestBlendedObjective:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            MoWeights(0.8, 0.1, 0.2)

    def test_all_components_100(self):
        problem = DesignProblem("p", ("a0", "a1"), ("m0", "m1"), ((0, 0), (1, 1)), 2)
        design = Design.from_classes([[0, 2], [1, 3]], 2)
        value, weights = mo_fitness(design, problem, np.random.default_rng(0))
        assert value == pytest.approx(100.0)
        assert weights.cbo + weights.nac + weights.atmr == pytest.approx(1.0)

    def test_pinned_weight_arithmetic(self, toy, toy_best):
        # components are (66.67, 100, 100); with b forced to 0.1:
        value, weights = mo_fitness(toy_best, toy, FixedUniformRng(0.1))
        assert weights.nac == pytest.approx(0.1)
        assert value == pytest.approx(0.8 * (200 / 3) + 0.1 * 100 + 0.1 * 100)

    def test_structural_only_components(self):
        # f_nac = f_atmr = 0 happens with deviation exactly at the scale
        problem = DesignProblem("p", ("a0", "a1"), ("m0", "m1"), ((0, 0), (1, 1)), 2)
        design = Design.from_classes([[0, 2], [1, 3]], 2)
        value, _ = mo_fitness(
            design, problem, FixedUniformRng(0.05), structural_weight=0.8
        )
        assert value == pytest.approx(100.0)  # all components 100 here

    def test_infeasible_rejected(self, toy):
        design = Design.from_classes([[0, 1], [2, 3]], 2)
        with pytest.raises(FitnessError, match="feasible"):
            mo_fitness(design, toy, np.random.default_rng(0))

    def test_weight_out_of_range(self, toy, toy_best):
        with pytest.raises(FitnessError):
            mo_fitness(toy_best, toy, np.random.default_rng(0), structural_weight=1.0)

    def test_deterministic_given_seed(self, toy, toy_best):
        a = mo_fitness(toy_best, toy, np.random.default_rng(123))
        b = mo_fitness(toy_best, toy, np.random.default_rng(123))
        assert a == b

    def test_expected_value_over_weight_noise(self, cbs_dim):
        design = cbs_dim.manual_design
        rng = np.random.default_rng(7)
        samples = [mo_fitness(design, cbs_dim, rng)[0] for _ in range(10_000)]
        expected = 0.8 * coupling_fitness(design, cbs_dim) + 0.1 * (
            nac_fitness(design) + atmr_fitness(design)
        )
        assert np.mean(samples) == pytest.approx(expected, abs=0.5)


class TestEvaluateDesign:
    def test_feasible_vector(self, toy, toy_best):
        vector = evaluate_design(toy_best, toy)
        assert vector.f_cbo == pytest.approx(200 / 3)
        assert vector.f_nac == 100.0
        assert vector.f_atmr == 100.0
        assert vector.f_mo is None
        assert not vector.infeasible_zeroed

    def test_infeasible_zeroed(self, toy):
        design = Design.from_classes([[0, 1], [2, 3]], 2)
        vector = evaluate_design(design, toy)
        assert (vector.f_cbo, vector.f_nac, vector.f_atmr) == (0.0, 0.0, 0.0)
        assert vector.infeasible_zeroed
