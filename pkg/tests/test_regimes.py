"""Regime classification tests: frozen fixtures and structural conditions."""

import math

import numpy as np
import pytest

from flab.closed_form import CommonPrior, NaivePrior, ProjectedPrior, Scenario
from flab.errors import AssumptionViolated, InvalidBracket, NonCommuting, NonFinite
from flab.linalg_core import CostMatrix, Definiteness, Projection
from flab.regimes import (
    MatrixVerdict,
    RegionLabel,
    ScoreTrend,
    UtilityCase,
    classify_score_bayes,
    classify_utility_bayes,
    classify_utility_projected,
    classify_utility_projected_matrix,
    critical_prior_scale,
    exploitation_condition_projected,
    find_roots,
    label_region,
    monotonicity_condition_projected,
    neutrality_condition_projected,
    two_root_region_check,
)

RULE = np.array([1.0, 0.5])


@pytest.fixture
def costs():
    return CostMatrix(np.diag([2.0, 1.0])), CostMatrix(np.diag([4.0, 3.0]))


def common_scenario(costs, mean, scale):
    return Scenario(RULE, costs[0], costs[1], CommonPrior(np.asarray(mean, float), scale))


def projected_scenario(costs, mask1, mask2, scale):
    prior = ProjectedPrior(
        Projection(np.diag(np.asarray(mask1, float))),
        Projection(np.diag(np.asarray(mask2, float))),
        scale,
    )
    return Scenario(RULE, costs[0], costs[1], prior)


class TestLabelRegion:
    def test_signs(self):
        assert label_region(0.5) is RegionLabel.EXPLOITATION
        assert label_region(-0.5) is RegionLabel.BURDEN
        assert label_region(0.0) is RegionLabel.NEUTRALITY
        assert label_region(5e-11) is RegionLabel.NEUTRALITY

    def test_rejects_non_finite(self):
        with pytest.raises(NonFinite):
            label_region(math.nan)
        with pytest.raises(NonFinite):
            label_region(math.inf)


class TestFindRoots:
    def test_quadratic_roots_located(self):
        scan = find_roots(lambda x: (x - 1.0) * (x - 3.0), 0.5, 10.0)
        assert len(scan.crossings) == 2
        assert scan.crossings[0] == pytest.approx(1.0, rel=1e-9)
        assert scan.crossings[1] == pytest.approx(3.0, rel=1e-9)
        assert scan.tangential == ()

    def test_exact_grid_zero_counts_once(self):
        scan = find_roots(lambda x: x - 1.0, 0.5, 2.0, points=3)
        assert scan.crossings == (1.0,)

    def test_tangential_touch_reported_separately(self):
        grid = np.geomspace(0.5, 2.0, 2001)
        c = float(grid[1000])
        scan = find_roots(lambda x: (x - c) ** 2 + 1e-12, 0.5, 2.0)
        assert scan.crossings == ()
        assert len(scan.tangential) == 1
        assert scan.tangential[0] == pytest.approx(c, rel=1e-12)

    def test_no_roots(self):
        scan = find_roots(lambda x: 1.0 + x, 0.1, 10.0)
        assert scan.crossings == ()

    @pytest.mark.parametrize("lo,hi", [(0.0, 1.0), (-1.0, 1.0), (2.0, 1.0), (1.0, math.inf)])
    def test_invalid_brackets(self, lo, hi):
        with pytest.raises(InvalidBracket):
            find_roots(lambda x: x, lo, hi)


class TestScoreClassification:
    def test_increasing_for_aligned_prior(self, costs):
        shape = classify_score_bayes(common_scenario(costs, [0.5, 2.0], 1.0))
        assert shape.trend is ScoreTrend.INCREASING
        assert shape.neutrality_sigma is None
        assert not shape.norm_condition_holds

    def test_decreasing_with_crossing_for_opposed_prior(self, costs):
        shape = classify_score_bayes(common_scenario(costs, [-0.5, -2.0], 1.0))
        assert shape.trend is ScoreTrend.DECREASING
        assert shape.neutrality_sigma == pytest.approx(math.sqrt(10.0 / 19.0), rel=1e-12)

    def test_constant_for_matched_prior(self, costs):
        shape = classify_score_bayes(common_scenario(costs, RULE, 1.0))
        assert shape.trend is ScoreTrend.CONSTANT
        assert shape.norm_condition_holds


class TestUtilityClassificationCommon:
    def test_reference_nonmonotone_single_root(self, costs):
        regime = classify_utility_bayes(common_scenario(costs, [0.5, 2.0], 2.0))
        assert regime.case is UtilityCase.NON_MONOTONE
        assert regime.critical_scale == pytest.approx(1.846372364689991, rel=1e-12)
        assert regime.sigma_min == pytest.approx(5.203549084703927, rel=1e-12)
        assert regime.predicted_roots == 1
        assert regime.count_matches
        assert len(regime.roots) == 1
        assert regime.roots[0] == pytest.approx(0.7462449647770764, rel=1e-9)

    def test_below_critical_scale_is_monotone(self, costs):
        regime = classify_utility_bayes(common_scenario(costs, [0.5, 2.0], 1.0))
        assert regime.case is UtilityCase.MONOTONE_DECREASING
        assert regime.sigma_min is None
        # heavy prior: the large-noise limit is negative, one crossing
        assert regime.predicted_roots == 1
        assert regime.count_matches

    def test_matched_prior_minimum_at_prior_scale(self, costs):
        # mean equal to the rule: mismatch 0, minimum sits exactly at the
        # prior scale and stays positive, no crossings
        regime = classify_utility_bayes(common_scenario(costs, RULE, 1.0))
        assert regime.case is UtilityCase.NON_MONOTONE
        assert regime.critical_scale == 0.0
        assert regime.sigma_min == pytest.approx(1.0, rel=1e-12)
        assert regime.minimum_value == pytest.approx(0.09375, rel=1e-12)
        assert regime.predicted_roots == 0
        assert regime.count_matches

    def test_critical_prior_scale_op(self, costs):
        sc = common_scenario(costs, [0.5, 2.0], 1.0)
        assert critical_prior_scale(sc) == pytest.approx(1.846372364689991, rel=1e-12)


class TestTwoRootRegion:
    @pytest.fixture
    def fixture_scenario(self, costs):
        return common_scenario(costs, 0.4 * RULE, 1.5)

    def test_fixture_is_inside_region(self, fixture_scenario):
        assert two_root_region_check(fixture_scenario)

    def test_fixture_has_exactly_two_roots(self, fixture_scenario):
        regime = classify_utility_bayes(fixture_scenario)
        assert regime.case is UtilityCase.NON_MONOTONE
        assert regime.sigma_min == pytest.approx(1.622645593900361, rel=1e-12)
        assert regime.minimum_value == pytest.approx(-0.06969975490196073, rel=1e-12)
        assert regime.predicted_roots == 2
        assert regime.count_matches
        assert regime.roots[0] == pytest.approx(0.9104792783509308, rel=1e-9)
        assert regime.roots[1] == pytest.approx(3.089032410592724, rel=1e-9)

    def test_smaller_scale_leaves_region(self, costs):
        assert not two_root_region_check(common_scenario(costs, 0.4 * RULE, 1.2))

    def test_heavy_prior_never_in_region(self, costs):
        assert not two_root_region_check(common_scenario(costs, [0.5, 2.0], 50.0))


class TestProjectedClassification:
    def test_reference_masks_nonmonotone_no_roots(self, costs):
        regime = classify_utility_projected(projected_scenario(costs, [1, 0], [1, 1], 1.0))
        assert regime.case is UtilityCase.NON_MONOTONE
        assert regime.critical_scale == pytest.approx(math.sqrt(6.0 / 11.0), rel=1e-12)
        assert regime.sigma_min == pytest.approx(math.sqrt(2.2), rel=1e-12)
        assert regime.minimum_value == pytest.approx(0.05078125, rel=1e-12)
        assert regime.predicted_roots == 0
        assert regime.count_matches

    def test_noncommuting_rejected(self, costs):
        slanted = Projection.from_span([np.array([1.0, 1.0])])
        prior = ProjectedPrior(slanted, Projection.identity(2), 1.0)
        sc = Scenario(RULE, costs[0], costs[1], prior)
        with pytest.raises(NonCommuting):
            classify_utility_projected(sc)

    def test_minimum_location_versus_scale(self, costs):
        # the interior minimum sits at or above the prior scale exactly when
        # the rule carries at least as much gap mass as the known gap
        for mask1, mask2, scale in [([1, 0], [1, 1], 1.0), ([0, 0], [1, 1], 0.7)]:
            sc = projected_scenario(costs, mask1, mask2, scale)
            regime = classify_utility_projected(sc)
            if regime.case is UtilityCase.NON_MONOTONE:
                c = sc.constants
                expected = regime.sigma_min >= scale
                assert (c.rule_sq >= c.prior_limit) == expected


class TestMatrixConditions:
    def test_exploitation_guaranteed_when_first_knows_more(self, costs):
        sc = projected_scenario(costs, [1, 1], [1, 0], 1.0)
        report = exploitation_condition_projected(sc)
        assert report.label is Definiteness.PD
        assert report.guaranteed
        assert all(ok for _, ok in report.checks)

    def test_exploitation_not_guaranteed_for_reference_masks(self, costs):
        report = exploitation_condition_projected(
            projected_scenario(costs, [1, 0], [1, 1], 1.0)
        )
        assert report.label is Definiteness.INDEFINITE
        assert not report.guaranteed

    def test_neutrality_certificate_and_crossing(self, costs):
        sc = projected_scenario(costs, [0, 0], [1, 1], 2.0)
        result = neutrality_condition_projected(sc)
        assert result.report.label is Definiteness.ND
        assert result.report.guaranteed
        assert all(ok for _, ok in result.report.checks)
        assert result.sigma == pytest.approx(2.0 * math.sqrt(1.25), rel=1e-12)

    def test_neutrality_absent_for_aligned_masks(self, costs):
        result = neutrality_condition_projected(
            projected_scenario(costs, [1, 1], [1, 0], 1.0)
        )
        assert not result.report.guaranteed
        assert result.sigma is None

    def test_monotonicity_direction_both_ways(self, costs):
        down = monotonicity_condition_projected(
            projected_scenario(costs, [1, 0], [1, 1], 1.0)
        )
        assert down.label is Definiteness.PSD
        assert down.guaranteed
        assert all(ok for _, ok in down.checks)
        up = monotonicity_condition_projected(
            projected_scenario(costs, [1, 1], [0, 0], 1.0)
        )
        assert up.label is Definiteness.ND
        assert all(ok for _, ok in up.checks)


class TestMatrixClassifier:
    def test_full_knowledge_both_groups_never_monotone(self, costs):
        report = classify_utility_projected_matrix(
            projected_scenario(costs, [1, 1], [1, 1], 1.0)
        )
        assert report.known_label is Definiteness.PD
        assert report.unknown_label is Definiteness.ZERO
        assert report.verdict is MatrixVerdict.NON_MONOTONE_ALL
        assert report.samples_checked == 50
        assert report.samples_agree

    def test_no_knowledge_small_scale_monotone_for_every_rule(self, costs):
        report = classify_utility_projected_matrix(
            projected_scenario(costs, [0, 0], [0, 0], 0.5)
        )
        assert report.verdict is MatrixVerdict.MONOTONE_ALL
        assert report.samples_agree

    def test_no_knowledge_middle_scale_indeterminate(self, costs):
        report = classify_utility_projected_matrix(
            projected_scenario(costs, [0, 0], [0, 0], 1.0)
        )
        assert report.split_label is Definiteness.INDEFINITE
        assert report.verdict is MatrixVerdict.INDETERMINATE
        assert report.samples_checked == 0

    def test_reference_masks_violate_hypothesis(self, costs):
        with pytest.raises(AssumptionViolated):
            classify_utility_projected_matrix(
                projected_scenario(costs, [1, 0], [1, 1], 1.0)
            )

    def test_noncommuting_rejected(self, costs):
        slanted = Projection.from_span([np.array([1.0, 1.0])])
        prior = ProjectedPrior(slanted, slanted, 1.0)
        sc = Scenario(RULE, costs[0], costs[1], prior)
        with pytest.raises(NonCommuting):
            classify_utility_projected_matrix(sc)

    def test_explicit_stream_is_deterministic(self, costs):
        from flab.agents import normal_stream

        sc = projected_scenario(costs, [1, 1], [1, 1], 1.0)
        a = classify_utility_projected_matrix(sc, stream=normal_stream(3, (9,)))
        b = classify_utility_projected_matrix(sc, stream=normal_stream(3, (9,)))
        assert a == b


class TestGuards:
    def test_wrong_prior_kinds(self, costs):
        naive = Scenario(RULE, costs[0], costs[1], NaivePrior())
        from flab.errors import WrongPriorKind

        with pytest.raises(WrongPriorKind):
            classify_utility_bayes(naive)
        with pytest.raises(WrongPriorKind):
            classify_score_bayes(naive)
        with pytest.raises(WrongPriorKind):
            exploitation_condition_projected(naive)

    def test_equal_cost_classification_refused(self):
        cost = CostMatrix(np.diag([2.0, 1.0]))
        prior = ProjectedPrior(
            Projection(np.diag([1.0, 0.0])), Projection.identity(2), 1.0
        )
        sc = Scenario(RULE, cost, cost, prior)
        with pytest.raises(AssumptionViolated):
            classify_utility_projected(sc)
        with pytest.raises(AssumptionViolated):
            critical_prior_scale(sc)
