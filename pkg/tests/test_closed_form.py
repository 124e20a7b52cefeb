"""Closed-form evaluators pinned to independently derived values.

The reference configuration throughout: rule [1, 0.5], first cost
diag(2, 1), second cost diag(4, 3). All expected numbers were computed
by hand or with straightforward high-precision arithmetic, not by
running this package.
"""

import math

import numpy as np
import pytest

from flab.agents import Metric, signal_weight
from flab.closed_form import (
    CommonPrior,
    CurveKind,
    NaivePrior,
    ProjectedPrior,
    Scenario,
    disparity_constants,
    disparity_curve,
    disparity_value,
    neutrality_sigma_naive,
    neutrality_sigma_score_bayes,
    noise_unit,
    overlap_proxy,
    response_gap,
    score_disparity_bayes,
    score_disparity_naive,
    score_disparity_projected,
    score_overlap_bound,
    score_variance_naive,
    sigma_grid,
    utility_disparity_bayes,
    utility_disparity_naive,
    utility_disparity_projected,
    utility_overlap_bound,
)
from flab.errors import (
    AssumptionViolated,
    CostsDiffer,
    DimensionMismatch,
    NonCommuting,
    WrongPriorKind,
)
from flab.linalg_core import CostMatrix, Projection, max_norm

RULE = np.array([1.0, 0.5])
PRIOR_MEAN = np.array([0.5, 2.0])


@pytest.fixture
def costs():
    return CostMatrix(np.diag([2.0, 1.0])), CostMatrix(np.diag([4.0, 3.0]))


@pytest.fixture
def naive(costs):
    return Scenario(RULE, costs[0], costs[1], NaivePrior())


@pytest.fixture
def common(costs):
    return Scenario(RULE, costs[0], costs[1], CommonPrior(PRIOR_MEAN, 1.0))


@pytest.fixture
def projected(costs):
    prior = ProjectedPrior(
        Projection(np.diag([1.0, 0.0])), Projection.identity(2), 1.0
    )
    return Scenario(RULE, costs[0], costs[1], prior)


class TestScenarioConstruction:
    def test_response_gap_reference(self, costs):
        gap = response_gap(*costs)
        assert max_norm(gap - np.diag([0.5 - 0.25, 1.0 - 1.0 / 3.0])) == 0.0
        assert gap[1, 1] == pytest.approx(2.0 / 3.0, rel=1e-15)

    def test_trace_gap_reference(self, naive):
        assert naive.trace_gap == pytest.approx(11.0 / 12.0, rel=1e-14)

    def test_constants_reference(self, common):
        c = common.constants
        assert c.rule_sq == pytest.approx(5.0 / 12.0, rel=1e-12)
        assert c.cross == pytest.approx(19.0 / 24.0, rel=1e-12)
        assert c.prior_sq == pytest.approx(2.7291666666666665, rel=1e-12)
        assert c.mismatch == pytest.approx(1.5625, rel=1e-12)

    def test_mismatch_is_squared_gap_distance(self, costs):
        # identity: mismatch equals the squared gap-metric norm of mean-rule
        rng = np.random.default_rng(55)
        gap = response_gap(*costs)
        for _ in range(25):
            mean = rng.normal(size=2) * rng.uniform(0.1, 10.0)
            sc = Scenario(RULE, costs[0], costs[1], CommonPrior(mean, 1.0))
            delta = mean - RULE
            direct = float(delta @ gap @ delta)
            assert sc.constants.mismatch == pytest.approx(direct, rel=1e-10, abs=1e-12)

    def test_projected_constants_unify(self, projected):
        c = projected.constants
        assert c.prior_limit == pytest.approx(1.0 / 6.0, rel=1e-12)
        assert c.cross == c.prior_limit
        assert c.prior_sq == c.prior_limit
        assert c.mismatch == pytest.approx(c.rule_sq - c.prior_limit, rel=1e-14)

    def test_disparity_constants_op(self, common):
        assert disparity_constants(common) is common.constants

    def test_rejects_equal_costs_without_projection(self, costs):
        with pytest.raises(AssumptionViolated):
            Scenario(RULE, costs[0], costs[0], NaivePrior())

    def test_rejects_indefinite_cost_gap(self, costs):
        flipped = CostMatrix(np.diag([4.0, 0.5]))
        with pytest.raises(AssumptionViolated):
            Scenario(RULE, costs[0], flipped, NaivePrior())

    def test_rejects_dimension_mismatch(self, costs):
        with pytest.raises(DimensionMismatch):
            Scenario(np.array([1.0, 0.5, 0.2]), costs[0], costs[1], NaivePrior())
        with pytest.raises(DimensionMismatch):
            Scenario(RULE, costs[0], costs[1], CommonPrior(np.zeros(3), 1.0))

    def test_equal_costs_admitted_for_projected(self, projected):
        cost = CostMatrix(np.diag([2.0, 1.0]))
        sc = Scenario(RULE, cost, cost, projected.prior)
        assert sc.trace_gap == 0.0
        assert sc.constants.rule_sq == 0.0


class TestNaiveFormulas:
    def test_score_disparity_constant(self, naive):
        assert score_disparity_naive(naive) == pytest.approx(5.0 / 12.0, rel=1e-12)

    def test_variance_reference_value(self, naive):
        assert score_variance_naive(naive, 1.0) == pytest.approx(
            0.5902777777777778, rel=1e-13
        )

    def test_variance_scales_quadratically(self, naive):
        v1 = score_variance_naive(naive, 1.0)
        v2 = score_variance_naive(naive, 2.0)
        assert v2 == pytest.approx(4.0 * v1, rel=1e-13)
        assert score_variance_naive(naive, 0.0) == 0.0

    def test_utility_reference_value(self, naive):
        assert utility_disparity_naive(naive, 0.5) == pytest.approx(0.09375, rel=1e-12)

    def test_utility_zero_noise_is_half_score(self, naive):
        fu0 = utility_disparity_naive(naive, 0.0)
        assert fu0 == 0.5 * naive.constants.rule_sq

    def test_neutrality_sigma(self, naive):
        root = neutrality_sigma_naive(naive)
        assert root == pytest.approx(math.sqrt(5.0 / 11.0), rel=1e-13)
        assert utility_disparity_naive(naive, root) == pytest.approx(0.0, abs=1e-15)

    def test_wrong_prior_rejected(self, common):
        with pytest.raises(WrongPriorKind):
            score_disparity_naive(common)
        with pytest.raises(WrongPriorKind):
            neutrality_sigma_naive(common)


class TestCommonPriorFormulas:
    def test_score_reference_value(self, common):
        assert score_disparity_bayes(common, 1.0) == pytest.approx(
            0.6041666666666666, rel=1e-13
        )

    def test_utility_reference_value(self, common):
        assert utility_disparity_bayes(common, 1.0) == pytest.approx(
            -0.1015625, rel=1e-12
        )

    def test_boundary_values_exact(self, common):
        c = common.constants
        assert score_disparity_bayes(common, 0.0) == c.rule_sq
        assert utility_disparity_bayes(common, 0.0) == 0.5 * c.rule_sq

    def test_infinity_limits(self, common):
        c = common.constants
        big = 1e6 * noise_unit(common)
        assert score_disparity_bayes(common, big) == pytest.approx(c.cross, rel=1e-6)
        limit = c.cross - 0.5 * c.prior_sq
        assert limit == pytest.approx(-0.5729166666666666, rel=1e-13)
        assert utility_disparity_bayes(common, big) == pytest.approx(limit, rel=1e-6)

    def test_matched_prior_utility_value(self, costs):
        sc = Scenario(RULE, costs[0], costs[1], CommonPrior(RULE.copy(), 1.0))
        assert utility_disparity_bayes(sc, 1.0) == pytest.approx(0.09375, rel=1e-12)

    def test_neutrality_none_when_aligned(self, common):
        assert neutrality_sigma_score_bayes(common) is None

    def test_neutrality_value_when_opposed(self, costs):
        sc = Scenario(RULE, costs[0], costs[1], CommonPrior(-PRIOR_MEAN, 1.0))
        root = neutrality_sigma_score_bayes(sc)
        assert root == pytest.approx(math.sqrt(10.0 / 19.0), rel=1e-13)
        assert score_disparity_bayes(sc, root) == pytest.approx(0.0, abs=1e-14)

    def test_weight_consistency(self, common):
        # the score curve is affine in the signal weight
        for sigma in (0.3, 1.7, 6.0):
            w = signal_weight(1.0, sigma)
            c = common.constants
            expect = (1.0 - w) * c.cross + w * c.rule_sq
            assert score_disparity_bayes(common, sigma) == expect


class TestProjectedFormulas:
    def test_score_reference_value(self, projected):
        assert score_disparity_projected(projected, 1.0) == pytest.approx(
            7.0 / 24.0, rel=1e-13
        )

    def test_utility_limit(self, projected):
        big = 1e6
        c = projected.constants
        limit = c.cross - 0.5 * c.prior_sq
        assert limit == pytest.approx(1.0 / 12.0, rel=1e-13)
        assert utility_disparity_projected(projected, big) == pytest.approx(
            limit, rel=1e-6
        )

    def test_unknown_rule_prior_limit(self, costs):
        prior = ProjectedPrior(Projection.zero(2), Projection.identity(2), 1.0)
        sc = Scenario(RULE, costs[0], costs[1], prior)
        assert sc.constants.prior_limit == pytest.approx(-1.0 / 3.0, rel=1e-13)

    def test_noncommuting_rejected_for_utility(self, costs):
        slanted = Projection.from_span([np.array([1.0, 1.0])])
        prior = ProjectedPrior(slanted, Projection.identity(2), 1.0)
        sc = Scenario(RULE, costs[0], costs[1], prior)
        assert not sc.commuting
        with pytest.raises(NonCommuting):
            utility_disparity_projected(sc, 1.0)
        # the score formula needs no commutativity
        score_disparity_projected(sc, 1.0)

    def test_commuting_flag_for_diagonal_setup(self, projected):
        assert projected.commuting
        assert projected.commute_defect <= 1e-15


class TestOverlapBounds:
    @pytest.fixture
    def equal_cost(self):
        cost = CostMatrix(np.diag([2.0, 1.0]))
        prior = ProjectedPrior(
            Projection(np.diag([1.0, 0.0])), Projection.identity(2), 1.0
        )
        return Scenario(RULE, cost, cost, prior)

    def test_proxy_reference_value(self, equal_cost):
        assert overlap_proxy(equal_cost) == 0.5

    def test_score_bound_reference(self, equal_cost):
        # |F_s| = 0.25 (1-w) against bound 0.27951 (1-w)
        for sigma in (0.1, 1.0, 10.0):
            w = signal_weight(1.0, sigma)
            fs = score_disparity_projected(equal_cost, sigma)
            assert abs(fs) == pytest.approx(0.25 * (1.0 - w), rel=1e-12)
            bound = score_overlap_bound(equal_cost, sigma)
            assert bound == pytest.approx(
                0.2795084971874737 * (1.0 - w), rel=1e-12
            )
            assert abs(fs) <= bound

    def test_utility_bound_reference(self, equal_cost):
        for sigma in (0.1, 1.0, 10.0):
            w = signal_weight(1.0, sigma)
            fu = utility_disparity_projected(equal_cost, sigma)
            bound = utility_overlap_bound(equal_cost, sigma)
            assert bound == pytest.approx(
                0.13975424859373686 * (1.0 - w) ** 2, rel=1e-12
            )
            assert abs(fu) <= bound + 1e-15

    def test_identical_subspaces_give_zero(self):
        cost = CostMatrix(np.diag([2.0, 1.0]))
        p = Projection(np.diag([1.0, 0.0]))
        sc = Scenario(RULE, cost, cost, ProjectedPrior(p, p, 1.0))
        assert overlap_proxy(sc) == 0.0
        for sigma in (0.2, 2.0):
            assert score_disparity_projected(sc, sigma) == 0.0
            assert utility_disparity_projected(sc, sigma) == 0.0
            assert score_overlap_bound(sc, sigma) == 0.0

    def test_unequal_costs_rejected(self, projected):
        with pytest.raises(CostsDiffer):
            score_overlap_bound(projected, 1.0)
        with pytest.raises(CostsDiffer):
            utility_overlap_bound(projected, 1.0)


class TestCurves:
    def test_grid_shape_and_range(self, common):
        grid = sigma_grid(common)
        assert grid.shape == (241,)
        assert grid[0] == pytest.approx(1e-3, rel=1e-12)
        assert grid[-1] == pytest.approx(1e3, rel=1e-12)

    def test_grid_scales_with_prior(self, costs):
        sc = Scenario(RULE, costs[0], costs[1], CommonPrior(PRIOR_MEAN, 5.0))
        grid = sigma_grid(sc)
        assert grid[0] == pytest.approx(5e-3, rel=1e-12)
        assert grid[-1] == pytest.approx(5e3, rel=1e-12)

    def test_curve_kinds_and_endpoints(self, naive, common, projected):
        cn = disparity_curve(naive, Metric.UTILITY)
        assert cn.kind is CurveKind.UTILITY_NAIVE
        assert cn.value_at_infinity == -math.inf
        assert cn.value_at_zero == 0.5 * naive.constants.rule_sq
        cc = disparity_curve(common, Metric.SCORE)
        assert cc.kind is CurveKind.SCORE_BAYES
        assert cc.value_at_infinity == common.constants.cross
        cp = disparity_curve(projected, Metric.UTILITY, sigmas=[0.5, 1.0])
        assert cp.kind is CurveKind.UTILITY_PROJECTED
        assert cp.values[1] == utility_disparity_projected(projected, 1.0)

    def test_dispatcher_matches_direct_calls(self, naive, common, projected):
        assert disparity_value(naive, Metric.SCORE, 2.0) == score_disparity_naive(naive)
        assert disparity_value(common, Metric.UTILITY, 2.0) == utility_disparity_bayes(
            common, 2.0
        )
        assert disparity_value(
            projected, Metric.SCORE, 2.0
        ) == score_disparity_projected(projected, 2.0)

    def test_zero_rule_score_is_zero_but_costs_still_differ(self, costs):
        # a zero rule kills every score term, yet agents still chase noise
        # and pay for it at group-specific rates, so the utility disparity
        # keeps a pure noise term (confirmed against the MC oracle)
        sc = Scenario(np.zeros(2), costs[0], costs[1], CommonPrior(np.zeros(2), 1.0))
        for sigma in (0.0, 0.5, 3.0):
            assert score_disparity_bayes(sc, sigma) == 0.0
        assert utility_disparity_bayes(sc, 0.0) == 0.0
        for sigma in (0.5, 3.0):
            w = signal_weight(1.0, sigma)
            expect = -0.5 * w * w * sigma * sigma * sc.trace_gap
            assert utility_disparity_bayes(sc, sigma) == pytest.approx(expect, rel=1e-13)
