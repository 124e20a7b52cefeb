"""Analytic disparity formulas, boundary values, and bounds.

A `Scenario` fixes the scoring rule, one positive-definite cost matrix per
group, and a prior specification. Everything else in the module is a pure
scalar function of a scenario: equilibrium score and utility disparities
as functions of the noise scale, the exact zero-noise and infinite-noise
values, and the overlap bounds available when both groups share one cost.

Common-prior and projected-prior disparities are evaluated through one
shared routine over the same five derived constants, so the algebraic
reduction between the two prior families is also an implementation-level
identity rather than a coincidence of two formulas.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .agents import GroupParams, Metric, signal_weight
from .errors import (
    AssumptionViolated,
    CostsDiffer,
    DimensionMismatch,
    Error,
    NonCommuting,
    WrongPriorKind,
)
from .linalg_core import (
    CostMatrix,
    Definiteness,
    Projection,
    definiteness,
    kahan_dot,
    max_norm,
    quad_form,
    sym_sqrt,
)

COMMUTE_TOL = 1e-10
EQUAL_COST_TOL = 1e-12


@dataclass(frozen=True)
class NaivePrior:
    """Agents best-respond to the raw signal."""


@dataclass(frozen=True, eq=False)
class CommonPrior:
    """Both groups share an isotropic Gaussian prior around one mean."""

    mean: np.ndarray
    scale: float

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        object.__setattr__(self, "mean", mean)
        if mean.ndim != 1 or not np.all(np.isfinite(mean)):
            raise Error(f"prior mean must be a finite vector, got {self.mean}")
        if not (math.isfinite(self.scale) and self.scale >= 0.0):
            raise Error(f"prior scale must be finite and nonnegative, got {self.scale}")


@dataclass(frozen=True, eq=False)
class ProjectedPrior:
    """Each group's prior mean is the rule projected onto its known subspace."""

    subspace1: Projection
    subspace2: Projection
    scale: float

    def __post_init__(self):
        if self.subspace1.dim != self.subspace2.dim:
            raise DimensionMismatch(
                f"projector dims {self.subspace1.dim} and {self.subspace2.dim}"
            )
        if not (math.isfinite(self.scale) and self.scale >= 0.0):
            raise Error(f"prior scale must be finite and nonnegative, got {self.scale}")


@dataclass(frozen=True)
class DisparityConstants:
    """Scalar constants every disparity formula is built from.

    rule_sq is the full-transparency score disparity (the quadratic form of
    the rule in the inverse-cost gap metric) and trace_gap is the trace of
    that gap. For belief-carrying priors, cross and prior_sq are the gap
    metric Gram values pairing the prior mean with the rule, and mismatch
    is the squared gap-metric distance between them. prior_limit is the
    infinite-noise score disparity of a projected prior.
    """

    rule_sq: float
    trace_gap: float
    cross: "float | None" = None
    prior_sq: "float | None" = None
    mismatch: "float | None" = None
    prior_limit: "float | None" = None


class CurveKind(enum.Enum):
    SCORE_NAIVE = "score_naive"
    UTILITY_NAIVE = "utility_naive"
    SCORE_BAYES = "score_bayes"
    UTILITY_BAYES = "utility_bayes"
    SCORE_PROJECTED = "score_projected"
    UTILITY_PROJECTED = "utility_projected"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class DisparityCurve:
    """Sampled disparity values plus the exact analytic endpoints."""

    kind: CurveKind
    sigmas: np.ndarray
    values: np.ndarray
    value_at_zero: float
    value_at_infinity: float


def response_gap(cost1, cost2):
    """Difference of inverse costs, symmetrized."""
    g = cost1.inverse - cost2.inverse
    return 0.5 * (g + g.T)


@dataclass(frozen=True, eq=False)
class Scenario:
    """Scoring rule, per-group costs, and prior specification.

    Construction enforces that the second group's cost dominates the
    first's (their difference must be positive definite; an exactly zero
    difference is admitted only for projected priors, where the equal-cost
    overlap bounds apply) and precomputes the derived constants used by
    every formula.
    """

    rule: np.ndarray
    cost1: CostMatrix
    cost2: CostMatrix
    prior: "NaivePrior | CommonPrior | ProjectedPrior"
    label: str = ""
    constants: DisparityConstants = field(init=False)

    def __post_init__(self):
        rule = np.asarray(self.rule, dtype=float)
        object.__setattr__(self, "rule", rule)
        d = self.cost1.dim
        if self.cost2.dim != d:
            raise DimensionMismatch(f"cost dims {d} and {self.cost2.dim}")
        if rule.shape != (d,) or not np.all(np.isfinite(rule)):
            raise DimensionMismatch(f"rule shape {rule.shape} for dimension {d}")

        cost_gap_label = definiteness(self.cost2.matrix - self.cost1.matrix)
        if cost_gap_label is Definiteness.ZERO:
            if not isinstance(self.prior, ProjectedPrior):
                raise AssumptionViolated(
                    "equal costs are only admitted for projected priors"
                )
        elif cost_gap_label is not Definiteness.PD:
            raise AssumptionViolated(
                f"second cost must dominate the first; gap is {cost_gap_label}"
            )
        object.__setattr__(self, "cost_gap_label", cost_gap_label)

        gap = response_gap(self.cost1, self.cost2)
        if cost_gap_label is Definiteness.ZERO:
            gap = np.zeros((d, d))
            gap_sqrt = np.zeros((d, d))
        else:
            gap_sqrt = sym_sqrt(gap)
        object.__setattr__(self, "gap", gap)
        trace_gap = self.cost1.trace_inverse - self.cost2.trace_inverse
        if cost_gap_label is Definiteness.ZERO:
            trace_gap = 0.0

        kv_rule = gap_sqrt @ rule
        rule_sq = kahan_dot(kv_rule, kv_rule)

        if isinstance(self.prior, NaivePrior):
            constants = DisparityConstants(rule_sq=rule_sq, trace_gap=trace_gap)
            means = (np.zeros(d), np.zeros(d))
            commute_defect = 0.0
        elif isinstance(self.prior, CommonPrior):
            if self.prior.mean.shape != (d,):
                raise DimensionMismatch(
                    f"prior mean shape {self.prior.mean.shape} for dimension {d}"
                )
            kv_prior = gap_sqrt @ self.prior.mean
            cross = kahan_dot(kv_prior, kv_rule)
            prior_sq = kahan_dot(kv_prior, kv_prior)
            constants = DisparityConstants(
                rule_sq=rule_sq,
                trace_gap=trace_gap,
                cross=cross,
                prior_sq=prior_sq,
                mismatch=prior_sq + rule_sq - 2.0 * cross,
            )
            means = (self.prior.mean, self.prior.mean)
            commute_defect = 0.0
        elif isinstance(self.prior, ProjectedPrior):
            p1 = self.prior.subspace1
            p2 = self.prior.subspace2
            if p1.dim != d:
                raise DimensionMismatch(f"projector dim {p1.dim} for dimension {d}")
            known = self.cost1.inverse @ p1.matrix - self.cost2.inverse @ p2.matrix
            prior_limit = quad_form(rule, known)
            constants = DisparityConstants(
                rule_sq=rule_sq,
                trace_gap=trace_gap,
                cross=prior_limit,
                prior_sq=prior_limit,
                mismatch=rule_sq - prior_limit,
                prior_limit=prior_limit,
            )
            means = (p1.matrix @ rule, p2.matrix @ rule)
            commute_defect = max(
                max_norm(p1.matrix @ self.cost1.inverse - self.cost1.inverse @ p1.matrix),
                max_norm(p2.matrix @ self.cost2.inverse - self.cost2.inverse @ p2.matrix),
            )
        else:
            raise WrongPriorKind(f"unsupported prior {type(self.prior).__name__}")

        object.__setattr__(self, "trace_gap", trace_gap)
        object.__setattr__(self, "constants", constants)
        object.__setattr__(self, "prior_means", means)
        object.__setattr__(self, "commute_defect", commute_defect)
        sq = self.cost1.inverse @ self.cost1.inverse + self.cost2.inverse @ self.cost2.inverse
        object.__setattr__(self, "_variance_matrix", 0.5 * (sq + sq.T))

    @property
    def dim(self):
        return self.cost1.dim

    @property
    def prior_scale(self):
        """Prior scale, or 0.0 for the naive prior."""
        return getattr(self.prior, "scale", 0.0)

    @property
    def commuting(self):
        return self.commute_defect <= COMMUTE_TOL

    def group_params(self, group_id):
        cost = self.cost1 if group_id == 1 else self.cost2
        return GroupParams(cost, self.prior_means[group_id - 1], group_id)


def _require_prior(sc, prior_cls, op_name):
    if not isinstance(sc.prior, prior_cls):
        raise WrongPriorKind(
            f"{op_name} needs a {prior_cls.__name__}, "
            f"scenario has {type(sc.prior).__name__}"
        )


def _require_commuting(sc, op_name):
    if not sc.commuting:
        raise NonCommuting(
            f"{op_name}: projector/inverse-cost commutator norm "
            f"{sc.commute_defect:.3e} exceeds {COMMUTE_TOL:.0e}"
        )


def _require_equal_costs(sc, op_name):
    defect = max_norm(sc.cost1.matrix - sc.cost2.matrix)
    if defect > EQUAL_COST_TOL:
        raise CostsDiffer(f"{op_name}: cost matrices differ by {defect:.3e}")


def _score_level(constants, scale, sigma):
    w = signal_weight(scale, sigma)
    if sigma == 0.0:
        return constants.rule_sq
    return (1.0 - w) * constants.cross + w * constants.rule_sq


def _utility_level(constants, scale, sigma):
    w = signal_weight(scale, sigma)
    if sigma == 0.0:
        return 0.5 * constants.rule_sq
    tail = constants.cross - constants.prior_sq / 2.0
    spread = constants.mismatch + sigma * sigma * constants.trace_gap
    return -(w * w / 2.0) * spread + w * constants.mismatch + tail


def _score_limit(constants):
    return constants.cross


def _utility_limit(constants):
    return constants.cross - constants.prior_sq / 2.0


def disparity_constants(sc):
    """The precomputed scalar constants of a scenario."""
    return sc.constants


def score_disparity_naive(sc):
    """Equilibrium score disparity for naive agents; independent of noise."""
    _require_prior(sc, NaivePrior, "score_disparity_naive")
    return sc.constants.rule_sq


def score_variance_naive(sc, sigma):
    """Variance of the per-draw score difference between groups."""
    if sigma < 0.0:
        raise Error(f"noise scale {sigma} is negative")
    return sigma * sigma * quad_form(sc.rule, sc._variance_matrix)


def utility_disparity_naive(sc, sigma):
    """Utility disparity for naive agents: half the score gap minus a noise tax."""
    _require_prior(sc, NaivePrior, "utility_disparity_naive")
    if sigma < 0.0:
        raise Error(f"noise scale {sigma} is negative")
    c = sc.constants
    return 0.5 * (c.rule_sq - sigma * sigma * c.trace_gap)


def neutrality_sigma_naive(sc):
    """Noise scale at which the naive utility disparity crosses zero."""
    _require_prior(sc, NaivePrior, "neutrality_sigma_naive")
    if sc.trace_gap <= 0.0:
        raise AssumptionViolated("trace gap must be positive")
    return math.sqrt(sc.constants.rule_sq / sc.trace_gap)


def score_disparity_bayes(sc, sigma):
    """Score disparity under a shared Gaussian prior."""
    _require_prior(sc, CommonPrior, "score_disparity_bayes")
    return _score_level(sc.constants, sc.prior.scale, sigma)


def neutrality_sigma_score_bayes(sc):
    """Noise scale where the shared-prior score disparity vanishes, if any.

    A crossing exists exactly when the prior/rule pairing in the gap metric
    is negative; otherwise returns None.
    """
    _require_prior(sc, CommonPrior, "neutrality_sigma_score_bayes")
    if sc.prior.scale <= 0.0:
        raise Error("score neutrality needs a positive prior scale")
    c = sc.constants
    if c.cross >= 0.0:
        return None
    return math.sqrt(-c.rule_sq / c.cross) * sc.prior.scale


def utility_disparity_bayes(sc, sigma):
    """Utility disparity under a shared Gaussian prior."""
    _require_prior(sc, CommonPrior, "utility_disparity_bayes")
    return _utility_level(sc.constants, sc.prior.scale, sigma)


def score_disparity_projected(sc, sigma):
    """Score disparity when each group knows only its own subspace."""
    _require_prior(sc, ProjectedPrior, "score_disparity_projected")
    return _score_level(sc.constants, sc.prior.scale, sigma)


def utility_disparity_projected(sc, sigma):
    """Utility disparity for projected priors.

    Valid only when each projector commutes with its group's inverse cost;
    a violation raises NonCommuting rather than returning a wrong value.
    """
    _require_prior(sc, ProjectedPrior, "utility_disparity_projected")
    _require_commuting(sc, "utility_disparity_projected")
    return _utility_level(sc.constants, sc.prior.scale, sigma)


def overlap_proxy(sc):
    """Norm of the disagreement between the two projected prior means."""
    _require_prior(sc, ProjectedPrior, "overlap_proxy")
    diff = sc.prior_means[0] - sc.prior_means[1]
    return math.sqrt(kahan_dot(diff, diff))


def _shared_cost_norm(sc):
    return float(np.abs(sc.cost1.eigenvalues).max())


def score_overlap_bound(sc, sigma):
    """Upper bound on |score disparity| when both groups share one cost."""
    _require_prior(sc, ProjectedPrior, "score_overlap_bound")
    _require_equal_costs(sc, "score_overlap_bound")
    w = signal_weight(sc.prior.scale, sigma)
    rule_norm = math.sqrt(kahan_dot(sc.rule, sc.rule))
    return (1.0 - w) / _shared_cost_norm(sc) * rule_norm * overlap_proxy(sc)


def utility_overlap_bound(sc, sigma):
    """Upper bound on |utility disparity| when both groups share one cost."""
    _require_prior(sc, ProjectedPrior, "utility_overlap_bound")
    _require_equal_costs(sc, "utility_overlap_bound")
    _require_commuting(sc, "utility_overlap_bound")
    w = signal_weight(sc.prior.scale, sigma)
    rule_norm = math.sqrt(kahan_dot(sc.rule, sc.rule))
    return 0.5 * (1.0 - w) ** 2 / _shared_cost_norm(sc) * rule_norm * overlap_proxy(sc)


def noise_unit(sc):
    """Scale factor for noise grids: the prior scale, floored at one."""
    return max(sc.prior_scale, 1.0)


def sigma_grid(sc, points=241, lo=1e-3, hi=1e3):
    """Log-spaced noise grid covering the interesting range of a scenario."""
    u = noise_unit(sc)
    return np.geomspace(lo * u, hi * u, points)


def disparity_value(sc, metric, sigma):
    """Evaluate the analytic disparity of the scenario's own prior kind."""
    if isinstance(sc.prior, NaivePrior):
        if metric is Metric.SCORE:
            return score_disparity_naive(sc)
        return utility_disparity_naive(sc, sigma)
    if isinstance(sc.prior, CommonPrior):
        if metric is Metric.SCORE:
            return score_disparity_bayes(sc, sigma)
        return utility_disparity_bayes(sc, sigma)
    if metric is Metric.SCORE:
        return score_disparity_projected(sc, sigma)
    return utility_disparity_projected(sc, sigma)


_KIND_TABLE = {
    (NaivePrior, Metric.SCORE): CurveKind.SCORE_NAIVE,
    (NaivePrior, Metric.UTILITY): CurveKind.UTILITY_NAIVE,
    (CommonPrior, Metric.SCORE): CurveKind.SCORE_BAYES,
    (CommonPrior, Metric.UTILITY): CurveKind.UTILITY_BAYES,
    (ProjectedPrior, Metric.SCORE): CurveKind.SCORE_PROJECTED,
    (ProjectedPrior, Metric.UTILITY): CurveKind.UTILITY_PROJECTED,
}


def disparity_curve(sc, metric, sigmas=None, points=241):
    """Sample a disparity curve and attach its analytic endpoints.

    The infinite-noise endpoint is computed by substituting a zero signal
    weight, never by evaluating at a huge noise scale; for naive utility
    the limit is unbounded below and reported as -inf.
    """
    kind = _KIND_TABLE[(type(sc.prior), metric)]
    grid = sigma_grid(sc, points=points) if sigmas is None else np.asarray(sigmas, float)
    values = np.array([disparity_value(sc, metric, float(s)) for s in grid])
    c = sc.constants
    if metric is Metric.SCORE:
        at_zero = c.rule_sq
        at_inf = c.rule_sq if isinstance(sc.prior, NaivePrior) else _score_limit(c)
    else:
        at_zero = 0.5 * c.rule_sq
        at_inf = -math.inf if isinstance(sc.prior, NaivePrior) else _utility_limit(c)
    return DisparityCurve(kind, grid, values, at_zero, at_inf)
