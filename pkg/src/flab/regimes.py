"""Regime classification and the numeric validation behind it.

Disparity curves are classified twice on purpose: once through the exact
case analysis (signs, critical scales, matrix definiteness) and once by
brute-force root counting on a log grid. The classifiers report both and
whether they agree, so a formula bug shows up as a disagreement instead
of silently propagating.
"""

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .agents import normal_stream, standard_normals
from .closed_form import (
    CommonPrior,
    ProjectedPrior,
    _require_commuting,
    _require_prior,
    noise_unit,
    score_disparity_projected,
    utility_disparity_bayes,
    utility_disparity_projected,
)
from .errors import AssumptionViolated, Error, InvalidBracket, NonFinite
from .linalg_core import (
    Definiteness,
    SpanRelation,
    definiteness,
    max_norm,
    quad_form,
    subspace_relation,
)

SIGN_TOL = 1e-10
TANGENT_TOL = 1e-11
_SEMI_POSITIVE = (Definiteness.PD, Definiteness.PSD, Definiteness.ZERO)
_SEMI_NEGATIVE = (Definiteness.ND, Definiteness.NSD, Definiteness.ZERO)


class RegionLabel(enum.Enum):
    EXPLOITATION = "Exploitation"
    NEUTRALITY = "Neutrality"
    BURDEN = "Burden"

    def __str__(self):
        return self.value


def label_region(value):
    """Sign of a disparity value with a small neutral band."""
    if not math.isfinite(value):
        raise NonFinite(f"cannot label non-finite value {value}")
    if value > SIGN_TOL:
        return RegionLabel.EXPLOITATION
    if value < -SIGN_TOL:
        return RegionLabel.BURDEN
    return RegionLabel.NEUTRALITY


@dataclass(frozen=True)
class RootScan:
    """Sign-change roots plus grid points that touch zero without crossing."""

    crossings: tuple
    tangential: tuple


def _bisect(fn, lo, hi, f_lo):
    for _ in range(300):
        if hi - lo <= 1e-12 * lo:
            break
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if f_mid == 0.0:
            return mid
        if (f_lo < 0.0) != (f_mid < 0.0):
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def find_roots(curve_fn, sigma_lo, sigma_hi, points=2001):
    """Locate zeros of a curve on a log grid over [sigma_lo, sigma_hi].

    Sign changes between adjacent grid points are refined by bisection
    until the bracket is below 1e-12 relative width. Grid points where the
    curve is tiny (|value| < 1e-11) but never changes sign are reported
    separately as tangential contacts rather than counted as roots.
    """
    lo = float(sigma_lo)
    hi = float(sigma_hi)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not 0.0 < lo < hi:
        raise InvalidBracket(f"need finite 0 < lo < hi, got ({sigma_lo}, {sigma_hi})")
    grid = np.geomspace(lo, hi, points)
    vals = [float(curve_fn(float(s))) for s in grid]
    crossings = []
    change = [False] * (len(grid) - 1)
    for i in range(len(grid) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            crossings.append(float(grid[i]))
            continue
        if a * b < 0.0:
            change[i] = True
            crossings.append(_bisect(curve_fn, float(grid[i]), float(grid[i + 1]), a))
    if vals[-1] == 0.0:
        crossings.append(float(grid[-1]))

    tangential = []
    cluster = []
    for i, v in enumerate(vals):
        near_change = (i > 0 and change[i - 1]) or (i < len(change) and change[i])
        if abs(v) < TANGENT_TOL and v != 0.0 and not near_change:
            cluster.append(i)
        elif cluster:
            best = min(cluster, key=lambda j: abs(vals[j]))
            tangential.append(float(grid[best]))
            cluster = []
    if cluster:
        best = min(cluster, key=lambda j: abs(vals[j]))
        tangential.append(float(grid[best]))
    return RootScan(tuple(sorted(crossings)), tuple(tangential))


def scan_domain(sc):
    """Default root-search interval, three decades either side of the unit."""
    u = noise_unit(sc)
    return 1e-3 * u, 1e3 * u


class ScoreTrend(enum.Enum):
    DECREASING = "Decreasing"
    INCREASING = "Increasing"
    CONSTANT = "Constant"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ScoreShape:
    """Monotonicity of the shared-prior score disparity plus crossing info."""

    trend: ScoreTrend
    neutrality_sigma: "float | None"
    norm_condition_holds: bool


def classify_score_bayes(sc):
    """Direction of the shared-prior score disparity in the noise scale.

    The curve runs from the full-transparency value to the prior-driven
    value, so its direction is the comparison of those two endpoints. Also
    reports whether the prior's gap-metric norm is dominated by the rule's,
    the certificate for a non-increasing curve.
    """
    from .closed_form import neutrality_sigma_score_bayes

    _require_prior(sc, CommonPrior, "classify_score_bayes")
    c = sc.constants
    tol = SIGN_TOL * (1.0 + abs(c.cross) + abs(c.rule_sq))
    if abs(c.cross - c.rule_sq) <= tol:
        trend = ScoreTrend.CONSTANT
    elif c.cross < c.rule_sq:
        trend = ScoreTrend.DECREASING
    else:
        trend = ScoreTrend.INCREASING
    return ScoreShape(
        trend,
        neutrality_sigma_score_bayes(sc),
        c.prior_sq <= c.rule_sq,
    )


class UtilityCase(enum.Enum):
    MONOTONE_DECREASING = "MonotoneDecreasing"
    NON_MONOTONE = "NonMonotone"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class UtilityRegime:
    """Case analysis of a utility disparity curve with numeric validation."""

    case: UtilityCase
    critical_scale: float
    sigma_min: "float | None"
    minimum_value: "float | None"
    predicted_roots: int
    roots: tuple
    tangential: tuple
    count_matches: bool
    constants: "object"


def critical_prior_scale(sc):
    """Prior scale below which the utility disparity decreases monotonically."""
    c = sc.constants
    if c.trace_gap <= 0.0:
        raise AssumptionViolated("trace gap must be positive")
    return math.sqrt(max(2.0 * c.mismatch / c.trace_gap, 0.0))


def _classify_utility(sc, curve_fn):
    c = sc.constants
    scale = sc.prior.scale
    if scale <= 0.0:
        raise Error("utility classification needs a positive prior scale")
    if c.trace_gap <= 0.0:
        raise AssumptionViolated("trace gap must be positive")
    crit_sq = 2.0 * c.mismatch / c.trace_gap
    critical = math.sqrt(max(crit_sq, 0.0))
    if scale * scale <= crit_sq:
        case = UtilityCase.MONOTONE_DECREASING
        sigma_min = None
        fu_min = None
    else:
        case = UtilityCase.NON_MONOTONE
        ratio = crit_sq / (scale * scale)
        sigma_min = scale * math.sqrt(1.0 / (1.0 - ratio))
        fu_min = curve_fn(sigma_min)

    if c.prior_sq > 2.0 * c.cross:
        predicted = 1
    elif case is UtilityCase.MONOTONE_DECREASING:
        predicted = 0
    elif fu_min > 0.0:
        predicted = 0
    elif fu_min < 0.0:
        predicted = 2
    else:
        predicted = 1
    scan = find_roots(curve_fn, *scan_domain(sc))
    return UtilityRegime(
        case=case,
        critical_scale=critical,
        sigma_min=sigma_min,
        minimum_value=fu_min,
        predicted_roots=predicted,
        roots=scan.crossings,
        tangential=scan.tangential,
        count_matches=len(scan.crossings) == predicted,
        constants=c,
    )


def classify_utility_bayes(sc):
    """Case analysis of the shared-prior utility disparity.

    Monotone decrease holds up to the critical prior scale; beyond it the
    curve dips to an interior minimum before rising toward its limit. The
    predicted crossing count (0, 1, or 2) is keyed on the prior norm test
    and the sign at the minimum, then checked against a numeric scan.
    """
    _require_prior(sc, CommonPrior, "classify_utility_bayes")
    return _classify_utility(sc, lambda s: utility_disparity_bayes(sc, s))


def classify_utility_projected(sc):
    """Same case analysis for projected priors via the shared constants."""
    _require_prior(sc, ProjectedPrior, "classify_utility_projected")
    _require_commuting(sc, "classify_utility_projected")
    return _classify_utility(sc, lambda s: utility_disparity_projected(sc, s))


def two_root_region_check(sc):
    """Whether the scenario sits in the region guaranteeing two crossings.

    The region demands a prior aligned enough with the rule (its gap-metric
    norm below twice the pairing) and a prior scale above both printed
    thresholds. Membership is monotone in the scale.
    """
    _require_prior(sc, CommonPrior, "two_root_region_check")
    c = sc.constants
    if c.trace_gap <= 0.0:
        raise AssumptionViolated("trace gap must be positive")
    if not c.prior_sq < 2.0 * c.cross:
        return False
    thr_a = math.sqrt((2.0 * c.cross - c.prior_sq + 3.0 * c.rule_sq) / c.trace_gap)
    thr_b = math.sqrt((2.0 / c.trace_gap) * math.sqrt(max(c.mismatch, 0.0)))
    return sc.prior.scale > max(thr_a, thr_b)


@dataclass(frozen=True, eq=False)
class MatrixConditionReport:
    """Definiteness evidence for one structural condition.

    ``guaranteed`` says the hypothesis label holds; ``checks`` lists the
    structural facts the hypothesis implies, each with its verification.
    """

    name: str
    matrix: np.ndarray
    label: Definiteness
    guaranteed: bool
    checks: tuple


def _known_matrix(sc):
    p1 = sc.prior.subspace1
    p2 = sc.prior.subspace2
    return sc.cost1.inverse @ p1.matrix - sc.cost2.inverse @ p2.matrix


def _unknown_matrix(sc):
    p1 = sc.prior.subspace1
    p2 = sc.prior.subspace2
    return (
        sc.cost1.inverse @ p1.complement().matrix
        - sc.cost2.inverse @ p2.complement().matrix
    )


def _sym(m):
    return 0.5 * (m + m.T)


def _is_identity(p):
    return max_norm(p.matrix - np.eye(p.dim)) <= 1e-9


def _is_zero(p):
    return max_norm(p.matrix) <= 1e-9


def exploitation_condition_projected(sc):
    """Certificate that the advantaged group leads at every noise scale.

    Holds for every rule exactly when the symmetrized known-subspace gap
    is positive semidefinite; strict definiteness further forces the first
    group to know the whole space.
    """
    _require_prior(sc, ProjectedPrior, "exploitation_condition_projected")
    s = _sym(_known_matrix(sc))
    lab = definiteness(s)
    guaranteed = lab in _SEMI_POSITIVE
    checks = []
    if guaranteed:
        rel = subspace_relation(
            sc.prior.subspace1.complement(), sc.prior.subspace2.complement()
        )
        checks.append(
            (
                "null space of first projector within null space of second",
                rel in (SpanRelation.EQUAL_SPAN, SpanRelation.FIRST_WITHIN_SECOND),
            )
        )
    if lab is Definiteness.PD:
        checks.append(("first projector is the identity", _is_identity(sc.prior.subspace1)))
    return MatrixConditionReport(
        "score exploitation at every noise scale", s, lab, guaranteed, tuple(checks)
    )


class NeutralityCondition(NamedTuple):
    report: MatrixConditionReport
    sigma: "float | None"


def neutrality_condition_projected(sc):
    """Certificate that the score disparity crosses zero for every rule.

    Requires the symmetrized known-subspace gap to be negative definite;
    the crossing scale follows from the scenario's own rule, and the
    implied structure (second projector is the identity, first is not) is
    verified alongside.
    """
    _require_prior(sc, ProjectedPrior, "neutrality_condition_projected")
    s = _sym(_known_matrix(sc))
    lab = definiteness(s)
    guaranteed = lab is Definiteness.ND
    checks = []
    sigma = None
    if guaranteed:
        checks.append(("second projector is the identity", _is_identity(sc.prior.subspace2)))
        checks.append(("first projector differs from the identity", not _is_identity(sc.prior.subspace1)))
        c = sc.constants
        sigma = math.sqrt(c.rule_sq / -c.prior_limit) * sc.prior.scale
        checks.append(
            (
                "score disparity vanishes at the crossing",
                abs(score_disparity_projected(sc, sigma)) <= 1e-10,
            )
        )
    return NeutralityCondition(
        MatrixConditionReport(
            "score neutrality for every rule", s, lab, guaranteed, tuple(checks)
        ),
        sigma,
    )


def monotonicity_condition_projected(sc):
    """Direction certificate for the projected score disparity.

    The symmetrized unknown-subspace gap decides the trend: semidefinite
    positive means non-increasing (and the first known subspace nests in
    the second), semidefinite negative the reverse. Strict labels force a
    projector to vanish outright.
    """
    _require_prior(sc, ProjectedPrior, "monotonicity_condition_projected")
    s = _sym(_unknown_matrix(sc))
    lab = definiteness(s)
    checks = []
    if lab in _SEMI_POSITIVE:
        rel = subspace_relation(sc.prior.subspace1, sc.prior.subspace2)
        checks.append(
            (
                "span of first projector within span of second",
                rel in (SpanRelation.EQUAL_SPAN, SpanRelation.FIRST_WITHIN_SECOND),
            )
        )
    if lab is Definiteness.PD:
        checks.append(("first projector is zero", _is_zero(sc.prior.subspace1)))
    if lab in (Definiteness.ND, Definiteness.NSD):
        rel = subspace_relation(sc.prior.subspace2, sc.prior.subspace1)
        checks.append(
            (
                "span of second projector within span of first",
                rel in (SpanRelation.EQUAL_SPAN, SpanRelation.FIRST_WITHIN_SECOND),
            )
        )
    if lab is Definiteness.ND:
        checks.append(("second projector is zero", _is_zero(sc.prior.subspace2)))
        checks.append(("first projector is nonzero", not _is_zero(sc.prior.subspace1)))
    return MatrixConditionReport(
        "score disparity trend", s, lab, lab is not Definiteness.INDEFINITE, tuple(checks)
    )


class MatrixVerdict(enum.Enum):
    MONOTONE_ALL = "MonotoneForEveryRule"
    NON_MONOTONE_ALL = "NonMonotoneForEveryRule"
    INDETERMINATE = "Indeterminate"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ProjectedMatrixReport:
    """Rule-agnostic utility classification from matrix definiteness alone."""

    known_label: Definiteness
    unknown_label: Definiteness
    split_label: Definiteness
    verdict: MatrixVerdict
    samples_checked: int
    samples_agree: bool


_RULE_CHECK_SEED = 2718
_RULE_CHECK_KEY = 7


def classify_utility_projected_matrix(sc, stream=None, samples=50):
    """Classify projected utility curves for every rule at once.

    Preconditions mirror the structural hypotheses: the symmetrized
    known-subspace gap must be positive semidefinite and the unknown-side
    gap semidefinite one way or the other, else AssumptionViolated. The
    verdict compares the squared prior scale against the unknown-side gap
    as matrices; a verdict is cross-checked on random unit rules drawn
    from the supplied stream.
    """
    _require_prior(sc, ProjectedPrior, "classify_utility_projected_matrix")
    _require_commuting(sc, "classify_utility_projected_matrix")
    c = sc.constants
    if c.trace_gap <= 0.0:
        raise AssumptionViolated("trace gap must be positive")
    scale = sc.prior.scale
    if scale <= 0.0:
        raise Error("matrix classification needs a positive prior scale")

    known = _sym(_known_matrix(sc))
    known_label = definiteness(known)
    if known_label not in _SEMI_POSITIVE:
        raise AssumptionViolated(
            f"known-subspace gap must be positive semidefinite, got {known_label}"
        )
    unknown = _sym(_unknown_matrix(sc))
    unknown_label = definiteness(unknown)
    if unknown_label is Definiteness.INDEFINITE:
        raise AssumptionViolated("unknown-subspace gap is indefinite")

    d = sc.dim
    split = (2.0 / c.trace_gap) * unknown - scale * scale * np.eye(d)
    split_label = definiteness(split)
    if split_label in _SEMI_POSITIVE:
        verdict = MatrixVerdict.MONOTONE_ALL
    elif split_label is Definiteness.ND:
        verdict = MatrixVerdict.NON_MONOTONE_ALL
    else:
        verdict = MatrixVerdict.INDETERMINATE

    if stream is None:
        stream = normal_stream(_RULE_CHECK_SEED, (_RULE_CHECK_KEY,))
    agree = True
    checked = 0
    band = 1e-8 * (1.0 + scale * scale)
    gap = sc.gap
    known_raw = _known_matrix(sc)
    if verdict is not MatrixVerdict.INDETERMINATE:
        for _ in range(samples):
            v = standard_normals(stream, d)
            norm = math.sqrt(float(v @ v))
            if norm < 1e-6:
                continue
            v = v / norm
            margin = (2.0 / c.trace_gap) * (
                quad_form(v, gap) - quad_form(v, known_raw)
            ) - scale * scale
            checked += 1
            if verdict is MatrixVerdict.MONOTONE_ALL and margin < -band:
                agree = False
            if verdict is MatrixVerdict.NON_MONOTONE_ALL and margin > band:
                agree = False
    return ProjectedMatrixReport(
        known_label, unknown_label, split_label, verdict, checked, agree
    )
