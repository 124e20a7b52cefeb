"""Monte Carlo estimates of the disparities, built only from agent behavior.

The estimators here deliberately never call the closed-form evaluators:
each draw runs the per-agent pipeline (signal, best response, realized
score and cost) and averages the group difference. Agreement with the
analytic module is therefore evidence, not circularity.
"""

import math
from dataclasses import dataclass

import numpy as np

from .agents import (
    Metric,
    Signal,
    bayesian_best_response,
    bayesian_posterior,
    naive_best_response,
    normal_stream,
    realized_quantities,
    standard_normals,
)
from .errors import Error, NegativeSigma, WrongPriorKind, ZeroStderrMismatch

_STREAM_KEY = 101
_MIN_SAMPLES = 1000


@dataclass(frozen=True)
class McEstimate:
    """One Monte Carlo estimate with its standard error and provenance."""

    mean: float
    stderr: float
    n: int
    seed: int
    metric: Metric
    sigma: float


@dataclass(frozen=True)
class McComparison:
    analytic: float
    estimate: McEstimate
    z: float
    passed: bool


def tree_sum(values):
    """Sum by a fixed-shape pairwise tree, zero-padded to a power of two.

    The reduction order depends only on the input length, so totals are
    bit-identical however the surrounding work is scheduled.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1:
        raise Error(f"tree_sum expects a vector, got shape {v.shape}")
    if v.size == 0:
        return 0.0
    size = 1
    while size < v.size:
        size *= 2
    buf = np.zeros(size)
    buf[: v.size] = v
    while buf.size > 1:
        pairs = buf.reshape(-1, 2)
        buf = pairs[:, 0] + pairs[:, 1]
    return float(buf[0])


def _mean_and_stderr(diffs, n):
    mean = tree_sum(diffs) / n
    resid = diffs - mean
    var = tree_sum(resid * resid) / (n - 1)
    return mean, math.sqrt(var) / math.sqrt(n)


def _responses(sc, signal1, signal2):
    from .closed_form import NaivePrior

    g1 = sc.group_params(1)
    g2 = sc.group_params(2)
    if isinstance(sc.prior, NaivePrior):
        return naive_best_response(g1, signal1), naive_best_response(g2, signal2)
    scale = sc.prior.scale
    post1 = bayesian_posterior(g1, scale, signal1)
    post2 = bayesian_posterior(g2, scale, signal2)
    return bayesian_best_response(g1, post1), bayesian_best_response(g2, post2)


def _metric_diff(sc, metric, signal1, signal2):
    dx1, dx2 = _responses(sc, signal1, signal2)
    r1 = realized_quantities(sc.group_params(1), sc.rule, dx1)
    r2 = realized_quantities(sc.group_params(2), sc.rule, dx2)
    if metric is Metric.SCORE:
        return r1.score_gain - r2.score_gain
    return r1.utility_gain - r2.utility_gain


def estimate_disparity(sc, metric, sigma, n, seed):
    """Estimate a group disparity from n independent signal draws.

    Both groups see independent noise; draws are indexed (sample, group,
    coordinate) off one counter-based stream, so estimates at different
    noise levels share random numbers. At sigma = 0 the pipeline is
    deterministic and a single evaluation with zero standard error is
    returned.
    """
    metric = Metric(metric)
    sigma = float(sigma)
    if sigma < 0.0:
        raise NegativeSigma(f"sigma must be nonnegative, got {sigma}")
    n = int(n)
    if n < _MIN_SAMPLES:
        raise Error(f"need at least {_MIN_SAMPLES} samples, got {n}")

    if sigma == 0.0:
        s1 = Signal(sc.rule, 0.0)
        s2 = Signal(sc.rule, 0.0)
        value = float(_metric_diff(sc, metric, s1, s2))
        return McEstimate(value, 0.0, n, int(seed), metric, sigma)

    stream = normal_stream(seed, (_STREAM_KEY,))
    z = standard_normals(stream, (n, 2, sc.dim))
    s1 = Signal(sc.rule + sigma * z[:, 0, :], sigma)
    s2 = Signal(sc.rule + sigma * z[:, 1, :], sigma)
    diffs = _metric_diff(sc, metric, s1, s2)
    mean, stderr = _mean_and_stderr(diffs, n)
    return McEstimate(mean, stderr, n, int(seed), metric, sigma)


def estimate_variance_naive(sc, sigma, n, seed):
    """Estimate the variance of the naive score-gain difference.

    The standard error uses the chi-square approximation for a sample
    variance, s^2 * sqrt(2 / (n - 1)).
    """
    from .closed_form import NaivePrior

    if not isinstance(sc.prior, NaivePrior):
        raise WrongPriorKind(
            f"variance estimate is for the naive prior, scenario has "
            f"{type(sc.prior).__name__}"
        )
    sigma = float(sigma)
    if sigma < 0.0:
        raise NegativeSigma(f"sigma must be nonnegative, got {sigma}")
    n = int(n)
    if n < _MIN_SAMPLES:
        raise Error(f"need at least {_MIN_SAMPLES} samples, got {n}")

    if sigma == 0.0:
        return McEstimate(0.0, 0.0, n, int(seed), Metric.SCORE, sigma)

    stream = normal_stream(seed, (_STREAM_KEY,))
    z = standard_normals(stream, (n, 2, sc.dim))
    s1 = Signal(sc.rule + sigma * z[:, 0, :], sigma)
    s2 = Signal(sc.rule + sigma * z[:, 1, :], sigma)
    diffs = _metric_diff(sc, Metric.SCORE, s1, s2)
    mean = tree_sum(diffs) / n
    resid = diffs - mean
    var = tree_sum(resid * resid) / (n - 1)
    return McEstimate(var, var * math.sqrt(2.0 / (n - 1)), n, int(seed), Metric.SCORE, sigma)


def compare(analytic, estimate, z_max=4.0):
    """Compare an analytic value against a Monte Carlo estimate.

    With a positive standard error the discrepancy is scored in standard
    errors. A zero standard error means the estimate is exact, and the
    two values must agree to 1e-12 absolutely; a larger gap is an error,
    not a statistical fluke.
    """
    analytic = float(analytic)
    if estimate.stderr == 0.0:
        if abs(analytic - estimate.mean) <= 1e-12:
            return McComparison(analytic, estimate, 0.0, True)
        raise ZeroStderrMismatch(
            f"exact estimate {estimate.mean!r} differs from analytic "
            f"{analytic!r} by {abs(analytic - estimate.mean):.3e}"
        )
    z = (estimate.mean - analytic) / estimate.stderr
    return McComparison(analytic, estimate, z, abs(z) <= z_max)
