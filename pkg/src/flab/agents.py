"""Signal generation, posterior updates, and per-agent best responses.

Agents observe a noisy disclosure of the scoring rule and move their
features to maximize expected score gain minus a quadratic cost. A naive
agent takes the signal at face value; a Bayesian agent shrinks it toward
a prior mean first. Both responses are closed-form solves against the
group's cost matrix.

Response and evaluation functions accept either a single vector or a
stack of row vectors, so Monte Carlo callers can push whole populations
through the same code path that handles one agent.
"""

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import ndtri

from .errors import DegeneratePrior, DimensionMismatch, Error, NegativeSigma

_TWO_53 = float(2**53)


class Metric(enum.Enum):
    """Which realized quantity a disparity compares between groups."""

    SCORE = "score"
    UTILITY = "utility"

    def __str__(self):
        return self.value


def normal_stream(seed, key=()):
    """Independent counter-based random stream for (seed, key).

    Streams are value-typed: every call builds a fresh generator, so two
    consumers with the same (seed, key) see identical draws and never
    share mutable state.
    """
    entropy = (int(seed),) + tuple(int(k) for k in key)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def standard_normals(stream, shape):
    """Standard normal draws via inverse CDF on the counter stream.

    Uniforms are midpoints (k + 0.5) / 2^53 over 53-bit integers, so the
    output is bit-stable and never hits the distribution tails' infinities.
    """
    k = stream.integers(0, 2**53, size=shape)
    return ndtri((k + 0.5) / _TWO_53)


def signal_weight(prior_scale, sigma):
    """Posterior weight on the signal relative to the prior.

    Equals 1 at zero noise and 0 for a dogmatic (zero-scale) prior; both
    endpoints are returned exactly rather than through the generic ratio.
    """
    if sigma < 0.0:
        raise NegativeSigma(f"noise scale {sigma} is negative")
    if prior_scale < 0.0:
        raise Error(f"prior scale {prior_scale} is negative")
    if sigma == 0.0 and prior_scale == 0.0:
        raise DegeneratePrior("prior scale and noise scale are both zero")
    if sigma == 0.0:
        return 1.0
    if prior_scale == 0.0:
        return 0.0
    g2 = prior_scale * prior_scale
    s2 = sigma * sigma
    return g2 / (g2 + s2)


def posterior_variance(prior_scale, sigma):
    """Isotropic posterior variance scale."""
    if sigma == 0.0 or prior_scale == 0.0:
        return 0.0
    if math.isinf(sigma):
        return prior_scale * prior_scale
    g2 = prior_scale * prior_scale
    s2 = sigma * sigma
    return s2 * g2 / (s2 + g2)


@dataclass(frozen=True, eq=False)
class Signal:
    """Noisy disclosure of the scoring rule: one row per agent."""

    values: np.ndarray
    sigma: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if self.sigma < 0.0:
            raise NegativeSigma(f"noise scale {self.sigma} is negative")
        if not np.all(np.isfinite(values)):
            raise Error("signal has non-finite entries")


@dataclass(frozen=True, eq=False)
class Posterior:
    """Gaussian posterior summary: mean rows, shared variance, signal weight."""

    mean: np.ndarray
    variance: float
    weight: float


@dataclass(frozen=True, eq=False)
class GroupParams:
    """Cost matrix and prior mean for one agent group."""

    cost: "object"
    prior_mean: np.ndarray
    group_id: int

    def __post_init__(self):
        mean = np.asarray(self.prior_mean, dtype=float)
        object.__setattr__(self, "prior_mean", mean)
        if mean.shape != (self.cost.dim,):
            raise DimensionMismatch(
                f"prior mean shape {mean.shape} for cost dim {self.cost.dim}"
            )
        if self.group_id not in (1, 2):
            raise Error(f"group_id must be 1 or 2, got {self.group_id}")


class Realized(NamedTuple):
    score_gain: "float | np.ndarray"
    cost: "float | np.ndarray"
    utility_gain: "float | np.ndarray"


def _check_rows(values, dim, what):
    if values.shape[-1] != dim or values.ndim not in (1, 2):
        raise DimensionMismatch(f"{what} shape {values.shape} for dimension {dim}")


def sample_signal(rule, sigma, stream):
    """Draw one signal around the scoring rule at the given noise scale."""
    rule = np.asarray(rule, dtype=float)
    if sigma < 0.0:
        raise NegativeSigma(f"noise scale {sigma} is negative")
    z = standard_normals(stream, rule.shape)
    return Signal(rule + sigma * z, float(sigma))


def naive_best_response(group, signal):
    """Optimal feature change for an agent that trusts the signal outright."""
    _check_rows(signal.values, group.cost.dim, "signal")
    return signal.values @ group.cost.inverse


def bayesian_posterior(group, prior_scale, signal):
    """Combine the group prior with a signal into posterior parameters.

    The weight-1 and weight-0 endpoints return the signal and the prior
    mean verbatim, keeping zero-noise behavior exact.
    """
    _check_rows(signal.values, group.cost.dim, "signal")
    w = signal_weight(prior_scale, signal.sigma)
    if w == 1.0:
        mean = signal.values
    elif w == 0.0:
        mean = np.broadcast_to(group.prior_mean, signal.values.shape).copy()
    else:
        mean = group.prior_mean + w * (signal.values - group.prior_mean)
    return Posterior(mean, posterior_variance(prior_scale, signal.sigma), w)


def bayesian_best_response(group, posterior):
    """Optimal feature change against the posterior mean score rule."""
    _check_rows(np.asarray(posterior.mean), group.cost.dim, "posterior mean")
    return posterior.mean @ group.cost.inverse


def realized_quantities(group, rule, dx):
    """Score gain, quadratic cost, and net utility gain of a feature change.

    A single vector uses compensated scalar arithmetic; stacked rows use a
    fixed einsum contraction per row. Both are deterministic.
    """
    from .linalg_core import kahan_dot, quad_form

    rule = np.asarray(rule, dtype=float)
    dx = np.asarray(dx, dtype=float)
    _check_rows(dx, group.cost.dim, "feature change")
    if rule.shape != (group.cost.dim,):
        raise DimensionMismatch(f"rule shape {rule.shape} for dim {group.cost.dim}")
    a = group.cost.matrix
    if dx.ndim == 1:
        score = kahan_dot(rule, dx)
        cost = 0.5 * quad_form(dx, a)
    else:
        score = dx @ rule
        cost = 0.5 * np.einsum("ij,jk,ik->i", dx, a, dx)
    return Realized(score, cost, score - cost)
