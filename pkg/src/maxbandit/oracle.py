"""Numerical companions to the best-reward bandit theory.

Covers four things: closed-form expected improvement for Gaussian arms
(the integral of the survival function above an incumbent), distribution
bounds (expected-maximum brackets for Gaussians, Bernstein-style
confidence bounds for second moments, integral bounds for the erfc tail),
the two oracle notions those support (the horizon-dependent single-armed
oracle and the incumbent-greedy oracle), and Monte Carlo regret estimates
against an oracle policy.

The two stock arm sets demonstrate why the oracles behave differently:
``HORIZON_SENSITIVE_ARMS`` has a certified best single arm that switches
twice as the horizon grows; ``INCUMBENT_SENSITIVE_ARMS`` makes the greedy
oracle's choice sweep through all three arms as the incumbent best reward
rises.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from statistics import NormalDist
from typing import Sequence

import numpy as np

from .policies.base import Policy
from .seeding import derive_seed
from .synthetic import GaussianArmSpec, SyntheticProblem, run_episode

__all__ = [
    "GaussianArm",
    "HORIZON_SENSITIVE_ARMS",
    "INCUMBENT_SENSITIVE_ARMS",
    "gaussian_ei",
    "gaussian_max_expectation_bounds",
    "SingleArmedDecision",
    "single_armed_oracle",
    "kikkawa_greedy_select",
    "RegretReport",
    "carpentier_regret",
    "nishihara_regret",
    "bernstein_bounds",
    "erfc_integral_bounds",
]

_SQRT2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
#: Lower-bound constant 1/sqrt(pi * ln 2) of the Gaussian expected maximum.
_MAX_LOWER_COEFF = 1.0 / math.sqrt(math.pi * math.log(2.0))


@dataclass(frozen=True)
class GaussianArm:
    """Gaussian reward arm parameterized by mean and *variance*."""

    mean: float
    variance: float

    def __post_init__(self):
        if self.variance <= 0:
            raise ValueError(f"variance must be positive, got {self.variance}")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)


#: Certified best single arm switches with the horizon: arm 0 up to T=11,
#: arm 1 around T=1e12, arm 2 only beyond T~4e202.
HORIZON_SENSITIVE_ARMS = (
    GaussianArm(0.0, 0.01),
    GaussianArm(-1.0, 0.25),
    GaussianArm(-15.0, 4.0),
)

#: Greedy-oracle choice sweeps 0 -> 1 -> 2 as the incumbent rises
#: (boundaries near 1.3, 7.0-11.9, 18.9).
INCUMBENT_SENSITIVE_ARMS = (
    GaussianArm(0.0, 1.0),
    GaussianArm(-2.0, 2.0),
    GaussianArm(-6.0, 3.0),
)


def _phi(x: float) -> float:
    return math.exp(-0.5 * x * x) / _SQRT_2PI


def _Phi(x: float) -> float:
    return 0.5 * math.erfc(-x / _SQRT2)


def gaussian_ei(mu: float, sigma: float, r0: float) -> float:
    """Expected improvement of one Normal(mu, sigma^2) draw over incumbent r0.

    Equals the integral of the survival function from r0 to infinity,
    in closed form (mu - r0) * Phi(z) + sigma * phi(z) with
    z = (mu - r0) / sigma.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    z = (mu - r0) / sigma
    return (mu - r0) * _Phi(z) + sigma * _phi(z)


def gaussian_max_expectation_bounds(mu: float, sigma: float, T: int) -> tuple[float, float]:
    """Bracket E[max of T iid Normal(mu, sigma^2) draws].

    lower = mu + sigma * sqrt(ln T) / sqrt(pi ln 2); upper = mu +
    sqrt(2) * sigma * sqrt(ln T).  Valid for T >= 2 (and degenerate but
    exact at sigma = 0).
    """
    if T < 2:
        raise ValueError(f"bounds need T >= 2, got {T}")
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    root_log = math.sqrt(math.log(T))
    return mu + sigma * root_log * _MAX_LOWER_COEFF, mu + _SQRT2 * sigma * root_log


@dataclass(frozen=True)
class SingleArmedDecision:
    """Outcome of the bound-certified single-armed oracle.

    ``arm`` is the certified best single arm for the horizon, or None when
    the brackets overlap (undetermined).  When undetermined and Monte Carlo
    samples were requested, ``mc_arm``/``mc_estimates`` carry a simulation
    estimate as a disambiguation hint (not a certification).
    """

    arm: int | None
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    mc_arm: int | None = None
    mc_estimates: tuple[float, ...] | None = None

    @property
    def certified(self) -> bool:
        return self.arm is not None


def single_armed_oracle(
    arms: Sequence[GaussianArm],
    T: int,
    mc_samples: int = 0,
    seed: int = 0,
) -> SingleArmedDecision:
    """Best single arm for horizon T, certified by expected-maximum bounds.

    Arm k is certified when its lower bound exceeds every other arm's
    upper bound; otherwise the result is undetermined.  The optional Monte
    Carlo estimate samples each arm's T-draw maximum through the inverse
    CDF (one uniform per sample, so huge T costs nothing extra; limited to
    T below ~1e15 by double precision near the upper tail).
    """
    bounds = [gaussian_max_expectation_bounds(a.mean, a.sigma, T) for a in arms]
    lower = tuple(b[0] for b in bounds)
    upper = tuple(b[1] for b in bounds)
    certified = None
    for k in range(len(arms)):
        if all(lower[k] > upper[j] for j in range(len(arms)) if j != k):
            certified = k
            break
    mc_arm = None
    mc_estimates = None
    if certified is None and mc_samples > 0:
        if T > 10 ** 15:
            raise ValueError("Monte Carlo disambiguation supports T up to ~1e15")
        rng = random.Random(seed)
        inv_cdf = NormalDist().inv_cdf
        estimates = []
        for arm in arms:
            total = 0.0
            for _ in range(mc_samples):
                p = math.exp(math.log(rng.random()) / T)
                total += arm.mean + arm.sigma * inv_cdf(p)
            estimates.append(total / mc_samples)
        mc_estimates = tuple(estimates)
        mc_arm = max(range(len(arms)), key=estimates.__getitem__)
    return SingleArmedDecision(certified, lower, upper, mc_arm, mc_estimates)


def kikkawa_greedy_select(arms: Sequence[GaussianArm], r_max: float) -> int:
    """Greedy oracle: the arm with the largest expected improvement over the
    *observed* incumbent.  Ties (including all-zero improvements deep in the
    tails) go to the lowest index."""
    if not arms:
        raise ValueError("need at least one arm")
    values = [gaussian_ei(a.mean, a.sigma, r_max) for a in arms]
    best = max(values)
    return values.index(best)


# ---------------------------------------------------------------------------
# regret estimation


@dataclass(frozen=True)
class RegretReport:
    """Monte Carlo comparison of a policy against an oracle policy.

    ``carpentier`` is the difference of expected maxima at the horizon;
    ``nishihara`` is the normalized catch-up horizon T'/T (smallest T'
    where the policy's expected maximum reaches the oracle's at T), with
    ``nishihara_capped`` set when the search hit its cap first.
    """

    oracle_expected_max: float
    policy_expected_max: float
    carpentier: float | None = None
    carpentier_stderr: float | None = None
    nishihara: float | None = None
    nishihara_capped: bool = False


def _as_problem(arms: Sequence[GaussianArm]) -> SyntheticProblem:
    specs = tuple(GaussianArmSpec(a.mean, a.sigma) for a in arms)
    return SyntheticProblem("oracle-arms", specs, optimal_arm=0)


def _final_maxima(problem, policy: Policy, T: int, mc_samples: int, seed: int) -> np.ndarray:
    out = np.empty(mc_samples)
    for i in range(mc_samples):
        out[i] = run_episode(problem, policy, T, derive_seed(seed, i)).running_max[-1]
    return out


def carpentier_regret(
    oracle_policy: Policy,
    eval_policy: Policy,
    arms: Sequence[GaussianArm],
    T: int,
    mc_samples: int,
    seed: int = 0,
) -> RegretReport:
    """Expected-maximum difference oracle minus policy, with pooled stderr.

    Both policies see the same per-sample random streams (common random
    numbers), so identical policies report exactly zero regret.
    """
    if mc_samples < 1:
        raise ValueError("mc_samples must be >= 1")
    problem = _as_problem(arms)
    oracle_max = _final_maxima(problem, oracle_policy, T, mc_samples, seed)
    eval_max = _final_maxima(problem, eval_policy, T, mc_samples, seed)
    if mc_samples >= 2:
        stderr = math.sqrt(
            oracle_max.var(ddof=1) / mc_samples + eval_max.var(ddof=1) / mc_samples
        )
    else:
        stderr = math.nan
    return RegretReport(
        oracle_expected_max=float(oracle_max.mean()),
        policy_expected_max=float(eval_max.mean()),
        carpentier=float(oracle_max.mean() - eval_max.mean()),
        carpentier_stderr=stderr,
    )


def nishihara_regret(
    oracle_policy: Policy,
    eval_policy: Policy,
    arms: Sequence[GaussianArm],
    T: int,
    mc_samples: int,
    seed: int = 0,
    cap: float = 10.0,
) -> RegretReport:
    """Normalized catch-up horizon T'/T of the policy against the oracle.

    The policy's episodes run once to ``cap * T`` steps; prefix maxima give
    its estimated expected-maximum curve at every T' simultaneously (common
    random numbers across policies and horizons).  The curve is
    non-decreasing, so the crossing is a single scan.
    """
    if mc_samples < 1:
        raise ValueError("mc_samples must be >= 1")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    problem = _as_problem(arms)
    target = float(_final_maxima(problem, oracle_policy, T, mc_samples, seed).mean())
    horizon = int(math.ceil(cap * T))
    curves = np.empty((mc_samples, horizon))
    for i in range(mc_samples):
        curves[i] = run_episode(problem, eval_policy, horizon, derive_seed(seed, i)).running_max
    curve = curves.mean(axis=0)
    reached = np.nonzero(curve >= target)[0]
    if len(reached) == 0:
        return RegretReport(
            oracle_expected_max=target,
            policy_expected_max=float(curve[T - 1]),
            nishihara=float(horizon) / T,
            nishihara_capped=True,
        )
    t_prime = int(reached[0]) + 1
    return RegretReport(
        oracle_expected_max=target,
        policy_expected_max=float(curve[T - 1]),
        nishihara=t_prime / T,
        nishihara_capped=False,
    )


# ---------------------------------------------------------------------------
# concentration bounds


def bernstein_bounds(samples: Sequence[float], alpha: float, b: float) -> tuple[float, float]:
    """Two-sided Bernstein-style confidence bounds for a sub-exponential mean.

    With beta = sqrt(-ln(alpha) / n):

        mean - (beta^2 + 2 sqrt(2) beta) * b
            <= E[x] <=
        mean + gamma_minus * b,

    where gamma_minus = -beta^2 + 2 sqrt(2) beta for beta < 1/sqrt(2) and
    1 + beta^2 beyond.  At alpha = 1 both bounds collapse to the sample
    mean.
    """
    n = len(samples)
    if n == 0:
        raise ValueError("need at least one sample")
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    if b <= 0:
        raise ValueError(f"b must be positive, got {b}")
    mean = sum(samples) / n
    beta = math.sqrt(-math.log(alpha) / n)
    gamma_plus = beta * beta + 2.0 * _SQRT2 * beta
    if beta < 1.0 / _SQRT2:
        gamma_minus = -beta * beta + 2.0 * _SQRT2 * beta
    else:
        gamma_minus = 1.0 + beta * beta
    return mean - gamma_plus * b, mean + gamma_minus * b


def erfc_integral_bounds(y: float, beta: float) -> tuple[float, float]:
    """Bracket (1/2) * integral of erfc(x) from y to infinity.

    lower = (sqrt(pi) c^2 / (4 sqrt(beta))) * exp(-beta^2 y^2) with
    c = sqrt(2e/pi) * sqrt(beta - 1) / beta, and
    upper = (sqrt(pi)/4) * exp(-y^2).  Requires y > 0 and beta > 1; the
    lower bound vanishes as beta -> 1+.
    """
    if y <= 0:
        raise ValueError(f"y must be positive, got {y}")
    if beta <= 1:
        raise ValueError(f"beta must exceed 1, got {beta}")
    c = math.sqrt(2.0 * math.e / math.pi) * math.sqrt(beta - 1.0) / beta
    lower = math.sqrt(math.pi) * c * c / (4.0 * math.sqrt(beta)) * math.exp(-beta * beta * y * y)
    upper = math.sqrt(math.pi) / 4.0 * math.exp(-y * y)
    return lower, upper
