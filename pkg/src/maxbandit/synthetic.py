"""Gaussian bandit benchmarks: problem definitions, episode runner, and
aggregation of runs into per-step transition series.

Three fixed problems exercise different regimes of best-reward search:

* ``easy`` - the largest-variance arm wins despite the worst mean, so
  max-reward rules and total-reward rules disagree sharply.
* ``difficult`` - means and variances are tuned so the best arm for the
  maximum is neither the best-mean arm nor the largest-variance arm over
  practical horizons.
* ``unfavorable`` - equal variances, so the conventional mean-based rule
  is already optimal and variance estimation is pure overhead.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .policies.base import Policy
from .records import new_records, update

__all__ = [
    "GaussianArmSpec",
    "SyntheticProblem",
    "PROBLEM_NAMES",
    "make_problem",
    "RunTrajectory",
    "run_episode",
    "TransitionSeries",
    "aggregate",
]


@dataclass(frozen=True)
class GaussianArmSpec:
    """One arm's reward distribution: Normal(mu, sigma**2)."""

    mu: float
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class SyntheticProblem:
    """A named arm set plus the arm that is optimal for the observed maximum
    at the benchmark horizon (T = 10,000)."""

    name: str
    arms: tuple[GaussianArmSpec, ...]
    optimal_arm: int

    def __post_init__(self):
        if not 0 <= self.optimal_arm < len(self.arms):
            raise ValueError(f"optimal_arm {self.optimal_arm} out of range")


_PROBLEMS = {
    "easy": SyntheticProblem(
        "easy",
        (GaussianArmSpec(1.0, 1.0), GaussianArmSpec(0.0, 2.0), GaussianArmSpec(-1.0, 3.0)),
        optimal_arm=2,
    ),
    "difficult": SyntheticProblem(
        "difficult",
        (GaussianArmSpec(-0.2, 1.1), GaussianArmSpec(0.0, 1.0), GaussianArmSpec(-0.8, 1.2)),
        optimal_arm=0,
    ),
    "unfavorable": SyntheticProblem(
        "unfavorable",
        (GaussianArmSpec(1.0, 1.0), GaussianArmSpec(0.0, 1.0), GaussianArmSpec(-1.0, 1.0)),
        optimal_arm=0,
    ),
}

PROBLEM_NAMES = tuple(_PROBLEMS)


def make_problem(name: str) -> SyntheticProblem:
    try:
        return _PROBLEMS[name]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; known problems: {', '.join(_PROBLEMS)}") from None


@dataclass
class RunTrajectory:
    """Per-step record of one run: selected arm, reward, running maximum."""

    arms: np.ndarray  # int32, shape (T,)
    rewards: np.ndarray  # float64, shape (T,)
    running_max: np.ndarray  # float64, shape (T,)

    def __len__(self) -> int:
        return len(self.rewards)


def run_episode(problem: SyntheticProblem, policy: Policy, T: int, seed: int) -> RunTrajectory:
    """Run one seeded episode of ``T`` pulls; bit-reproducible per seed.

    A single random stream drives both the policy's tie-breaks and the
    Gaussian reward draws, so the full trajectory is a function of
    (problem, policy configuration, T, seed).
    """
    if T < 1:
        raise ValueError(f"horizon must be >= 1, got T={T}")
    rng = random.Random(seed)
    K = len(problem.arms)
    shared, arms = new_records(K)
    policy.start_run(K, T)
    mus = [a.mu for a in problem.arms]
    sigmas = [a.sigma for a in problem.arms]
    gauss = rng.gauss
    select = policy.select
    record = policy.record
    ks: list[int] = []
    rs: list[float] = []
    rm: list[float] = []
    best = -math.inf
    for _ in range(T):
        k = select(shared, arms, rng)
        r = gauss(mus[k], sigmas[k])
        update(shared, arms, k, r)
        record(k, r)
        ks.append(k)
        rs.append(r)
        if r > best:
            best = r
        rm.append(best)
    return RunTrajectory(
        np.asarray(ks, dtype=np.int32),
        np.asarray(rs, dtype=np.float64),
        np.asarray(rm, dtype=np.float64),
    )


@dataclass
class TransitionSeries:
    """Per-step aggregates of a set of runs.

    ``max_stderr`` is the sample standard deviation across runs divided by
    sqrt(n_runs) (zero for a single run).  ``opt_ratio`` is the fraction of
    runs selecting the optimal arm at each step, or None when no optimal
    arm is defined (tree-search experiments).  The median/quartile columns
    are filled only when quantile aggregation is requested.
    """

    t: np.ndarray
    max_mean: np.ndarray
    max_stderr: np.ndarray
    opt_ratio: np.ndarray | None
    max_median: np.ndarray | None = None
    max_q25: np.ndarray | None = None
    max_q75: np.ndarray | None = None
    n_runs: int = 0

    def __len__(self) -> int:
        return len(self.t)


def aggregate(
    trajectories: Sequence[RunTrajectory],
    optimal_arm: int | None = None,
    quantiles: bool = False,
) -> TransitionSeries:
    """Reduce equal-length runs to a transition series.

    Permutation-invariant over runs.  Raises on empty input or mismatched
    lengths.
    """
    if not trajectories:
        raise ValueError("no trajectories to aggregate")
    T = len(trajectories[0])
    if any(len(tr) != T for tr in trajectories):
        raise ValueError("trajectories have mismatched lengths")
    n = len(trajectories)
    running = np.stack([tr.running_max for tr in trajectories])
    mean = running.mean(axis=0)
    if n >= 2:
        stderr = running.std(axis=0, ddof=1) / math.sqrt(n)
    else:
        stderr = np.zeros(T)
    opt_ratio = None
    if optimal_arm is not None:
        selected = np.stack([tr.arms for tr in trajectories])
        opt_ratio = (selected == optimal_arm).mean(axis=0)
    med = q25 = q75 = None
    if quantiles:
        med = np.median(running, axis=0)
        q25 = np.percentile(running, 25, axis=0)
        q75 = np.percentile(running, 75, axis=0)
    return TransitionSeries(
        t=np.arange(1, T + 1),
        max_mean=mean,
        max_stderr=stderr,
        opt_ratio=opt_ratio,
        max_median=med,
        max_q25=q25,
        max_q75=q75,
        n_runs=n,
    )
