"""Baseline selection rules the benchmarks compare against.

Two families live here.  ThresholdAscent and RobustUCBMax score arms by
order statistics of the raw reward log (counts or sums above a high
threshold).  SpUCB, UCBE and plain UCB are mean-plus-bonus rules that
spend their first P selections on random search and then freeze a scale
estimate sigma from those warm-up rewards.  RandomSearch is the uniform
control.

Each rule exists twice: as a pure function over an explicit
:class:`RewardLog` (the reference form, convenient for tests and direct
calls) and as a :class:`~maxbandit.policies.base.Policy` class that keeps
incremental order-statistics structures so a 10^4-step run does not resort
the full log at every step.  The two paths produce identical selections;
the test suite cross-checks them.

Hyperparameter defaults follow the published recommendations for each
rule: s=100 and delta = 2 ln(nu) for ThresholdAscent, epsilon=0.4 for
RobustUCBMax, c=0.1 / D=32 for SpUCB, c=1 for UCBE and UCB, and a warm-up
of P=10 random selections for the sigma-based rules.
"""

from __future__ import annotations

import math
import random
import statistics
from bisect import bisect_right, insort
from typing import Sequence

from ..records import ArmRecord, SharedRecord
from .base import Policy, argmax_random_tie

__all__ = [
    "RewardLog",
    "WarmupSigma",
    "threshold_ascent_select",
    "robust_ucb_max_select",
    "sp_ucb_select",
    "ucbe_select",
    "ucb_select",
    "random_select",
    "ThresholdAscent",
    "RobustUCBMax",
    "SpUCB",
    "UCBE",
    "UCB",
    "RandomSearch",
]


class RewardLog:
    """Raw per-arm reward lists in arrival order."""

    def __init__(self, n_arms: int):
        self.per_arm: list[list[float]] = [[] for _ in range(n_arms)]

    @classmethod
    def from_lists(cls, lists: Sequence[Sequence[float]]) -> "RewardLog":
        log = cls(len(lists))
        log.per_arm = [list(rs) for rs in lists]
        return log

    @property
    def n_arms(self) -> int:
        return len(self.per_arm)

    def append(self, arm: int, reward: float) -> None:
        self.per_arm[arm].append(reward)

    def total(self) -> int:
        return sum(len(rs) for rs in self.per_arm)


class WarmupSigma:
    """Scale estimate frozen from the first P rewards of a run.

    sigma is the sample standard deviation of the first P rewards and is
    undefined (None) until P rewards have arrived.
    """

    def __init__(self, P: int = 10):
        self.P = P
        self._buffer: list[float] = []
        self.sigma: float | None = None

    def add(self, reward: float) -> None:
        if self.sigma is None:
            self._buffer.append(reward)
            if len(self._buffer) >= self.P:
                self.sigma = statistics.stdev(self._buffer)

    @property
    def ready(self) -> bool:
        return self.sigma is not None


# ---------------------------------------------------------------------------
# index formulas shared by the pure functions and the policy classes


def _threshold_ascent_index(S: int, n: int, alpha: float) -> float:
    return S / n + (alpha + math.sqrt(alpha * (2.0 * S + alpha))) / n


def _robust_ucb_index(S: float, n: int, nu: int, v: float, eps: float) -> float:
    return S / n + 4.0 * v ** (1.0 / (1.0 + eps)) * (2.0 * math.log(nu) / n) ** (eps / (1.0 + eps))


def _sp_ucb_index(arm: ArmRecord, nu: int, sigma: float, c: float, D: float) -> float:
    m = arm.R / arm.n
    spread = arm.Q - arm.n * m * m
    if spread < 0.0:  # float rounding on a zero-variance log
        spread = 0.0
    return m + c * sigma * math.sqrt(math.log(nu) / arm.n) + math.sqrt((spread + D) / arm.n)


def _ucbe_index(arm: ArmRecord, nu: int, sigma: float, c: float) -> float:
    return arm.R / arm.n + c * sigma * math.sqrt(nu / arm.n)


def _ucb_index(arm: ArmRecord, nu: int, sigma: float, c: float) -> float:
    return arm.R / arm.n + c * sigma * math.sqrt(math.log(nu) / arm.n)


# ---------------------------------------------------------------------------
# pure reference forms


def random_select(n_arms: int, rng: random.Random) -> int:
    """Uniform choice over ``range(n_arms)``."""
    return rng.randrange(n_arms)


def threshold_ascent_select(
    log: RewardLog,
    shared: SharedRecord,
    horizon: int,
    s: int = 100,
    rng: random.Random | None = None,
) -> int:
    """Arm maximizing the count of rewards above the s-th largest overall.

    The threshold is the s-th largest reward seen so far; while fewer than
    s rewards exist it is -inf, so every observed reward counts.  The
    confidence radius uses alpha = ln(2 * horizon * K / delta) with
    delta = 2 ln(nu).  Unpulled arms (or nu < 2) score +inf.
    """
    if rng is None:
        rng = random.Random()
    nu = shared.nu
    all_rewards = sorted(r for rs in log.per_arm for r in rs)
    threshold = all_rewards[-s] if len(all_rewards) >= s else -math.inf
    values = []
    if nu >= 2:
        delta = 2.0 * math.log(nu)
        alpha = math.log(2.0 * horizon * log.n_arms / delta)
    for k, rewards in enumerate(log.per_arm):
        n = len(rewards)
        if n == 0 or nu < 2:
            values.append(math.inf)
            continue
        S = sum(1 for r in rewards if r > threshold)
        values.append(_threshold_ascent_index(S, n, alpha))
    return argmax_random_tie(values, rng)


def robust_ucb_max_select(
    log: RewardLog,
    shared: SharedRecord,
    eps: float = 0.4,
    rng: random.Random | None = None,
) -> int:
    """Arm maximizing the truncated mean above the 100-th largest reward.

    u is the 100-th largest reward overall (the minimum observed reward
    while fewer than 100 exist) and v = (r_max - u) ** (1 + eps) scales the
    exploration bonus.  S_k sums each arm's rewards above u, accumulated in
    ascending order so results are reproducible bit for bit.
    """
    if rng is None:
        rng = random.Random()
    nu = shared.nu
    all_rewards = sorted(r for rs in log.per_arm for r in rs)
    if len(all_rewards) >= 100:
        u = all_rewards[-100]
    elif all_rewards:
        u = all_rewards[0]
    else:
        u = -math.inf
    v = (shared.r_max - u) ** (1.0 + eps) if shared.r_max > u else 0.0
    values = []
    for rewards in log.per_arm:
        n = len(rewards)
        if n == 0 or nu < 2:
            values.append(math.inf)
            continue
        S = sum(sorted(r for r in rewards if r > u))
        values.append(_robust_ucb_index(S, n, nu, v, eps))
    return argmax_random_tie(values, rng)


def sp_ucb_select(
    shared: SharedRecord,
    arms: Sequence[ArmRecord],
    warmup: WarmupSigma,
    c: float = 0.1,
    D: float = 32.0,
    rng: random.Random | None = None,
) -> int:
    """Mean + c*sigma*sqrt(ln nu / n) + sqrt((Q - n m^2 + D) / n).

    Delegates to random search during the warm-up (first P selections).
    """
    if rng is None:
        rng = random.Random()
    if shared.nu < warmup.P:
        return random_select(len(arms), rng)
    values = [
        math.inf if a.n == 0 or shared.nu < 2 else _sp_ucb_index(a, shared.nu, warmup.sigma, c, D)
        for a in arms
    ]
    return argmax_random_tie(values, rng)


def ucbe_select(
    shared: SharedRecord,
    arms: Sequence[ArmRecord],
    warmup: WarmupSigma,
    c: float = 1.0,
    rng: random.Random | None = None,
) -> int:
    """Best-arm-identification bonus sqrt(nu / n); warm-up as sp_ucb_select."""
    if rng is None:
        rng = random.Random()
    if shared.nu < warmup.P:
        return random_select(len(arms), rng)
    values = [
        math.inf if a.n == 0 or shared.nu < 2 else _ucbe_index(a, shared.nu, warmup.sigma, c)
        for a in arms
    ]
    return argmax_random_tie(values, rng)


def ucb_select(
    shared: SharedRecord,
    arms: Sequence[ArmRecord],
    warmup: WarmupSigma,
    c: float = 1.0,
    rng: random.Random | None = None,
) -> int:
    """Conventional UCB with bonus c*sigma*sqrt(ln nu / n); warm-up as above."""
    if rng is None:
        rng = random.Random()
    if shared.nu < warmup.P:
        return random_select(len(arms), rng)
    values = [
        math.inf if a.n == 0 or shared.nu < 2 else _ucb_index(a, shared.nu, warmup.sigma, c)
        for a in arms
    ]
    return argmax_random_tie(values, rng)


# ---------------------------------------------------------------------------
# stateful per-run policies


class ThresholdAscent(Policy):
    """Incremental ThresholdAscent over sorted reward multisets.

    Keeps one global sorted list (for the s-th largest reward) and one per
    arm (for counts above the threshold via binary search), so each step
    costs O(nu) memory moves instead of a full re-sort.
    """

    name = "threshold-ascent"
    mcts_compatible = False
    needs_horizon = True

    def __init__(self, s: int = 100):
        self.s = s
        self._sorted_all: list[float] = []
        self._sorted_arm: list[list[float]] = []
        self._horizon = 0
        self._K = 0

    def start_run(self, n_arms=None, horizon=None):
        if n_arms is None or horizon is None:
            raise ValueError("ThresholdAscent needs the arm count and horizon up front")
        self._K = n_arms
        self._horizon = horizon
        self._sorted_all = []
        self._sorted_arm = [[] for _ in range(n_arms)]

    def select(self, shared, arms, rng):
        nu = shared.nu
        threshold = self._sorted_all[-self.s] if len(self._sorted_all) >= self.s else -math.inf
        if nu >= 2:
            delta = 2.0 * math.log(nu)
            alpha = math.log(2.0 * self._horizon * self._K / delta)
        values = []
        for k, arm in enumerate(arms):
            if arm.n == 0 or nu < 2:
                values.append(math.inf)
                continue
            sorted_k = self._sorted_arm[k]
            S = len(sorted_k) - bisect_right(sorted_k, threshold)
            values.append(_threshold_ascent_index(S, arm.n, alpha))
        return argmax_random_tie(values, rng)

    def record(self, arm, reward):
        insort(self._sorted_all, reward)
        insort(self._sorted_arm[arm], reward)


class RobustUCBMax(Policy):
    """Incremental RobustUCBMax over sorted reward multisets."""

    name = "robust-ucb-max"
    mcts_compatible = False

    def __init__(self, eps: float = 0.4):
        self.eps = eps
        self._sorted_all: list[float] = []
        self._sorted_arm: list[list[float]] = []

    def start_run(self, n_arms=None, horizon=None):
        if n_arms is None:
            raise ValueError("RobustUCBMax needs the arm count up front")
        self._sorted_all = []
        self._sorted_arm = [[] for _ in range(n_arms)]

    def select(self, shared, arms, rng):
        nu = shared.nu
        if len(self._sorted_all) >= 100:
            u = self._sorted_all[-100]
        elif self._sorted_all:
            u = self._sorted_all[0]
        else:
            u = -math.inf
        v = (shared.r_max - u) ** (1.0 + self.eps) if shared.r_max > u else 0.0
        values = []
        for k, arm in enumerate(arms):
            if arm.n == 0 or nu < 2:
                values.append(math.inf)
                continue
            sorted_k = self._sorted_arm[k]
            S = sum(sorted_k[bisect_right(sorted_k, u):])
            values.append(_robust_ucb_index(S, arm.n, nu, v, self.eps))
        return argmax_random_tie(values, rng)

    def record(self, arm, reward):
        insort(self._sorted_all, reward)
        insort(self._sorted_arm[arm], reward)


class _WarmupPolicy(Policy):
    """Shared warm-up bookkeeping for the sigma-based rules.

    The warm-up gate counts *rewards observed this run* (equivalently
    completed selections), so in tree search the first P rollouts are fully
    random and sigma comes from their final rewards.
    """

    def __init__(self, c: float, P: int):
        self.c = c
        self.P = P
        self._warmup = WarmupSigma(P)
        self._tau = 0

    def start_run(self, n_arms=None, horizon=None):
        self._warmup = WarmupSigma(self.P)
        self._tau = 0

    def record(self, arm, reward):
        self._tau += 1
        self._warmup.add(reward)

    def _index(self, arm: ArmRecord, nu: int) -> float:
        raise NotImplementedError

    def select(self, shared, arms, rng):
        if self._tau < self.P:
            return random_select(len(arms), rng)
        nu = shared.nu
        values = [
            math.inf if a.n == 0 or nu < 2 else self._index(a, nu)
            for a in arms
        ]
        return argmax_random_tie(values, rng)


class SpUCB(_WarmupPolicy):
    name = "spucb"

    def __init__(self, c: float = 0.1, D: float = 32.0, P: int = 10):
        super().__init__(c, P)
        self.D = D

    def _index(self, arm, nu):
        return _sp_ucb_index(arm, nu, self._warmup.sigma, self.c, self.D)


class UCBE(_WarmupPolicy):
    name = "ucbe"

    def __init__(self, c: float = 1.0, P: int = 10):
        super().__init__(c, P)

    def _index(self, arm, nu):
        return _ucbe_index(arm, nu, self._warmup.sigma, self.c)


class UCB(_WarmupPolicy):
    name = "ucb"

    def __init__(self, c: float = 1.0, P: int = 10):
        super().__init__(c, P)

    def _index(self, arm, nu):
        return _ucb_index(arm, nu, self._warmup.sigma, self.c)


class RandomSearch(Policy):
    name = "random"

    def select(self, shared, arms, rng):
        return random_select(len(arms), rng)
