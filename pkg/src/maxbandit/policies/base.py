"""Common policy machinery: the per-run policy protocol and tie-breaking."""

from __future__ import annotations

import random
from typing import Sequence

from ..records import ArmRecord, SharedRecord

__all__ = ["Policy", "FixedArm", "argmax_random_tie"]


def argmax_random_tie(values: Sequence[float], rng: random.Random) -> int:
    """Index of the largest value; exact ties broken uniformly at random.

    Multiple +inf entries are the common tie (unpulled arms), but any exact
    tie is split the same way so runs stay reproducible from the rng seed.
    """
    best = max(values)
    ties = [i for i, v in enumerate(values) if v == best]
    if len(ties) == 1:
        return ties[0]
    return ties[rng.randrange(len(ties))]


class Policy:
    """A bandit selection rule plus whatever per-run state it needs.

    One instance serves one run: ``start_run`` resets state, ``select``
    picks an arm from the current records, and ``record`` observes each
    reward (used by policies that keep reward logs or a warm-up estimate).
    Instances never touch global randomness; every random decision goes
    through the ``rng`` passed to ``select``.
    """

    name: str = "?"
    #: False for policies the tree search rejects (multi-hyperparameter
    #: threshold rules that have no per-node analogue).
    mcts_compatible: bool = True
    #: True when the rule needs the run horizon up front (not anytime).
    needs_horizon: bool = False

    def start_run(self, n_arms: int | None = None, horizon: int | None = None) -> None:
        """Reset per-run state.  ``n_arms`` is None for tree search."""

    def select(self, shared: SharedRecord, arms: Sequence[ArmRecord], rng: random.Random) -> int:
        raise NotImplementedError

    def record(self, arm: int | None, reward: float) -> None:
        """Observe the reward of the latest selection (arm is None in tree search)."""


class FixedArm(Policy):
    """Always play one arm; used as an oracle policy in regret estimation."""

    name = "fixed"

    def __init__(self, arm: int):
        self.arm = arm

    def select(self, shared, arms, rng):
        return self.arm
