"""Sufficient statistics shared by every bandit policy.

Every selection rule in this package works from the same compact record
set: per-arm pull counts and reward sums, plus a handful of values shared
across the arms of one decision point (total selections, incumbent best
reward).  The records are plain mutable objects owned by a single run and
updated in place after each pull.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["ArmRecord", "SharedRecord", "new_records", "update"]


@dataclass(slots=True)
class ArmRecord:
    """Running statistics of a single arm.

    n: number of pulls, R: sum of rewards, Q: sum of squared rewards.
    Invariant (up to float rounding): Q * n >= R ** 2.
    """

    n: int = 0
    R: float = 0.0
    Q: float = 0.0


@dataclass(slots=True)
class SharedRecord:
    """Statistics shared across the arms of one decision point.

    nu counts all selections made at this point so far; r_max is the best
    reward observed in the run (-inf until the first reward arrives).
    """

    K: int
    nu: int = 0
    r_max: float = -math.inf


def new_records(K: int) -> tuple[SharedRecord, list[ArmRecord]]:
    """Fresh records for a K-armed decision point."""
    if K < 1:
        raise ValueError(f"need at least one arm, got K={K}")
    return SharedRecord(K), [ArmRecord() for _ in range(K)]


def update(shared: SharedRecord, arms: list[ArmRecord], k: int, r: float) -> None:
    """Record reward ``r`` from pulling arm ``k``.  Mutates records in place."""
    arm = arms[k]
    arm.n += 1
    arm.R += r
    arm.Q += r * r
    shared.nu += 1
    if r > shared.r_max:
        shared.r_max = r
