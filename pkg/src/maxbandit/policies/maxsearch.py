"""MaxSearch: arm selection by a pseudo upper confidence bound of the
expected improvement of the best reward.

The index treats each arm's rewards as sub-Gaussian with unknown mean and
variance proxies (m, s^2) and scores the arm by

    z = I(r_max; m~, s~^2) = sqrt(2 pi s~^2) * erfc((r_max - m~) / sqrt(2 s~^2)),

the integral of the sub-Gaussian tail envelope above the incumbent best
reward r_max.  m~ is the sample mean.  s~^2 is a *pseudo* upper confidence
bound of the variance proxy built from a Bernstein bound on the second
moment: with confidence parameter alpha = nu ** (-c**2),

    beta  = c * sqrt(ln(nu) / n)
    gamma = -beta**2 + 2 * sqrt(2) * beta
    s~^2  = (Q/n - m~**2) / (2 * (ln 2 - gamma)).

Arms with no pulls, fewer than two total selections, or gamma >= ln 2 get
an infinite index, which forces roughly ln(nu) exploration pulls per arm.
The only hyperparameter is c; the recommended value 1/sqrt(13.613) makes
the infinite-index region coincide with n <= ln(nu).
"""

from __future__ import annotations

import math
import random
from typing import Sequence

from ..records import ArmRecord, SharedRecord
from .base import Policy, argmax_random_tie

__all__ = ["RECOMMENDED_C", "erfc", "pseudo_ucb_index", "maxsearch_select", "MaxSearch"]

#: Recommended exploration constant: keeps the index finite exactly when an
#: arm has received more than ~ln(nu) pulls.
RECOMMENDED_C: float = 1.0 / math.sqrt(13.613)

_LN2 = math.log(2.0)
_TWO_SQRT2 = 2.0 * math.sqrt(2.0)


def erfc(x: float) -> float:
    """Complementary error function.

    Delegates to the platform libm implementation, which is accurate to a
    few ulp (far inside the 1e-12 relative tolerance this package needs
    over |x| <= 10).  Total on finite input, with range (0, 2).
    """
    return math.erfc(x)


def pseudo_ucb_index(shared: SharedRecord, arm: ArmRecord, c: float = RECOMMENDED_C) -> float:
    """Selection index z of one arm; +inf while the arm is under-explored.

    Returns +inf when the arm is unpulled, fewer than two selections have
    been made overall, or gamma >= ln 2 (the boundary case gamma == ln 2 is
    included: it is the continuous limit s~^2 -> inf, z -> inf).  A sample
    variance that rounds negative is clamped to zero, giving z = 0.
    """
    n = arm.n
    nu = shared.nu
    if n == 0 or nu < 2:
        return math.inf
    beta = c * math.sqrt(math.log(nu) / n)
    gamma = -beta * beta + _TWO_SQRT2 * beta
    if gamma >= _LN2:
        return math.inf
    m = arm.R / n
    s2 = (arm.Q / n - m * m) / (2.0 * (_LN2 - gamma))
    if s2 <= 0.0:
        return 0.0
    return math.sqrt(2.0 * math.pi * s2) * math.erfc((shared.r_max - m) / math.sqrt(2.0 * s2))


def maxsearch_select(
    shared: SharedRecord,
    arms: Sequence[ArmRecord],
    c: float = RECOMMENDED_C,
    rng: random.Random | None = None,
) -> int:
    """Arm with the largest pseudo-UCB index; exact ties uniform at random.

    Computes the same floats as :func:`pseudo_ucb_index` with the per-call
    constants hoisted; this runs inside every tree-search node selection.
    """
    if rng is None:
        rng = random.Random()
    K = len(arms)
    if shared.nu < 2:  # every index is +inf
        return 0 if K == 1 else rng.randrange(K)
    log_nu = math.log(shared.nu)
    r_max = shared.r_max
    sqrt = math.sqrt
    inf = math.inf
    values = []
    for arm in arms:
        n = arm.n
        if n == 0:
            values.append(inf)
            continue
        beta = c * sqrt(log_nu / n)
        gamma = -beta * beta + _TWO_SQRT2 * beta
        if gamma >= _LN2:
            values.append(inf)
            continue
        m = arm.R / n
        s2 = (arm.Q / n - m * m) / (2.0 * (_LN2 - gamma))
        if s2 <= 0.0:
            values.append(0.0)
        else:
            values.append(sqrt(2.0 * math.pi * s2) * math.erfc((r_max - m) / sqrt(2.0 * s2)))
    return argmax_random_tie(values, rng)


class MaxSearch(Policy):
    """Stateless policy wrapper around :func:`maxsearch_select`."""

    name = "maxsearch"

    def __init__(self, c: float = RECOMMENDED_C):
        if c <= 0:
            raise ValueError(f"exploration constant must be positive, got {c}")
        self.c = c

    def select(self, shared, arms, rng):
        return maxsearch_select(shared, arms, self.c, rng)
