"""Bandit selection policies: MaxSearch and the comparison baselines."""

from __future__ import annotations

from .base import FixedArm, Policy, argmax_random_tie
from .baselines import (
    UCB,
    UCBE,
    RandomSearch,
    RewardLog,
    RobustUCBMax,
    SpUCB,
    ThresholdAscent,
    WarmupSigma,
    random_select,
    robust_ucb_max_select,
    sp_ucb_select,
    threshold_ascent_select,
    ucb_select,
    ucbe_select,
)
from .maxsearch import RECOMMENDED_C, MaxSearch, erfc, maxsearch_select, pseudo_ucb_index

POLICIES: dict[str, type[Policy]] = {
    "maxsearch": MaxSearch,
    "threshold-ascent": ThresholdAscent,
    "robust-ucb-max": RobustUCBMax,
    "spucb": SpUCB,
    "ucbe": UCBE,
    "ucb": UCB,
    "random": RandomSearch,
}


def make_policy(name: str, **params) -> Policy:
    """Instantiate a policy by registry name with hyperparameter overrides."""
    try:
        cls = POLICIES[name]
    except KeyError:
        known = ", ".join(sorted(POLICIES))
        raise ValueError(f"unknown policy {name!r}; known policies: {known}") from None
    return cls(**params)


__all__ = [
    "Policy",
    "FixedArm",
    "argmax_random_tie",
    "MaxSearch",
    "RECOMMENDED_C",
    "erfc",
    "pseudo_ucb_index",
    "maxsearch_select",
    "RewardLog",
    "WarmupSigma",
    "ThresholdAscent",
    "RobustUCBMax",
    "SpUCB",
    "UCBE",
    "UCB",
    "RandomSearch",
    "threshold_ascent_select",
    "robust_ucb_max_select",
    "sp_ucb_select",
    "ucbe_select",
    "ucb_select",
    "random_select",
    "POLICIES",
    "make_policy",
]
