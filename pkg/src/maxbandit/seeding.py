"""Stable derivation of per-run seeds from a master seed.

Run i of an experiment always receives the same child seed for a given
master seed, independent of Python version, platform hash randomization,
or the order in which runs execute.  This is what makes run sets both
reproducible and safe to execute out of order or in parallel.
"""

from __future__ import annotations

import hashlib

__all__ = ["derive_seed"]


def derive_seed(master_seed: int, index: int) -> int:
    """Deterministic 63-bit child seed for run ``index`` under ``master_seed``."""
    digest = hashlib.sha256(f"maxbandit:{master_seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1
