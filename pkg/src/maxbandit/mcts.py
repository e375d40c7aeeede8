"""Monte Carlo tree search over a derivation tree with a pluggable
per-node bandit policy.

The tree mirrors the search space's derivation states: each node holds one
arm record per legal choice at that state, children materialize lazily the
first time a descent passes through them, and every rollout walks from the
root to a completed derivation, evaluates it, and adds the reward to the
records of every (node, choice) on its path.

The node-local selection count ``nu`` frames each node as its own bandit.
The incumbent best reward fed to the policy is global to the run by
default (expected improvement is improvement over the run's best), with a
per-node alternative behind ``per_node_incumbent`` for comparison.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .policies.base import Policy
from .records import ArmRecord, SharedRecord
from .synthetic import RunTrajectory

__all__ = ["TreeNode", "descend", "backpropagate", "SearchResult", "search"]


class TreeNode:
    """One derivation state: per-choice arm records and node-local totals."""

    __slots__ = ("choices", "shared", "arms", "children")

    def __init__(self, choices: Sequence):
        K = len(choices)
        self.choices = choices
        self.shared = SharedRecord(K)
        self.arms = [ArmRecord() for _ in range(K)]
        self.children: list[TreeNode | None] = [None] * K

    @property
    def is_leaf(self) -> bool:
        return not self.choices


def descend(
    root: TreeNode,
    space,
    policy: Policy,
    rng: random.Random,
    incumbent: float | None = None,
) -> tuple[list[tuple[TreeNode, int]], object, int]:
    """Walk from the root to a leaf, materializing children on demand.

    Returns the (node, choice) path, the completed derivation state, and
    the number of nodes created.  ``incumbent`` is the run-global best
    reward to expose at every node; None leaves each node's own recorded
    best in place (per-node mode).
    """
    state = space.initial_state()
    node = root
    path: list[tuple[TreeNode, int]] = []
    created = 0
    while not node.is_leaf:
        if incumbent is not None:
            node.shared.r_max = incumbent
        k = policy.select(node.shared, node.arms, rng)
        path.append((node, k))
        state = space.apply(state, node.choices[k])
        child = node.children[k]
        if child is None:
            options = () if space.is_terminal(state) else space.choices(state)
            child = TreeNode(options)
            node.children[k] = child
            created += 1
        node = child
    return path, state, created


def backpropagate(
    path: list[tuple[TreeNode, int]],
    reward: float,
    run_shared: SharedRecord,
    per_node_incumbent: bool = False,
) -> None:
    """Add one rollout's reward to every (node, choice) on its path."""
    for node, k in path:
        arm = node.arms[k]
        arm.n += 1
        arm.R += reward
        arm.Q += reward * reward
        node.shared.nu += 1
        if per_node_incumbent and reward > node.shared.r_max:
            node.shared.r_max = reward
    run_shared.nu += 1
    if reward > run_shared.r_max:
        run_shared.r_max = reward


@dataclass
class SearchResult:
    trajectory: RunTrajectory
    best_reward: float
    best_info: object  # whatever the evaluator returned for the best rollout
    root: TreeNode
    n_nodes: int


def search(
    space,
    evaluate: Callable[[object], tuple[float, object]],
    policy: Policy,
    T: int,
    seed: int,
    per_node_incumbent: bool = False,
) -> SearchResult:
    """Run ``T`` rollouts and return the trajectory and the best find.

    ``evaluate`` maps a completed derivation state to (reward, info); the
    info of the best rollout (for molecules, the SMILES string) is carried
    in the result.  Deterministic per (space, policy configuration, T,
    seed).  Raises ValueError for policies the tree cannot host.
    """
    if not policy.mcts_compatible:
        raise ValueError(f"policy {policy.name!r} cannot run inside the tree search")
    if policy.needs_horizon:
        raise ValueError(f"policy {policy.name!r} needs a horizon and cannot run per node")
    if T < 1:
        raise ValueError(f"need at least one rollout, got T={T}")
    rng = random.Random(seed)
    policy.start_run(None, T)
    run_shared = SharedRecord(K=0)
    first = space.initial_state()
    root = TreeNode(() if space.is_terminal(first) else space.choices(first))
    n_nodes = 1
    ks: list[int] = []
    rs: list[float] = []
    rm: list[float] = []
    best = -math.inf
    best_info = None
    for _ in range(T):
        incumbent = None if per_node_incumbent else run_shared.r_max
        path, state, created = descend(root, space, policy, rng, incumbent)
        n_nodes += created
        reward, info = evaluate(state)
        backpropagate(path, reward, run_shared, per_node_incumbent)
        policy.record(None, reward)
        ks.append(path[0][1] if path else 0)
        rs.append(reward)
        if reward > best:
            best = reward
            best_info = info
        rm.append(best)
    trajectory = RunTrajectory(
        np.asarray(ks, dtype=np.int32),
        np.asarray(rs, dtype=np.float64),
        np.asarray(rm, dtype=np.float64),
    )
    return SearchResult(trajectory, best, best_info, root, n_nodes)
