"""Search the molecule space with Monte Carlo tree search.

Each rollout descends the derivation tree choosing productions with a
bandit policy (one bandit per node), evaluates the finished molecule, and
feeds the property value back along the path.  The demo compares the
best-reward policy against random search on the polar-surface-area reward
and prints the best structures found.
"""

import numpy as np

from maxbandit import derive_seed, make_policy, mcts
from maxbandit.molgen import DerivationSearchSpace
from maxbandit.properties import property_reward

REWARD = property_reward("tpsa")
T = 2_000
SEEDS = 5

print(f"reward: topological polar surface area, {T} rollouts per run\n")
for policy_name in ("maxsearch", "ucb", "random"):
    finals = []
    best_overall = (-np.inf, "")
    for i in range(SEEDS):
        space = DerivationSearchSpace(REWARD.grammar)
        result = mcts.search(
            space, REWARD.evaluate_state, make_policy(policy_name), T, derive_seed(5, i)
        )
        finals.append(result.best_reward)
        if result.best_reward > best_overall[0]:
            best_overall = (result.best_reward, result.best_info)
    print(f"{policy_name:10s} best-of-run mean {np.mean(finals):7.2f} A^2"
          f"  (runs: {', '.join(f'{v:.1f}' for v in finals)})")
    print(f"           best molecule ({best_overall[0]:.2f} A^2): {best_overall[1]}\n")

print("viscosity searches use the restricted grammar (no F, N, or double-bond")
print("carbon rules, whose viscosity parameters do not exist):")
ETA = property_reward("eta")
space = DerivationSearchSpace(ETA.grammar)
result = mcts.search(space, ETA.evaluate_state, make_policy("maxsearch"), T, seed=99)
print(f"maxsearch best viscosity {result.best_reward:.3g} Pa*s: {result.best_info}")
