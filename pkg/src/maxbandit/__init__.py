"""maxbandit: best-reward (max K-armed) bandit policies and benchmarks.

The package has four layers:

* :mod:`maxbandit.records`, :mod:`maxbandit.policies` - arm statistics and
  selection rules (MaxSearch plus the comparison baselines);
* :mod:`maxbandit.synthetic` - Gaussian benchmark problems, the episode
  runner, and transition-series aggregation;
* :mod:`maxbandit.molgen`, :mod:`maxbandit.properties`, :mod:`maxbandit.mcts`
  - a context-free SMILES generator, group-contribution property rewards,
  and the Monte Carlo tree search that composes them;
* :mod:`maxbandit.oracle` - expected-improvement closed forms, oracle
  definitions, regret estimates, and concentration bounds;
* :mod:`maxbandit.cli` - the reproducible experiment driver.
"""

from __future__ import annotations

from .molgen import (
    FULL_GRAMMAR,
    VISCOSITY_GRAMMAR,
    DerivationSearchSpace,
    DerivationState,
    MoleculeGraph,
    alphabet_count,
    apply_production,
    finalize,
    legal_productions,
    random_molecule,
)
from .oracle import (
    GaussianArm,
    HORIZON_SENSITIVE_ARMS,
    INCUMBENT_SENSITIVE_ARMS,
    bernstein_bounds,
    carpentier_regret,
    erfc_integral_bounds,
    gaussian_ei,
    gaussian_max_expectation_bounds,
    kikkawa_greedy_select,
    nishihara_regret,
    single_armed_oracle,
)
from .policies import (
    POLICIES,
    RECOMMENDED_C,
    FixedArm,
    MaxSearch,
    Policy,
    RandomSearch,
    RewardLog,
    RobustUCBMax,
    SpUCB,
    ThresholdAscent,
    UCB,
    UCBE,
    WarmupSigma,
    make_policy,
    maxsearch_select,
    pseudo_ucb_index,
)
from .properties import (
    PROPERTY_NAMES,
    atom_count,
    classify_fragments,
    joback_eta,
    joback_pc,
    joback_tb,
    molecular_weight,
    property_reward,
    tpsa,
)
from .records import ArmRecord, SharedRecord, new_records, update
from .seeding import derive_seed
from .synthetic import (
    PROBLEM_NAMES,
    GaussianArmSpec,
    RunTrajectory,
    SyntheticProblem,
    TransitionSeries,
    aggregate,
    make_problem,
    run_episode,
)

__version__ = "0.1.0"
