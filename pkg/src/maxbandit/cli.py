"""Experiment driver: configuration, orchestration, CSV and report output.

An experiment is exactly reproducible from its configuration and master
seed: run i draws its own seed from (master seed, i), per-run results
stream to ``<out>/runs/run_NNNNN.npz`` as they finish (so interrupted
experiments resume at run granularity), and aggregation is an ordered
reduction over run indices, independent of completion order.

Outputs per experiment directory:

* ``config.json``      - the resolved configuration snapshot
* ``transition.csv``   - per-step aggregates (schema below), full precision
* ``summary.json``     - final values and wall time
* ``best_molecules.csv`` - per-run best find (tree-search mode only)
* ``report.json`` / ``report.txt`` - oracle mode only
* ``plots/transition.svg`` - optional, with ``--plot``

CSV schema: ``t,max_mean,max_stderr,opt_ratio[,max_median,max_q25,max_q75]``
with the bracketed columns present exactly in median-quantile aggregation.
``opt_ratio`` is ``nan`` where no optimal arm is defined (tree search).
Values are shortest round-trip decimal text, so re-parsing reproduces the
floats bit for bit and reruns produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import mcts
from .molgen import DerivationSearchSpace
from .oracle import (
    HORIZON_SENSITIVE_ARMS,
    INCUMBENT_SENSITIVE_ARMS,
    kikkawa_greedy_select,
    single_armed_oracle,
)
from .policies import POLICIES, make_policy
from .properties import PROPERTY_NAMES, property_reward
from .seeding import derive_seed
from .synthetic import PROBLEM_NAMES, TransitionSeries, aggregate, make_problem, run_episode

__all__ = ["ExperimentConfig", "ConfigError", "run_experiment", "emit_csv", "main"]

_ORACLE_EXAMPLES = {
    "1": "horizon",
    "2": "incumbent",
    "horizon": "horizon",
    "incumbent": "incumbent",
}

#: Incumbent probes reported for the incumbent-sensitive arm set.
_INCUMBENT_PROBES = (1.3, 7.0, 11.9, 18.9)
#: Horizon probes reported for the horizon-sensitive arm set.
_HORIZON_PROBES = (11, 10 ** 12, 10 ** 203)


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    mode: str = "synthetic"  # synthetic | mcts | oracle
    problem: str = "easy"
    property: str = "tb"
    policy: str = "maxsearch"
    policy_params: dict = field(default_factory=dict)
    runs: int = 100
    horizon: int = 10_000
    seed: int = 0
    out: str = "experiment-out"
    aggregate: str | None = None  # mean-stderr | median-quantile; None = per-property default
    example: str = "1"  # oracle mode: which stock arm set
    rmax_scope: str = "global"  # global | per-node incumbent in tree search
    workers: int = 1
    plot: bool = False

    def resolved_aggregate(self) -> str:
        if self.aggregate is not None:
            return self.aggregate
        if self.mode == "mcts" and property_reward(self.property).skewed:
            return "median-quantile"
        return "mean-stderr"

    def validate(self) -> None:
        if self.mode not in ("synthetic", "mcts", "oracle"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.runs < 1 or self.horizon < 1:
            raise ConfigError("runs and horizon must be >= 1")
        if self.aggregate not in (None, "mean-stderr", "median-quantile"):
            raise ConfigError(f"unknown aggregation {self.aggregate!r}")
        if self.mode == "synthetic" and self.problem not in PROBLEM_NAMES:
            raise ConfigError(f"unknown problem {self.problem!r}")
        if self.mode == "mcts" and self.property not in PROPERTY_NAMES:
            raise ConfigError(f"unknown property {self.property!r}")
        if self.mode == "oracle":
            if self.example not in _ORACLE_EXAMPLES:
                raise ConfigError(f"unknown oracle example {self.example!r}")
            return
        if self.policy not in POLICIES:
            raise ConfigError(f"unknown policy {self.policy!r}")
        if self.rmax_scope not in ("global", "per-node"):
            raise ConfigError(f"unknown rmax scope {self.rmax_scope!r}")
        probe = make_policy(self.policy, **self.policy_params)
        if self.mode == "mcts" and not probe.mcts_compatible:
            raise ConfigError(f"policy {self.policy!r} cannot run in mcts mode")

    def signature(self) -> dict:
        """The fields that determine results (resume-compatibility check)."""
        return {
            "mode": self.mode,
            "problem": self.problem if self.mode == "synthetic" else None,
            "property": self.property if self.mode == "mcts" else None,
            "policy": self.policy,
            "policy_params": self.policy_params,
            "runs": self.runs,
            "horizon": self.horizon,
            "seed": self.seed,
            "aggregate": self.resolved_aggregate(),
            "example": self.example if self.mode == "oracle" else None,
            "rmax_scope": self.rmax_scope if self.mode == "mcts" else None,
        }


# ---------------------------------------------------------------------------
# per-run execution


def _execute_run(config: ExperimentConfig, index: int) -> dict:
    seed = derive_seed(config.seed, index)
    policy = make_policy(config.policy, **config.policy_params)
    if config.mode == "synthetic":
        trajectory = run_episode(make_problem(config.problem), policy, config.horizon, seed)
        return {
            "arms": trajectory.arms,
            "rewards": trajectory.rewards,
            "running_max": trajectory.running_max,
        }
    reward = property_reward(config.property)
    space = DerivationSearchSpace(reward.grammar)
    result = mcts.search(
        space,
        reward.evaluate_state,
        policy,
        config.horizon,
        seed,
        per_node_incumbent=(config.rmax_scope == "per-node"),
    )
    return {
        "arms": result.trajectory.arms,
        "rewards": result.trajectory.rewards,
        "running_max": result.trajectory.running_max,
        "best_reward": np.float64(result.best_reward),
        "best_smiles": np.str_(result.best_info),
    }


def _run_path(out_dir: Path, index: int) -> Path:
    return out_dir / "runs" / f"run_{index:05d}.npz"


def _execute_and_store(config: ExperimentConfig, index: int, out_dir: Path) -> dict:
    path = _run_path(out_dir, index)
    if path.exists():
        with np.load(path, allow_pickle=False) as stored:
            return {k: stored[k].copy() for k in stored.files}
    payload = _execute_run(config, index)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp.npz")
    np.savez(tmp, **payload)
    tmp.replace(path)
    return payload


def _collect_runs(config: ExperimentConfig, out_dir: Path) -> list[dict]:
    indices = range(config.runs)
    if config.workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = {i: pool.submit(_execute_run, config, i)
                       for i in indices if not _run_path(out_dir, i).exists()}
            results = []
            for i in indices:
                if i in futures:
                    payload = futures[i].result()
                    path = _run_path(out_dir, i)
                    path.parent.mkdir(parents=True, exist_ok=True)
                    tmp = path.with_suffix(".tmp.npz")
                    np.savez(tmp, **payload)
                    tmp.replace(path)
                    results.append(payload)
                else:
                    results.append(_execute_and_store(config, i, out_dir))
            return results
    return [_execute_and_store(config, i, out_dir) for i in indices]


# ---------------------------------------------------------------------------
# output


def _format(value) -> str:
    return repr(float(value))


def emit_csv(series: TransitionSeries, path: Path | str) -> None:
    """Write a transition series; schema is documented in the module docstring."""
    if len(series) == 0:
        raise ValueError("empty transition series")
    quantiles = series.max_median is not None
    header = "t,max_mean,max_stderr,opt_ratio"
    if quantiles:
        header += ",max_median,max_q25,max_q75"
    lines = [header]
    opt = series.opt_ratio
    for i in range(len(series)):
        row = [
            str(int(series.t[i])),
            _format(series.max_mean[i]),
            _format(series.max_stderr[i]),
            _format(opt[i]) if opt is not None else "nan",
        ]
        if quantiles:
            row += [_format(series.max_median[i]), _format(series.max_q25[i]), _format(series.max_q75[i])]
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


def _plot_series(series: TransitionSeries, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2 if series.opt_ratio is not None else 1, figsize=(10, 4))
    axes = np.atleast_1d(axes)
    ax = axes[0]
    if series.max_median is not None:
        ax.plot(series.t, series.max_median, label="median")
        ax.fill_between(series.t, series.max_q25, series.max_q75, alpha=0.3, label="quartiles")
    else:
        ax.plot(series.t, series.max_mean, label="mean")
        ax.fill_between(
            series.t,
            series.max_mean - series.max_stderr,
            series.max_mean + series.max_stderr,
            alpha=0.3,
            label="stderr",
        )
    ax.set_xlabel("t")
    ax.set_ylabel("observed maximum")
    ax.legend()
    if series.opt_ratio is not None:
        ax = axes[1]
        ax.plot(series.t, series.opt_ratio, alpha=0.35, label="raw")
        window = min(100, len(series))
        smooth = np.convolve(series.opt_ratio, np.ones(window) / window, mode="valid")
        ax.plot(series.t[window - 1:], smooth, label=f"smoothed ({window})")
        ax.set_xlabel("t")
        ax.set_ylabel("optimal-arm ratio")
        ax.set_ylim(0, 1)
        ax.legend()
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)


def _oracle_report(config: ExperimentConfig, out_dir: Path) -> dict:
    kind = _ORACLE_EXAMPLES[config.example]
    report: dict = {"example": kind}
    lines = []
    if kind == "horizon":
        arms = HORIZON_SENSITIVE_ARMS
        report["arms"] = [{"mean": a.mean, "variance": a.variance} for a in arms]
        probes = []
        for T in _HORIZON_PROBES:
            decision = single_armed_oracle(arms, T)
            probes.append({"T": float(T), "certified_arm": decision.arm})
            lines.append(f"T = {float(T):.6g}: certified best single arm = {decision.arm}")
        report["probes"] = probes
    else:
        arms = INCUMBENT_SENSITIVE_ARMS
        report["arms"] = [{"mean": a.mean, "variance": a.variance} for a in arms]
        probes = []
        for r_max in _INCUMBENT_PROBES:
            arm = kikkawa_greedy_select(arms, r_max)
            probes.append({"r_max": r_max, "greedy_arm": arm})
            lines.append(f"incumbent r_max = {r_max}: greedy-oracle arm = {arm}")
        report["probes"] = probes
    (out_dir / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    (out_dir / "report.txt").write_text("\n".join(lines) + "\n")
    return report


def run_experiment(config: ExperimentConfig) -> Path:
    """Execute a full experiment; returns the output directory."""
    config.validate()
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    signature_path = out_dir / "config.json"
    signature = config.signature()
    if signature_path.exists():
        stored = json.loads(signature_path.read_text())
        if stored != signature:
            raise ConfigError(
                f"output directory {out_dir} holds results for a different configuration; "
                "use a fresh directory"
            )
    else:
        signature_path.write_text(json.dumps(signature, indent=2) + "\n")

    started = time.monotonic()
    if config.mode == "oracle":
        _oracle_report(config, out_dir)
        return out_dir

    payloads = _collect_runs(config, out_dir)
    from .synthetic import RunTrajectory

    trajectories = [
        RunTrajectory(p["arms"], p["rewards"], p["running_max"]) for p in payloads
    ]
    optimal_arm = make_problem(config.problem).optimal_arm if config.mode == "synthetic" else None
    quantiles = config.resolved_aggregate() == "median-quantile"
    series = aggregate(trajectories, optimal_arm, quantiles)
    emit_csv(series, out_dir / "transition.csv")

    summary = {
        "mode": config.mode,
        "policy": config.policy,
        "runs": config.runs,
        "horizon": config.horizon,
        "seed": config.seed,
        "aggregate": config.resolved_aggregate(),
        "final_max_mean": float(series.max_mean[-1]),
        "final_max_stderr": float(series.max_stderr[-1]),
        "final_opt_ratio": float(series.opt_ratio[-1]) if series.opt_ratio is not None else None,
        "wall_time_s": time.monotonic() - started,
    }
    if config.mode == "synthetic":
        summary["problem"] = config.problem
    else:
        summary["property"] = config.property
        summary["final_max_median"] = (
            float(series.max_median[-1]) if series.max_median is not None else None
        )
        best_lines = ["run,best_reward,best_smiles"]
        for i, p in enumerate(payloads):
            best_lines.append(f"{i},{_format(p['best_reward'])},{str(p['best_smiles'])}")
        (out_dir / "best_molecules.csv").write_text("\n".join(best_lines) + "\n")
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")

    if config.plot:
        _plot_series(series, out_dir / "plots" / "transition.svg")
    return out_dir


# ---------------------------------------------------------------------------
# command line


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxbandit",
        description="Run best-reward bandit experiments (synthetic, molecular tree search, oracle reports).",
    )
    parser.add_argument("--config", help="JSON file with configuration fields; flags override it")
    parser.add_argument("--mode", choices=["synthetic", "mcts", "oracle"])
    parser.add_argument("--problem", help="synthetic problem name (easy, difficult, unfavorable)")
    parser.add_argument("--property", help="mcts reward property (tb, pc, eta, tpsa)")
    parser.add_argument("--policy", help="selection policy (see README for the registry)")
    parser.add_argument("--c", type=float, help="policy exploration constant override")
    parser.add_argument("--runs", type=int, help="independent runs (default 100)")
    parser.add_argument("--horizon", type=int, help="selections per run (default 10000)")
    parser.add_argument("--seed", type=int, help="master seed (default 0)")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--aggregate", choices=["mean-stderr", "median-quantile"])
    parser.add_argument("--example", help="oracle mode arm set: 1/horizon or 2/incumbent")
    parser.add_argument("--rmax-scope", choices=["global", "per-node"], dest="rmax_scope")
    parser.add_argument("--workers", type=int, help="parallel worker processes (default 1)")
    parser.add_argument("--plot", action="store_true", default=None, help="write transition plot (needs matplotlib)")
    return parser


def load_config(argv: Sequence[str] | None = None) -> ExperimentConfig:
    args = build_parser().parse_args(argv)
    fields: dict = {}
    if args.config:
        try:
            fields.update(json.loads(Path(args.config).read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    for name in (
        "mode", "problem", "property", "policy", "runs", "horizon",
        "seed", "out", "aggregate", "example", "rmax_scope", "workers", "plot",
    ):
        value = getattr(args, name)
        if value is not None:
            fields[name] = value
    if args.c is not None:
        fields.setdefault("policy_params", {})
        fields["policy_params"] = dict(fields["policy_params"], c=args.c)
    unknown = set(fields) - {f.name for f in ExperimentConfig.__dataclass_fields__.values()}
    unknown -= {"policy_params"}
    if unknown:
        raise ConfigError(f"unknown configuration fields: {sorted(unknown)}")
    config = ExperimentConfig(**fields)
    config.validate()
    return config


def main(argv: Sequence[str] | None = None) -> int:
    try:
        config = load_config(argv)
        out_dir = run_experiment(config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # evaluator/runtime failures: diagnostic, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"experiment complete: {out_dir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
