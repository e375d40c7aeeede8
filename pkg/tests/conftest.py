import json
import os
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make tests/oracles.py importable

from maxbandit.cli import ExperimentConfig, run_experiment
from maxbandit.molgen import FULL_GRAMMAR, random_molecule

#: scale of the statistical reproduction experiments (the benchmark protocol)
BENCH_RUNS = 100
BENCH_HORIZON = 10_000
BENCH_SEED = 0

#: pass/fail lines collected by the acceptance tests, echoed at session end
ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    line = f"acceptance criterion {number:2d}: {'PASS' if passed else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def molecule_corpus():
    """10,000 seeded random molecules shared by the module-level fuzz tests."""
    rng = random.Random(20240101)
    return [random_molecule(rng, FULL_GRAMMAR) for _ in range(10_000)]


@pytest.fixture(scope="session")
def experiment_base(tmp_path_factory):
    """Directory holding the benchmark-scale experiments.

    Set MAXBANDIT_ACCEPTANCE_DIR to persist it across sessions; experiment
    runs resume at run granularity, so interrupted suites pick up where
    they stopped.
    """
    override = os.environ.get("MAXBANDIT_ACCEPTANCE_DIR")
    if override:
        base = Path(override)
        base.mkdir(parents=True, exist_ok=True)
        return base
    return tmp_path_factory.mktemp("acceptance")


def bench_synthetic(base: Path, problem: str, policy: str) -> dict:
    """Benchmark-protocol synthetic experiment; returns its summary plus the
    final transition row's optimal-arm ratio."""
    out = base / f"synthetic-{problem}-{policy}"
    run_experiment(
        ExperimentConfig(
            mode="synthetic", problem=problem, policy=policy,
            runs=BENCH_RUNS, horizon=BENCH_HORIZON, seed=BENCH_SEED, out=str(out),
        )
    )
    summary = json.loads((out / "summary.json").read_text())
    last = (out / "transition.csv").read_text().splitlines()[-1].split(",")
    summary["final_opt_ratio"] = float(last[3])
    return summary


def bench_mcts(base: Path, prop: str, policy: str) -> dict:
    """Benchmark-protocol tree-search experiment; returns its summary plus
    the parsed final transition row."""
    out = base / f"mcts-{prop}-{policy}"
    run_experiment(
        ExperimentConfig(
            mode="mcts", property=prop, policy=policy,
            runs=BENCH_RUNS, horizon=BENCH_HORIZON, seed=BENCH_SEED, out=str(out),
        )
    )
    summary = json.loads((out / "summary.json").read_text())
    lines = (out / "transition.csv").read_text().splitlines()
    header = lines[0].split(",")
    last = lines[-1].split(",")
    summary["final_row"] = {
        name: (int(value) if name == "t" else float(value))
        for name, value in zip(header, last)
    }
    return summary
