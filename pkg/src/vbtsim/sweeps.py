"""Experiment harness: sensing-range sweeps and single-scenario runs.

Sweeps redraw random deployments per sensing range until enough
constructions succeed, then report success/failure tallies and mean
backbone sizes as plot-ready CSV. All outputs carry the resolved config
as '#' header lines and replay byte-for-byte from (config, base_seed).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Optional

from .config import ExperimentConfig
from .mincover import build_min_cover
from .mmevbt import build_mmevbt
from .model import ConstructionFailed, Scenario, deploy_uniform
from .simulate import LifetimeMetrics, run_simulation

# Seeds spread attempts out so no two (range, attempt) cells collide for
# any base_seed and ranges on a millimeter grid.
_SEED_STRIDE = 1_000_003


def attempt_seed(base_seed: int, range_m: float, attempt: int) -> int:
    return base_seed + _SEED_STRIDE * int(round(range_m * 1000)) + attempt


def make_scenario(config: ExperimentConfig, seed: int,
                  range_m: float) -> Scenario:
    field = config.field()
    nodes = deploy_uniform(field, config.n_nodes, seed,
                           e_init=config.energy_e_init,
                           th=config.policy_th, e_fail=config.policy_e_fail)
    return Scenario(field, nodes, range_m, seed)


@dataclass(frozen=True)
class AttemptRow:
    scenario_seed: int
    range_m: float
    n_tree_nodes: Optional[int]  # None when construction failed
    failed: bool


@dataclass(frozen=True)
class RangeRow:
    range_m: float
    successes: int
    failures: int
    mean_tree_nodes: Optional[float]
    exhausted: bool


def _sweep(config: ExperimentConfig,
           count_tree_nodes: Callable[[Scenario], int]
           ) -> tuple[list[RangeRow], list[AttemptRow]]:
    summary: list[RangeRow] = []
    attempts: list[AttemptRow] = []
    for range_m in config.ranges:
        successes = 0
        failures = 0
        sizes: list[int] = []
        for attempt in range(config.max_attempts):
            if successes >= config.target_successes:
                break
            seed = attempt_seed(config.base_seed, range_m, attempt)
            scenario = make_scenario(config, seed, range_m)
            try:
                size = count_tree_nodes(scenario)
            except ConstructionFailed:
                failures += 1
                attempts.append(AttemptRow(seed, range_m, None, True))
            else:
                successes += 1
                sizes.append(size)
                attempts.append(AttemptRow(seed, range_m, size, False))
        mean = sum(sizes) / len(sizes) if sizes else None
        summary.append(RangeRow(range_m, successes, failures, mean,
                                successes < config.target_successes))
    return summary, attempts


def sweep_figure3(config: ExperimentConfig
                  ) -> tuple[list[RangeRow], list[AttemptRow]]:
    """Minimal-energy backbone sizes across sensing ranges."""

    def count(scenario: Scenario) -> int:
        tree = build_mmevbt(scenario, config.radio(), config.policy_th,
                            e_fail=config.policy_e_fail)
        return len(tree.tree_nodes())

    return _sweep(config, count)


def sweep_figure4(config: ExperimentConfig
                  ) -> tuple[list[RangeRow], list[AttemptRow]]:
    """Greedy minimal-cover backbone sizes across sensing ranges."""

    def count(scenario: Scenario) -> int:
        tree_nodes, _ = build_min_cover(scenario, config.policy_th)
        return len(tree_nodes)

    return _sweep(config, count)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: str, config: ExperimentConfig, columns: list[str],
              rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in config.echo_lines():
            fh.write(line + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_sweep_outputs(out_dir: str, stem: str, config: ExperimentConfig,
                        summary: list[RangeRow],
                        attempts: list[AttemptRow]) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    summary_path = os.path.join(out_dir, f"{stem}_summary.csv")
    write_csv(summary_path, config,
              ["range", "successes", "failures", "mean_tree_nodes",
               "exhausted"],
              [[r.range_m, r.successes, r.failures, r.mean_tree_nodes,
                r.exhausted] for r in summary])
    attempts_path = os.path.join(out_dir, f"{stem}_attempts.csv")
    write_csv(attempts_path, config,
              ["scenario_seed", "range", "n_tree_nodes", "failed"],
              [[a.scenario_seed, a.range_m, a.n_tree_nodes, a.failed]
               for a in attempts])
    return [summary_path, attempts_path]


def run_scenario(scenario: Scenario, config: ExperimentConfig, out_dir: str,
                 stem: str = "run", write_events: bool = False
                 ) -> tuple[LifetimeMetrics, list[str]]:
    """Simulate one scenario under the config; write the metrics CSVs.

    Raises ConstructionFailed when the initial backbone cannot form; the
    caller maps that to a nonzero exit code.
    """
    events: Optional[list] = [] if write_events else None
    metrics = run_simulation(scenario, config.algorithm, config.traffic(),
                             config.radio(), config.policy(),
                             seed=config.base_seed,
                             fitness_params=config.fitness(),
                             e_init=config.energy_e_init,
                             event_log=events)
    os.makedirs(out_dir, exist_ok=True)
    paths = []

    metrics_path = os.path.join(out_dir, f"{stem}_metrics.csv")
    write_csv(metrics_path, config,
              ["seed", "algorithm", "range", "n_nodes", "first_death",
               "disconnect", "reconstructions", "total_energy_J"],
              [[config.base_seed, config.algorithm, scenario.sensing_range,
                len(scenario.nodes), metrics.first_node_death_round,
                metrics.rounds_until_disconnect, metrics.reconstructions,
                metrics.total_energy_consumed]])
    paths.append(metrics_path)

    alive_path = os.path.join(out_dir, f"{stem}_alive.csv")
    write_csv(alive_path, config, ["seed", "round", "alive_fraction"],
              [[config.base_seed, rnd, frac]
               for rnd, frac in metrics.alive_fraction_curve])
    paths.append(alive_path)

    loads_path = os.path.join(out_dir, f"{stem}_loads.csv")
    load_ids = sorted(set(metrics.tree_load_counts)
                      | set(metrics.tree_load_expected))
    write_csv(loads_path, config,
              ["tree_node_id", "realized_count", "expected_count"],
              [[i, metrics.tree_load_counts.get(i, 0),
                metrics.tree_load_expected.get(i, 0.0)] for i in load_ids])
    paths.append(loads_path)

    if events is not None:
        events_path = os.path.join(out_dir, f"{stem}_events.csv")
        write_csv(events_path, config, ["round", "event", "node", "detail"],
                  [list(e) for e in events])
        paths.append(events_path)
    return metrics, paths
