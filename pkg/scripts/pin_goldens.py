"""Regenerate the golden files under tests/golden/.

Run only after a deliberate behaviour change; the test suite compares
against whatever this script last wrote.
"""

import json
from pathlib import Path

from deastar import (
    AlphaParams,
    Heuristic,
    PacParams,
    SensingMode,
    alpha_star,
    dea_star,
    dijkstra_cost,
    generate_maze,
    generate_obstacle_field,
    literal_cost,
    render_map,
    traveled_cost,
)
from deastar.dea import decisions_jsonl
from deastar.harness import AlgorithmSpec, CorpusSpec, ExperimentConfig, compare_policies, run_experiment

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def dead_end_config() -> ExperimentConfig:
    return ExperimentConfig(
        master_seed=11,
        corpus=CorpusSpec(kind="maze", width=11, height=11, count=5),
        algorithms=(
            AlgorithmSpec("dea_star", lam=0, Lam=1, epsilon=1, delta=0.5),
            AlgorithmSpec("alpha_star", lam=0, Lam=1, perimeter="g_nonaggressive"),
        ),
        trials_per_map=4,
    )


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    field = generate_obstacle_field(20, 20, 0.25, 42)
    (GOLDEN / "field_20x20_d025_s42.map").write_text(render_map(field), newline="\n")
    maze = generate_maze(21, 21, 7)
    (GOLDEN / "maze_21x21_s7.map").write_text(render_map(maze), newline="\n")

    oracle = dijkstra_cost(field)
    alpha = alpha_star(field, Heuristic.MANHATTAN, AlphaParams(0.2, 1, "h_aggressive"))
    trace, decisions = dea_star(field, Heuristic.MANHATTAN, PacParams(1, 0.5), SensingMode.omniscient(), seed=7)
    (GOLDEN / "dea_s42_delta05_seed7.trace.json").write_text(
        json.dumps(trace.to_json(), sort_keys=True, indent=1) + "\n", newline="\n"
    )
    (GOLDEN / "dea_s42_delta05_seed7.decisions.jsonl").write_text(decisions_jsonl(decisions), newline="\n")

    results = run_experiment(ExperimentConfig.load(GOLDEN.parent.parent / "configs" / "reference.yaml"), write=False)
    dea_half = "dea_star(eps=1,delta=1/2,lam=0,Lam=1,g)"
    (GOLDEN / "dead_end_summary.csv").write_text(
        compare_policies(run_experiment(dead_end_config(), write=False)).to_csv(), newline="\n"
    )
    values = {
        "field_s42_c_star": oracle.cost,
        "field_s42_witness": [list(c) for c in oracle.witness_path],
        "alpha_s42_lam02_Lam1_h_aggressive_cost": alpha.cost,
        "dea_s42_delta05_seed7_traveled": traveled_cost(trace),
        "dea_s42_delta05_seed7_literal": literal_cost(trace),
        "reference_dea_delta05_exceedance": str(results.aggregates[dea_half]["exceedance_rate"]),
    }
    (GOLDEN / "values.json").write_text(json.dumps(values, indent=1, sort_keys=True) + "\n", newline="\n")
    print(json.dumps({k: v for k, v in values.items() if k != "field_s42_witness"}, indent=1))


if __name__ == "__main__":
    main()
