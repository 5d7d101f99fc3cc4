"""Sweep delta for dea_star on one corpus and print mean travel and exceedance.

Example:
    python scripts/delta_sweep.py --kind maze --size 21 --maps 20 --trials 10
"""

import argparse

from deastar.harness import AlgorithmSpec, CorpusSpec, ExperimentConfig, run_experiment
from deastar.realtime import SensingMode


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kind", choices=["field", "maze"], default="field")
    parser.add_argument("--size", type=int, default=21)
    parser.add_argument("--density", type=float, default=0.25)
    parser.add_argument("--maps", type=int, default=20)
    parser.add_argument("--trials", type=int, default=10)
    parser.add_argument("--epsilon", type=float, default=1.0)
    parser.add_argument("--radius", type=int, default=2)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    deltas = [0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95]
    algorithms = [AlgorithmSpec("astar_replan", epsilon=args.epsilon)] + [
        AlgorithmSpec("dea_star", epsilon=args.epsilon, delta=d, lam=0, Lam=1) for d in deltas
    ]
    config = ExperimentConfig(
        master_seed=args.seed,
        corpus=CorpusSpec(args.kind, args.size, args.size, args.density, args.maps),
        algorithms=tuple(algorithms),
        sensing=SensingMode.within(args.radius),
        trials_per_map=args.trials,
    )
    results = run_experiment(config, workers=args.workers, write=False)
    print(f"{'algorithm':44s} {'mean ratio':>10s} {'exceed':>8s} {'mean mu':>8s}")
    for spec in algorithms:
        agg = results.aggregates[spec.algorithm_id]
        print(
            f"{spec.algorithm_id:44s} {float(agg['mean_ratio']):10.3f} "
            f"{float(agg['exceedance_rate']):8.3f} {float(agg['mean_mu']):8.1f}"
        )


if __name__ == "__main__":
    main()
