"""Command line entry point: ``deastar {run,gen-maps,oracle,compare}``.

Exit codes: 0 success, 1 configuration or usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ConfigError, GenerationError, MapParseError, UsageError
from .grid import generate_maze, generate_obstacle_field, parse_map, render_map
from .harness import ExperimentConfig, ResultSet, compare_policies, run_experiment
from .oracle import dijkstra_cost
from .rng import derive_seed


def cmd_run(args) -> int:
    config = ExperimentConfig.load(args.config)
    if args.seed is not None:
        config = replace(config, master_seed=args.seed)
    results = run_experiment(config, workers=args.workers)
    for entry in results.pac_report:
        print(
            f"{entry['algorithm_id']}: exceedance {float(entry['exceedance_rate']):.4f} "
            f"(delta {float(entry['delta'])})"
        )
    print(f"{len(results.rows)} rows written")
    return 0


def cmd_gen_maps(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        seed = derive_seed(args.seed, 0, i)
        if args.kind == "maze":
            grid = generate_maze(args.width, args.height, seed)
        else:
            grid = generate_obstacle_field(args.width, args.height, args.density, seed)
        (out / f"{args.kind}-{i:03d}.map").write_bytes(render_map(grid).encode("utf-8"))
    print(f"wrote {args.count} maps to {out}")
    return 0


def cmd_oracle(args) -> int:
    try:
        text = Path(args.map).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(exc)) from exc
    result = dijkstra_cost(parse_map(text))
    path = [list(c) for c in result.witness_path] if result.reachable else None
    print(json.dumps({"cost": result.cost, "witness_path": path}))
    return 0


def cmd_compare(args) -> int:
    try:
        text = Path(args.results).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(exc)) from exc
    comparison = compare_policies(ResultSet.from_csv(text))
    Path(args.out).write_bytes(comparison.to_csv().encode("utf-8"))
    print(comparison.table(), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deastar", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment config")
    run.add_argument("--config", required=True)
    run.add_argument("--seed", type=int, help="override master_seed")
    run.add_argument("--workers", type=int, default=1)
    run.set_defaults(func=cmd_run)

    gen = sub.add_parser("gen-maps", help="write a seeded map corpus")
    gen.add_argument("--kind", choices=["maze", "field"], required=True)
    gen.add_argument("--out", required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--count", type=int, required=True)
    gen.add_argument("--width", type=int, required=True)
    gen.add_argument("--height", type=int, required=True)
    gen.add_argument("--density", type=float, default=0.25)
    gen.set_defaults(func=cmd_gen_maps)

    orc = sub.add_parser("oracle", help="print C* and a witness path for a map file")
    orc.add_argument("--map", required=True)
    orc.set_defaults(func=cmd_oracle)

    cmp_ = sub.add_parser("compare", help="summarize a results CSV")
    cmp_.add_argument("--results", required=True)
    cmp_.add_argument("--out", required=True)
    cmp_.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ConfigError, UsageError, MapParseError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
