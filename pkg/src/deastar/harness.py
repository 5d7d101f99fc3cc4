"""Monte Carlo experiment runner.

A config fixes everything: the corpus is generated from ``master_seed`` and
each trial seed is ``derive_seed(master_seed, 1, map_index, algorithm_index,
trial)``, so results do not depend on scheduling or worker count. Map ``i`` of
a generated corpus uses ``derive_seed(master_seed, 0, i)``.

CSV columns (frozen): see ``CSV_COLUMNS``. Non-integer numbers are written
with six decimals, rounded half-to-even from the exact rational value.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

import yaml

from .alpha import AlphaParams, Perimeter, epsilon_bound, exact
from .dea import Branch, DeaStarPolicy, PacParams, exceedance_indicator
from .errors import ConfigError, GenerationError, RunawayError, UsageError
from .grid import GridMap, Heuristic, generate_maze, generate_obstacle_field, parse_map
from .oracle import dijkstra_cost
from .realtime import (
    DEFAULT_STEP_BUDGET,
    AlphaStarPolicy,
    AstarReplan,
    SensingMode,
    execute_realtime,
    literal_cost,
    traveled_cost,
)
from .rng import derive_seed

log = logging.getLogger(__name__)

CSV_COLUMNS = [
    "map_id",
    "algorithm_id",
    "trial",
    "seed",
    "c_star",
    "traveled",
    "literal",
    "ratio",
    "exceeded_epsilon",
    "mu",
    "sum_sigma",
    "aggressive_count",
    "nonaggressive_count",
    "reached_goal",
]

SUMMARY_COLUMNS = [
    "algorithm_id",
    "rows",
    "mean_ratio",
    "median_ratio",
    "mean_mu",
    "mean_sum_sigma",
    "exceedance_rate",
    "map_wins",
]


def fmt(value) -> str:
    """Six decimals, round-half-even, computed exactly."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    q = round(Fraction(value) * 10**6)
    sign = "-" if q < 0 else ""
    q = abs(q)
    return f"{sign}{q // 10**6}.{q % 10**6:06d}"


@dataclass(frozen=True)
class CorpusSpec:
    kind: str = "field"
    width: int = 20
    height: int = 20
    density: float = 0.25
    count: int = 1
    files: tuple = ()

    def __post_init__(self):
        if self.kind not in ("field", "maze", "empty", "files"):
            raise ConfigError(f"unknown corpus kind {self.kind!r}")
        n = len(self.files) if self.kind == "files" else self.count
        if n <= 0:
            raise ConfigError("corpus is empty")


@dataclass(frozen=True)
class AlgorithmSpec:
    kind: str
    lam: float = 0
    Lam: float = 1
    perimeter: str = "g_nonaggressive"
    epsilon: Optional[float] = None
    delta: Optional[float] = None
    variant: str = "g"
    id: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("astar_replan", "alpha_star", "dea_star"):
            raise ConfigError(f"unknown algorithm kind {self.kind!r}")
        try:
            self.policy()
        except (UsageError, ValueError) as exc:
            raise ConfigError(f"invalid {self.kind} parameters: {exc}") from exc

    def policy(self):
        if self.kind == "astar_replan":
            return AstarReplan()
        alpha = AlphaParams(self.lam, self.Lam, Perimeter(self.perimeter))
        if self.kind == "alpha_star":
            return AlphaStarPolicy(alpha)
        if self.epsilon is None or self.delta is None:
            raise ConfigError("dea_star needs epsilon and delta")
        return DeaStarPolicy(PacParams(self.epsilon, self.delta, alpha, self.variant))

    @property
    def algorithm_id(self) -> str:
        if self.id:
            return self.id
        if self.kind == "astar_replan":
            return "astar_replan"
        lam, Lam = exact(self.lam), exact(self.Lam)
        if self.kind == "alpha_star":
            return f"alpha_star(lam={lam},Lam={Lam},{self.perimeter})"
        return (
            f"dea_star(eps={exact(self.epsilon)},delta={exact(self.delta)},"
            f"lam={lam},Lam={Lam},{self.variant})"
        )

    @property
    def tolerance(self) -> Fraction:
        """The epsilon a trial of this algorithm is judged against."""
        if self.epsilon is not None:
            return exact(self.epsilon)
        if self.kind == "alpha_star":
            return epsilon_bound(AlphaParams(self.lam, self.Lam))
        return Fraction(0)


@dataclass(frozen=True)
class OutputSpec:
    csv: Optional[str] = None
    json: Optional[str] = None


@dataclass(frozen=True)
class ExperimentConfig:
    master_seed: int
    corpus: CorpusSpec
    algorithms: tuple
    sensing: SensingMode = SensingMode()
    trials_per_map: int = 1
    output: OutputSpec = OutputSpec()
    heuristic: Heuristic = Heuristic.MANHATTAN
    step_budget: int = DEFAULT_STEP_BUDGET
    base_dir: Path = field(default=Path("."), compare=False)

    def __post_init__(self):
        if not self.algorithms:
            raise ConfigError("no algorithms configured")
        if self.trials_per_map < 1:
            raise ConfigError("trials_per_map must be positive")
        ids = [a.algorithm_id for a in self.algorithms]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"duplicate algorithm ids: {ids}")

    @classmethod
    def from_dict(cls, raw: dict, base_dir: Path = Path(".")) -> "ExperimentConfig":
        try:
            corpus = dict(raw.get("corpus") or {})
            if "files" in corpus:
                corpus["files"] = tuple(corpus["files"])
                corpus.setdefault("kind", "files")
            sensing = raw.get("sensing") or {"kind": "omniscient"}
            if isinstance(sensing, str):
                sensing = {"kind": sensing}
            return cls(
                master_seed=int(raw["master_seed"]),
                corpus=CorpusSpec(**corpus),
                algorithms=tuple(AlgorithmSpec(**a) for a in raw.get("algorithms") or ()),
                sensing=SensingMode(**sensing),
                trials_per_map=int(raw.get("trials_per_map", 1)),
                output=OutputSpec(**(raw.get("output") or {})),
                heuristic=Heuristic(raw.get("heuristic", "manhattan")),
                step_budget=int(raw.get("step_budget", DEFAULT_STEP_BUDGET)),
                base_dir=base_dir,
            )
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config: {exc!r}") from exc

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        path = Path(path)
        try:
            raw = yaml.safe_load(path.read_text(encoding="utf-8"))
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"config {path} is not a mapping")
        return cls.from_dict(raw, path.parent)

    def to_dict(self) -> dict:
        c = self.corpus
        return {
            "master_seed": self.master_seed,
            "corpus": {
                "kind": c.kind,
                "width": c.width,
                "height": c.height,
                "density": fmt(exact(c.density)),
                "count": c.count,
                "files": list(c.files),
            },
            "algorithms": [a.algorithm_id for a in self.algorithms],
            "sensing": {"kind": self.sensing.kind.value, "radius": self.sensing.radius},
            "trials_per_map": self.trials_per_map,
            "heuristic": self.heuristic.value,
            "step_budget": self.step_budget,
        }


def build_corpus(config: ExperimentConfig) -> List[tuple]:
    """(map_id, GridMap) pairs in corpus order."""
    spec = config.corpus
    maps = []
    try:
        if spec.kind == "files":
            for name in spec.files:
                path = Path(name)
                if not path.is_absolute():
                    path = config.base_dir / path
                maps.append((path.stem, parse_map(path.read_text(encoding="utf-8"))))
        else:
            for i in range(spec.count):
                seed = derive_seed(config.master_seed, 0, i)
                if spec.kind == "field":
                    grid = generate_obstacle_field(spec.width, spec.height, spec.density, seed)
                elif spec.kind == "maze":
                    grid = generate_maze(spec.width, spec.height, seed)
                else:
                    grid = generate_obstacle_field(spec.width, spec.height, 0, seed)
                maps.append((f"{spec.kind}-{i:03d}", grid))
    except (OSError, ValueError, GenerationError) as exc:
        raise ConfigError(f"corpus construction failed: {exc}") from exc
    return maps


@dataclass(frozen=True)
class RunResult:
    map_id: str
    algorithm_id: str
    trial: int
    seed: int
    c_star: int
    traveled: int
    literal: int
    exceeded_epsilon: bool
    mu: int
    sum_sigma: int
    aggressive_count: int
    nonaggressive_count: int
    reached_goal: bool

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.traveled, self.c_star)

    def as_row(self) -> Dict[str, str]:
        row = {k: getattr(self, k) for k in CSV_COLUMNS}
        return {k: fmt(v) if not isinstance(v, str) else v for k, v in row.items()}

    @classmethod
    def from_row(cls, row: dict) -> "RunResult":
        def flag(s):
            return s == "true"

        return cls(
            map_id=row["map_id"],
            algorithm_id=row["algorithm_id"],
            trial=int(row["trial"]),
            seed=int(row["seed"]),
            c_star=int(row["c_star"]),
            traveled=int(row["traveled"]),
            literal=int(row["literal"]),
            exceeded_epsilon=flag(row["exceeded_epsilon"]),
            mu=int(row["mu"]),
            sum_sigma=int(row["sum_sigma"]),
            aggressive_count=int(row["aggressive_count"]),
            nonaggressive_count=int(row["nonaggressive_count"]),
            reached_goal=flag(row["reached_goal"]),
        )


def _mean(values) -> Optional[Fraction]:
    values = list(values)
    return sum(values, Fraction(0)) / len(values) if values else None


def aggregate(rows: List[RunResult]) -> Dict[str, dict]:
    by_alg: Dict[str, List[RunResult]] = {}
    for r in rows:
        by_alg.setdefault(r.algorithm_id, []).append(r)
    out = {}
    for alg, rs in sorted(by_alg.items()):
        reached = [r for r in rs if r.reached_goal]
        ratios = [r.ratio for r in reached]
        out[alg] = {
            "rows": len(rs),
            "reached": len(reached),
            "mean_ratio": _mean(ratios),
            "median_ratio": Fraction(statistics.median(ratios)) if ratios else None,
            "exceedance_rate": Fraction(sum(r.exceeded_epsilon for r in rs), len(rs)),
            "mean_mu": _mean(r.mu for r in rs),
            "mean_sum_sigma": _mean(r.sum_sigma for r in rs),
            "mean_traveled": _mean(r.traveled for r in rs),
            "aggressive_total": sum(r.aggressive_count for r in rs),
            "nonaggressive_total": sum(r.nonaggressive_count for r in rs),
        }
    return out


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return fmt(value)
    return value


@dataclass
class ResultSet:
    rows: List[RunResult]
    aggregates: Dict[str, dict] = None
    pac_report: List[dict] = field(default_factory=list)
    failed: List[dict] = field(default_factory=list)
    config: Optional[dict] = None

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda r: (r.map_id, r.algorithm_id, r.trial))
        if self.aggregates is None:
            self.aggregates = aggregate(self.rows)

    @property
    def algorithm_ids(self) -> List[str]:
        return sorted({r.algorithm_id for r in self.rows})

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in self.rows:
            writer.writerow(r.as_row())
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "config": self.config,
            "rows": [r.as_row() for r in self.rows],
            "aggregates": self.aggregates,
            "pac_report": self.pac_report,
            "failed": self.failed,
        }
        return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "ResultSet":
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames != CSV_COLUMNS:
            raise ConfigError(f"unexpected CSV header: {reader.fieldnames}")
        return cls([RunResult.from_row(row) for row in reader])


def _run_unit(task) -> tuple:
    """All trials of one (map, algorithm) pair."""
    map_index, map_id, grid, c_star, alg_index, spec, sensing, heuristic, budget, seeds = task
    policy = spec.policy()
    rows, failed = [], []
    cached = None
    for trial, seed in enumerate(seeds):
        if cached is not None and policy.deterministic:
            trace, status = cached
        else:
            status = "ok"
            try:
                trace = execute_realtime(grid, heuristic, policy, sensing, seed, budget)
            except RunawayError as exc:
                trace, status = exc.trace, "runaway"
            cached = (trace, status)
        if status != "ok":
            failed.append({"map_id": map_id, "algorithm_id": spec.algorithm_id, "trial": trial, "status": status})
        branches = [d.branch for d in trace.decisions]
        rows.append(
            RunResult(
                map_id=map_id,
                algorithm_id=spec.algorithm_id,
                trial=trial,
                seed=seed,
                c_star=c_star,
                traveled=traveled_cost(trace),
                literal=literal_cost(trace),
                exceeded_epsilon=exceedance_indicator(trace, c_star, spec.tolerance),
                mu=trace.mu,
                sum_sigma=trace.sum_sigma,
                aggressive_count=branches.count(Branch.AGGRESSIVE),
                nonaggressive_count=branches.count(Branch.NON_AGGRESSIVE),
                reached_goal=trace.reached_goal and status == "ok",
            )
        )
    return rows, failed


def pac_report(config: ExperimentConfig, aggregates: Dict[str, dict]) -> List[dict]:
    """Exceedance rate per dea_star (epsilon, delta), next to delta itself.

    ``rate_at_most_delta`` records whether the measured rate happened to stay
    within delta; it is an observation, not a guarantee.
    """
    report = []
    for spec in config.algorithms:
        if spec.kind != "dea_star":
            continue
        agg = aggregates[spec.algorithm_id]
        delta = exact(spec.delta)
        report.append(
            {
                "algorithm_id": spec.algorithm_id,
                "epsilon": exact(spec.epsilon),
                "delta": delta,
                "exceedance_rate": agg["exceedance_rate"],
                "rate_at_most_delta": agg["exceedance_rate"] <= delta,
                "mean_mu": agg["mean_mu"],
                "mean_sum_sigma": agg["mean_sum_sigma"],
            }
        )
    return report


def run_experiment(config: ExperimentConfig, workers: int = 1, write: bool = True) -> ResultSet:
    corpus = build_corpus(config)
    tasks = []
    for m, (map_id, grid) in enumerate(corpus):
        oracle = dijkstra_cost(grid)
        if not oracle.reachable:
            raise ConfigError(f"map {map_id} has no start-goal path")
        for a, spec in enumerate(config.algorithms):
            seeds = [derive_seed(config.master_seed, 1, m, a, t) for t in range(config.trials_per_map)]
            tasks.append(
                (m, map_id, grid, oracle.cost, a, spec, config.sensing, config.heuristic, config.step_budget, seeds)
            )
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_unit, tasks, chunksize=4))
    else:
        outcomes = [_run_unit(t) for t in tasks]
    rows = [r for rs, _ in outcomes for r in rs]
    failed = [f for _, fs in outcomes for f in fs]
    for f in failed:
        log.warning("trial failed: %s", f)
    results = ResultSet(rows, failed=failed, config=config.to_dict())
    results.pac_report = pac_report(config, results.aggregates)
    if write:
        write_results(results, config)
    return results


def write_results(results: ResultSet, config: ExperimentConfig) -> None:
    for target, text in ((config.output.csv, results.to_csv()), (config.output.json, results.to_json())):
        if not target:
            continue
        path = Path(target)
        if not path.is_absolute():
            path = config.base_dir / path
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(text.encode("utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot write {path}: {exc}") from exc


def exceedance_rate(results: ResultSet, algorithm_id: str) -> Fraction:
    rows = [r for r in results.rows if r.algorithm_id == algorithm_id]
    if not rows:
        raise UsageError(f"no rows for algorithm {algorithm_id!r}")
    return Fraction(sum(r.exceeded_epsilon or not r.reached_goal for r in rows), len(rows))


@dataclass
class Comparison:
    rows: List[dict]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: v if isinstance(v, str) else fmt(v) for k, v in row.items()})
        return buf.getvalue()

    def table(self) -> str:
        cells = [SUMMARY_COLUMNS] + [
            [v if isinstance(v, str) else fmt(v) for v in (row[k] for k in SUMMARY_COLUMNS)]
            for row in self.rows
        ]
        widths = [max(len(r[i]) for r in cells) for i in range(len(SUMMARY_COLUMNS))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"


def compare_policies(results: ResultSet) -> Comparison:
    """Per-algorithm aggregates plus per-map wins on mean traveled distance.

    Every algorithm tied for the lowest mean on a map is credited a win.
    """
    algs = results.algorithm_ids
    if len(algs) < 2:
        raise UsageError("comparison needs at least two algorithms")
    per_map: Dict[str, Dict[str, List[int]]] = {}
    for r in results.rows:
        per_map.setdefault(r.map_id, {}).setdefault(r.algorithm_id, []).append(r.traveled)
    wins = dict.fromkeys(algs, 0)
    for by_alg in per_map.values():
        means = {a: Fraction(sum(v), len(v)) for a, v in by_alg.items()}
        best = min(means.values())
        for a, m in means.items():
            if m == best:
                wins[a] += 1
    rows = []
    for a in algs:
        agg = results.aggregates[a]
        rows.append(
            {
                "algorithm_id": a,
                "rows": agg["rows"],
                "mean_ratio": agg["mean_ratio"] if agg["mean_ratio"] is not None else "",
                "median_ratio": agg["median_ratio"] if agg["median_ratio"] is not None else "",
                "mean_mu": agg["mean_mu"],
                "mean_sum_sigma": agg["mean_sum_sigma"],
                "exceedance_rate": agg["exceedance_rate"],
                "map_wins": wins[a],
            }
        )
    return Comparison(rows)
