"""Real-time execution of search policies.

The agent occupies one cell at a time. Before a node can be expanded the
agent must stand on it, so choosing a node that is not adjacent means walking
the search tree: up the parent chain to the deepest common ancestor, then down
to the target. Every cell entered is appended to ``Trace.moves``.

Two cost readings are kept. ``literal_cost`` is the sum over considered nodes
of visits times ``f`` recorded at first consideration. ``traveled_cost`` is
the number of unit steps taken.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

from .alpha import ASTAR, AlphaParams, AlphaSearch, NodeRecord, Perimeter
from .errors import RunawayError, UsageError
from .grid import Cell, GridMap, Heuristic, adjacent

DEFAULT_STEP_BUDGET = 10**6


class SensingKind(Enum):
    OMNISCIENT = "omniscient"
    RADIUS = "radius"


@dataclass(frozen=True)
class SensingMode:
    kind: SensingKind = SensingKind.OMNISCIENT
    radius: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", SensingKind(self.kind))
        if self.kind is SensingKind.RADIUS and self.radius < 1:
            raise UsageError("sensing radius must be >= 1")

    @classmethod
    def omniscient(cls) -> "SensingMode":
        return cls(SensingKind.OMNISCIENT)

    @classmethod
    def within(cls, radius: int) -> "SensingMode":
        return cls(SensingKind.RADIUS, radius)


class Belief:
    """What the agent knows about obstacles; unseen cells are assumed free."""

    def __init__(self, grid: GridMap, sensing: SensingMode):
        self.grid = grid
        self.width = grid.width
        self.height = grid.height
        self.sensing = sensing
        self.omniscient = sensing.kind is SensingKind.OMNISCIENT
        self.blocked = set(grid.blocked) if self.omniscient else set()
        self._observed_from = set()

    def in_bounds(self, cell: Cell) -> bool:
        return self.grid.in_bounds(cell)

    def is_free(self, cell: Cell) -> bool:
        return self.grid.in_bounds(cell) and cell not in self.blocked

    def observe(self, at: Cell) -> List[Cell]:
        """Record obstacles within Chebyshev radius of ``at``; return new ones."""
        if self.omniscient or at in self._observed_from:
            return []
        self._observed_from.add(at)
        r = self.sensing.radius
        x0, y0 = at
        found = []
        for y in range(max(0, y0 - r), min(self.height, y0 + r + 1)):
            for x in range(max(0, x0 - r), min(self.width, x0 + r + 1)):
                c = (x, y)
                if c in self.grid.blocked and c not in self.blocked:
                    self.blocked.add(c)
                    found.append(c)
        return found


def _cell_key(cell: Cell) -> str:
    return f"{cell[0]},{cell[1]}"


@dataclass
class Trace:
    start: Cell
    moves: List[Cell] = field(default_factory=list)
    visit_count: Dict[Cell, int] = field(default_factory=dict)
    # considered cells in first-consideration order, mapped to f at that time
    considered: Dict[Cell, int] = field(default_factory=dict)
    reached_goal: bool = False
    seed: Optional[int] = None
    decisions: list = field(default_factory=list)

    def __post_init__(self):
        if not self.visit_count:
            self.visit_count = {self.start: 1}

    @property
    def mu(self) -> int:
        return len(self.considered)

    @property
    def sum_sigma(self) -> int:
        return sum(self.visit_count.values())

    def step(self, cell: Cell) -> None:
        self.moves.append(cell)
        self.visit_count[cell] = self.visit_count.get(cell, 0) + 1

    def to_json(self) -> dict:
        return {
            "moves": [list(c) for c in self.moves],
            "sigma": {_cell_key(c): n for c, n in sorted(self.visit_count.items())},
            "mu": self.mu,
            "literal_cost": literal_cost(self),
            "traveled_cost": traveled_cost(self),
            "reached_goal": self.reached_goal,
            "seed": self.seed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def literal_cost(trace: Trace) -> int:
    """Sum of visits times first-consideration f over considered nodes.

    Considered nodes the agent never entered contribute zero.
    """
    return sum(trace.visit_count.get(c, 0) * f for c, f in trace.considered.items())


def traveled_cost(trace: Trace) -> int:
    return len(trace.moves)


def recount_visits(trace: Trace) -> Dict[Cell, int]:
    counts = Counter(trace.moves)
    counts[trace.start] += 1
    return dict(counts)


def trace_violations(trace: Trace, c_star: Optional[int] = None) -> List[str]:
    """Invariant breaches of ``trace``; an empty list means it is valid."""
    problems = []
    prev = trace.start
    for i, cell in enumerate(trace.moves):
        if not adjacent(prev, cell):
            problems.append(f"move {i}: {prev} -> {cell} is not a unit step")
        prev = cell
    if recount_visits(trace) != trace.visit_count:
        problems.append("visit counts disagree with the move list")
    visited_considered = {c for c in trace.visit_count if c in trace.considered}
    if trace.mu < len(visited_considered):
        problems.append("mu smaller than the visited considered cells")
    if trace.reached_goal and c_star is not None and traveled_cost(trace) < c_star:
        problems.append(f"traveled {traveled_cost(trace)} below optimum {c_star}")
    return problems


def dominance_check(bounded: Trace, unbounded: Trace) -> Optional[bool]:
    """Whether ``bounded`` considers and revisits no more than ``unbounded``.

    Returns None when the traces are not comparable: the bounded consideration
    set is not contained in the unbounded one, or a shared node carries a
    different f. When the result is True the literal costs are ordered, and a
    violation raises AssertionError.
    """
    shared_f_ok = all(
        unbounded.considered.get(c) == f for c, f in bounded.considered.items()
    )
    if not shared_f_ok:
        return None
    dominated = bounded.mu <= unbounded.mu and all(
        bounded.visit_count.get(c, 0) <= unbounded.visit_count.get(c, 0)
        for c in bounded.considered
    )
    if dominated and literal_cost(bounded) > literal_cost(unbounded):
        raise AssertionError(
            f"dominance without cost ordering: {literal_cost(bounded)} > {literal_cost(unbounded)}"
        )
    return dominated


@dataclass(frozen=True)
class AstarReplan:
    """Plan a full A* path on the believed map, follow it, replan on contact."""

    name = "astar_replan"
    deterministic = True


@dataclass(frozen=True)
class AlphaStarPolicy:
    """AlphA* run under the real-time contract with a fixed perimeter."""

    params: AlphaParams
    name = "alpha_star"
    deterministic = True

    @property
    def alpha_params(self) -> AlphaParams:
        return self.params

    def chooser(self, seed: int) -> "FixedPerimeter":
        return FixedPerimeter(self.params.perimeter)


class FixedPerimeter:
    decisions = ()

    def __init__(self, perimeter: Perimeter):
        self.perimeter = perimeter

    def choose(self, search: AlphaSearch) -> Optional[NodeRecord]:
        return search.pop()


def _ancestors(search: AlphaSearch, cell: Cell) -> List[Cell]:
    chain = [cell]
    parent = search.parent
    while parent[chain[-1]] is not None:
        chain.append(parent[chain[-1]])
    return chain


def tree_route(search: AlphaSearch, here: Cell, target: NodeRecord) -> List[Cell]:
    """Cells to enter, in order, to walk from ``here`` to ``target`` along the tree."""
    if target.cell == here:
        return []
    if target.parent is None:
        raise UsageError(f"cannot route to parentless {target.cell} from {here}")
    up = _ancestors(search, here)
    index = {c: i for i, c in enumerate(up)}
    down = []
    c = target.parent
    while c not in index:
        down.append(c)
        c = search.parent[c]
    route = up[1 : index[c] + 1] + down[::-1] + [target.cell]
    return route


def execute_realtime(
    grid: GridMap,
    heuristic: Heuristic,
    policy,
    sensing: SensingMode = SensingMode(),
    seed: int = 0,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> Trace:
    if isinstance(policy, AstarReplan):
        return _execute_replanning(grid, heuristic, sensing, seed, step_budget)
    return _execute_expansions(grid, heuristic, policy, sensing, seed, step_budget)


def _walk(trace: Trace, belief: Belief, route: List[Cell], step_budget: int) -> None:
    for cell in route:
        trace.step(cell)
        belief.observe(cell)
        if len(trace.moves) > step_budget:
            raise RunawayError(f"step budget of {step_budget} moves exhausted", trace)


def _execute_expansions(grid, heuristic, policy, sensing, seed, step_budget) -> Trace:
    belief = Belief(grid, sensing)
    belief.observe(grid.start)
    search = AlphaSearch(grid, heuristic, policy.alpha_params)
    chooser = policy.chooser(seed)
    trace = Trace(grid.start, seed=seed, decisions=chooser.decisions)
    trace.considered = search.considered
    search.push_start()
    here = grid.start
    while True:
        node = chooser.choose(search)
        if node is None:
            return trace
        _walk(trace, belief, tree_route(search, here, node), step_budget)
        here = node.cell
        if here == grid.goal:
            search.state.close(node)
            trace.reached_goal = True
            return trace
        search.expand(node, belief, chooser.perimeter)


def _execute_replanning(grid, heuristic, sensing, seed, step_budget) -> Trace:
    belief = Belief(grid, sensing)
    belief.observe(grid.start)
    trace = Trace(grid.start, seed=seed)
    here = grid.start
    while True:
        search = AlphaSearch(grid, heuristic, ASTAR)
        search.push_start(here)
        found = None
        while found is None:
            node = search.pop()
            if node is None:
                break
            if node.cell == grid.goal:
                found = node
                search.state.close(node)
            else:
                search.expand(node, belief)
        for c, f in search.considered.items():
            trace.considered.setdefault(c, f)
        if found is None:
            return trace
        plan = search.path_to(grid.goal)
        for i in range(1, len(plan)):
            if any(c in belief.blocked for c in plan[i:]):
                break
            _walk(trace, belief, [plan[i]], step_budget)
            here = plan[i]
            if here == grid.goal:
                trace.reached_goal = True
                return trace
