"""Offline best-first search: A* and AlphA*.

Nodes are ordered by ``f_alpha = (1 + w) * f`` where ``w`` is ``lam`` when the
selected alpha-perimeter holds for the node and ``Lam`` otherwise. Weights are
frozen when a node is (re)inserted into OPEN. A CLOSED node reached by a
cheaper route is reopened; without that the (1 + Lam) / (1 + lam) cost bound
fails on ordinary obstacle maps.

All comparisons are exact: ``1 + w`` is scaled to an integer by the common
denominator of ``1 + lam`` and ``1 + Lam``, so heap keys are plain integers.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional

from .errors import UsageError
from .grid import Cell, GridMap, Heuristic, heuristic_value, neighbors


class Perimeter(Enum):
    G_NONAGGRESSIVE = "g_nonaggressive"
    H_NONAGGRESSIVE = "h_nonaggressive"
    G_AGGRESSIVE = "g_aggressive"
    H_AGGRESSIVE = "h_aggressive"

    @property
    def aggressive(self) -> bool:
        return self in (Perimeter.G_AGGRESSIVE, Perimeter.H_AGGRESSIVE)


def exact(value) -> Fraction:
    """Decimal literals are taken at face value: 0.2 becomes 1/5."""
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class AlphaParams:
    lam: Fraction
    Lam: Fraction
    perimeter: Perimeter = Perimeter.G_NONAGGRESSIVE

    def __post_init__(self):
        lam, Lam = exact(self.lam), exact(self.Lam)
        if not -1 < lam <= Lam:
            raise UsageError(f"need -1 < lambda <= Lambda, got {lam}, {Lam}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "Lam", Lam)
        object.__setattr__(self, "perimeter", Perimeter(self.perimeter))


ASTAR = AlphaParams(0, 0)


def epsilon_bound(params: AlphaParams) -> Fraction:
    """Smallest epsilon for which AlphA* with these constants is epsilon-admissible."""
    lam, Lam = exact(params.lam), exact(params.Lam)
    if not -1 < lam <= Lam:
        raise UsageError(f"need -1 < lambda <= Lambda, got {lam}, {Lam}")
    return (1 + Lam) / (1 + lam) - 1


def weight(alpha_true: bool, params: AlphaParams) -> Fraction:
    return params.lam if alpha_true else params.Lam


@dataclass
class NodeRecord:
    cell: Cell
    g: int
    h: int
    parent: Optional[Cell] = None
    w: Fraction = Fraction(0)
    alpha_true: bool = True
    index: int = 0

    @property
    def f(self) -> int:
        return self.g + self.h

    @property
    def f_alpha(self) -> Fraction:
        return (1 + self.w) * self.f


@dataclass
class SearchState:
    open: Dict[Cell, NodeRecord] = field(default_factory=dict)
    closed: Dict[Cell, NodeRecord] = field(default_factory=dict)
    last_expanded: Optional[NodeRecord] = None
    # node popped from OPEN whose successors are being generated
    expanding: Optional[NodeRecord] = None
    max_closed_g: Optional[int] = None
    min_closed_h: Optional[int] = None

    def record(self, cell: Cell) -> Optional[NodeRecord]:
        if self.expanding is not None and self.expanding.cell == cell:
            return self.expanding
        return self.closed.get(cell) or self.open.get(cell)

    def close(self, node: NodeRecord) -> None:
        self.closed[node.cell] = node
        self.last_expanded = node
        self.expanding = None
        if self.max_closed_g is None or node.g > self.max_closed_g:
            self.max_closed_g = node.g
        if self.min_closed_h is None or node.h < self.min_closed_h:
            self.min_closed_h = node.h

    def reopen(self, cell: Cell) -> NodeRecord:
        node = self.closed.pop(cell)
        # extrema only move when the removed node attained them
        if node.g == self.max_closed_g:
            self.max_closed_g = max((n.g for n in self.closed.values()), default=None)
        if node.h == self.min_closed_h:
            self.min_closed_h = min((n.h for n in self.closed.values()), default=None)
        return node


def alpha_predicate(perimeter, candidate: NodeRecord, state: SearchState) -> bool:
    """alpha(n) for ``candidate`` under ``perimeter`` (or ``AlphaParams``).

    Before the first expansion completes, or for a parentless node, the
    predicate holds vacuously.
    """
    if isinstance(perimeter, AlphaParams):
        perimeter = perimeter.perimeter
    if candidate.parent is None or not state.closed:
        return True
    parent = state.record(candidate.parent)
    if parent is None:
        raise UsageError(f"no record for parent {candidate.parent} of {candidate.cell}")
    if perimeter is Perimeter.G_NONAGGRESSIVE:
        return parent.g >= state.last_expanded.g
    if perimeter is Perimeter.H_NONAGGRESSIVE:
        return parent.h <= state.last_expanded.h
    if perimeter is Perimeter.G_AGGRESSIVE:
        return parent.g >= state.max_closed_g
    return parent.h <= state.min_closed_h


class AlphaSearch:
    """Step-wise AlphA* over a grid; the building block for every planner.

    ``pop`` and ``expand`` are separate so a real-time engine can move the
    agent between choosing a node and generating its successors.
    """

    def __init__(self, grid: GridMap, heuristic: Heuristic, params: AlphaParams, goal: Cell = None):
        self.grid = grid
        self.heuristic = heuristic
        self.params = params
        self.goal = grid.goal if goal is None else goal
        self.state = SearchState()
        one_lam, one_Lam = 1 + params.lam, 1 + params.Lam
        self.scale = math.lcm(one_lam.denominator, one_Lam.denominator)
        # integer (1 + w) * scale for alpha true / false
        self._wkey = {
            True: one_lam.numerator * (self.scale // one_lam.denominator),
            False: one_Lam.numerator * (self.scale // one_Lam.denominator),
        }
        # current parent of every cell with a record
        self.parent: Dict[Cell, Optional[Cell]] = {}
        self._heap = []  # (scaled f_alpha, h, index, cell)
        self._fheap = []  # (f, h, index, cell)
        self._counter = 0
        self.trail: List[dict] = []
        # cells inserted into OPEN, in first-insertion order, with f at that time
        self.considered: Dict[Cell, int] = {}
        self.last_inserted: List[Cell] = []

    def key(self, node: NodeRecord) -> int:
        """f_alpha scaled to an exact integer."""
        return self._wkey[node.alpha_true] * node.f

    def h(self, cell: Cell) -> int:
        return heuristic_value(self.heuristic, cell, self.goal)

    def _insert(self, node: NodeRecord) -> None:
        node.index = self._counter
        self._counter += 1
        self.state.open[node.cell] = node
        self.parent[node.cell] = node.parent
        heapq.heappush(self._heap, (self.key(node), node.h, node.index, node.cell))
        heapq.heappush(self._fheap, (node.f, node.h, node.index, node.cell))
        self.considered.setdefault(node.cell, node.f)

    def push_start(self, cell: Cell = None) -> NodeRecord:
        cell = self.grid.start if cell is None else cell
        node = NodeRecord(cell, 0, self.h(cell), None, self.params.lam, True)
        self._insert(node)
        return node

    def _live(self, entry) -> bool:
        node = self.state.open.get(entry[3])
        return node is not None and node.index == entry[2]

    def _prune(self, heap) -> None:
        while heap and not self._live(heap[0]):
            heapq.heappop(heap)

    def open_min(self) -> Optional[NodeRecord]:
        """OPEN node with least (f_alpha, h, insertion order)."""
        self._prune(self._heap)
        return self.state.open[self._heap[0][3]] if self._heap else None

    def open_min_f(self) -> Optional[int]:
        self._prune(self._fheap)
        return self._fheap[0][0] if self._fheap else None

    def sort_key(self, node: NodeRecord):
        return (self.key(node), node.h, node.index)

    def pop(self, cell: Cell = None) -> Optional[NodeRecord]:
        """Remove the OPEN minimum, or the given OPEN cell, and mark it expanding."""
        if cell is None:
            node = self.open_min()
            if node is None:
                return None
        else:
            node = self.state.open.get(cell)
            if node is None:
                raise UsageError(f"{cell} is not in OPEN")
        del self.state.open[node.cell]
        self.state.expanding = node
        self.trail.append(
            {
                "cell": list(node.cell),
                "g": node.g,
                "h": node.h,
                "f": node.f,
                "w": str(node.w),
                "f_alpha": str(node.f_alpha),
                "alpha_true": node.alpha_true,
            }
        )
        return node

    def expand(self, node: NodeRecord, grid: GridMap = None, perimeter: Perimeter = None) -> List[NodeRecord]:
        """Generate successors of the popped ``node`` and move it to CLOSED.

        ``grid`` overrides the map used for successor generation (the agent's
        belief in partially known worlds); ``perimeter`` overrides the
        configured alpha-perimeter for these insertions.
        """
        grid = self.grid if grid is None else grid
        perimeter = self.params.perimeter if perimeter is None else perimeter
        state = self.state
        inserted = []
        for n in neighbors(grid, node.cell):
            g = node.g + 1
            old = state.open.get(n) or state.closed.get(n)
            if old is not None and g >= old.g:
                continue
            if n in state.closed:
                # cheaper route to an expanded node: reopen it
                state.reopen(n)
            child = NodeRecord(n, g, old.h if old else self.h(n), node.cell)
            child.alpha_true = alpha_predicate(perimeter, child, state)
            child.w = weight(child.alpha_true, self.params)
            self._insert(child)
            inserted.append(child)
        state.close(node)
        self.last_inserted = [c.cell for c in inserted]
        return inserted

    def path_to(self, cell: Cell) -> List[Cell]:
        path = [cell]
        parent = self.parent
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        path.reverse()
        return path


@dataclass
class AlphaResult:
    path: Optional[List[Cell]]
    cost: Optional[int]
    expansions: int
    trail: List[dict]

    @property
    def found(self) -> bool:
        return self.path is not None

    def trail_jsonl(self) -> str:
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.trail)


def alpha_star(grid: GridMap, heuristic: Heuristic, params: AlphaParams) -> AlphaResult:
    search = AlphaSearch(grid, heuristic, params)
    search.push_start()
    expansions = 0
    while True:
        node = search.pop()
        if node is None:
            return AlphaResult(None, None, expansions, search.trail)
        expansions += 1
        if node.cell == grid.goal:
            path = search.path_to(node.cell)
            search.state.close(node)
            return AlphaResult(path, node.g, expansions, search.trail)
        search.expand(node)


def within_suboptimality_bound(cost: int, c_star: int, params: AlphaParams) -> bool:
    """cost <= (1 + Lam) / (1 + lam) * c_star, compared exactly."""
    return (1 + params.lam) * cost <= (1 + params.Lam) * c_star


def write_trail(path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(json.dumps(r, sort_keys=True) + "\n")
