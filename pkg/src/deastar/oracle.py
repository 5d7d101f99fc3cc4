"""Ground-truth shortest paths.

``dijkstra_cost`` supplies C* everywhere in the package. ``enumerate_paths``
is a deliberately naive brute force used only to cross-check it on tiny maps.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import List, Optional

from .errors import UsageError
from .grid import Cell, GridMap, neighbors

MAX_ENUMERATION_CELLS = 20


@dataclass(frozen=True)
class OracleResult:
    cost: Optional[int]
    witness_path: Optional[List[Cell]] = None

    @property
    def reachable(self) -> bool:
        return self.cost is not None


UNREACHABLE = OracleResult(None, None)


def _check_endpoints(grid: GridMap, source: Cell, target: Cell) -> None:
    for cell in (source, target):
        if not grid.in_bounds(cell):
            raise UsageError(f"cell {cell} is out of bounds")
        if cell in grid.blocked:
            raise UsageError(f"cell {cell} is blocked")


def dijkstra_cost(grid: GridMap, source: Cell = None, target: Cell = None) -> OracleResult:
    source = grid.start if source is None else source
    target = grid.goal if target is None else target
    _check_endpoints(grid, source, target)
    dist = {source: 0}
    parent = {source: None}
    # (distance, insertion order) keeps the witness deterministic
    frontier = [(0, 0, source)]
    counter = 1
    done = set()
    while frontier:
        d, _, cell = heapq.heappop(frontier)
        if cell in done:
            continue
        done.add(cell)
        if cell == target:
            path = [cell]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            path.reverse()
            return OracleResult(d, path)
        for n in neighbors(grid, cell):
            nd = d + 1
            if nd < dist.get(n, nd + 1):
                dist[n] = nd
                parent[n] = cell
                heapq.heappush(frontier, (nd, counter, n))
                counter += 1
    return UNREACHABLE


def enumerate_paths(
    grid: GridMap,
    source: Cell = None,
    target: Cell = None,
    max_cells: int = MAX_ENUMERATION_CELLS,
) -> Optional[int]:
    """Minimum length over every simple path, or None when none exists."""
    source = grid.start if source is None else source
    target = grid.goal if target is None else target
    _check_endpoints(grid, source, target)
    if max_cells > MAX_ENUMERATION_CELLS:
        raise UsageError(f"max_cells may not exceed {MAX_ENUMERATION_CELLS}")
    if len(grid.free_cells()) > max_cells:
        raise UsageError(
            f"map has {len(grid.free_cells())} free cells; enumeration is capped at {max_cells}"
        )
    best = None
    on_path = {source}

    def walk(cell: Cell, length: int) -> None:
        nonlocal best
        if cell == target:
            if best is None or length < best:
                best = length
            return
        for n in neighbors(grid, cell):
            if n not in on_path:
                on_path.add(n)
                walk(n, length + 1)
                on_path.remove(n)

    walk(source, 0)
    return best


def count_simple_paths(grid: GridMap, source: Cell = None, target: Cell = None) -> int:
    """Number of simple source-target paths. Exponential; small maps only."""
    source = grid.start if source is None else source
    target = grid.goal if target is None else target
    on_path = {source}
    total = 0

    def walk(cell: Cell) -> None:
        nonlocal total
        if cell == target:
            total += 1
            return
        for n in neighbors(grid, cell):
            if n not in on_path:
                on_path.add(n)
                walk(n)
                on_path.remove(n)

    walk(source)
    return total
