"""Grid worlds: 4-connected, unit step cost, with blocked cells."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, List, Tuple

from .errors import GenerationError, MapParseError, UsageError
from .rng import SplitMix64

Cell = Tuple[int, int]

# north, east, south, west; y grows downwards
DIRECTIONS: Tuple[Cell, ...] = ((0, -1), (1, 0), (0, 1), (-1, 0))

FIELD_RETRY_BUDGET = 1000


@dataclass(frozen=True)
class GridMap:
    width: int
    height: int
    blocked: FrozenSet[Cell]
    start: Cell
    goal: Cell
    # solvability retries spent by the generator; not part of map identity
    retries: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise UsageError("map dimensions must be positive")
        object.__setattr__(self, "blocked", frozenset(self.blocked))
        for name, cell in (("start", self.start), ("goal", self.goal)):
            if not self.in_bounds(cell):
                raise UsageError(f"{name} {cell} is out of bounds")
            if cell in self.blocked:
                raise UsageError(f"{name} {cell} is blocked")
        if self.start == self.goal:
            raise UsageError("start and goal must differ")

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def is_free(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and cell not in self.blocked

    def free_cells(self) -> List[Cell]:
        return [
            (x, y)
            for y in range(self.height)
            for x in range(self.width)
            if (x, y) not in self.blocked
        ]

    def with_blocked(self, blocked) -> "GridMap":
        return GridMap(self.width, self.height, frozenset(blocked), self.start, self.goal)


def neighbors(grid: GridMap, cell: Cell) -> List[Cell]:
    """Unblocked 4-neighbours of ``cell`` in N, E, S, W order."""
    if not grid.in_bounds(cell):
        raise UsageError(f"cell {cell} is out of bounds")
    x, y = cell
    out = []
    for dx, dy in DIRECTIONS:
        n = (x + dx, y + dy)
        if grid.is_free(n):
            out.append(n)
    return out


def adjacent(a: Cell, b: Cell) -> bool:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


class Heuristic(Enum):
    MANHATTAN = "manhattan"
    ZERO = "zero"


def heuristic_value(h: Heuristic, cell: Cell, goal: Cell) -> int:
    if h is Heuristic.ZERO:
        return 0
    return abs(cell[0] - goal[0]) + abs(cell[1] - goal[1])


def generate_obstacle_field(width: int, height: int, density: float, seed: int) -> GridMap:
    """Random obstacle field from (0, 0) to (width-1, height-1).

    Every other cell is blocked independently with probability ``density``,
    scanning row-major. Unsolvable draws are discarded and regenerated from
    sub-seed ``seed + k``; ``k`` ends up in ``GridMap.retries``.
    """
    from .oracle import dijkstra_cost

    if width < 2 or height < 2:
        raise UsageError("obstacle fields need width, height >= 2")
    if not 0 <= density < 1:
        raise UsageError("density must lie in [0, 1)")
    start, goal = (0, 0), (width - 1, height - 1)
    for retry in range(FIELD_RETRY_BUDGET + 1):
        rng = SplitMix64(seed + retry)
        blocked = set()
        for y in range(height):
            for x in range(width):
                if (x, y) in (start, goal):
                    continue
                if rng.random() < density:
                    blocked.add((x, y))
        grid = GridMap(width, height, frozenset(blocked), start, goal, retries=retry)
        if dijkstra_cost(grid, start, goal).reachable:
            return grid
    raise GenerationError(
        f"no solvable {width}x{height} field at density {density} "
        f"after {FIELD_RETRY_BUDGET} retries (seed {seed})"
    )


def generate_maze(width: int, height: int, seed: int) -> GridMap:
    """Perfect maze carved by an iterative recursive backtracker.

    Rooms sit on odd coordinates; the outer ring is wall. Start is the
    top-left room and goal the bottom-right one.
    """
    from .oracle import dijkstra_cost

    if width < 5 or height < 5 or width % 2 == 0 or height % 2 == 0:
        raise UsageError("maze dimensions must be odd and >= 5")
    rng = SplitMix64(seed)
    free = set()
    first = (1, 1)
    free.add(first)
    stack = [first]
    while stack:
        x, y = stack[-1]
        options = []
        for dx, dy in DIRECTIONS:
            nx, ny = x + 2 * dx, y + 2 * dy
            if 0 < nx < width - 1 and 0 < ny < height - 1 and (nx, ny) not in free:
                options.append((nx, ny, dx, dy))
        if not options:
            stack.pop()
            continue
        nx, ny, dx, dy = options[rng.randbelow(len(options))]
        free.add((x + dx, y + dy))
        free.add((nx, ny))
        stack.append((nx, ny))
    blocked = frozenset(
        (x, y) for y in range(height) for x in range(width) if (x, y) not in free
    )
    grid = GridMap(width, height, blocked, first, (width - 2, height - 2))
    # carving connects every room, so this only guards against regressions
    if not dijkstra_cost(grid, grid.start, grid.goal).reachable:
        raise GenerationError("maze carving produced a disconnected map")
    return grid


def parse_map(text: str) -> GridMap:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MapParseError("empty map", 1, 1)
    width = len(lines[0])
    if width == 0:
        raise MapParseError("empty row", 1, 1)
    blocked = set()
    start = goal = None
    for y, line in enumerate(lines):
        if len(line) != width:
            raise MapParseError(
                f"ragged row: expected {width} characters, got {len(line)}",
                y + 1,
                min(len(line), width) + 1,
            )
        for x, ch in enumerate(line):
            if ch == "#":
                blocked.add((x, y))
            elif ch == "S":
                if start is not None:
                    raise MapParseError("duplicate start 'S'", y + 1, x + 1)
                start = (x, y)
            elif ch == "G":
                if goal is not None:
                    raise MapParseError("duplicate goal 'G'", y + 1, x + 1)
                goal = (x, y)
            elif ch != ".":
                raise MapParseError(f"unknown character {ch!r}", y + 1, x + 1)
    if start is None:
        raise MapParseError("missing start 'S'", len(lines), 1)
    if goal is None:
        raise MapParseError("missing goal 'G'", len(lines), 1)
    return GridMap(width, len(lines), frozenset(blocked), start, goal)


def render_map(grid: GridMap) -> str:
    rows = []
    for y in range(grid.height):
        row = []
        for x in range(grid.width):
            cell = (x, y)
            if cell == grid.start:
                row.append("S")
            elif cell == grid.goal:
                row.append("G")
            elif cell in grid.blocked:
                row.append("#")
            else:
                row.append(".")
        rows.append("".join(row))
    return "\n".join(rows) + "\n"
