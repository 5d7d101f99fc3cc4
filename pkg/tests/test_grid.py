import pytest
from hypothesis import given, settings, strategies as st

from deastar.errors import GenerationError, MapParseError, UsageError
from deastar.grid import (
    GridMap,
    Heuristic,
    generate_maze,
    generate_obstacle_field,
    heuristic_value,
    neighbors,
    parse_map,
    render_map,
)
from deastar.oracle import count_simple_paths, dijkstra_cost
from deastar.rng import SplitMix64


def empty(w, h):
    return GridMap(w, h, frozenset(), (0, 0), (w - 1, h - 1))


def test_neighbors_center_and_corner():
    g = empty(3, 3)
    assert neighbors(g, (1, 1)) == [(1, 0), (2, 1), (1, 2), (0, 1)]
    assert neighbors(g, (0, 0)) == [(1, 0), (0, 1)]


def test_neighbors_enclosed():
    g = GridMap(3, 3, frozenset({(1, 0), (2, 1), (1, 2), (0, 1)}), (0, 0), (2, 2))
    assert neighbors(g, (1, 1)) == []


def test_neighbors_out_of_bounds():
    with pytest.raises(UsageError):
        neighbors(empty(3, 3), (3, 0))


@pytest.mark.parametrize(
    "h, a, b, expected",
    [
        (Heuristic.MANHATTAN, (0, 0), (3, 4), 7),
        (Heuristic.ZERO, (0, 0), (3, 4), 0),
        (Heuristic.MANHATTAN, (2, 2), (2, 2), 0),
    ],
)
def test_heuristic_examples(h, a, b, expected):
    assert heuristic_value(h, a, b) == expected


def test_manhattan_admissible_on_random_samples():
    rng = SplitMix64(2024)
    checked = 0
    while checked < 1000:
        grid = generate_obstacle_field(12, 12, 0.3, rng.next_u64())
        free = grid.free_cells()
        cell = free[rng.randbelow(len(free))]
        truth = dijkstra_cost(grid, cell, grid.goal)
        if truth.reachable:
            assert heuristic_value(Heuristic.MANHATTAN, cell, grid.goal) <= truth.cost
        checked += 1


def test_gridmap_rejects_bad_endpoints():
    with pytest.raises(UsageError):
        GridMap(2, 1, frozenset({(0, 0)}), (0, 0), (1, 0))
    with pytest.raises(UsageError):
        GridMap(2, 1, frozenset(), (0, 0), (0, 0))
    with pytest.raises(UsageError):
        GridMap(2, 1, frozenset(), (0, 0), (2, 0))


def test_field_density_zero_is_empty():
    g = generate_obstacle_field(7, 5, 0, 1)
    assert not g.blocked and g.retries == 0


def test_field_golden(golden):
    expected = (golden / "field_20x20_d025_s42.map").read_text()
    assert render_map(generate_obstacle_field(20, 20, 0.25, 42)) == expected
    assert render_map(generate_obstacle_field(20, 20, 0.25, 42)) == expected


def test_field_unsatisfiable():
    with pytest.raises(GenerationError):
        generate_obstacle_field(5, 5, 0.999, 3)


def test_field_records_retries():
    # dense fields need several draws before one is solvable
    g = generate_obstacle_field(10, 10, 0.5, 5)
    assert dijkstra_cost(g).reachable
    assert g == generate_obstacle_field(10, 10, 0.5, 5)
    assert g.retries >= 0
    assert any(generate_obstacle_field(10, 10, 0.5, s).retries > 0 for s in range(20))


@pytest.mark.parametrize("bad", [(1, 5, 0.1), (5, 5, 1.0), (5, 5, -0.1)])
def test_field_preconditions(bad):
    with pytest.raises(UsageError):
        generate_obstacle_field(*bad, seed=0)


@pytest.mark.parametrize("seed", range(5))
def test_small_maze_has_one_path(seed):
    g = generate_maze(5, 5, seed)
    assert count_simple_paths(g) == 1


@pytest.mark.parametrize("dims", [(7, 7), (9, 9), (9, 7)])
@pytest.mark.parametrize("seed", range(8))
def test_mazes_up_to_9x9_are_perfect(dims, seed):
    g = generate_maze(*dims, seed)
    free = g.free_cells()
    # a perfect maze is a tree: every pair of free cells has one simple path
    assert count_simple_paths(g) == 1
    edges = sum(1 for (x, y) in free for n in ((x + 1, y), (x, y + 1)) if g.is_free(n))
    assert edges == len(free) - 1


def test_maze_golden(golden):
    assert render_map(generate_maze(21, 21, 7)) == (golden / "maze_21x21_s7.map").read_text()


def test_maze_even_dimensions_rejected():
    with pytest.raises(UsageError):
        generate_maze(4, 5, 1)


def test_parse_minimal():
    g = parse_map("SG\n")
    assert (g.width, g.height, g.start, g.goal) == (2, 1, (0, 0), (1, 0))


def test_parse_wall_separated_is_unsolvable():
    g = parse_map("S#G\n")
    assert not dijkstra_cost(g).reachable


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("S..\n..\nG..\n", 2, 3),
        ("S.x\n..G\n", 1, 3),
        ("S.S\n..G\n", 1, 3),
        ("S.G\n..G\n", 2, 3),
        ("...\n..G\n", 2, 1),
        ("S..\n...\n", 2, 1),
    ],
)
def test_parse_errors_name_position(text, line, column):
    with pytest.raises(MapParseError) as info:
        parse_map(text)
    assert (info.value.line, info.value.column) == (line, column)


@given(st.integers(0, 2**64 - 1), st.sampled_from([0.0, 0.1, 0.3]))
@settings(max_examples=40, deadline=None)
def test_render_parse_round_trip(seed, density):
    g = generate_obstacle_field(20, 20, density, seed)
    text = render_map(g)
    assert parse_map(text) == g
    assert render_map(parse_map(text)) == text
    assert text.endswith("\n") and "\r" not in text
