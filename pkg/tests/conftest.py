from pathlib import Path

import pytest

from deastar import realtime
from deastar.oracle import dijkstra_cost

GOLDEN = Path(__file__).parent / "golden"

# every trace produced in this process, checked again at session end
PRODUCED_TRACES = []
ACCEPTANCE_LINES = []


def _recording(fn):
    def wrapper(grid, *args, **kwargs):
        try:
            trace = fn(grid, *args, **kwargs)
        except realtime.RunawayError as exc:
            PRODUCED_TRACES.append((grid, exc.trace))
            raise
        PRODUCED_TRACES.append((grid, trace))
        return trace

    return wrapper


realtime._execute_expansions = _recording(realtime._execute_expansions)
realtime._execute_replanning = _recording(realtime._execute_replanning)


def trace_problems():
    problems = []
    cache = {}
    for grid, trace in PRODUCED_TRACES:
        if id(grid) not in cache:
            cache[id(grid)] = (grid, dijkstra_cost(grid).cost)
        problems += realtime.trace_violations(trace, cache[id(grid)][1])
    return problems


@pytest.fixture
def acceptance():
    def report(number, name, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {name} {detail}".rstrip()
        ACCEPTANCE_LINES.append((number, line))

    return report


@pytest.fixture
def golden():
    return GOLDEN


def pytest_terminal_summary(terminalreporter):
    problems = trace_problems()
    terminalreporter.write_sep("-", "trace audit")
    terminalreporter.write_line(
        f"{len(PRODUCED_TRACES)} traces produced in-process, {len(problems)} invariant violations"
    )
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def pytest_sessionfinish(session, exitstatus):
    if trace_problems() and exitstatus == 0:
        session.exitstatus = 1
