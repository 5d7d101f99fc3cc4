"""The delta-epsilon-alpha* policy.

An AlphA*-style planner that, each time the promissory path terminates (its
best next node has larger f than the OPEN minimum), flips a biased coin:

* with probability ``1 - delta`` it stays on the promissory path and keeps
  weighting new nodes with the aggressive perimeter;
* with probability ``delta`` it switches to the non-aggressive perimeter and
  expands the f_alpha minimum of OPEN, which may mean walking back.

Note the direction: ``delta`` is the probability of the *non*-aggressive
(backtracking) branch. Small delta gives a bold searcher, large delta a
cautious one.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

from .alpha import AlphaParams, AlphaSearch, NodeRecord, Perimeter, epsilon_bound, exact
from .errors import UsageError
from .grid import GridMap, Heuristic
from .realtime import SensingMode, Trace, execute_realtime, traveled_cost
from .rng import SplitMix64


class Branch(Enum):
    AGGRESSIVE = "aggressive"
    NON_AGGRESSIVE = "non_aggressive"
    ADMISSIBLE_CONTINUE = "admissible_continue"


@dataclass(frozen=True)
class PacParams:
    epsilon: Fraction
    delta: Fraction
    base: AlphaParams = AlphaParams(0, 1)
    # which pair of perimeters the gate switches between: "g" or "h"
    variant: str = "g"

    def __post_init__(self):
        epsilon, delta = exact(self.epsilon), exact(self.delta)
        if epsilon < 0:
            raise UsageError("epsilon must be >= 0")
        if not 0 < delta < 1:
            raise UsageError(f"delta must satisfy 0 < delta < 1, got {delta}")
        if self.variant not in ("g", "h"):
            raise UsageError("variant must be 'g' or 'h'")
        object.__setattr__(self, "epsilon", epsilon)
        object.__setattr__(self, "delta", delta)
        floor = epsilon_bound(self.base)
        if epsilon < floor:
            warnings.warn(
                f"epsilon {epsilon} is below {floor}, the offline guarantee for "
                f"lambda={self.base.lam}, Lambda={self.base.Lam}",
                stacklevel=2,
            )

    @cached_property
    def _aggressive_bracket(self) -> Tuple[float, float, Fraction]:
        t = 1 - self.delta
        f = float(t)
        lo = f if Fraction(f) <= t else math.nextafter(f, -math.inf)
        hi = f if Fraction(f) >= t else math.nextafter(f, math.inf)
        return lo, hi, t

    def is_aggressive_draw(self, u: float) -> bool:
        """u < 1 - delta, exactly; floats outside [lo, hi] skip the rational compare."""
        lo, hi, t = self._aggressive_bracket
        if u < lo:
            return True
        if u > hi:
            return False
        return Fraction(u) < t

    @property
    def aggressive_perimeter(self) -> Perimeter:
        return Perimeter.G_AGGRESSIVE if self.variant == "g" else Perimeter.H_AGGRESSIVE

    @property
    def nonaggressive_perimeter(self) -> Perimeter:
        return Perimeter.G_NONAGGRESSIVE if self.variant == "g" else Perimeter.H_NONAGGRESSIVE


@dataclass(frozen=True)
class PerimeterDecision:
    event_index: int
    branch: Branch
    rng_draw: Optional[float]
    f_next: int
    open_min_f: int

    def to_json(self) -> dict:
        return {
            "event_index": self.event_index,
            "f_next": self.f_next,
            "open_min_f": self.open_min_f,
            "rng_draw": self.rng_draw,
            "branch": self.branch.value,
        }


def promissory_terminated(next_node: NodeRecord, state, params: AlphaParams = None, open_min_f: int = None) -> bool:
    """True iff f(next) exceeds the least f in OPEN (strictly)."""
    if open_min_f is None:
        if not state.open:
            raise UsageError("OPEN is empty")
        open_min_f = min(n.f for n in state.open.values())
    return next_node.f > open_min_f


def within_epsilon_factor(next_node: NodeRecord, open_min_f: int, params: AlphaParams) -> bool:
    """(1 + lam) f(next) <= (1 + Lam) min f: continuing stays epsilon-admissible."""
    return (1 + params.lam) * next_node.f <= (1 + params.Lam) * open_min_f


def select_branch(params: PacParams, rng) -> Branch:
    """Aggressive iff a uniform draw u in [0, 1) falls below 1 - delta.

    ``rng`` is a generator with a ``random()`` method or an already drawn u.
    """
    u = rng if isinstance(rng, (int, float, Fraction)) else rng.random()
    return Branch.AGGRESSIVE if params.is_aggressive_draw(u) else Branch.NON_AGGRESSIVE


class DeltaGate:
    """Chooses the next node for one run and logs every gate decision."""

    def __init__(self, params: PacParams, seed: int):
        self.params = params
        self.rng = SplitMix64(seed)
        self.perimeter = params.aggressive_perimeter
        self.decisions: List[PerimeterDecision] = []
        self.continues = 0

    def promissory_next(self, search: AlphaSearch) -> Optional[NodeRecord]:
        last = search.state.last_expanded
        if last is None:
            return None
        children = [
            search.state.open[c]
            for c in search.last_inserted
            if c in search.state.open and search.state.open[c].parent == last.cell
        ]
        return min(children, key=search.sort_key, default=None)

    def choose(self, search: AlphaSearch) -> Optional[NodeRecord]:
        nxt = self.promissory_next(search)
        if nxt is None:
            # start node, or the path ran into a dead end: nothing to continue
            return search.pop()
        min_f = search.open_min_f()
        if not promissory_terminated(nxt, search.state, open_min_f=min_f):
            self.continues += 1
            self.perimeter = self.params.aggressive_perimeter
            return search.pop(nxt.cell)
        u = self.rng.random()
        branch = select_branch(self.params, u)
        self.decisions.append(PerimeterDecision(len(self.decisions), branch, u, nxt.f, min_f))
        if branch is Branch.AGGRESSIVE:
            self.perimeter = self.params.aggressive_perimeter
            return search.pop(nxt.cell)
        self.perimeter = self.params.nonaggressive_perimeter
        return search.pop()


@dataclass(frozen=True)
class DeaStarPolicy:
    params: PacParams
    name = "dea_star"
    deterministic = False

    @property
    def alpha_params(self) -> AlphaParams:
        return AlphaParams(self.params.base.lam, self.params.base.Lam, self.params.aggressive_perimeter)

    def chooser(self, seed: int) -> DeltaGate:
        return DeltaGate(self.params, seed)


def dea_star(
    grid: GridMap,
    heuristic: Heuristic,
    params: PacParams,
    sensing: SensingMode = SensingMode(),
    seed: int = 0,
    **kwargs,
) -> Tuple[Trace, List[PerimeterDecision]]:
    trace = execute_realtime(grid, heuristic, DeaStarPolicy(params), sensing, seed, **kwargs)
    return trace, trace.decisions


def exceedance_indicator(trace: Trace, c_star: int, epsilon) -> bool:
    """True iff the run traveled more than (1 + epsilon) * c_star.

    A run that never reached the goal counts as an exceedance.
    """
    if c_star <= 0:
        raise UsageError("c_star must be positive")
    if not trace.reached_goal:
        return True
    return traveled_cost(trace) > (1 + exact(epsilon)) * c_star


def decisions_jsonl(decisions) -> str:
    return "".join(json.dumps(d.to_json(), sort_keys=True) + "\n" for d in decisions)
