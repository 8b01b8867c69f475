"""
Bounds Module
Converse DoF bounds as linear programs and the best orthogonal baseline
"""
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import numpy as np
from scipy import optimize

from .config import (
    CERTIFICATE_MAX_DENOMINATOR,
    COOPERATION_BOUND_FOUR_CELL,
    EXACT_LP_CELL_LIMIT,
    MACRO_FEMTO_COMPOUND_CELL_A,
    MACRO_FEMTO_DOF_FULL_COOPERATION,
    MACRO_FEMTO_DOF_WITH_CSIT,
    ORTHOGONAL_NODE_LIMIT,
    ORTHOGONAL_PATTERN_CAP,
)
from .errors import InvalidParameterError, UnsupportedConfigurationError
from .net_model import CBProblem
from .rational import LPSolution, fraction_text, maximize
from .schemes import Phase, Schedule, schedule_to_dict

logger = logging.getLogger(__name__)

# Results established analytically that the LP below cannot reproduce.
DOCUMENTED_CONSTANTS = {
    "four_cell_cooperation_bound": COOPERATION_BOUND_FOUR_CELL,
    "macro_femto_dof_with_csit": MACRO_FEMTO_DOF_WITH_CSIT,
    "macro_femto_dof_full_cooperation": MACRO_FEMTO_DOF_FULL_COOPERATION,
    "macro_femto_compound_cell_a": MACRO_FEMTO_COMPOUND_CELL_A,
}


@dataclass(frozen=True)
class Constraint:
    """Sum of d_m over `messages` is at most `rhs`"""
    messages: FrozenSet[str]
    rhs: int
    family: str
    receiver: str
    transmitter: Optional[str] = None

    def to_dict(self) -> dict:
        provenance = {"receiver": self.receiver, "family": self.family}
        if self.transmitter is not None:
            provenance["transmitter"] = self.transmitter
        return {"messages": sorted(self.messages), "rhs": self.rhs, "provenance": provenance}


@dataclass
class DoFPolytope:
    variables: List[str]
    constraints: List[Constraint]

    def satisfied_by(self, dof: Dict[str, Fraction]) -> bool:
        return all(
            sum((dof.get(m, Fraction(0)) for m in c.messages), Fraction(0)) <= c.rhs
            for c in self.constraints
        )

    def essential(self) -> List[Constraint]:
        """Drop duplicate rows and rows whose support sits inside another with equal rhs"""
        unique: Dict[Tuple[FrozenSet[str], int], Constraint] = {}
        for c in self.constraints:
            unique.setdefault((c.messages, c.rhs), c)
        rows = sorted(unique.values(), key=lambda c: (-len(c.messages), sorted(c.messages)))
        kept: List[Constraint] = []
        for c in rows:
            if not any(c.rhs == k.rhs and c.messages <= k.messages for k in kept):
                kept.append(c)
        return kept


@dataclass
class LPResult:
    value: Fraction
    x: List[Fraction]
    path: str


@dataclass
class BoundReport:
    """
    Converse LP outcome

    `per_message` is the largest DoF every message can reach at once;
    `per_cell` is the largest DoF every cell can reach at once.
    """
    problem: str
    sum_bound: Fraction
    per_message: Dict[str, Fraction]
    per_cell: Dict[str, Fraction]
    polytope: DoFPolytope
    sum_solution: Dict[str, Fraction]
    paths: Dict[str, str] = field(default_factory=dict)

    @property
    def symmetric_cell_bound(self) -> Fraction:
        return min(self.per_cell.values()) if self.per_cell else Fraction(0)

    def to_dict(self) -> dict:
        return {
            "problem": self.problem,
            "sum_bound": fraction_text(self.sum_bound),
            "per_message": {m: fraction_text(v) for m, v in sorted(self.per_message.items())},
            "per_cell": {c: fraction_text(v) for c, v in sorted(self.per_cell.items())},
            "constraints": [c.to_dict() for c in self.polytope.constraints],
            "solver": dict(sorted(self.paths.items())),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# Exact LP with a floating fast path
# ---------------------------------------------------------------------------

def _scale_to_feasible(A: List[List[Fraction]], b: List[Fraction], x: List[Fraction]) -> Optional[List[Fraction]]:
    x = [max(v, Fraction(0)) for v in x]
    factor = Fraction(1)
    for row, rhs in zip(A, b):
        activity = sum((a * v for a, v in zip(row, x) if a), Fraction(0))
        if activity > rhs:
            if rhs <= 0:
                return None
            factor = min(factor, rhs / activity)
    return [v * factor for v in x]


def _dual_feasible(A: List[List[Fraction]], c: List[Fraction], y: List[Fraction]) -> Optional[List[Fraction]]:
    y = [max(v, Fraction(0)) for v in y]
    columns = list(zip(*A))
    slack = [sum((a * v for a, v in zip(col, y) if a), Fraction(0)) for col in columns]
    factor = Fraction(1)
    for s, cj in zip(slack, c):
        if cj > 0:
            if s <= 0:
                return None
            factor = max(factor, cj / s)
    y = [v * factor for v in y]
    if any(s * factor < cj for s, cj in zip(slack, c)):
        return None
    return y


def _rationalize(values: Sequence[float]) -> List[Fraction]:
    return [Fraction(float(v)).limit_denominator(CERTIFICATE_MAX_DENOMINATOR) for v in values]


def _certified_highs(A, b, c, tags, direction) -> Optional[LPResult]:
    A_float = np.array([[float(v) for v in row] for row in A])
    res = optimize.linprog(
        c=-np.array([float(v) for v in c]),
        A_ub=A_float,
        b_ub=np.array([float(v) for v in b]),
        bounds=(0, None),
        method="highs",
    )
    if res.status != 0:
        logger.warning("HiGHS returned status %s: %s", res.status, res.message)
        return None

    primal_candidates = [_scale_to_feasible(A, b, _rationalize(res.x))]
    if direction is not None:
        primal_candidates.append(_scale_to_feasible(A, b, list(direction)))
    y_float = -np.asarray(res.ineqlin.marginals)
    dual_candidates = [_dual_feasible(A, c, _rationalize(y_float))]
    averaged = np.zeros_like(y_float)
    for tag in set(tags):
        idx = [i for i, t in enumerate(tags) if t == tag]
        averaged[idx] = y_float[idx].mean()
    dual_candidates.append(_dual_feasible(A, c, _rationalize(averaged)))

    best_x, best_primal = None, None
    for x in filter(None, primal_candidates):
        value = sum((cj * xj for cj, xj in zip(c, x)), Fraction(0))
        if best_primal is None or value > best_primal:
            best_x, best_primal = x, value
    best_dual = None
    for y in filter(None, dual_candidates):
        value = sum((bi * yi for bi, yi in zip(b, y)), Fraction(0))
        if best_dual is None or value < best_dual:
            best_dual = value
    if best_primal is not None and best_primal == best_dual:
        return LPResult(best_primal, best_x, "highs-certified")
    logger.warning("no exact certificate for HiGHS optimum (primal %s, dual %s)", best_primal, best_dual)
    return None


def solve_lp(A: List[List[Fraction]], b: List[Fraction], c: List[Fraction],
             tags: Optional[List[str]] = None,
             direction: Optional[List[Fraction]] = None) -> LPResult:
    """
    max c.x subject to A x <= b, x >= 0 with an exact optimal value

    Small programs go straight to the rational simplex. Larger ones are
    solved with HiGHS and accepted only when a rational primal point and
    dual multiplier with equal objective are found; `direction` is an
    extra primal candidate scaled onto the boundary.
    """
    if not A:
        if any(cj > 0 for cj in c):
            raise InvalidParameterError("linear program is unbounded")
        return LPResult(Fraction(0), [Fraction(0)] * len(c), "trivial")
    if len(A) * len(c) > EXACT_LP_CELL_LIMIT:
        result = _certified_highs(A, b, c, tags or ["row"] * len(A), direction)
        if result is not None:
            logger.info("LP %dx%d certified from HiGHS: %s", len(A), len(c), fraction_text(result.value))
            return result
        logger.warning("falling back to the rational simplex for a %dx%d LP", len(A), len(c))
    solution: LPSolution = maximize(A, b, c)
    return LPResult(solution.value, solution.x, "exact-simplex")


# ---------------------------------------------------------------------------
# Converse LP
# ---------------------------------------------------------------------------

def converse_constraints(p: CBProblem) -> DoFPolytope:
    """
    Resolvability constraints for single-antenna receivers

    A receiver that decodes its desired message can remove it and must then
    resolve everything a connected interfering transmitter sends; with
    single-message origins the receiver also resolves one interfering
    single-message transmitter together with all it desires.
    """
    multi = [n.id for n in p.topology.receivers if n.antennas > 1]
    if multi:
        raise UnsupportedConfigurationError(
            f"converse LP covers single-antenna receivers only; '{multi[0]}' has more"
        )
    constraints: List[Constraint] = []
    seen: Set[Tuple[FrozenSet[str], int]] = set()

    def add(messages, family, rx, tx=None):
        key = (frozenset(messages), 1)
        if key not in seen:
            seen.add(key)
            constraints.append(Constraint(frozenset(messages), 1, family, rx, tx))

    for rx in p.topology.receiver_ids:
        wanted = p.desired[rx]
        if not wanted:
            continue
        add(wanted, "receiver", rx)
        heard_tx = p.topology.heard_by(rx)
        for msg in sorted(wanted):
            for tx in heard_tx:
                others = p.messages_of(tx)
                if tx != p.origin[msg] and others:
                    add({msg, *others}, "interferer-set", rx, tx)
        if all(p.messages_of(p.origin[m]) == [m] for m in wanted):
            for tx in heard_tx:
                owned = p.messages_of(tx)
                if len(owned) == 1 and owned[0] not in wanted:
                    add(set(wanted) | {owned[0]}, "single-interferer", rx, tx)
    return DoFPolytope(variables=p.messages, constraints=constraints)


def _rows(p: CBProblem, essential: List[Constraint], extra: int = 0) -> Tuple[List[List[Fraction]], List[Fraction]]:
    index = {m: i for i, m in enumerate(p.messages)}
    A, b = [], []
    for c in essential:
        row = [Fraction(0)] * (len(index) + extra)
        for m in c.messages:
            row[index[m]] = Fraction(1)
        A.append(row)
        b.append(Fraction(c.rhs))
    return A, b


def _max_min(p: CBProblem, essential: List[Constraint], groups: Dict[str, List[str]]) -> LPResult:
    """Largest z with every group's DoF total at least z"""
    n = len(p.messages)
    index = {m: i for i, m in enumerate(p.messages)}
    A, b = _rows(p, essential, extra=1)
    tags = ["converse"] * len(A)
    for members in groups.values():
        row = [Fraction(0)] * (n + 1)
        for m in members:
            row[index[m]] = Fraction(-1)
        row[n] = Fraction(1)
        A.append(row)
        b.append(Fraction(0))
        tags.append("group")
    c = [Fraction(0)] * n + [Fraction(1)]
    smallest = min(len(members) for members in groups.values())
    direction = [Fraction(1)] * n + [Fraction(smallest)]
    return solve_lp(A, b, c, tags, direction)


def converse_lp(p: CBProblem) -> BoundReport:
    """
    Maximize the sum DoF over the converse polytope, plus the symmetric
    per-message and per-cell optima
    """
    polytope = converse_constraints(p)
    if not p.messages:
        return BoundReport(p.name, Fraction(0), {}, {}, polytope, {}, {"sum": "trivial"})
    essential = polytope.essential()
    logger.info("converse LP for %s: %d constraints (%d essential), %d messages",
                p.name, len(polytope.constraints), len(essential), len(p.messages))

    A, b = _rows(p, essential)
    c = [Fraction(1)] * len(p.messages)
    total = solve_lp(A, b, c, ["converse"] * len(A), [Fraction(1)] * len(p.messages))
    per_message = _max_min(p, essential, {m: [m] for m in p.messages})
    cells = {label: msgs for label, msgs in p.messages_by_cell().items() if msgs}
    per_cell = _max_min(p, essential, cells)

    return BoundReport(
        problem=p.name,
        sum_bound=total.value,
        per_message={m: per_message.value for m in p.messages},
        per_cell={label: per_cell.value for label in cells},
        polytope=polytope,
        sum_solution=dict(zip(p.messages, total.x)),
        paths={"sum": total.path, "per_message": per_message.path, "per_cell": per_cell.path},
    )


# ---------------------------------------------------------------------------
# Orthogonal baseline
# ---------------------------------------------------------------------------

@dataclass
class OrthogonalResult:
    objective: str
    value: Fraction
    schedule: Schedule
    proven_optimal: bool
    patterns: int

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "value": fraction_text(self.value),
            "proven_optimal": self.proven_optimal,
            "patterns": self.patterns,
            "schedule": schedule_to_dict(self.schedule),
        }


class _PatternSearch:
    """
    Depth-first enumeration of maximal interference-free activation sets

    A set is valid when no transmitter serves more messages than it has
    antennas and every receiver of an active message hears only messages
    it desires, no more than it has antennas. Validity is inherited by
    subsets, so only maximal sets are recorded.
    """

    def __init__(self, p: CBProblem, node_limit: int):
        self.p = p
        self.messages = p.messages
        self.node_limit = node_limit
        self.nodes = 0
        self.complete = True
        self.dests = {m: p.destinations(m) for m in self.messages}
        self.heard = {rx: set(p.heard_messages(rx)) for rx in p.topology.receiver_ids}
        self.patterns: List[FrozenSet[str]] = []

    def _valid(self, active: Set[str]) -> bool:
        p = self.p
        per_tx: Dict[str, int] = {}
        for m in active:
            tx = p.origin[m]
            per_tx[tx] = per_tx.get(tx, 0) + 1
            if per_tx[tx] > p.topology.tx_antennas(tx):
                return False
        for m in active:
            for rx in self.dests[m]:
                heard = self.heard[rx] & active
                if not heard <= p.desired[rx] or len(heard) > p.topology.rx_antennas(rx):
                    return False
        return True

    def _maximal(self, active: Set[str]) -> bool:
        return not any(m not in active and self._valid(active | {m}) for m in self.messages)

    def run(self) -> List[FrozenSet[str]]:
        self._dfs(0, set())
        return self.patterns

    def _dfs(self, i: int, active: Set[str]) -> None:
        self.nodes += 1
        if self.nodes > self.node_limit:
            self.complete = False
            return
        if i == len(self.messages):
            if self._maximal(active):
                self.patterns.append(frozenset(active))
            return
        m = self.messages[i]
        if self._valid(active | {m}):
            active.add(m)
            self._dfs(i + 1, active)
            active.discard(m)
        self._dfs(i + 1, active)


def _phase(p: CBProblem, pattern: FrozenSet[str], weight: Fraction) -> Phase:
    served = frozenset((m, rx) for m in pattern for rx in p.destinations(m))
    return Phase(weight, served)


def orthogonal_max(p: CBProblem, objective: str = "sum", cap: int = ORTHOGONAL_PATTERN_CAP,
                   node_limit: int = ORTHOGONAL_NODE_LIMIT) -> OrthogonalResult:
    """
    Best orthogonal (time-sharing) scheme

    Parameters:
    -----------
    objective : str
        'sum' for the largest pattern, 'symmetric' for the largest DoF every
        cell can reach simultaneously
    cap : int
        Above this many messages the search is cut off at `node_limit`
        nodes and the result is marked as not proven optimal
    """
    if objective not in ("sum", "symmetric"):
        raise InvalidParameterError(f"objective must be 'sum' or 'symmetric', got '{objective}'")
    if not p.messages:
        return OrthogonalResult(objective, Fraction(0), Schedule([]), True, 0)

    over_cap = len(p.messages) > cap
    search = _PatternSearch(p, node_limit if over_cap else max(node_limit, 1 << (len(p.messages) + 1)))
    patterns = search.run()
    proven = search.complete and not over_cap
    if over_cap:
        logger.warning("%d messages exceed the enumeration cap %d; result is best found",
                       len(p.messages), cap)
    logger.info("orthogonal search on %s: %d maximal patterns, %d nodes",
                p.name, len(patterns), search.nodes)
    if not patterns:
        patterns = [frozenset()]

    if objective == "sum":
        best = max(patterns, key=lambda pat: (len(pat), sorted(pat)))
        schedule = Schedule([_phase(p, best, Fraction(1))], name="orthogonal_sum")
        return OrthogonalResult(objective, Fraction(len(best)), schedule, proven, len(patterns))

    cells = {label: set(msgs) for label, msgs in p.messages_by_cell().items() if msgs}
    labels = sorted(cells)
    n = len(patterns)
    # variables: one weight per pattern, then z
    A, b = [], []
    for label in labels:
        row = [Fraction(-len(pat & cells[label])) for pat in patterns] + [Fraction(1)]
        A.append(row)
        b.append(Fraction(0))
    A.append([Fraction(1)] * n + [Fraction(0)])
    b.append(Fraction(1))
    c = [Fraction(0)] * n + [Fraction(1)]
    result = solve_lp(A, b, c, ["cell"] * len(labels) + ["time"])

    weights = result.x[:n]
    phases = [_phase(p, pat, w) for pat, w in zip(patterns, weights) if w > 0]
    idle = 1 - sum(weights, Fraction(0))
    if idle > 0:
        phases.append(Phase(idle, frozenset()))
    schedule = Schedule(phases, name="orthogonal_symmetric")
    return OrthogonalResult(objective, result.value, schedule, proven, len(patterns))
