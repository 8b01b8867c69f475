"""
Schemes Module
Blind linear transmission schemes and orthogonal reuse schedules
"""
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import lattice
from .config import DUK_VECTOR_SEED
from .errors import InvalidParameterError, ProblemParseError, SchemeMismatchError
from .net_model import CBProblem, check_duk_parameters
from .rational import fraction_text, parse_fraction

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class Stream:
    """
    One transmitted symbol of a message

    `vectors` has shape (T, origin antennas): the precoding vector used in
    every slot (zero where the stream is silent).
    """
    message: str
    vectors: np.ndarray

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=complex)
        if self.vectors.ndim != 2:
            raise InvalidParameterError(f"stream of '{self.message}' needs a (T, antennas) array")

    def __eq__(self, other):
        return (isinstance(other, Stream) and self.message == other.message
                and np.array_equal(self.vectors, other.vectors))


@dataclass(eq=False)
class LinearScheme:
    """
    Blind linear scheme over T slots

    Parameters:
    -----------
    T : int
        Slot count
    streams : list of Stream
        One entry per transmitted symbol
    declared_tau : int
        Coherence the scheme was designed for (metadata only)
    name : str
        Display name
    companions : tuple of str
        Problem names the scheme was built for; empty accepts any problem
    """
    T: int
    streams: List[Stream]
    declared_tau: int = 1
    name: str = ""
    companions: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.T < 1:
            raise InvalidParameterError(f"scheme horizon T must be >= 1, got {self.T}")
        if self.declared_tau < 1:
            raise InvalidParameterError(f"declared_tau must be >= 1, got {self.declared_tau}")
        for stream in self.streams:
            if stream.vectors.shape[0] != self.T:
                raise InvalidParameterError(
                    f"stream of '{stream.message}' has {stream.vectors.shape[0]} slots, expected {self.T}"
                )

    def __eq__(self, other):
        return (isinstance(other, LinearScheme) and self.T == other.T
                and self.declared_tau == other.declared_tau and self.name == other.name
                and self.streams == other.streams)

    @property
    def is_empty(self) -> bool:
        return not any(np.any(s.vectors != 0) for s in self.streams)

    @property
    def served_messages(self) -> List[str]:
        return sorted({s.message for s in self.streams})

    def streams_of(self, msg: str) -> List[Stream]:
        return [s for s in self.streams if s.message == msg]

    def claimed_dof(self, msg: str) -> Fraction:
        return Fraction(len(self.streams_of(msg)), self.T)

    def claimed_message_dof(self, p: CBProblem) -> Dict[str, Fraction]:
        return {m: self.claimed_dof(m) for m in p.messages}

    @property
    def claimed_sum_dof(self) -> Fraction:
        return Fraction(len(self.streams), self.T)

    def validate(self, p: CBProblem) -> None:
        """Raise SchemeMismatchError unless the scheme fits the problem"""
        if self.companions and p.name and p.name not in self.companions:
            raise SchemeMismatchError(
                f"scheme '{self.name}' is built for {list(self.companions)}, not '{p.name}'"
            )
        for stream in self.streams:
            if stream.message not in p.origin:
                raise SchemeMismatchError(f"scheme '{self.name}' sends unknown message '{stream.message}'")
            antennas = p.topology.tx_antennas(p.origin[stream.message])
            if stream.vectors.shape[1] != antennas:
                raise SchemeMismatchError(
                    f"stream of '{stream.message}' has {stream.vectors.shape[1]} antenna entries, "
                    f"origin has {antennas}"
                )

    def rescaled(self, factors: Sequence[complex]) -> "LinearScheme":
        """Copy with every stream's vectors multiplied by its own nonzero factor"""
        streams = [Stream(s.message, s.vectors * f) for s, f in zip(self.streams, factors)]
        return LinearScheme(self.T, streams, self.declared_tau, self.name, self.companions)


def _single_antenna(T: int, table: Mapping[str, Sequence[complex]], declared_tau: int,
                    name: str, companions: Tuple[str, ...]) -> LinearScheme:
    streams = [
        Stream(msg, np.asarray(coeffs, dtype=complex).reshape(T, 1))
        for msg, coeffs in sorted(table.items())
    ]
    return LinearScheme(T, streams, declared_tau, name, companions)


# ---------------------------------------------------------------------------
# Four-cell cluster schemes
# ---------------------------------------------------------------------------

# One identity column per boundary pair that interferes without coherence,
# [1,1,1] for the B-D boundary pair.
_FOUR_CELL_COHERENT = {
    "a1": [1, 0, 0], "c1": [1, 0, 0],
    "a2": [0, 1, 0], "b2": [0, 1, 0],
    "c2": [0, 0, 1], "d2": [0, 0, 1],
    "b1": [1, 1, 1], "d1": [1, 1, 1],
}


def four_cell_downlink_coherent() -> LinearScheme:
    """8/3 DoF over 3 slots; only the B-D boundary users need coherent channels"""
    return _single_antenna(3, _FOUR_CELL_COHERENT, 3, "four_cell_downlink_coherent",
                           ("four_cell_downlink",))


def four_cell_merged_coherent() -> LinearScheme:
    """The coherent assignment on the X network of merged boundary receivers"""
    return _single_antenna(3, _FOUR_CELL_COHERENT, 3, "four_cell_merged_coherent",
                           ("four_cell_downlink_merged",))


def four_cell_downlink_iid() -> LinearScheme:
    """
    5/2 DoF over 2 slots with no coherence requirement

    b1, c2 and d2 are not served. Every alignment is between streams that
    share a single slot, except d1 on [1, 1] which is never aligned.
    """
    table = {"a1": [1, 0], "a2": [0, 1], "b2": [0, 1], "c1": [1, 0], "d1": [1, 1]}
    return _single_antenna(2, table, 1, "four_cell_downlink_iid", ("four_cell_downlink",))


def four_cell_uplink_coherent() -> LinearScheme:
    """
    8/3 DoF on the reciprocal cluster

    Users that co-interfere at a base station share one vector:
    {b1, c2} at A, {a1, d2} at B, {a2, d1} at C and {b2, c1} at D. Only the
    last group uses a non-identity vector, so only D needs coherence.
    """
    groups = {
        ("b1", "c2"): [1, 0, 0],
        ("a1", "d2"): [0, 1, 0],
        ("a2", "d1"): [0, 0, 1],
        ("b2", "c1"): [1, 1, 1],
    }
    table = {msg: vec for members, vec in groups.items() for msg in members}
    return _single_antenna(3, table, 3, "four_cell_uplink_coherent", ("four_cell_uplink",))


def four_cell_uplink_iid() -> LinearScheme:
    """
    5/2 DoF over 2 slots on the reciprocal cluster, no coherence needed

    Interference at B (a1, d2) sits in slot 1 and at D (b2, c1) in slot 2;
    A and C see at most one interfering stream. b1, c2, d1 are not served.
    """
    table = {"a1": [1, 0], "a2": [1, 1], "b2": [0, 1], "c1": [0, 1], "d2": [1, 0]}
    return _single_antenna(2, table, 1, "four_cell_uplink_iid", ("four_cell_uplink",))


# ---------------------------------------------------------------------------
# Symmetric (D, U, K) and heterogeneous networks
# ---------------------------------------------------------------------------

def duk_alignment_vectors(D: int, U: int, K: int, seed: int = DUK_VECTOR_SEED) -> np.ndarray:
    """
    K vectors in general position in C^T, T = K - D + U, as columns

    The first T are identity columns; the remaining K - T are seeded
    unit-norm complex Gaussian vectors.
    """
    T = K - D + U
    rng = np.random.default_rng(seed)
    extra = rng.standard_normal((T, K - T)) + 1j * rng.standard_normal((T, K - T))
    if K > T:
        extra /= np.linalg.norm(extra, axis=0, keepdims=True)
    return np.hstack([np.eye(T, dtype=complex), extra])


def symmetric_duk_scheme(D: int, U: int, K: int) -> LinearScheme:
    """
    U + 1 symbols per message over K - D + U slots

    Message j sends along v_j, v_{j+1}, ..., v_{j+U} (indices mod K).
    """
    check_duk_parameters(D, U, K)
    T = K - D + U
    vectors = duk_alignment_vectors(D, U, K)
    streams = []
    for j in range(1, K + 1):
        for shift in range(U + 1):
            column = vectors[:, (j - 1 + shift) % K]
            streams.append(Stream(f"W{j}", column.reshape(T, 1)))
    declared_tau = 1 if K == T else T
    return LinearScheme(T, streams, declared_tau, f"duk_{D}_{U}_{K}", (f"duk:{D},{U},{K}",))


def interference_diversity_scheme() -> LinearScheme:
    """
    Antenna switching at the femtocells lets cell A reach 4/3 DoF

    B and C each send one symbol per slot on a single antenna, switching
    antennas at different times, so a1 and a2 see differently structured
    interference from the same macro transmission.
    """
    T = 3
    e1, e2 = np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)
    streams = []

    def slot_stream(msg: str, slots: Iterable[int], vector: np.ndarray) -> Stream:
        vectors = np.zeros((T, 2), dtype=complex)
        for n in slots:
            vectors[n] = vector
        return Stream(msg, vectors)

    for n, antenna in enumerate([e1, e1, e2]):
        streams.append(slot_stream("b1", [n], antenna))
    for n, antenna in enumerate([e1, e2, e2]):
        streams.append(slot_stream("c1", [n], antenna))
    for antenna in (e1, e2):
        streams.append(slot_stream("a1", [1, 2], antenna))
        streams.append(slot_stream("a2", [0, 1], antenna))
    return LinearScheme(T, streams, 3, "interference_diversity", ("macro_femto",))


# ---------------------------------------------------------------------------
# Orthogonal schedules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Phase:
    weight: Fraction
    served: FrozenSet[Tuple[str, str]]  # (message, receiver)

    @property
    def messages(self) -> List[str]:
        return sorted({m for m, _ in self.served})


@dataclass
class Schedule:
    """
    Time sharing among interference-free activation phases

    Weights are nonnegative rationals summing to 1; an empty schedule has
    no phases.
    """
    phases: List[Phase]
    name: str = ""

    def __post_init__(self):
        self.phases = [Phase(Fraction(ph.weight), frozenset(ph.served)) for ph in self.phases]
        if any(ph.weight < 0 for ph in self.phases):
            raise InvalidParameterError("phase weights must be nonnegative")
        total = sum((ph.weight for ph in self.phases), Fraction(0))
        if self.phases and total != 1:
            raise InvalidParameterError(f"phase weights must sum to 1, got {total}")

    def violations(self, p: CBProblem) -> List[str]:
        problems = []
        for k, phase in enumerate(self.phases):
            active = set(phase.messages)
            per_tx: Dict[str, int] = {}
            for msg in active:
                if msg not in p.origin:
                    problems.append(f"phase {k}: unknown message '{msg}'")
                    continue
                per_tx[p.origin[msg]] = per_tx.get(p.origin[msg], 0) + 1
            for tx, count in per_tx.items():
                if count > p.topology.tx_antennas(tx):
                    problems.append(f"phase {k}: transmitter '{tx}' serves {count} messages")
            active &= set(p.origin)
            for rx in sorted({r for _, r in phase.served}):
                heard = set(p.heard_messages(rx)) & active
                if heard - p.desired[rx]:
                    problems.append(
                        f"phase {k}: receiver '{rx}' hears undesired {sorted(heard - p.desired[rx])}"
                    )
                if len(heard) > p.topology.rx_antennas(rx):
                    problems.append(f"phase {k}: receiver '{rx}' hears {len(heard)} streams")
            for msg, rx in sorted(phase.served):
                if msg in p.origin and msg not in p.desired.get(rx, ()):
                    problems.append(f"phase {k}: receiver '{rx}' does not desire '{msg}'")
        return problems

    def validate(self, p: CBProblem) -> None:
        problems = self.violations(p)
        if problems:
            raise InvalidParameterError("; ".join(problems))

    def message_dof(self, p: CBProblem) -> Dict[str, Fraction]:
        """A message earns a phase's weight when every destination is served"""
        dof = {m: Fraction(0) for m in p.messages}
        for phase in self.phases:
            for msg in phase.messages:
                if msg in dof and all((msg, rx) in phase.served for rx in p.destinations(msg)):
                    dof[msg] += phase.weight
        return dof

    def per_cell_dof(self, p: CBProblem) -> Dict[str, Fraction]:
        cells = {label: Fraction(0) for label in p.cell_labels}
        for msg, value in self.message_dof(p).items():
            cells[p.cell_of(msg)] += value
        return cells

    def sum_dof(self, p: CBProblem) -> Fraction:
        return sum(self.message_dof(p).values(), Fraction(0))


def _array_geometry(p: CBProblem) -> Tuple[str, Tuple[int, ...]]:
    if not p.cells.is_array or not p.cells.facing:
        raise InvalidParameterError(f"problem '{p.name}' is not a cellular array")
    return p.cells.geometry, p.cells.dims


def aligned_reuse(p: CBProblem) -> Schedule:
    """
    Periodic silencing with one served boundary per active cell

    In phase c the cells with reuse residue c are silent and every other
    cell serves the single user it shares with its silent neighbour.
    """
    geometry, dims = _array_geometry(p)
    period = lattice.REUSE_PERIOD[geometry]
    lattice.require_period(geometry, dims, period, "aligned reuse")
    site = p.cells.sites
    residue = {label: lattice.reuse_residue(geometry, s) for label, s in site.items()}

    phases = []
    for c in range(period):
        served = set()
        for msg in p.messages:
            own, facing = p.cell_of(msg), p.cells.facing[msg]
            if residue[own] != c and residue[facing] == c:
                served |= {(msg, rx) for rx in p.destinations(msg)}
        phases.append(Phase(Fraction(1, period), frozenset(served)))
    schedule = Schedule(phases, name=f"aligned_reuse_{geometry}")
    logger.info("aligned reuse on %s %s: %d phases", geometry, dims, period)
    return schedule


def conventional_reuse(p: CBProblem) -> Schedule:
    """
    Classic coloring reuse: one color class active at a time, each active
    cell serving its boundary users one direction at a time
    """
    geometry, dims = _array_geometry(p)
    period = lattice.COLORING_PERIOD[geometry]
    lattice.require_period(geometry, dims, period, "conventional reuse")
    mods = lattice.moduli(geometry, dims)
    offsets = lattice.neighbor_offsets(geometry)
    by_boundary = {(p.cell_of(m), p.cells.facing[m]): m for m in p.messages}
    label_of = {s: label for label, s in p.cells.sites.items()}

    phases = []
    weight = Fraction(1, period * len(offsets))
    for color in range(period):
        for offset in offsets:
            served = set()
            for label, s in sorted(p.cells.sites.items()):
                if lattice.coloring(geometry, s) != color:
                    continue
                msg = by_boundary[(label, label_of[lattice.shift(s, offset, mods)])]
                served |= {(msg, rx) for rx in p.destinations(msg)}
            phases.append(Phase(weight, frozenset(served)))
    return Schedule(phases, name=f"conventional_reuse_{geometry}")


def schedule_to_scheme(s: Schedule, p: CBProblem, denominator: Optional[int] = None) -> LinearScheme:
    """
    Lay the phases of a schedule out on consecutive slots

    Each served message gets one stream per slot of its phase; messages
    sharing a transmitter in a phase use distinct antennas.
    """
    if not s.phases:
        return LinearScheme(1, [], 1, f"{s.name}_slots" if s.name else "empty")
    for phase in s.phases:
        if not isinstance(phase.weight, Fraction):
            raise InvalidParameterError("schedule weights must be rational")
    T = denominator or math.lcm(*(ph.weight.denominator for ph in s.phases))
    if any((ph.weight * T).denominator != 1 for ph in s.phases):
        raise InvalidParameterError(f"denominator {T} does not give every phase whole slots")

    streams = []
    slot = 0
    for phase in s.phases:
        length = int(phase.weight * T)
        antenna_index: Dict[str, int] = {}
        for msg in phase.messages:
            tx = p.origin[msg]
            index = antenna_index.get(tx, 0)
            antenna_index[tx] = index + 1
            for n in range(slot, slot + length):
                vectors = np.zeros((T, p.topology.tx_antennas(tx)), dtype=complex)
                vectors[n, index] = 1
                streams.append(Stream(msg, vectors))
        slot += length
    return LinearScheme(T, streams, 1, f"{s.name}_slots" if s.name else "schedule_slots")


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------

def scheme_to_dict(s: LinearScheme) -> dict:
    return {
        "T": s.T,
        "declared_tau": s.declared_tau,
        "name": s.name,
        "streams": [
            {
                "message": st.message,
                "vectors": [[[float(z.real), float(z.imag)] for z in slot] for slot in st.vectors],
            }
            for st in s.streams
        ],
    }


def store_scheme(s: LinearScheme) -> str:
    return json.dumps(scheme_to_dict(s), indent=2, sort_keys=True)


def scheme_from_dict(doc: dict) -> LinearScheme:
    if not isinstance(doc, dict):
        raise ProblemParseError("document", "must be a JSON object")
    T = doc.get("T")
    if not isinstance(T, int) or T < 1:
        raise ProblemParseError("T", "must be a positive integer")
    streams = []
    for i, entry in enumerate(doc.get("streams", [])):
        try:
            if not isinstance(entry["message"], str):
                raise TypeError("message must be a string")
            vectors = np.array([[complex(re, im) for re, im in slot] for slot in entry["vectors"]],
                               dtype=complex)
            streams.append(Stream(entry["message"], vectors))
        except (KeyError, TypeError, ValueError, InvalidParameterError) as exc:
            raise ProblemParseError(f"streams[{i}]", str(exc)) from exc
    try:
        return LinearScheme(T, streams, int(doc.get("declared_tau", 1)), str(doc.get("name", "")))
    except (InvalidParameterError, TypeError, ValueError) as exc:
        raise ProblemParseError("streams", str(exc)) from exc


def load_scheme(text: str) -> LinearScheme:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemParseError("document", f"invalid JSON: {exc}") from exc
    return scheme_from_dict(doc)


def schedule_to_dict(s: Schedule) -> dict:
    return {
        "name": s.name,
        "phases": [
            {"weight": fraction_text(ph.weight), "served": [list(pair) for pair in sorted(ph.served)]}
            for ph in s.phases
        ],
    }


def store_schedule(s: Schedule) -> str:
    return json.dumps(schedule_to_dict(s), indent=2, sort_keys=True)


def load_schedule(text: str) -> Schedule:
    try:
        doc = json.loads(text)
        phases = [
            Phase(parse_fraction(ph["weight"]), frozenset(tuple(pair) for pair in ph["served"]))
            for ph in doc["phases"]
        ]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ProblemParseError("phases", str(exc)) from exc
    return Schedule(phases, name=doc.get("name", ""))
