"""
Index Coding Module
Gaussian index coding counterparts of CB problems, the half-rate alignment
test and message-level XOR plans
"""
import itertools
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from networkx.utils import UnionFind

from .errors import InvalidParameterError, ProblemParseError, UnsupportedConfigurationError
from .net_model import CBProblem, Node, build_problem
from .schemes import LinearScheme, Stream

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GICReceiver:
    id: str
    desired: FrozenSet[str]
    known: FrozenSet[str] = frozenset()
    antennas: int = 1


@dataclass(frozen=True)
class GICProblem:
    """
    Broadcast with cognitive receivers: receiver r wants `desired` and
    already has `known`

    `transmitter_names` optionally names the transmitter that carries each
    message when mapped back to a CB problem; it does not affect equality.
    """
    messages: FrozenSet[str]
    receivers: Tuple[GICReceiver, ...]
    transmitter_names: Dict[str, str] = field(default_factory=dict, compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "messages", frozenset(self.messages))
        receivers = tuple(sorted(
            (GICReceiver(r.id, frozenset(r.desired), frozenset(r.known), r.antennas) for r in self.receivers),
            key=lambda r: r.id,
        ))
        object.__setattr__(self, "receivers", receivers)
        ids = [r.id for r in receivers]
        if len(set(ids)) != len(ids):
            raise InvalidParameterError("duplicate GIC receiver id")
        for r in receivers:
            if not r.desired:
                raise InvalidParameterError(f"receiver '{r.id}' desires nothing")
            if r.desired & r.known:
                raise InvalidParameterError(
                    f"receiver '{r.id}' both desires and knows {sorted(r.desired & r.known)}"
                )
            unknown = (r.desired | r.known) - self.messages
            if unknown:
                raise InvalidParameterError(f"receiver '{r.id}' names unknown message '{sorted(unknown)[0]}'")
            if r.antennas < 1:
                raise InvalidParameterError(f"receiver '{r.id}' needs at least one antenna")
        orphans = sorted(self.messages - frozenset().union(*(r.desired for r in receivers)))
        if orphans:
            raise InvalidParameterError(f"message '{orphans[0]}' is desired by no receiver")

    def receiver(self, rx: str) -> GICReceiver:
        for r in self.receivers:
            if r.id == rx:
                return r
        raise InvalidParameterError(f"unknown receiver '{rx}'")

    def interferers(self, rx: str) -> FrozenSet[str]:
        r = self.receiver(rx)
        return self.messages - r.desired - r.known


def cb_to_gic(p: CBProblem) -> GICProblem:
    """
    Give every receiver the messages of the transmitters it cannot hear

    Receivers that desire nothing carry no information and are dropped.
    """
    receivers = []
    for node in p.topology.receivers:
        if not p.desired[node.id]:
            continue
        heard = set(p.topology.heard_by(node.id))
        known = {m for m, tx in p.origin.items() if tx not in heard}
        receivers.append(GICReceiver(node.id, p.desired[node.id], frozenset(known), node.antennas))
    return GICProblem(frozenset(p.messages), tuple(receivers), dict(p.origin), name=p.name)


def gic_to_cb(g: GICProblem) -> CBProblem:
    """One single-antenna transmitter per message, cut off from receivers that know it"""
    tx_of = {m: g.transmitter_names.get(m, m) for m in sorted(g.messages)}
    if len(set(tx_of.values())) != len(tx_of):
        tx_of = {m: m for m in sorted(g.messages)}
    links = [
        (r.id, tx_of[m])
        for r in g.receivers
        for m in sorted(g.messages)
        if m not in r.known
    ]
    return build_problem(
        transmitters=[Node(tx) for tx in tx_of.values()],
        receivers=[Node(r.id, r.antennas) for r in g.receivers],
        links=links,
        origin=tx_of,
        desired={r.id: r.desired for r in g.receivers},
        name=g.name,
    )


# ---------------------------------------------------------------------------
# Half-rate alignment consistency
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoInterference:
    first: str
    second: str
    receiver: str


@dataclass
class HalfDofVerdict:
    """
    Outcome of the half-rate test

    A feasible verdict carries the alignment groups and a 2-slot scheme on
    gic_to_cb(g). An infeasible one names a receiver, its desired message,
    an interferer there, and a chain of co-interference pairs joining them.
    """
    feasible: bool
    groups: List[FrozenSet[str]]
    scheme: Optional[LinearScheme] = None
    receiver: Optional[str] = None
    desired: Optional[str] = None
    interferer: Optional[str] = None
    chain: List[CoInterference] = field(default_factory=list)

    def to_dict(self) -> dict:
        doc = {"feasible": self.feasible, "groups": [sorted(g) for g in self.groups]}
        if not self.feasible:
            doc["witness"] = {
                "receiver": self.receiver,
                "desired": self.desired,
                "interferer": self.interferer,
                "chain": [[s.first, s.second, s.receiver] for s in self.chain],
            }
        return doc


def replay_witness(g: GICProblem, verdict: HalfDofVerdict) -> bool:
    """Check every step of an infeasibility witness against the problem"""
    if verdict.feasible or not verdict.chain:
        return False
    rx = g.receiver(verdict.receiver)
    if verdict.desired not in rx.desired or verdict.interferer not in g.interferers(rx.id):
        return False
    current = verdict.desired
    for step in verdict.chain:
        interferers = g.interferers(step.receiver)
        if step.first != current or step.first not in interferers or step.second not in interferers:
            return False
        current = step.second
    return current == verdict.interferer


def half_dof_feasible(g: GICProblem) -> HalfDofVerdict:
    """
    Can every message get 1/2 DoF at once?

    Messages that interfere together at a receiver must share a dimension;
    the demand fails exactly when a receiver's desired message ends up
    sharing a dimension with one of its own interferers.
    """
    for r in g.receivers:
        if len(r.desired) != 1 or r.antennas != 1:
            raise UnsupportedConfigurationError(
                f"half-rate test needs single-antenna unicast receivers; '{r.id}' is not"
            )
    groups = UnionFind(sorted(g.messages))
    graph = nx.Graph()
    graph.add_nodes_from(sorted(g.messages))
    for r in g.receivers:
        for a, b in itertools.combinations(sorted(g.interferers(r.id)), 2):
            groups.union(a, b)
            if not graph.has_edge(a, b):
                graph.add_edge(a, b, receiver=r.id)

    components = sorted((frozenset(s) for s in groups.to_sets()), key=lambda s: sorted(s))
    for r in g.receivers:
        (wanted,) = r.desired
        for other in sorted(g.interferers(r.id)):
            if groups[wanted] == groups[other]:
                path = nx.shortest_path(graph, wanted, other)
                chain = [CoInterference(a, b, graph.edges[a, b]["receiver"]) for a, b in zip(path, path[1:])]
                logger.info("half-rate demand inconsistent at %s: %s aligned with %s", r.id, wanted, other)
                return HalfDofVerdict(False, components, receiver=r.id, desired=wanted,
                                      interferer=other, chain=chain)

    streams = []
    for k, component in enumerate(components):
        vector = np.array([[1], [k]], dtype=complex)
        streams += [Stream(m, vector) for m in sorted(component)]
    scheme = LinearScheme(2, streams, 2, "half_dof")
    return HalfDofVerdict(True, components, scheme=scheme)


# ---------------------------------------------------------------------------
# Message-level XOR plans
# ---------------------------------------------------------------------------

def _mask(messages: Iterable[str], index: Dict[str, int]) -> int:
    value = 0
    for m in messages:
        value |= 1 << index[m]
    return value


def _gf2_span_contains(basis_vectors: Sequence[int], target: int) -> bool:
    pivots: Dict[int, int] = {}
    for vec in basis_vectors:
        for bit, row in pivots.items():
            if vec >> bit & 1:
                vec ^= row
        if vec:
            pivots[vec.bit_length() - 1] = vec
    for bit in sorted(pivots, reverse=True):
        if target >> bit & 1:
            target ^= pivots[bit]
    return target == 0


@dataclass
class XorVerdict:
    success: bool
    dof: Fraction
    failures: Dict[str, str]


def verify_xor_scheme(g: GICProblem, plan: Sequence[Iterable[str]]) -> XorVerdict:
    """
    Check a plan of XOR-coded messages, each sent as one stream at rate 1

    A receiver decodes every coded stream when the streams it cannot already
    compute from its side information fit in its antennas; it then recovers
    desired messages by elimination over GF(2).

    Returns:
    --------
    XorVerdict
        dof counts the messages recovered by every receiver that desires
        them; success means every receiver recovers all of its own
    """
    index = {m: i for i, m in enumerate(sorted(g.messages))}
    coded = []
    for k, members in enumerate(plan):
        members = frozenset(members)
        unknown = members - g.messages
        if unknown or not members:
            raise InvalidParameterError(f"coded message {k} references unknown messages {sorted(unknown)}")
        coded.append(_mask(members, index))

    failures = {}
    lost = set()
    for r in g.receivers:
        known = _mask(r.known, index)
        computable = sum(1 for c in coded if (c & ~known) == 0)
        if len(coded) - computable > r.antennas:
            failures[r.id] = f"{len(coded) - computable} unknown streams for {r.antennas} antennas"
            lost |= r.desired
            continue
        basis = coded + [1 << index[m] for m in r.known]
        missing = [m for m in sorted(r.desired) if not _gf2_span_contains(basis, 1 << index[m])]
        if missing:
            failures[r.id] = f"cannot recover {missing}"
            lost.update(missing)

    wanted = set().union(*(r.desired for r in g.receivers)) if g.receivers else set()
    recovered = wanted - lost
    success = not failures and bool(wanted)
    return XorVerdict(success, Fraction(len(recovered)), failures)


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------

def gic_to_dict(g: GICProblem) -> dict:
    doc = {
        "messages": sorted(g.messages),
        "receivers": [
            {"id": r.id, "antennas": r.antennas, "desired": sorted(r.desired), "known": sorted(r.known)}
            for r in g.receivers
        ],
    }
    if g.name:
        doc["name"] = g.name
    return doc


def store_gic(g: GICProblem) -> str:
    return json.dumps(gic_to_dict(g), indent=2, sort_keys=True)


def load_gic(text: str) -> GICProblem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemParseError("document", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("messages"), list):
        raise ProblemParseError("messages", "must be a list")
    receivers = []
    for i, entry in enumerate(doc.get("receivers", [])):
        try:
            receivers.append(GICReceiver(entry["id"], frozenset(entry["desired"]),
                                         frozenset(entry.get("known", [])), int(entry.get("antennas", 1))))
        except (KeyError, TypeError, ValueError) as exc:
            raise ProblemParseError(f"receivers[{i}]", str(exc)) from exc
    try:
        return GICProblem(frozenset(doc["messages"]), tuple(receivers), name=doc.get("name", ""))
    except (InvalidParameterError, TypeError) as exc:
        raise ProblemParseError("receivers", str(exc)) from exc
