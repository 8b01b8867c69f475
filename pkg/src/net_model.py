"""
Network Model Module
Partially connected networks, message sets and the topology families
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

from . import lattice
from .errors import (
    InvalidParameterError,
    ProblemParseError,
    UnsupportedConfigurationError,
)

logger = logging.getLogger(__name__)

Link = Tuple[str, str]  # (receiver id, transmitter id)


@dataclass(frozen=True)
class Node:
    id: str
    antennas: int = 1


@dataclass(frozen=True)
class NetworkTopology:
    """
    Transmitters, receivers and the binary connectivity between them

    Parameters:
    -----------
    transmitters : tuple of Node
        Transmitting nodes, sorted by id on construction
    receivers : tuple of Node
        Receiving nodes, sorted by id on construction
    connectivity : frozenset of (receiver id, transmitter id)
        Pairs with a nonzero channel
    """
    transmitters: Tuple[Node, ...]
    receivers: Tuple[Node, ...]
    connectivity: FrozenSet[Link]

    def __post_init__(self):
        object.__setattr__(self, "transmitters", tuple(sorted(self.transmitters, key=lambda n: n.id)))
        object.__setattr__(self, "receivers", tuple(sorted(self.receivers, key=lambda n: n.id)))
        object.__setattr__(self, "connectivity", frozenset(self.connectivity))

        for side, nodes in (("transmitter", self.transmitters), ("receiver", self.receivers)):
            seen: Set[str] = set()
            for node in nodes:
                if not node.id:
                    raise InvalidParameterError(f"{side} id must be nonempty")
                if node.id in seen:
                    raise InvalidParameterError(f"duplicate {side} id '{node.id}'")
                if int(node.antennas) < 1:
                    raise InvalidParameterError(
                        f"{side} '{node.id}' has {node.antennas} antennas; at least 1 required"
                    )
                seen.add(node.id)

        tx_ids = {n.id for n in self.transmitters}
        rx_ids = {n.id for n in self.receivers}
        for rx, tx in self.connectivity:
            if rx not in rx_ids:
                raise InvalidParameterError(f"link ({rx}, {tx}) names undeclared receiver '{rx}'")
            if tx not in tx_ids:
                raise InvalidParameterError(f"link ({rx}, {tx}) names undeclared transmitter '{tx}'")

    @property
    def transmitter_ids(self) -> List[str]:
        return [n.id for n in self.transmitters]

    @property
    def receiver_ids(self) -> List[str]:
        return [n.id for n in self.receivers]

    def tx_antennas(self, tx: str) -> int:
        for node in self.transmitters:
            if node.id == tx:
                return node.antennas
        raise InvalidParameterError(f"unknown transmitter '{tx}'")

    def rx_antennas(self, rx: str) -> int:
        for node in self.receivers:
            if node.id == rx:
                return node.antennas
        raise InvalidParameterError(f"unknown receiver '{rx}'")

    def heard_by(self, rx: str) -> List[str]:
        """Transmitters connected to a receiver"""
        return sorted(tx for r, tx in self.connectivity if r == rx)

    def hearers(self, tx: str) -> List[str]:
        """Receivers connected to a transmitter"""
        return sorted(rx for rx, t in self.connectivity if t == tx)

    def connected(self, rx: str, tx: str) -> bool:
        return (rx, tx) in self.connectivity

    def degree(self, rx: str) -> int:
        return len(self.heard_by(rx))


@dataclass(frozen=True)
class CellGrouping:
    """
    Cell labels used for per-cell DoF accounting

    `cell` labels transmitters and `receiver_cell` labels receivers so the
    grouping survives a transmitter/receiver swap. Array problems also keep
    the torus geometry: lattice `sites` per cell label and, per message, the
    neighbouring cell its user `facing` across the shared boundary.
    """
    cell: Dict[str, str]
    receiver_cell: Dict[str, str] = field(default_factory=dict)
    geometry: str = "cluster"
    dims: Tuple[int, ...] = ()
    sites: Dict[str, Tuple[int, ...]] = field(default_factory=dict)
    facing: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "sites", {k: tuple(v) for k, v in self.sites.items()})

    @property
    def is_array(self) -> bool:
        return self.geometry in lattice.GEOMETRIES


@dataclass(frozen=True)
class CBProblem:
    """
    Cellular blind interference alignment problem

    Parameters:
    -----------
    topology : NetworkTopology
        Nodes and connectivity
    origin : dict
        Message id -> transmitter id (each message has exactly one origin)
    desired : dict
        Receiver id -> frozenset of message ids it wants
    cells : CellGrouping, optional
        Defaults to one cell per transmitter
    name : str
        Display name, ignored by equality
    """
    topology: NetworkTopology
    origin: Dict[str, str]
    desired: Dict[str, FrozenSet[str]]
    cells: Optional[CellGrouping] = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        desired = {rx: frozenset(self.desired.get(rx, ())) for rx in self.topology.receiver_ids}
        unknown_rx = set(self.desired) - set(desired)
        if unknown_rx:
            raise InvalidParameterError(f"desired sets name undeclared receiver '{sorted(unknown_rx)[0]}'")
        object.__setattr__(self, "desired", desired)
        object.__setattr__(self, "origin", dict(self.origin))

        tx_ids = set(self.topology.transmitter_ids)
        for msg, tx in self.origin.items():
            if not msg:
                raise InvalidParameterError("message id must be nonempty")
            if tx not in tx_ids:
                raise InvalidParameterError(f"message '{msg}' originates at undeclared transmitter '{tx}'")

        wanted: Set[str] = set()
        for rx, msgs in desired.items():
            for msg in msgs:
                if msg not in self.origin:
                    raise InvalidParameterError(f"receiver '{rx}' desires unknown message '{msg}'")
                if not self.topology.connected(rx, self.origin[msg]):
                    raise InvalidParameterError(
                        f"receiver '{rx}' desires '{msg}' but does not hear its origin "
                        f"'{self.origin[msg]}'"
                    )
            wanted |= msgs
        orphans = sorted(set(self.origin) - wanted)
        if orphans:
            raise InvalidParameterError(f"message '{orphans[0]}' is desired by no receiver")

        cells = self.cells or CellGrouping(cell={})
        tx_cell = {tx: cells.cell.get(tx, tx) for tx in self.topology.transmitter_ids}
        stray = set(cells.cell) - tx_ids
        if stray:
            raise InvalidParameterError(f"cell label given for undeclared transmitter '{sorted(stray)[0]}'")
        rx_cell = {}
        for rx in self.topology.receiver_ids:
            if rx in cells.receiver_cell:
                rx_cell[rx] = cells.receiver_cell[rx]
            else:
                labels = sorted({tx_cell[self.origin[m]] for m in desired[rx]})
                rx_cell[rx] = "+".join(labels) if labels else rx
        object.__setattr__(self, "cells", CellGrouping(
            cell=tx_cell,
            receiver_cell=rx_cell,
            geometry=cells.geometry,
            dims=cells.dims,
            sites=cells.sites,
            facing=cells.facing,
        ))

    @property
    def messages(self) -> List[str]:
        return sorted(self.origin)

    def messages_of(self, tx: str) -> List[str]:
        """Messages originating at a transmitter"""
        return sorted(m for m, t in self.origin.items() if t == tx)

    def destinations(self, msg: str) -> List[str]:
        return sorted(rx for rx, msgs in self.desired.items() if msg in msgs)

    def heard_messages(self, rx: str) -> List[str]:
        heard = set(self.topology.heard_by(rx))
        return sorted(m for m, t in self.origin.items() if t in heard)

    def interferers(self, rx: str) -> List[str]:
        return sorted(set(self.heard_messages(rx)) - self.desired[rx])

    def cell_of(self, msg: str) -> str:
        return self.cells.cell[self.origin[msg]]

    @property
    def cell_labels(self) -> List[str]:
        return sorted(set(self.cells.cell.values()))

    def messages_by_cell(self) -> Dict[str, List[str]]:
        grouped: Dict[str, List[str]] = {label: [] for label in self.cell_labels}
        for msg in self.messages:
            grouped[self.cell_of(msg)].append(msg)
        return grouped


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def build_problem(
    transmitters: Iterable[Node],
    receivers: Iterable[Node],
    links: Iterable[Link],
    origin: Mapping[str, str],
    desired: Mapping[str, Iterable[str]],
    cells: Optional[CellGrouping] = None,
    name: str = "",
) -> CBProblem:
    topology = NetworkTopology(tuple(transmitters), tuple(receivers), frozenset(links))
    return CBProblem(
        topology=topology,
        origin=dict(origin),
        desired={rx: frozenset(msgs) for rx, msgs in desired.items()},
        cells=cells,
        name=name,
    )


def _check_direction(direction: str) -> None:
    if direction not in ("downlink", "uplink"):
        raise InvalidParameterError(f"direction must be 'downlink' or 'uplink', got '{direction}'")


def _make_array(geometry: str, dims: Tuple[int, ...], direction: str) -> CBProblem:
    _check_direction(direction)
    graph = lattice.cell_graph(geometry, dims)
    mods = lattice.moduli(geometry, dims)

    transmitters, receivers, links = [], [], []
    origin, desired, cell, sites, facing = {}, {}, {}, {}, {}
    for site in lattice.sites(geometry, dims):
        label = "c" + lattice.site_label(site)
        transmitters.append(Node(label))
        cell[label] = label
        sites[label] = site
    for site in lattice.sites(geometry, dims):
        own = "c" + lattice.site_label(site)
        for offset in lattice.neighbor_offsets(geometry):
            other_site = lattice.shift(site, offset, mods)
            other = "c" + lattice.site_label(other_site)
            user = f"u{own[1:]}>{other[1:]}"
            receivers.append(Node(user))
            links += [(user, own), (user, other)]
            origin[user] = own
            desired[user] = {user}
            facing[user] = other

    grouping = CellGrouping(cell=cell, geometry=geometry, dims=dims, sites=sites, facing=facing)
    shape = "x".join(str(d) for d in dims)
    problem = build_problem(transmitters, receivers, links, origin, desired, grouping,
                            name=f"{geometry}:{shape}")
    logger.info("built %s array %s: %d cells, %d users (%d cell edges)",
                geometry, dims, len(transmitters), len(receivers), graph.number_of_edges())
    if direction == "uplink":
        return reciprocal(problem)
    return problem


def make_linear_array(K: int, direction: str = "downlink") -> CBProblem:
    """
    Locally connected linear array of K cells on a cycle

    Each cell has one user on each of its two boundaries; a boundary user
    hears its own and the adjacent base station only.
    """
    if K < 3:
        raise InvalidParameterError(f"linear array needs K >= 3 cells, got {K}")
    return _make_array("linear", (K,), direction)


def make_square_array(M: int, N: int, direction: str = "downlink") -> CBProblem:
    """Square grid torus with one user per shared cell edge (4 per cell)"""
    if M < 3 or N < 3:
        raise InvalidParameterError(f"square array needs M, N >= 3, got {M}x{N}")
    return _make_array("square", (M, N), direction)


def make_hex_array(M: int, N: int, direction: str = "downlink") -> CBProblem:
    """Hexagonal torus in axial coordinates (M rows, N columns), 6 users per cell"""
    if M < 3 or N < 3:
        raise InvalidParameterError(f"hex array needs M, N >= 3, got {M}x{N}")
    return _make_array("hex", (M, N), direction)


_FOUR_CELL_LINKS = {
    "a1": ("A", "B"), "a2": ("A", "C"),
    "b1": ("A", "B"), "b2": ("B", "D"),
    "c1": ("C", "D"), "c2": ("A", "C"),
    "d1": ("C", "D"), "d2": ("B", "D"),
}

# Statistically equivalent boundary pairs fused into X-network receivers.
_FOUR_CELL_MERGED = {
    "ab": ("a1", "b1"),
    "ca": ("a2", "c2"),
    "bd": ("b2", "d2"),
    "cd": ("c1", "d1"),
}


def make_four_cell(direction: str = "downlink", merged: bool = False) -> CBProblem:
    """
    Locally connected 4-cell cluster

    Parameters:
    -----------
    direction : str
        'downlink' (base stations transmit) or 'uplink' (the reciprocal)
    merged : bool
        Fuse equivalent boundary receivers into the partially connected X
        network; only meaningful under spatially i.i.d. fading

    Returns:
    --------
    CBProblem
        Messages are named after the user they are meant for (a1 .. d2)
    """
    _check_direction(direction)
    transmitters = [Node(t) for t in "ABCD"]
    origin = {user: user[0].upper() for user in _FOUR_CELL_LINKS}
    if merged:
        receivers = [Node(rx) for rx in _FOUR_CELL_MERGED]
        links, desired = [], {}
        for rx, users in _FOUR_CELL_MERGED.items():
            links += [(rx, tx) for tx in _FOUR_CELL_LINKS[users[0]]]
            desired[rx] = set(users)
    else:
        receivers = [Node(rx) for rx in _FOUR_CELL_LINKS]
        links = [(rx, tx) for rx, txs in _FOUR_CELL_LINKS.items() for tx in txs]
        desired = {rx: {rx} for rx in _FOUR_CELL_LINKS}

    suffix = "_merged" if merged else ""
    problem = build_problem(transmitters, receivers, links, origin, desired,
                            name=f"four_cell_downlink{suffix}")
    if direction == "uplink":
        return reciprocal(problem)
    return problem


def make_macro_femto() -> CBProblem:
    """
    Heterogeneous downlink: macrocell A and femtocells B, C

    Every base station has 2 antennas; macro users a1, a2 have 2 antennas,
    femto users b1, c1 have 1. Femtocell B leaks into a1 and C into a2.
    """
    transmitters = [Node("A", 2), Node("B", 2), Node("C", 2)]
    receivers = [Node("a1", 2), Node("a2", 2), Node("b1", 1), Node("c1", 1)]
    links = [("a1", "A"), ("a1", "B"), ("a2", "A"), ("a2", "C"), ("b1", "B"), ("c1", "C")]
    origin = {"a1": "A", "a2": "A", "b1": "B", "c1": "C"}
    desired = {"a1": {"a1"}, "a2": {"a2"}, "b1": {"b1"}, "c1": {"c1"}}
    return build_problem(transmitters, receivers, links, origin, desired, name="macro_femto")


def duk_disconnected_offsets(D: int, U: int, K: int) -> Set[int]:
    """Offsets (t - r) mod K of the transmitters a receiver cannot hear"""
    return {d % K for d in range(1, D + 1)} | {(-u) % K for u in range(1, U + 1)}


def check_duk_parameters(D: int, U: int, K: int) -> None:
    if D < 0 or U < 0:
        raise InvalidParameterError(f"D and U must be nonnegative, got D={D}, U={U}")
    if K <= D + U:
        raise InvalidParameterError(f"need K > D + U, got D={D}, U={U}, K={K}")
    if D < U:
        raise InvalidParameterError(f"need D >= U, got D={D}, U={U}")


def make_symmetric_duk(D: int, U: int, K: int) -> CBProblem:
    """
    Symmetric (D, U, K) network

    Receiver r misses transmitters r-U .. r-1 and r+1 .. r+D (mod K) and hears
    all others; message k goes from transmitter k to receiver k.
    """
    check_duk_parameters(D, U, K)
    gaps = duk_disconnected_offsets(D, U, K)
    transmitters = [Node(f"t{k}") for k in range(1, K + 1)]
    receivers = [Node(f"r{k}") for k in range(1, K + 1)]
    links = [
        (f"r{r}", f"t{t}")
        for r in range(1, K + 1)
        for t in range(1, K + 1)
        if (t - r) % K not in gaps
    ]
    origin = {f"W{k}": f"t{k}" for k in range(1, K + 1)}
    desired = {f"r{k}": {f"W{k}"} for k in range(1, K + 1)}
    return build_problem(transmitters, receivers, links, origin, desired, name=f"duk:{D},{U},{K}")


def reciprocal(p: CBProblem) -> CBProblem:
    """
    Swap the roles of transmitters and receivers for every message

    A message's new origin is the node that used to desire it and its new
    destination is the node it used to come from. Multi-message receivers
    become multi-message transmitters.

    Only unicast problems have a reciprocal: a message desired by more than
    one receiver would need several origins, so it raises
    UnsupportedConfigurationError.
    """
    origin, desired = {}, {}
    for msg in p.messages:
        dests = p.destinations(msg)
        if len(dests) != 1:
            raise UnsupportedConfigurationError(
                f"message '{msg}' has {len(dests)} destinations; reciprocal needs exactly one"
            )
        origin[msg] = dests[0]
        desired.setdefault(p.origin[msg], set()).add(msg)

    cells = CellGrouping(
        cell=dict(p.cells.receiver_cell),
        receiver_cell=dict(p.cells.cell),
        geometry=p.cells.geometry,
        dims=p.cells.dims,
        sites=p.cells.sites,
        facing=p.cells.facing,
    )
    topology = NetworkTopology(
        transmitters=p.topology.receivers,
        receivers=p.topology.transmitters,
        connectivity=frozenset((tx, rx) for rx, tx in p.topology.connectivity),
    )
    return CBProblem(topology=topology, origin=origin,
                     desired={rx: frozenset(m) for rx, m in desired.items()},
                     cells=cells, name=_flipped_name(p.name))


def _flipped_name(name: str) -> str:
    if "downlink" in name:
        return name.replace("downlink", "uplink")
    if "uplink" in name:
        return name.replace("_uplink", "_downlink").replace(":uplink", "")
    return f"{name}:uplink" if name else ""


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------

def problem_to_dict(p: CBProblem) -> dict:
    doc = {
        "transmitters": [{"id": n.id, "antennas": n.antennas} for n in p.topology.transmitters],
        "receivers": [{"id": n.id, "antennas": n.antennas} for n in p.topology.receivers],
        "connectivity": [list(link) for link in sorted(p.topology.connectivity)],
        "messages": [
            {"id": m, "origin": p.origin[m], "destinations": p.destinations(m)}
            for m in p.messages
        ],
        "cells": dict(sorted(p.cells.cell.items())),
        "receiver_cells": dict(sorted(p.cells.receiver_cell.items())),
        "geometry": p.cells.geometry,
    }
    if p.cells.dims:
        doc["dims"] = list(p.cells.dims)
    if p.cells.sites:
        doc["sites"] = {k: list(v) for k, v in sorted(p.cells.sites.items())}
    if p.cells.facing:
        doc["facing"] = dict(sorted(p.cells.facing.items()))
    if p.name:
        doc["name"] = p.name
    return doc


def store_problem(p: CBProblem) -> str:
    return json.dumps(problem_to_dict(p), indent=2, sort_keys=True)


def _require(condition: bool, field_name: str, message: str) -> None:
    if not condition:
        raise ProblemParseError(field_name, message)


def _parse_nodes(doc: dict, key: str) -> List[Node]:
    entries = doc.get(key)
    _require(isinstance(entries, list), key, "must be a list")
    nodes, seen = [], set()
    for i, entry in enumerate(entries):
        where = f"{key}[{i}]"
        _require(isinstance(entry, dict), where, "must be an object")
        node_id = entry.get("id")
        _require(isinstance(node_id, str) and node_id != "", f"{where}.id", "must be a nonempty string")
        _require(node_id not in seen, f"{where}.id", f"duplicate id '{node_id}'")
        antennas = entry.get("antennas", 1)
        _require(isinstance(antennas, int) and not isinstance(antennas, bool) and antennas >= 1,
                 f"{where}.antennas", "must be a positive integer")
        seen.add(node_id)
        nodes.append(Node(node_id, antennas))
    return nodes


def _is_id(value) -> bool:
    return isinstance(value, str) and value != ""


def _int_list(value, field_name: str) -> Tuple[int, ...]:
    _require(isinstance(value, list), field_name, "must be a list of integers")
    for v in value:
        _require(isinstance(v, int) and not isinstance(v, bool), field_name, "must be a list of integers")
    return tuple(value)


def _str_map(doc: dict, key: str) -> Dict[str, str]:
    value = doc.get(key, {})
    _require(isinstance(value, dict), key, "must be an object")
    for k, v in value.items():
        _require(_is_id(v), f"{key}.{k}", "must be a nonempty string")
    return value


def problem_from_dict(doc: dict) -> CBProblem:
    _require(isinstance(doc, dict), "document", "must be a JSON object")
    transmitters = _parse_nodes(doc, "transmitters")
    receivers = _parse_nodes(doc, "receivers")
    tx_ids = {n.id for n in transmitters}
    rx_ids = {n.id for n in receivers}

    links = doc.get("connectivity", [])
    _require(isinstance(links, list), "connectivity", "must be a list")
    for i, link in enumerate(links):
        where = f"connectivity[{i}]"
        _require(isinstance(link, list) and len(link) == 2, where, "must be [receiver, transmitter]")
        _require(_is_id(link[0]) and link[0] in rx_ids, where, f"undeclared receiver {link[0]!r}")
        _require(_is_id(link[1]) and link[1] in tx_ids, where, f"undeclared transmitter {link[1]!r}")

    messages = doc.get("messages")
    _require(isinstance(messages, list), "messages", "must be a list")
    origin, desired, seen = {}, {}, set()
    for i, entry in enumerate(messages):
        where = f"messages[{i}]"
        _require(isinstance(entry, dict), where, "must be an object")
        msg = entry.get("id")
        _require(_is_id(msg), f"{where}.id", "must be a nonempty string")
        _require(msg not in seen, f"{where}.id", f"duplicate message '{msg}'")
        seen.add(msg)
        tx = entry.get("origin")
        _require(_is_id(tx) and tx in tx_ids, f"{where}.origin", f"undeclared transmitter {tx!r}")
        dests = entry.get("destinations")
        _require(isinstance(dests, list) and dests, f"{where}.destinations", "must be a nonempty list")
        for rx in dests:
            _require(_is_id(rx) and rx in rx_ids, f"{where}.destinations", f"undeclared receiver {rx!r}")
            desired.setdefault(rx, set()).add(msg)
        origin[msg] = tx

    cells = _str_map(doc, "cells")
    for tx in cells:
        _require(tx in tx_ids, f"cells.{tx}", "undeclared transmitter")
    receiver_cells = _str_map(doc, "receiver_cells")
    for rx in receiver_cells:
        _require(rx in rx_ids, f"receiver_cells.{rx}", "undeclared receiver")
    geometry = doc.get("geometry", "cluster")
    _require(_is_id(geometry) and geometry in lattice.GEOMETRIES + ("cluster",), "geometry",
             f"unknown geometry {geometry!r}")
    dims = _int_list(doc.get("dims", []), "dims")
    sites = doc.get("sites", {})
    _require(isinstance(sites, dict), "sites", "must be an object")
    sites = {k: _int_list(v, f"sites.{k}") for k, v in sites.items()}

    grouping = CellGrouping(
        cell=cells,
        receiver_cell=receiver_cells,
        geometry=geometry,
        dims=dims,
        sites=sites,
        facing=dict(_str_map(doc, "facing")),
    )
    name = doc.get("name", "")
    _require(isinstance(name, str), "name", "must be a string")
    try:
        return build_problem(transmitters, receivers, [tuple(l) for l in links], origin, desired,
                             grouping, name=name)
    except InvalidParameterError as exc:
        raise ProblemParseError("document", str(exc)) from exc


def load_problem(text: str) -> CBProblem:
    """Parse a problem document; schema violations raise ProblemParseError"""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemParseError("document", f"invalid JSON: {exc}") from exc
    return problem_from_dict(doc)
