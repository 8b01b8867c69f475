"""
Catalog
Built-in problems, schemes and index coding examples addressable by name,
plus seeded random instances for property checks
"""
import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .errors import InvalidParameterError
from .index_coding import GICProblem, GICReceiver, cb_to_gic
from .net_model import (
    CBProblem,
    Node,
    build_problem,
    make_four_cell,
    make_hex_array,
    make_linear_array,
    make_macro_femto,
    make_square_array,
    make_symmetric_duk,
)
from .schemes import (
    LinearScheme,
    Stream,
    aligned_reuse,
    conventional_reuse,
    four_cell_downlink_coherent,
    four_cell_downlink_iid,
    four_cell_merged_coherent,
    four_cell_uplink_coherent,
    four_cell_uplink_iid,
    interference_diversity_scheme,
    schedule_to_scheme,
    symmetric_duk_scheme,
)

logger = logging.getLogger(__name__)

_CLUSTERS: Dict[str, Callable[[], CBProblem]] = {
    "four_cell_downlink": lambda: make_four_cell("downlink"),
    "four_cell_uplink": lambda: make_four_cell("uplink"),
    "four_cell_merged": lambda: make_four_cell("downlink", merged=True),
    "four_cell_uplink_merged": lambda: make_four_cell("uplink", merged=True),
    "macro_femto": make_macro_femto,
}

_ARRAYS = {"linear": make_linear_array, "square": make_square_array, "hex": make_hex_array}


def _ints(text: str, sep: str, count: int, name: str) -> List[int]:
    parts = text.split(sep)
    if len(parts) != count:
        raise InvalidParameterError(f"cannot parse '{name}'")
    try:
        return [int(v) for v in parts]
    except ValueError as exc:
        raise InvalidParameterError(f"cannot parse '{name}'") from exc


def problem(name: str) -> CBProblem:
    """
    Build a problem from its catalog name

    Names: four_cell_downlink, four_cell_uplink, four_cell_merged,
    four_cell_uplink_merged, macro_femto, linear:K, square:MxN, hex:MxN
    (arrays accept a trailing ':uplink'), duk:D,U,K
    """
    if name in _CLUSTERS:
        return _CLUSTERS[name]()
    family, _, rest = name.partition(":")
    if family in _ARRAYS and rest:
        direction = "downlink"
        if rest.endswith(":uplink"):
            rest, direction = rest[: -len(":uplink")], "uplink"
        dims = _ints(rest, "x", 1 if family == "linear" else 2, name)
        return _ARRAYS[family](*dims, direction=direction)
    if family == "duk" and rest:
        return make_symmetric_duk(*_ints(rest, ",", 3, name))
    raise InvalidParameterError(f"unknown problem '{name}'")


def scheme(problem_name: str, scheme_name: str, p: Optional[CBProblem] = None) -> LinearScheme:
    """
    Built-in scheme for a catalog problem

    coherent / iid for the four-cell clusters, diversity for macro_femto,
    duk for duk:D,U,K and aligned / conventional for arrays.
    """
    fixed = {
        ("four_cell_downlink", "coherent"): four_cell_downlink_coherent,
        ("four_cell_downlink", "iid"): four_cell_downlink_iid,
        ("four_cell_merged", "coherent"): four_cell_merged_coherent,
        ("four_cell_uplink", "coherent"): four_cell_uplink_coherent,
        ("four_cell_uplink", "iid"): four_cell_uplink_iid,
        ("macro_femto", "diversity"): interference_diversity_scheme,
    }
    if (problem_name, scheme_name) in fixed:
        return fixed[(problem_name, scheme_name)]()
    family, _, rest = problem_name.partition(":")
    if family == "duk" and scheme_name == "duk":
        return symmetric_duk_scheme(*_ints(rest, ",", 3, problem_name))
    if family in _ARRAYS and scheme_name in ("aligned", "conventional"):
        p = p or problem(problem_name)
        reuse = aligned_reuse if scheme_name == "aligned" else conventional_reuse
        return schedule_to_scheme(reuse(p), p)
    raise InvalidParameterError(f"no scheme '{scheme_name}' for problem '{problem_name}'")


# (problem, scheme, coherence the scheme is verified at)
BUILTIN_SCHEMES: List[Tuple[str, str, int]] = [
    ("four_cell_downlink", "coherent", 3),
    ("four_cell_downlink", "iid", 1),
    ("four_cell_merged", "coherent", 3),
    ("four_cell_uplink", "coherent", 3),
    ("four_cell_uplink", "iid", 1),
    ("macro_femto", "diversity", 3),
    ("duk:1,1,5", "duk", 1),
    ("duk:2,1,5", "duk", 4),
    ("duk:2,1,6", "duk", 5),
    ("linear:12", "aligned", 1),
    ("linear:12", "conventional", 1),
    ("linear:12:uplink", "aligned", 1),
    ("square:5x5", "aligned", 1),
    ("square:6x6", "conventional", 1),
    ("hex:7x7", "aligned", 1),
    ("hex:6x6", "conventional", 1),
]


# ---------------------------------------------------------------------------
# Index coding examples
# ---------------------------------------------------------------------------

def five_message_gic() -> GICProblem:
    """Five unicast receivers where half-rate alignment is inconsistent"""
    known = {
        1: {2, 5},
        2: {1, 3},
        3: {1, 2, 4},
        4: {1, 2, 3, 5},
        5: {1, 2, 3, 4},
    }
    receivers = tuple(
        GICReceiver(str(r), frozenset({f"W{r}"}), frozenset(f"W{k}" for k in ks))
        for r, ks in known.items()
    )
    return GICProblem(frozenset(f"W{k}" for k in range(1, 6)), receivers, name="five_message")


def two_user_gic() -> GICProblem:
    """Two-user interference channel: no side information"""
    receivers = (GICReceiver("1", frozenset({"W1"})), GICReceiver("2", frozenset({"W2"})))
    return GICProblem(frozenset({"W1", "W2"}), receivers, name="two_user")


def all_known_gic(n: int = 3) -> GICProblem:
    """Each receiver already knows every message but its own"""
    messages = frozenset(f"W{k}" for k in range(1, n + 1))
    receivers = tuple(
        GICReceiver(str(k), frozenset({f"W{k}"}), messages - {f"W{k}"}) for k in range(1, n + 1)
    )
    return GICProblem(messages, receivers, name="all_known")


def macro_femto_gic() -> GICProblem:
    return cb_to_gic(make_macro_femto())


# Coded messages a2+b1 and a1+c1 over GF(2).
MACRO_FEMTO_XOR_PLAN = [frozenset({"a2", "b1"}), frozenset({"a1", "c1"})]

_GIC = {
    "five_message": five_message_gic,
    "two_user": two_user_gic,
    "all_known": all_known_gic,
    "macro_femto_gic": macro_femto_gic,
}


def gic(name: str) -> GICProblem:
    if name not in _GIC:
        raise InvalidParameterError(f"unknown GIC problem '{name}'")
    return _GIC[name]()


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------

def random_single_message_problem(rng: np.random.Generator, max_nodes: int = 4) -> CBProblem:
    """
    Small CB problem where every transmitter owns exactly one message and
    every receiver desires at least one
    """
    n_tx = int(rng.integers(1, max_nodes + 1))
    n_rx = int(rng.integers(1, n_tx + 1))
    tx_ids = [f"t{k}" for k in range(n_tx)]
    rx_ids = [f"r{k}" for k in range(n_rx)]
    origin = {f"m{k}": tx_ids[k] for k in range(n_tx)}
    desired = {rx: set() for rx in rx_ids}
    for k in range(n_tx):
        rx = rx_ids[k] if k < n_rx else rx_ids[int(rng.integers(n_rx))]
        desired[rx].add(f"m{k}")
    links = {(rx, tx) for rx in rx_ids for tx in tx_ids if rng.random() < 0.5}
    links |= {(rx, origin[m]) for rx, msgs in desired.items() for m in msgs}
    return build_problem([Node(t) for t in tx_ids], [Node(r) for r in rx_ids],
                         sorted(links), origin, desired, name="random")


def random_scheme(rng: np.random.Generator, p: CBProblem, max_T: int = 4) -> LinearScheme:
    """Up to two streams per message with small integer slot vectors"""
    T = int(rng.integers(1, max_T + 1))
    streams = []
    for msg in p.messages:
        antennas = p.topology.tx_antennas(p.origin[msg])
        for _ in range(int(rng.integers(0, 3))):
            vectors = rng.integers(-1, 3, size=(T, antennas)).astype(complex)
            streams.append(Stream(msg, vectors))
    return LinearScheme(T, streams, 1, "random")


def random_unicast_gic(rng: np.random.Generator, n: int = 5) -> GICProblem:
    """Single-antenna unicast GIC with random side information"""
    messages = [f"W{k}" for k in range(1, n + 1)]
    receivers = []
    for k, msg in enumerate(messages, start=1):
        known = frozenset(m for m in messages if m != msg and rng.random() < 0.5)
        receivers.append(GICReceiver(str(k), frozenset({msg}), known))
    return GICProblem(frozenset(messages), tuple(receivers), name="random_unicast")
