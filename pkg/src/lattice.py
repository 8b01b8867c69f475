"""
Lattice Module
Torus geometry for the linear, square and hexagonal cellular arrays
"""
import logging
from typing import Dict, List, Set, Tuple

import networkx as nx

from .errors import InvalidParameterError

logger = logging.getLogger(__name__)

Site = Tuple[int, ...]

GEOMETRIES = ("linear", "square", "hex")

# Axial hex offsets are (dq, dr).
_OFFSETS = {
    "linear": [(1,), (-1,)],
    "square": [(1, 0), (-1, 0), (0, 1), (0, -1)],
    "hex": [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)],
}

# Aligned reuse: silence one residue class per phase.
REUSE_PERIOD = {"linear": 3, "square": 5, "hex": 7}

# Conventional reuse: proper coloring of the cell graph.
COLORING_PERIOD = {"linear": 2, "square": 2, "hex": 3}


def _check_geometry(geometry: str) -> None:
    if geometry not in GEOMETRIES:
        raise InvalidParameterError(f"unknown geometry '{geometry}'")


def neighbor_offsets(geometry: str) -> List[Site]:
    """Lattice offsets of the cells sharing a boundary with a cell"""
    _check_geometry(geometry)
    return list(_OFFSETS[geometry])


def moduli(geometry: str, dims: Tuple[int, ...]) -> Tuple[int, ...]:
    """
    Wraparound period of each site coordinate

    Linear dims are (K,). Square dims (M, N) wrap sites (i, j) as (M, N).
    Hex dims (M rows, N cols) wrap axial sites (q, r) as (N, M).
    """
    _check_geometry(geometry)
    if geometry == "linear":
        return (dims[0],)
    if geometry == "square":
        return (dims[0], dims[1])
    return (dims[1], dims[0])


def sites(geometry: str, dims: Tuple[int, ...]) -> List[Site]:
    mods = moduli(geometry, dims)
    if len(mods) == 1:
        return [(i,) for i in range(mods[0])]
    return [(a, b) for a in range(mods[0]) for b in range(mods[1])]


def wrap(site: Site, mods: Tuple[int, ...]) -> Site:
    return tuple(c % m for c, m in zip(site, mods))


def shift(site: Site, offset: Site, mods: Tuple[int, ...]) -> Site:
    return wrap(tuple(a + b for a, b in zip(site, offset)), mods)


def site_label(site: Site) -> str:
    return "_".join(str(c) for c in site)


def cell_graph(geometry: str, dims: Tuple[int, ...]) -> nx.Graph:
    """
    Cell adjacency graph on the torus

    Nodes are lattice sites; an edge joins two cells sharing a boundary.
    """
    mods = moduli(geometry, dims)
    if geometry == "linear":
        graph = nx.cycle_graph(mods[0])
        graph = nx.relabel_nodes(graph, {i: (i,) for i in graph.nodes})
    elif geometry == "square":
        graph = nx.grid_2d_graph(mods[0], mods[1], periodic=True)
    else:
        graph = nx.Graph()
        graph.add_nodes_from(sites(geometry, dims))
        for site in sites(geometry, dims):
            for offset in _OFFSETS["hex"]:
                graph.add_edge(site, shift(site, offset, mods))
    degree = len(_OFFSETS[geometry])
    bad = [node for node, d in graph.degree if d != degree]
    if bad:
        raise InvalidParameterError(
            f"{geometry} torus {dims} is too small: cell {bad[0]} has degree "
            f"{graph.degree[bad[0]]}, expected {degree}"
        )
    return graph


def reuse_residue(geometry: str, site: Site) -> int:
    """Phase in which a cell is silenced under aligned reuse"""
    _check_geometry(geometry)
    if geometry == "linear":
        return site[0] % 3
    if geometry == "square":
        return (site[0] + 2 * site[1]) % 5
    q, r = site
    return (q + 3 * r) % 7


def coloring(geometry: str, site: Site) -> int:
    """Color class of a cell under conventional reuse"""
    _check_geometry(geometry)
    if geometry == "linear":
        return site[0] % 2
    if geometry == "square":
        return (site[0] + site[1]) % 2
    q, r = site
    return (q - r) % 3


def require_period(geometry: str, dims: Tuple[int, ...], period: int, what: str) -> None:
    for d in dims:
        if d % period != 0:
            raise InvalidParameterError(
                f"{what} on a {geometry} array needs dimensions divisible by "
                f"{period}, got {dims}"
            )


def perfect_domination_violations(graph: nx.Graph, silenced: Set[Site]) -> List[str]:
    """
    Check that a silenced-cell set is a perfect code of the cell graph

    Returns a list of human-readable violations; an empty list means every
    active cell has exactly one silenced neighbor and no two silenced cells
    are adjacent.
    """
    problems = []
    if not nx.is_dominating_set(graph, silenced):
        problems.append("silenced set does not dominate the array")
    for cell in graph.nodes:
        hits = sum(1 for n in graph.neighbors(cell) if n in silenced)
        if cell in silenced and hits:
            problems.append(f"silenced cell {cell} has {hits} silenced neighbors")
        elif cell not in silenced and hits != 1:
            problems.append(f"active cell {cell} has {hits} silenced neighbors")
    return problems


def residue_classes(geometry: str, dims: Tuple[int, ...]) -> Dict[int, Set[Site]]:
    classes: Dict[int, Set[Site]] = {}
    for site in sites(geometry, dims):
        classes.setdefault(reuse_residue(geometry, site), set()).add(site)
    return classes
