"""
Channel Module
Block-fading channel realizations for partially connected networks
"""
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .config import DEFAULT_TAU, MAGNITUDE_BOUNDS, SCALED_LINK_RANGE
from .errors import InvalidParameterError
from .net_model import CBProblem, Link

logger = logging.getLogger(__name__)

SPATIAL_MODELS = ("iid", "independent-scaled")


@dataclass(frozen=True)
class FadingSpec:
    """
    Statistical channel model

    Parameters:
    -----------
    tau : int
        Coherence block length in slots
    spatial : str
        'iid' (unit-variance CN entries) or 'independent-scaled' (per-link
        fixed scale drawn from `scale_range`)
    bounds : tuple
        Accepted interval for every entry magnitude
    seed : int
        RNG seed
    receiver_tau : dict
        Per-receiver coherence override for links into that receiver
    """
    tau: int = DEFAULT_TAU
    spatial: str = "iid"
    bounds: Tuple[float, float] = MAGNITUDE_BOUNDS
    seed: int = 0
    receiver_tau: Dict[str, int] = field(default_factory=dict)
    scale_range: Tuple[float, float] = SCALED_LINK_RANGE

    def __post_init__(self):
        if int(self.tau) < 1:
            raise InvalidParameterError(f"tau must be >= 1, got {self.tau}")
        lo, hi = self.bounds
        if not 0 < lo < hi < math.inf:
            raise InvalidParameterError(f"magnitude bounds must satisfy 0 < lo < hi < inf, got {self.bounds}")
        if self.spatial not in SPATIAL_MODELS:
            raise InvalidParameterError(f"unknown spatial model '{self.spatial}'")
        for rx, tau in self.receiver_tau.items():
            if int(tau) < 1:
                raise InvalidParameterError(f"tau for receiver '{rx}' must be >= 1, got {tau}")

    def tau_for(self, rx: str) -> int:
        return int(self.receiver_tau.get(rx, self.tau))

    def with_seed(self, seed: int) -> "FadingSpec":
        return FadingSpec(self.tau, self.spatial, self.bounds, seed, dict(self.receiver_tau), self.scale_range)

    def with_tau(self, tau: int) -> "FadingSpec":
        return FadingSpec(tau, self.spatial, self.bounds, self.seed, dict(self.receiver_tau), self.scale_range)


@dataclass
class ChannelRealization:
    """
    Channel coefficients over a horizon of T slots

    `coefficients[(rx, tx)]` has shape (T, rx antennas, tx antennas); slot n
    (0-based) lies in block n // tau of its receiver.
    """
    T: int
    coefficients: Dict[Link, np.ndarray]
    block_tau: Dict[str, int]
    entries_drawn: int = 0
    entries_kept: int = 0

    def matrix(self, rx: str, tx: str, slot: int) -> np.ndarray:
        return self.coefficients[(rx, tx)][slot]

    @property
    def resample_ratio(self) -> float:
        """Entries drawn per entry kept (1.0 means no rejection)"""
        return self.entries_drawn / self.entries_kept if self.entries_kept else 1.0


def _bounded_entries(rng: np.random.Generator, shape: Tuple[int, ...], scale: float,
                     lo: float, hi: float) -> Tuple[np.ndarray, int]:
    draw = lambda size: scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)
    values = draw(shape)
    drawn = values.size
    bad = (np.abs(values) < lo) | (np.abs(values) > hi)
    while bad.any():
        count = int(bad.sum())
        values[bad] = draw(count)
        drawn += count
        bad = (np.abs(values) < lo) | (np.abs(values) > hi)
    return values, drawn


def sample_channels(p: CBProblem, T: int, spec: FadingSpec) -> ChannelRealization:
    """
    Draw one block-fading realization for every connected pair

    Blocks start at slot 0. Links are visited in sorted order so the result
    is a pure function of (problem, T, spec).
    """
    if T < 1:
        raise InvalidParameterError(f"horizon T must be >= 1, got {T}")
    lo, hi = spec.bounds
    rng = np.random.default_rng(spec.seed)
    coefficients: Dict[Link, np.ndarray] = {}
    drawn = kept = 0
    for rx, tx in sorted(p.topology.connectivity):
        tau = spec.tau_for(rx)
        blocks = -(-T // tau)
        scale = rng.uniform(*spec.scale_range) if spec.spatial == "independent-scaled" else 1.0
        shape = (blocks, p.topology.rx_antennas(rx), p.topology.tx_antennas(tx))
        values, n = _bounded_entries(rng, shape, scale, lo, hi)
        coefficients[(rx, tx)] = np.repeat(values, tau, axis=0)[:T]
        drawn += n
        kept += values.size

    block_tau = {rx: spec.tau_for(rx) for rx in p.topology.receiver_ids}
    realization = ChannelRealization(T, coefficients, block_tau, drawn, kept)
    logger.debug("sampled %d links over %d slots (resample ratio %.4f)",
                 len(coefficients), T, realization.resample_ratio)
    return realization


def dump_channels(ch: ChannelRealization, indent: Optional[int] = None) -> str:
    """Per-link list of per-block matrices, entries as [re, im] pairs"""
    links = {}
    for (rx, tx), values in sorted(ch.coefficients.items()):
        tau = ch.block_tau[rx]
        blocks = values[::tau]
        links[f"{rx}|{tx}"] = [
            [[[float(z.real), float(z.imag)] for z in row] for row in block]
            for block in blocks
        ]
    return json.dumps({"T": ch.T, "block_tau": ch.block_tau, "links": links},
                      indent=indent, sort_keys=True)
