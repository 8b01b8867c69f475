"""
Simulator Module
Finite-SNR rates of blind linear schemes with zero-forcing receivers
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import linalg

from .channel import FadingSpec, sample_channels
from .config import DEFAULT_SNR_LIST_DB, DEFAULT_TOLERANCE, SIMULATION_DRAWS, SLOPE_TOLERANCE
from .errors import InvalidParameterError
from .net_model import CBProblem
from .schemes import LinearScheme

logger = logging.getLogger(__name__)

SUM_ROW = "SUM"
CSV_COLUMNS = ["snr_db", "message_id", "rate_bits_per_slot"]


@dataclass
class RateTable:
    """
    Average rates in bits per slot

    `frame` is long-form with one row per (snr_db, message_id), including a
    SUM pseudo-message per SNR.
    """
    frame: pd.DataFrame
    draws: int
    scheme: str
    seed: int

    def rate(self, snr_db: float, message: str = SUM_ROW) -> float:
        """Average rate of one message (or the SUM row) at one SNR point"""
        rows = self.frame[(self.frame["snr_db"] == snr_db) & (self.frame["message_id"] == message)]
        if rows.empty:
            raise InvalidParameterError(f"no rate for '{message}' at {snr_db} dB")
        return float(rows["rate_bits_per_slot"].iloc[0])

    def sum_rate(self, snr_db: float) -> float:
        return self.rate(snr_db)

    def message_rate(self, snr_db: float, message: str) -> float:
        return self.rate(snr_db, message)

    @property
    def snrs(self) -> List[float]:
        return sorted(set(self.frame["snr_db"]))

    def pivot(self) -> pd.DataFrame:
        """Wide view: one row per SNR, one column per message"""
        return self.frame.pivot(index="snr_db", columns="message_id", values="rate_bits_per_slot")

    def to_csv(self) -> str:
        return self.frame[CSV_COLUMNS].to_csv(index=False, float_format="%.10g", lineterminator="\n")


def _transmit_scales(p: CBProblem, s: LinearScheme) -> Dict[str, float]:
    """
    One amplitude per transmitter so its busiest slot uses unit power

    A common scale per transmitter keeps every alignment intact.
    """
    load: Dict[str, np.ndarray] = {}
    for stream in s.streams:
        tx = p.origin[stream.message]
        power = np.sum(np.abs(stream.vectors) ** 2, axis=1)
        load[tx] = load.get(tx, np.zeros(s.T)) + power
    return {tx: 1 / np.sqrt(per_slot.max()) for tx, per_slot in load.items() if per_slot.max() > 0}


def _projected_singular_values(desired: np.ndarray, others: np.ndarray) -> np.ndarray:
    """Singular values of the desired block after removing the span of `others`"""
    if others.shape[1]:
        basis = linalg.orth(others, rcond=DEFAULT_TOLERANCE)
        desired = desired - basis @ (basis.conj().T @ desired)
    return linalg.svdvals(desired)


def _draw_singular_values(p: CBProblem, s: LinearScheme, spec: FadingSpec, draw: int):
    """(receiver, message) -> projected singular values for one channel draw"""
    ch = sample_channels(p, s.T, spec.with_seed(spec.seed + draw))
    scales = _transmit_scales(p, s)
    out = {}
    for rx in p.topology.receiver_ids:
        columns, owners = [], []
        for stream in s.streams:
            tx = p.origin[stream.message]
            if not p.topology.connected(rx, tx):
                continue
            H = ch.coefficients[(rx, tx)]
            columns.append(scales[tx] * np.einsum("nij,nj->ni", H, stream.vectors).reshape(-1))
            owners.append(stream.message)
        if not columns:
            continue
        matrix = np.column_stack(columns)
        owners = np.array(owners)
        for msg in sorted(p.desired[rx] & set(owners)):
            mask = owners == msg
            out[(rx, msg)] = _projected_singular_values(matrix[:, mask], matrix[:, ~mask])
    return out


def simulate_rates(p: CBProblem, s: LinearScheme, spec: FadingSpec,
                   snr_list_db: Optional[Sequence[float]] = None,
                   draws: int = SIMULATION_DRAWS) -> RateTable:
    """
    Monte Carlo rates with project-then-decode receivers

    Each receiver removes every stream other than the message being decoded
    by orthogonal projection; message m then gets
    (1/T) * sum_i log2(1 + P * sigma_i^2) over the projected singular
    values. A message's rate is the minimum over its receivers.
    """
    snr_list_db = list(DEFAULT_SNR_LIST_DB if snr_list_db is None else snr_list_db)
    if draws < 1:
        raise InvalidParameterError(f"draws must be >= 1, got {draws}")
    if not snr_list_db:
        raise InvalidParameterError("SNR list must not be empty")
    s.validate(p)
    powers = 10 ** (np.asarray(snr_list_db, dtype=float) / 10)

    # rates[d, k, j]: draw d, SNR k, message j
    messages = p.messages
    rates = np.zeros((draws, len(powers), len(messages)))
    served = set(s.served_messages)
    for d in range(draws):
        singular = _draw_singular_values(p, s, spec, d)
        for j, msg in enumerate(messages):
            if msg not in served:
                continue
            per_rx = [
                np.sum(np.log2(1 + np.outer(powers, singular[(rx, msg)] ** 2)), axis=1) / s.T
                for rx in p.destinations(msg)
                if (rx, msg) in singular
            ]
            if per_rx:
                rates[d, :, j] = np.min(per_rx, axis=0)

    mean = np.mean(rates, axis=0)
    rows = []
    for k, snr in enumerate(snr_list_db):
        for j, msg in enumerate(messages):
            rows.append({"snr_db": float(snr), "message_id": msg, "rate_bits_per_slot": float(mean[k, j])})
        rows.append({"snr_db": float(snr), "message_id": SUM_ROW,
                     "rate_bits_per_slot": float(np.sum(mean[k]))})
    logger.info("simulated %s over %d draws at %d SNR points", s.name, draws, len(snr_list_db))
    return RateTable(pd.DataFrame(rows, columns=CSV_COLUMNS), draws, s.name, spec.seed)


@dataclass(frozen=True)
class DoFEstimate:
    value: float
    nearest: Fraction
    snr_lo_db: float
    snr_hi_db: float

    def matches(self, target, tolerance: float = SLOPE_TOLERANCE) -> bool:
        return abs(self.value - float(target)) <= tolerance


def estimate_dof(t: RateTable, snr_lo_db: float, snr_hi_db: float,
                 message: Optional[str] = None) -> DoFEstimate:
    """Rate slope between two SNR points in units of log2(P)"""
    if snr_hi_db <= snr_lo_db:
        raise InvalidParameterError(f"need snr_hi > snr_lo, got {snr_lo_db} and {snr_hi_db}")
    name = message or SUM_ROW
    lo, hi = t.rate(snr_lo_db, name), t.rate(snr_hi_db, name)
    slope = (hi - lo) / ((snr_hi_db - snr_lo_db) / 10 * np.log2(10))
    return DoFEstimate(float(slope), Fraction(slope).limit_denominator(12), snr_lo_db, snr_hi_db)
