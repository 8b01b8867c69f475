"""
Verifier Module
Linear resolvability of blind schemes over sampled generic channels
"""
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from .channel import ChannelRealization, FadingSpec, sample_channels
from .config import DEFAULT_DRAWS, DEFAULT_TOLERANCE, EXACT_RATIONAL_BOUND, EXACT_TRIALS
from .errors import InvalidParameterError
from .net_model import CBProblem
from .rational import complex_rank, fraction_text
from .schemes import LinearScheme

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReceiverCheck:
    desired_streams: int
    interference_rank: int
    joint_rank: int
    passed: bool


def numerical_rank(M: np.ndarray, tolerance: float = DEFAULT_TOLERANCE) -> int:
    """Count singular values above tolerance times the largest one"""
    if M.size == 0:
        return 0
    singular = np.linalg.svd(M, compute_uv=False)
    if singular[0] == 0:
        return 0
    return int(np.sum(singular > tolerance * singular[0]))


def _stream_columns(p: CBProblem, s: LinearScheme, ch: ChannelRealization, rx: str):
    for stream in s.streams:
        tx = p.origin[stream.message]
        if not p.topology.connected(rx, tx):
            continue
        H = ch.coefficients[(rx, tx)]
        # slot n block: H(n) @ v(n), stacked slot-major
        yield stream.message, np.einsum("nij,nj->ni", H, stream.vectors).reshape(-1)


def effective_signatures(p: CBProblem, s: LinearScheme, ch: ChannelRealization,
                         rx: str) -> Tuple[np.ndarray, np.ndarray]:
    """
    Desired and interference signature matrices at one receiver

    Each column has length (receiver antennas x T). Streams from
    transmitters the receiver does not hear contribute nothing.
    """
    if ch.T != s.T:
        raise InvalidParameterError(f"channel horizon {ch.T} does not match scheme T={s.T}")
    rows = p.topology.rx_antennas(rx) * s.T
    desired, interference = [], []
    for msg, column in _stream_columns(p, s, ch, rx):
        (desired if msg in p.desired[rx] else interference).append(column)
    as_matrix = lambda cols: np.column_stack(cols) if cols else np.zeros((rows, 0), dtype=complex)
    return as_matrix(desired), as_matrix(interference)


def check_receiver(D: np.ndarray, I: np.ndarray, tolerance: float = DEFAULT_TOLERANCE) -> ReceiverCheck:
    """
    Pass iff rank([D I]) = rank(I) + ncols(D) and D has full column rank

    A receiver with no desired streams passes vacuously.
    """
    if tolerance <= 0:
        raise InvalidParameterError(f"tolerance must be positive, got {tolerance}")
    interference_rank = numerical_rank(I, tolerance)
    joint_rank = numerical_rank(np.hstack([D, I]), tolerance)
    count = D.shape[1]
    if count == 0:
        return ReceiverCheck(0, interference_rank, joint_rank, True)
    passed = joint_rank == interference_rank + count and numerical_rank(D, tolerance) == count
    return ReceiverCheck(count, interference_rank, joint_rank, passed)


@dataclass
class DoFReport:
    """
    Outcome of a verification run

    `receivers` holds one row per (draw, receiver) with the ranks found.
    """
    problem: str
    scheme: str
    tau: int
    seed: int
    tolerance: float
    draws: int
    draws_passed: int
    receivers: pd.DataFrame
    message_dof: Dict[str, Fraction]
    cell_dof: Dict[str, Fraction]
    receiver_tau: Dict[str, int] = field(default_factory=dict)

    @property
    def sum_dof(self) -> Fraction:
        return sum(self.message_dof.values(), Fraction(0))

    @property
    def passed(self) -> bool:
        return self.draws_passed == self.draws

    def failing_receivers(self) -> List[str]:
        failed = self.receivers.loc[~self.receivers["passed"], "receiver"]
        return sorted(set(failed))

    def interference_ranks(self, rx: str) -> List[int]:
        rows = self.receivers[self.receivers["receiver"] == rx]
        return [int(v) for v in rows["interference_rank"]]

    def receiver_summary(self) -> pd.DataFrame:
        grouped = self.receivers.groupby("receiver")
        return pd.DataFrame({
            "desired_streams": grouped["desired_streams"].max(),
            "interference_rank": grouped["interference_rank"].max(),
            "joint_rank": grouped["joint_rank"].min(),
            "passed": grouped["passed"].all(),
        })

    def to_dict(self) -> dict:
        summary = self.receiver_summary()
        return {
            "problem": self.problem,
            "scheme": self.scheme,
            "parameters": {
                "tau": self.tau,
                "receiver_tau": dict(sorted(self.receiver_tau.items())),
                "seed": self.seed,
                "tolerance": self.tolerance,
            },
            "draws": self.draws,
            "draws_passed": self.draws_passed,
            "passed": self.passed,
            "receivers": {
                rx: {
                    "desired_streams": int(row.desired_streams),
                    "interference_rank": int(row.interference_rank),
                    "joint_rank": int(row.joint_rank),
                    "passed": bool(row.passed),
                }
                for rx, row in summary.iterrows()
            },
            "per_message": {m: fraction_text(v) for m, v in sorted(self.message_dof.items())},
            "per_cell": {c: fraction_text(v) for c, v in sorted(self.cell_dof.items())},
            "sum_dof": fraction_text(self.sum_dof),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _check_alignment(p: CBProblem, s: LinearScheme, spec: FadingSpec) -> None:
    for rx in p.topology.receiver_ids:
        tau = spec.tau_for(rx)
        if s.T % tau:
            raise InvalidParameterError(
                f"scheme T={s.T} is not a multiple of coherence {tau} at receiver '{rx}'"
            )


def _run_draw(p: CBProblem, s: LinearScheme, spec: FadingSpec, draw: int,
              tolerance: float) -> List[dict]:
    ch = sample_channels(p, s.T, spec.with_seed(spec.seed + draw))
    rows = []
    for rx in p.topology.receiver_ids:
        result = check_receiver(*effective_signatures(p, s, ch, rx), tolerance)
        rows.append({
            "draw": draw,
            "receiver": rx,
            "desired_streams": result.desired_streams,
            "interference_rank": result.interference_rank,
            "joint_rank": result.joint_rank,
            "passed": result.passed,
        })
    return rows


def verify(p: CBProblem, s: LinearScheme, spec: FadingSpec, draws: int = DEFAULT_DRAWS,
           tolerance: float = DEFAULT_TOLERANCE, workers: Optional[int] = None) -> DoFReport:
    """
    Check every receiver over independent channel draws

    Draw d uses seed spec.seed + d, so the report does not depend on the
    number of workers or the completion order.

    Returns:
    --------
    DoFReport
        A message keeps its claimed DoF only if every receiver desiring it
        passes in every draw
    """
    if draws < 1:
        raise InvalidParameterError(f"draws must be >= 1, got {draws}")
    s.validate(p)
    _check_alignment(p, s, spec)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(lambda d: _run_draw(p, s, spec, d, tolerance), range(draws)))
    else:
        batches = [_run_draw(p, s, spec, d, tolerance) for d in range(draws)]

    table = pd.DataFrame([row for batch in batches for row in batch],
                         columns=["draw", "receiver", "desired_streams", "interference_rank",
                                  "joint_rank", "passed"])
    table["passed"] = table["passed"].astype(bool)
    passed_by_draw = table.groupby("draw")["passed"].all()
    receiver_ok = table.groupby("receiver")["passed"].all().to_dict()

    message_dof = {}
    for msg in p.messages:
        ok = all(receiver_ok.get(rx, True) for rx in p.destinations(msg))
        message_dof[msg] = s.claimed_dof(msg) if ok else Fraction(0)
    cell_dof = {label: Fraction(0) for label in p.cell_labels}
    for msg, value in message_dof.items():
        cell_dof[p.cell_of(msg)] += value

    report = DoFReport(
        problem=p.name,
        scheme=s.name,
        tau=spec.tau,
        seed=spec.seed,
        tolerance=tolerance,
        draws=draws,
        draws_passed=int(passed_by_draw.sum()),
        receivers=table,
        message_dof=message_dof,
        cell_dof=cell_dof,
        receiver_tau=dict(spec.receiver_tau),
    )
    if report.passed:
        logger.info("%s on %s: passed %d draws, sum DoF %s", s.name, p.name, draws,
                    fraction_text(report.sum_dof))
    else:
        logger.info("%s on %s: %d of %d draws passed, failing receivers %s", s.name, p.name,
                    report.draws_passed, draws, report.failing_receivers())
    return report


def coherence_profile(p: CBProblem, s: LinearScheme, draws: int = DEFAULT_DRAWS, seed: int = 0,
                      tolerance: float = DEFAULT_TOLERANCE) -> pd.DataFrame:
    """
    Per-receiver verdict at every coherence length dividing T

    Columns are the tau values plus 'min_tau', the shortest coherence at
    which the receiver passes (NaN if none).
    """
    taus = [tau for tau in range(1, s.T + 1) if s.T % tau == 0]
    frame = pd.DataFrame(index=pd.Index(p.topology.receiver_ids, name="receiver"))
    for tau in taus:
        report = verify(p, s, FadingSpec(tau=tau, seed=seed), draws, tolerance)
        frame[tau] = report.receiver_summary()["passed"].reindex(frame.index, fill_value=True)
    frame["min_tau"] = [
        next((tau for tau in taus if frame.at[rx, tau]), np.nan) for rx in frame.index
    ]
    return frame


# ---------------------------------------------------------------------------
# Exact rational oracle
# ---------------------------------------------------------------------------

def _random_rational(rng: np.random.Generator, bound: int) -> Tuple[Fraction, Fraction]:
    while True:
        re = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))
        im = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))
        if re or im:
            return re, im


def _exact_channels(p: CBProblem, T: int, spec: FadingSpec, bound: int):
    rng = np.random.default_rng(spec.seed)
    channels = {}
    for rx, tx in sorted(p.topology.connectivity):
        tau = spec.tau_for(rx)
        nr, nt = p.topology.rx_antennas(rx), p.topology.tx_antennas(tx)
        blocks = [
            [[_random_rational(rng, bound) for _ in range(nt)] for _ in range(nr)]
            for _ in range(-(-T // tau))
        ]
        channels[(rx, tx)] = [blocks[n // tau] for n in range(T)]
    return channels


def _exact_column(H_slots, vectors) -> Tuple[List[Fraction], List[Fraction]]:
    real, imag = [], []
    for H, v in zip(H_slots, vectors):
        v_exact = [(Fraction(float(z.real)), Fraction(float(z.imag))) for z in v]
        for row in H:
            re = im = Fraction(0)
            for (hr, hi), (vr, vi) in zip(row, v_exact):
                re += hr * vr - hi * vi
                im += hr * vi + hi * vr
            real.append(re)
            imag.append(im)
    return real, imag


def _exact_rank(columns) -> int:
    if not columns:
        return 0
    real = [list(row) for row in zip(*(c[0] for c in columns))]
    imag = [list(row) for row in zip(*(c[1] for c in columns))]
    return complex_rank(real, imag)


def exact_receiver_verdicts(p: CBProblem, s: LinearScheme, spec: FadingSpec,
                            trials: int = EXACT_TRIALS,
                            bound: int = EXACT_RATIONAL_BOUND) -> Dict[str, bool]:
    """Per-receiver pass/fail over `trials` rational channel draws"""
    s.validate(p)
    _check_alignment(p, s, spec)
    verdicts = {rx: True for rx in p.topology.receiver_ids}
    for trial in range(trials):
        channels = _exact_channels(p, s.T, spec.with_seed(spec.seed + trial), bound)
        for rx in p.topology.receiver_ids:
            desired, interference = [], []
            for stream in s.streams:
                tx = p.origin[stream.message]
                if not p.topology.connected(rx, tx):
                    continue
                column = _exact_column(channels[(rx, tx)], stream.vectors)
                (desired if stream.message in p.desired[rx] else interference).append(column)
            if not desired:
                continue
            i_rank = _exact_rank(interference)
            ok = (_exact_rank(desired + interference) == i_rank + len(desired)
                  and _exact_rank(desired) == len(desired))
            verdicts[rx] = verdicts[rx] and ok
    return verdicts


def verify_exact(p: CBProblem, s: LinearScheme, tau: int = 1, trials: int = EXACT_TRIALS,
                 seed: int = 0, receiver_tau: Optional[Dict[str, int]] = None) -> bool:
    """
    Same decision as `verify` with rational channels and exact ranks

    Scheme vectors are converted from their binary floating values exactly.
    """
    spec = FadingSpec(tau=tau, seed=seed, receiver_tau=dict(receiver_tau or {}))
    return all(exact_receiver_verdicts(p, s, spec, trials).values())
