"""
Report Module
Reproduction suite over the built-in problems and reuse comparison tables
"""
import logging
from fractions import Fraction
from typing import Dict, List, Optional

import pandas as pd

from . import catalog
from .bounds import DOCUMENTED_CONSTANTS, converse_lp, orthogonal_max
from .channel import FadingSpec
from .config import DEFAULT_DRAWS, ORTHOGONAL_PATTERN_CAP, REPORT_WIDTH
from .errors import UnsupportedConfigurationError
from .index_coding import half_dof_feasible, verify_xor_scheme
from .net_model import CBProblem
from .rational import fraction_text
from .schemes import aligned_reuse, conventional_reuse
from .verifier import verify

logger = logging.getLogger(__name__)

SUITE_COLUMNS = [
    "problem", "scheme", "T", "tau", "claimed_sum_dof", "verified_sum_dof",
    "verdict", "lp_sum_bound", "orthogonal_max",
]

# geometry -> (problem used for aligned reuse, problem used for conventional reuse)
REUSE_PROBLEMS = {
    "linear": ("linear:12", "linear:12"),
    "square": ("square:5x5", "square:6x6"),
    "hex": ("hex:7x7", "hex:6x6"),
}


def _lp_bound(p: CBProblem) -> Optional[Fraction]:
    try:
        return converse_lp(p).sum_bound
    except UnsupportedConfigurationError as exc:
        logger.info("no converse bound for %s: %s", p.name, exc)
        return None


def _orthogonal_sum(p: CBProblem) -> Optional[Fraction]:
    if len(p.messages) > ORTHOGONAL_PATTERN_CAP:
        return None
    return orthogonal_max(p, "sum").value


def reproduction_suite(draws: int = DEFAULT_DRAWS, seed: int = 0) -> pd.DataFrame:
    """
    Verify every built-in scheme and put it next to its bounds

    Parameters:
    -----------
    draws : int
        Channel draws per verification
    seed : int
        Base seed; every row uses the same one

    Returns:
    --------
    pd.DataFrame
        One row per (problem, scheme). Rational cells hold Fractions,
        bounds that do not apply hold None.
    """
    problems: Dict[str, CBProblem] = {}
    bounds: Dict[str, tuple] = {}
    rows = []
    for problem_name, scheme_name, tau in catalog.BUILTIN_SCHEMES:
        if problem_name not in problems:
            problems[problem_name] = catalog.problem(problem_name)
            p = problems[problem_name]
            bounds[problem_name] = (_lp_bound(p), _orthogonal_sum(p))
        p = problems[problem_name]
        s = catalog.scheme(problem_name, scheme_name, p)
        report = verify(p, s, FadingSpec(tau=tau, seed=seed), draws)
        lp_bound, orthogonal = bounds[problem_name]
        rows.append({
            "problem": problem_name,
            "scheme": scheme_name,
            "T": s.T,
            "tau": tau,
            "claimed_sum_dof": s.claimed_sum_dof,
            "verified_sum_dof": report.sum_dof,
            "verdict": "pass" if report.passed else "fail",
            "lp_sum_bound": lp_bound,
            "orthogonal_max": orthogonal,
        })
        logger.info("suite: %s/%s %s", problem_name, scheme_name, rows[-1]["verdict"])
    return pd.DataFrame(rows, columns=SUITE_COLUMNS)


def reuse_gains() -> pd.DataFrame:
    """
    Aligned against conventional frequency reuse per geometry

    Per-cell DoF is the smallest cell total of each schedule; gain is the
    relative improvement in percent, rounded to a whole number.
    """
    rows = []
    for geometry, (aligned_name, conventional_name) in REUSE_PROBLEMS.items():
        aligned_p = catalog.problem(aligned_name)
        conventional_p = catalog.problem(conventional_name)
        aligned = min(aligned_reuse(aligned_p).per_cell_dof(aligned_p).values())
        conventional = min(conventional_reuse(conventional_p).per_cell_dof(conventional_p).values())
        rows.append({
            "geometry": geometry,
            "aligned": aligned,
            "conventional": conventional,
            "gain_pct": round(float((aligned / conventional - 1) * 100)),
        })
    return pd.DataFrame(rows, columns=["geometry", "aligned", "conventional", "gain_pct"])


def index_coding_checks() -> pd.DataFrame:
    """Half-rate verdicts on the named GIC problems and the XOR plan result"""
    rows = []
    for name in ("five_message", "two_user", "all_known"):
        verdict = half_dof_feasible(catalog.gic(name))
        rows.append({"problem": name, "check": "half_dof",
                     "result": "feasible" if verdict.feasible else "infeasible"})
    xor = verify_xor_scheme(catalog.macro_femto_gic(), catalog.MACRO_FEMTO_XOR_PLAN)
    rows.append({"problem": "macro_femto_gic", "check": "xor_plan",
                 "result": f"{fraction_text(xor.dof)} DoF"})
    return pd.DataFrame(rows, columns=["problem", "check", "result"])


def _cell(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, Fraction):
        return fraction_text(value)
    return str(value)


def suite_csv(frame: pd.DataFrame) -> pd.DataFrame:
    """Same table with rationals as 'num/den' text, ready for CSV"""
    return frame.apply(lambda col: col.map(_cell)) if not frame.empty else frame


def _table(frame: pd.DataFrame) -> List[str]:
    return suite_csv(frame).to_string(index=False).splitlines()


def format_summary(frame: pd.DataFrame, gains: Optional[pd.DataFrame] = None,
                   checks: Optional[pd.DataFrame] = None) -> str:
    """Plain-text summary with section banners"""
    lines = ["=" * REPORT_WIDTH, "CELLBLIND REPRODUCTION SUMMARY", "=" * REPORT_WIDTH, ""]
    lines += _table(frame)
    passed = int((frame["verdict"] == "pass").sum()) if not frame.empty else 0
    lines += ["", f"{passed} of {len(frame)} schemes verified", ""]

    if gains is not None:
        lines += ["Frequency reuse (per-cell DoF)", "-" * REPORT_WIDTH]
        lines += _table(gains)
        lines.append("")
    if checks is not None:
        lines += ["Index coding", "-" * REPORT_WIDTH]
        lines += _table(checks)
        lines.append("")

    lines += ["Documented constants (not computed)", "-" * REPORT_WIDTH]
    for key, value in sorted(DOCUMENTED_CONSTANTS.items()):
        lines.append(f"  {key}: {fraction_text(value)}")
    lines += ["=" * REPORT_WIDTH]
    return "\n".join(lines) + "\n"
