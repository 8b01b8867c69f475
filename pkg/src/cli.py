"""
Command Line Interface
Subcommands for generating problems, building schemes, verifying, bounding,
mapping to index coding and simulating
"""
import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from . import catalog
from .bounds import converse_lp, orthogonal_max
from .channel import SPATIAL_MODELS, FadingSpec
from .config import (
    DEFAULT_DRAWS,
    DEFAULT_SNR_LIST_DB,
    DEFAULT_TAU,
    DEFAULT_TOLERANCE,
    OUTPUT_DIR,
    SIMULATION_DRAWS,
)
from .errors import CellBlindError, InvalidParameterError
from .index_coding import (
    GICProblem,
    cb_to_gic,
    gic_to_cb,
    half_dof_feasible,
    load_gic,
    store_gic,
    verify_xor_scheme,
)
from .net_model import CBProblem, load_problem, reciprocal, store_problem
from .rational import fraction_text
from .report import format_summary, index_coding_checks, reproduction_suite, reuse_gains, suite_csv
from .schemes import LinearScheme, aligned_reuse, conventional_reuse, load_scheme, store_schedule, store_scheme
from .simulator import simulate_rates
from .verifier import verify, verify_exact

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

SEED_ENV = "CELLBLIND_SEED"
STOCHASTIC = ("verify", "simulate", "report")


@dataclass
class RunConfig:
    """Resolved options for one invocation"""
    command: str
    problem: Optional[str] = None
    scheme: Optional[str] = None
    gic: Optional[str] = None
    out: Optional[str] = None
    seed: Optional[int] = None
    tau: int = DEFAULT_TAU
    receiver_tau: Dict[str, int] = field(default_factory=dict)
    spatial: str = "iid"
    draws: int = DEFAULT_DRAWS
    tolerance: float = DEFAULT_TOLERANCE
    snr_list_db: List[float] = field(default_factory=lambda: list(DEFAULT_SNR_LIST_DB))
    objective: str = "sum"
    plan: Optional[str] = None
    save: bool = False
    schedule: bool = False
    exact: bool = False
    workers: Optional[int] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        seed = args.seed
        if seed is None and os.getenv(SEED_ENV):
            try:
                seed = int(os.environ[SEED_ENV])
            except ValueError as exc:
                raise InvalidParameterError(f"{SEED_ENV} must be an integer") from exc
        if args.command in STOCHASTIC and seed is None:
            raise InvalidParameterError(f"'{args.command}' needs --seed or {SEED_ENV}")

        config = cls(command=args.command, seed=seed)
        for name in ("problem", "scheme", "gic", "out", "tau", "spatial", "tolerance",
                     "objective", "plan", "save", "schedule", "exact", "workers"):
            if getattr(args, name, None) is not None:
                setattr(config, name, getattr(args, name))
        if getattr(args, "draws", None) is not None:
            config.draws = args.draws
        elif args.command == "simulate":
            config.draws = SIMULATION_DRAWS
        if getattr(args, "receiver_tau", None):
            config.receiver_tau = _parse_receiver_tau(args.receiver_tau)
        if getattr(args, "snr", None):
            config.snr_list_db = _parse_floats(args.snr, "--snr")
        for path in (config.problem, config.scheme, config.gic):
            if path and _looks_like_path(path) and not os.path.isfile(path):
                raise InvalidParameterError(f"no such file: {path}")
        return config

    def fading(self) -> FadingSpec:
        return FadingSpec(tau=self.tau, spatial=self.spatial, seed=self.seed or 0,
                          receiver_tau=dict(self.receiver_tau))


def _looks_like_path(text: str) -> bool:
    return text.endswith(".json") or os.sep in text


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _parse_receiver_tau(entries: Sequence[str]) -> Dict[str, int]:
    out = {}
    for entry in entries:
        for part in entry.split(","):
            rx, sep, value = part.partition("=")
            if not sep or not rx:
                raise InvalidParameterError(f"--receiver-tau expects RX=TAU, got '{part}'")
            try:
                out[rx] = int(value)
            except ValueError as exc:
                raise InvalidParameterError(f"--receiver-tau expects an integer for '{rx}'") from exc
    return out


def _parse_floats(text: str, flag: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InvalidParameterError(f"{flag} expects comma-separated numbers, got '{text}'") from exc


def _problem(config: RunConfig) -> CBProblem:
    if not config.problem:
        raise InvalidParameterError("--problem is required")
    if _looks_like_path(config.problem):
        return load_problem(_read(config.problem))
    return catalog.problem(config.problem)


def _scheme(config: RunConfig, p: CBProblem) -> LinearScheme:
    if not config.scheme:
        raise InvalidParameterError("--scheme is required")
    if _looks_like_path(config.scheme):
        return load_scheme(_read(config.scheme))
    problem_name = p.name if _looks_like_path(config.problem) else config.problem
    return catalog.scheme(problem_name, config.scheme, p)


def _gic(config: RunConfig) -> GICProblem:
    if not config.gic:
        raise InvalidParameterError("--gic is required")
    if _looks_like_path(config.gic):
        return load_gic(_read(config.gic))
    return catalog.gic(config.gic)


def _emit(text: str, out: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        folder = os.path.dirname(out)
        if folder:
            os.makedirs(folder, exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _status(ok: bool, message: str) -> None:
    print(f"[{'OK' if ok else 'FAIL'}] {message}", file=sys.stderr)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_gen_topology(config: RunConfig) -> int:
    _emit(store_problem(_problem(config)), config.out)
    return EXIT_OK


def cmd_build_scheme(config: RunConfig) -> int:
    p = _problem(config)
    if config.schedule:
        if config.scheme not in ("aligned", "conventional"):
            raise InvalidParameterError("--schedule applies to the aligned and conventional schemes")
        reuse = aligned_reuse if config.scheme == "aligned" else conventional_reuse
        _emit(store_schedule(reuse(p)), config.out)
        return EXIT_OK
    s = _scheme(config, p)
    s.validate(p)
    _emit(store_scheme(s), config.out)
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    p = _problem(config)
    s = _scheme(config, p)
    report = verify(p, s, config.fading(), config.draws, config.tolerance, config.workers)
    doc = report.to_dict()
    ok = report.passed
    if config.exact:
        exact = verify_exact(p, s, config.tau, seed=config.seed, receiver_tau=config.receiver_tau)
        doc["exact_passed"] = exact
        ok = ok and exact
    _emit(_dump(doc), config.out)
    if report.passed:
        _status(ok, f"{s.name} on {p.name}: sum DoF {fraction_text(report.sum_dof)} "
                    f"over {report.draws} draws at tau={config.tau}")
    else:
        _status(False, f"{s.name} on {p.name}: failing receivers {', '.join(report.failing_receivers())}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_bound(config: RunConfig) -> int:
    report = converse_lp(_problem(config))
    _emit(report.to_json(), config.out)
    _status(True, f"converse sum bound {fraction_text(report.sum_bound)}")
    return EXIT_OK


def cmd_orthogonal(config: RunConfig) -> int:
    result = orthogonal_max(_problem(config), config.objective)
    _emit(_dump(result.to_dict()), config.out)
    note = "" if result.proven_optimal else " (best found, not proven optimal)"
    _status(True, f"orthogonal {config.objective} {fraction_text(result.value)}{note}")
    return EXIT_OK


def cmd_map_cb_gic(config: RunConfig) -> int:
    _emit(store_gic(cb_to_gic(_problem(config))), config.out)
    return EXIT_OK


def cmd_map_gic_cb(config: RunConfig) -> int:
    _emit(store_problem(gic_to_cb(_gic(config))), config.out)
    return EXIT_OK


def cmd_half_dof(config: RunConfig) -> int:
    verdict = half_dof_feasible(_gic(config))
    doc = verdict.to_dict()
    if verdict.feasible:
        doc["scheme"] = json.loads(store_scheme(verdict.scheme))
    _emit(_dump(doc), config.out)
    _status(verdict.feasible, "half DoF per message is " + ("feasible" if verdict.feasible else "infeasible"))
    return EXIT_OK


def _parse_plan(text: str) -> List[frozenset]:
    return [frozenset(part.split("+")) for part in text.split(",") if part]


def cmd_xor_check(config: RunConfig) -> int:
    g = _gic(config)
    if config.plan:
        plan = _parse_plan(config.plan)
    elif config.gic == "macro_femto_gic":
        plan = catalog.MACRO_FEMTO_XOR_PLAN
    else:
        raise InvalidParameterError("--plan is required for this GIC problem")
    verdict = verify_xor_scheme(g, plan)
    doc = {
        "success": verdict.success,
        "dof": fraction_text(verdict.dof),
        "failures": dict(sorted(verdict.failures.items())),
        "plan": [sorted(c) for c in plan],
    }
    _emit(_dump(doc), config.out)
    _status(verdict.success, f"XOR plan delivers {fraction_text(verdict.dof)} DoF")
    return EXIT_OK if verdict.success else EXIT_FAILED


def cmd_simulate(config: RunConfig) -> int:
    p = _problem(config)
    s = _scheme(config, p)
    table = simulate_rates(p, s, config.fading(), config.snr_list_db, config.draws)
    _emit(table.to_csv(), config.out)
    _status(True, f"simulated {s.name} at {len(table.snrs)} SNR points over {table.draws} draws")
    return EXIT_OK


def cmd_reciprocal(config: RunConfig) -> int:
    _emit(store_problem(reciprocal(_problem(config))), config.out)
    return EXIT_OK


def cmd_report(config: RunConfig) -> int:
    frame = reproduction_suite(config.draws, config.seed)
    _emit(format_summary(frame, reuse_gains(), index_coding_checks()), config.out)
    if config.save:
        path = os.path.join(OUTPUT_DIR, "reproduction_suite.csv")
        os.makedirs(OUTPUT_DIR, exist_ok=True)
        suite_csv(frame).to_csv(path, index=False, lineterminator="\n")
        logger.info("suite table written to %s", path)
    ok = bool((frame["verdict"] == "pass").all())
    _status(ok, f"{int((frame['verdict'] == 'pass').sum())} of {len(frame)} built-in schemes verified")
    return EXIT_OK if ok else EXIT_FAILED


COMMANDS = {
    "gen-topology": cmd_gen_topology,
    "build-scheme": cmd_build_scheme,
    "verify": cmd_verify,
    "bound": cmd_bound,
    "orthogonal": cmd_orthogonal,
    "map-cb-gic": cmd_map_cb_gic,
    "map-gic-cb": cmd_map_gic_cb,
    "half-dof": cmd_half_dof,
    "xor-check": cmd_xor_check,
    "simulate": cmd_simulate,
    "reciprocal": cmd_reciprocal,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellblind",
        description="Blind interference alignment workbench for cellular networks",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="command")

    def add(name: str, help_text: str, *groups: str) -> argparse.ArgumentParser:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--out", help="write the artifact here instead of stdout")
        if "problem" in groups:
            cmd.add_argument("--problem", help="catalog name (e.g. four_cell_downlink, hex:7x7) or JSON path")
        if "scheme" in groups:
            cmd.add_argument("--scheme", help="scheme name (coherent, iid, aligned, ...) or JSON path")
        if "gic" in groups:
            cmd.add_argument("--gic", help="GIC catalog name (five_message, macro_femto_gic, ...) or JSON path")
        if "random" in groups:
            cmd.add_argument("--seed", type=int, help=f"RNG seed (default: ${SEED_ENV})")
            cmd.add_argument("--draws", type=int)
        else:
            cmd.set_defaults(seed=None, draws=None)
        if "fading" in groups:
            cmd.add_argument("--tau", type=int, help="coherence block length in slots")
            cmd.add_argument("--receiver-tau", action="append", metavar="RX=TAU",
                             help="per-receiver coherence override, repeatable or comma-separated")
            cmd.add_argument("--spatial", choices=SPATIAL_MODELS)
        return cmd

    add("gen-topology", "write a built-in problem as JSON", "problem")
    build = add("build-scheme", "write a built-in scheme as JSON", "problem", "scheme")
    build.add_argument("--schedule", action="store_true", help="emit the reuse schedule instead")
    verify_cmd = add("verify", "check a scheme over random channel draws", "problem", "scheme", "random", "fading")
    verify_cmd.add_argument("--tolerance", type=float)
    verify_cmd.add_argument("--workers", type=int)
    verify_cmd.add_argument("--exact", action="store_true", help="also run the rational oracle")
    add("bound", "converse LP bounds", "problem")
    orth = add("orthogonal", "best orthogonal scheme", "problem")
    orth.add_argument("--objective", choices=("sum", "symmetric"))
    add("map-cb-gic", "CB problem to its GIC counterpart", "problem")
    add("map-gic-cb", "GIC problem to a CB problem", "gic")
    add("half-dof", "test whether every message can get half a DoF", "gic")
    xor = add("xor-check", "check a plan of XOR-coded messages", "gic")
    xor.add_argument("--plan", help="coded messages such as 'a2+b1,a1+c1'")
    sim = add("simulate", "finite-SNR rates as CSV", "problem", "scheme", "random", "fading")
    sim.add_argument("--snr", help="comma-separated SNR points in dB")
    add("reciprocal", "swap transmitters and receivers", "problem")
    report_cmd = add("report", "reproduce every built-in result in one table", "random")
    report_cmd.add_argument("--save", action="store_true", help="also write the table as CSV under the output folder")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = RunConfig.from_args(args)
        return COMMANDS[args.command](config)
    except CellBlindError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
