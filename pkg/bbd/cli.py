"""Command-line entry point: `python -m bbd <command> ...`.

Exit codes: 0 the checked property holds, 1 it fails (certificate printed),
2 usage, parse or configuration error. Payloads go to stdout; structlog
events go to stderr.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional

import structlog
from pydantic import BaseModel, ValidationError

from . import __version__
from .config import configure_logging, settings, validate_config
from .errors import BbdError, ParameterError
from .schemas.generator import ExperimentConfig, GeneratorConfig
from .schemas.reports import ExperimentReport
from .services.bbd_format import parse, serialize, to_dot
from .services.constructions import random_bk_digraph, random_digraph
from .services.cycles import METHODS, even_cycle_spectrum, find_bypass, hamiltonian_cycle
from .services.digraph import BipartiteDigraph
from .services.enumeration import enumerate_bk
from .services.experiments import (
    EXPERIMENT_ALIASES,
    EXPERIMENTS,
    SEARCH_MODES,
    analyze,
    check,
    cycle_factor_report,
    run_experiment,
    verify_paper,
    wang_search,
)
from .services.factor import cycle_factor
from .services.walks import Cycle

logger = structlog.get_logger("bbd")

HOLDS, FAILS, ERROR = 0, 1, 2

FORMATS = ("json", "text", "dot")


def _read_graph(path: str) -> BipartiteDigraph:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return parse(text)


def _write(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _dump(model: BaseModel, stable: bool) -> Dict[str, Any]:
    if isinstance(model, ExperimentReport) and stable:
        return model.stable_dump()
    return model.model_dump()


def _require_format(args: argparse.Namespace, allowed: tuple[str, ...]) -> None:
    if args.format not in allowed:
        raise ParameterError(f"{args.command} supports --format {'|'.join(allowed)}, got {args.format}")


def _generator_config(args: argparse.Namespace, model: type[GeneratorConfig] = ExperimentConfig) -> GeneratorConfig:
    """Config file values, overridden by any flag given on the command line."""
    values: Dict[str, Any] = {}
    if getattr(args, "config", None):
        values.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
    flags = {
        "a": getattr(args, "a", None),
        "k": getattr(args, "k", None),
        "seed": getattr(args, "seed", None),
        "arc_probability": getattr(args, "arc_prob", None),
        "count": getattr(args, "count", None),
        "budget": getattr(args, "budget", None),
    }
    values.update({key: value for key, value in flags.items() if value is not None})
    allowed = set(model.model_fields)
    return model(**{key: value for key, value in values.items() if key in allowed})


# Single-graph commands


def cmd_check(args: argparse.Namespace) -> int:
    _require_format(args, ("json", "text"))
    d = _read_graph(args.file)
    params = {"k": args.k, "bound": args.bound}
    report = check(d, args.condition, {key: value for key, value in params.items() if value is not None})
    if args.format == "text":
        _write("holds" if report.holds else f"fails: {report.witness.reason}")
    else:
        _write(_json(report.model_dump()))
    return HOLDS if report.holds else FAILS


def cmd_analyze(args: argparse.Namespace) -> int:
    _require_format(args, ("json",))
    d = _read_graph(args.file)
    report = analyze(d, args.k if args.k is not None else 2)
    _write(_json(report.model_dump()))
    return FAILS if any(t.contradiction for t in report.theorems) else HOLDS


def cmd_cycle_factor(args: argparse.Namespace) -> int:
    _require_format(args, ("json", "text"))
    report = cycle_factor_report(cycle_factor(_read_graph(args.file)))
    if args.format == "text":
        if report.exists:
            _write("\n".join(report.cycles))
        else:
            v = report.violator
            _write(f"no perfect matching {v.direction}: S={' '.join(v.S)} N+(S)={' '.join(v.neighborhood)}")
    else:
        _write(_json(report.model_dump()))
    return HOLDS if report.exists else FAILS


def cmd_hamiltonian(args: argparse.Namespace) -> int:
    _require_format(args, ("json", "text"))
    found = hamiltonian_cycle(_read_graph(args.file), method=args.method)
    if args.format == "text":
        _write(str(found) if found is not None else "none")
    else:
        _write(_json({"hamiltonian": found is not None, "cycle": str(found) if found is not None else None}))
    return HOLDS if found is not None else FAILS


def cmd_spectrum(args: argparse.Namespace) -> int:
    _require_format(args, ("json", "text"))
    d = _read_graph(args.file)
    spectrum = even_cycle_spectrum(d)
    if args.format == "text":
        _write(" ".join(str(m) for m in spectrum))
    else:
        _write(_json({"order": d.order, "even_spectrum": spectrum}))
    return HOLDS


def cmd_bypass(args: argparse.Namespace) -> int:
    _require_format(args, ("json", "text"))
    d = _read_graph(args.file)
    found = find_bypass(d, Cycle.parse(args.cycle))
    if args.format == "text":
        _write(str(found) if found is not None else "none")
    else:
        _write(_json({"cycle": args.cycle, "bypass": str(found) if found is not None else None}))
    return HOLDS if found is not None else FAILS


# Generation


def _stream_graphs(digraphs: Iterable[BipartiteDigraph], fmt: str) -> None:
    """One blank line between documents, the layout serialize_many produces."""
    for i, d in enumerate(digraphs):
        if i:
            sys.stdout.write("\n")
        _write(to_dot(d, name=f"D{i}") if fmt == "dot" else serialize(d))


def cmd_gen(args: argparse.Namespace) -> int:
    _require_format(args, ("text", "dot"))
    config = _generator_config(args)
    count = args.count if args.count is not None else 1
    digraphs, failures = [], 0
    for i in range(count):
        instance = config.model_copy(update={"seed": (config.seed + i) % 2**64})
        d = random_bk_digraph(instance) if args.bk else random_digraph(instance)
        if d is None:
            failures += 1
            continue
        digraphs.append(d)
    _stream_graphs(digraphs, args.format)
    if failures:
        logger.warning("generation_failures", failures=failures, requested=count)
    return HOLDS if not failures else FAILS


def cmd_enumerate(args: argparse.Namespace) -> int:
    _require_format(args, ("text", "dot"))
    search = enumerate_bk(args.a, args.k if args.k is not None else 2, args.budget or 200_000, dedup=not args.no_dedup)
    _stream_graphs(search, args.format)
    sys.stderr.write(json.dumps(search.coverage(), sort_keys=True) + "\n")
    return HOLDS


# Batch commands


def _emit_report(report: ExperimentReport, stable: bool) -> int:
    # JSON lines: one line per violation, then the full report
    for violation in report.violations:
        _write(json.dumps({"violation": violation.model_dump()}, sort_keys=True))
    _write(json.dumps(_dump(report, stable), sort_keys=True))
    return HOLDS if report.passed else FAILS


def cmd_verify_paper(args: argparse.Namespace) -> int:
    _require_format(args, ("json",))
    report = verify_paper()
    _write(_json(_dump(report, args.stable)))
    return HOLDS if report.passed else FAILS


def cmd_experiment(args: argparse.Namespace) -> int:
    _require_format(args, ("json",))
    return _emit_report(run_experiment(args.name, _generator_config(args)), args.stable)


def cmd_wang_search(args: argparse.Namespace) -> int:
    _require_format(args, ("json",))
    return _emit_report(wang_search(_generator_config(args), mode=args.mode), args.stable)


def _common(parser: argparse.ArgumentParser, default_format: str = "json") -> None:
    parser.add_argument("--format", choices=FORMATS, default=default_format)
    parser.add_argument("--stable", action="store_true", help="omit wall time and timestamp")


def _generator_flags(parser: argparse.ArgumentParser, require_a: bool = False) -> None:
    parser.add_argument("--a", type=int, required=require_a, help="half order")
    parser.add_argument("--k", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--count", type=int)
    parser.add_argument("--arc-prob", dest="arc_prob", help="arc probability, float or p/q")
    parser.add_argument("--config", help="JSON file with a, k, seed, arc_probability, max_attempts, repair_iterations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bbd", description="Balanced bipartite digraph analysis toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help=f"structlog level (default {settings.log_level})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate one degree condition")
    p.add_argument("file", help="bbd/1 file or - for stdin")
    p.add_argument("--condition", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--bound", type=float)
    _common(p)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("analyze", help="full report for one digraph")
    p.add_argument("file")
    p.add_argument("--k", type=int)
    _common(p)
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("cycle-factor", help="cycle factor or Hall violator")
    p.add_argument("file")
    _common(p)
    p.set_defaults(handler=cmd_cycle_factor)

    p = sub.add_parser("hamiltonian", help="exact Hamiltonian cycle search")
    p.add_argument("file")
    p.add_argument("--method", choices=METHODS, default="auto")
    _common(p)
    p.set_defaults(handler=cmd_hamiltonian)

    p = sub.add_parser("spectrum", help="even cycle lengths present")
    p.add_argument("file")
    _common(p)
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("bypass", help="bypass of a given cycle")
    p.add_argument("file")
    p.add_argument("--cycle", required=True, help='e.g. "X0 Y0"')
    _common(p)
    p.set_defaults(handler=cmd_bypass)

    p = sub.add_parser("gen", help="seeded random digraphs in bbd/1")
    _generator_flags(p)
    p.add_argument("--bk", action="store_true", help="generate strong B_k digraphs")
    _common(p, default_format="text")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("enumerate", help="budgeted enumeration of strong B_k digraphs")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--no-dedup", action="store_true")
    _common(p, default_format="text")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("verify-paper", help="reference digraph assertions and smoke experiments")
    _common(p)
    p.set_defaults(handler=cmd_verify_paper)

    p = sub.add_parser("experiment", help="check a proved statement on generated instances")
    p.add_argument("name", choices=[*EXPERIMENTS, *EXPERIMENT_ALIASES])
    _generator_flags(p)
    _common(p)
    p.set_defaults(handler=cmd_experiment)

    p = sub.add_parser("wang-search", help="search for strong non-Hamiltonian B_k digraphs")
    _generator_flags(p)
    p.add_argument("--mode", choices=SEARCH_MODES, default="random")
    p.add_argument("--budget", type=int)
    _common(p)
    p.set_defaults(handler=cmd_wang_search)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        validate_config()
        return handler(args)
    except (BbdError, ValidationError, OSError, json.JSONDecodeError, RuntimeError) as e:
        sys.stderr.write(f"error: {e}\n")
        return ERROR
