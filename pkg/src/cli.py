#!/usr/bin/env python3
"""
Command-line front end for spreadhom.

Every sub-command reads its inputs from JSON files, runs one job and writes the
report as JSON (quivers may be written as DOT) to stdout or ``--output``.

Exit codes: 0 on success, 2 for invalid input, 3 for a truncated resolution.
"""
import argparse
import logging
import os
import re
import sys
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ValidationError

from src.core.errors import InvalidInputError, TooLargeError, TruncatedError
from src.core.jobs import JOBS, run_job
from src.core.linalg import FieldPrime
from src.core.spreadcalc import FAMILY_KINDS
from src.models.reports import ErrorDetail, ErrorReport
from src.utils.serialization import load_json, render_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_TRUNCATED = 3

_SIZES = re.compile(r"^\d+(x\d+)*$")


def _poset_arg(value: str) -> Dict[str, Any]:
    """A grid written as ``3x4`` or the path of a poset JSON file."""
    if _SIZES.match(value):
        return {"kind": "grid", "sizes": [int(n) for n in value.split("x")]}
    return load_json(value)


def _spreads_arg(path: Optional[str]) -> List[Any]:
    if path is None:
        return []
    data = load_json(path)
    if not isinstance(data, list):
        raise InvalidInputError(f"{path} must hold a list of spreads")
    return data


def _hom_payload(args) -> Dict[str, Any]:
    payload = {"spread1": load_json(args.spread1), "spread2": load_json(args.spread2)}
    if args.poset:
        payload["poset"] = _poset_arg(args.poset)
    return payload


def _resolve_payload(args) -> Dict[str, Any]:
    return {
        "family": args.family,
        "module": load_json(args.module),
        "max_len": args.max_len,
        "spreads": _spreads_arg(args.spreads),
    }


def _invariant_payload(args) -> Dict[str, Any]:
    return {
        "which": args.which,
        "module": load_json(args.module),
        "family": args.family,
        "spreads": _spreads_arg(args.spreads),
    }


def _quiver_payload(args) -> Dict[str, Any]:
    return {
        "family": args.family,
        "poset": _poset_arg(args.poset),
        "cross_check": not args.no_cross_check,
        "spreads": _spreads_arg(args.spreads),
    }


def _koszul_payload(args) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"n": args.n}
    if args.family:
        payload["families"] = args.family
    return payload


def _functor_payload(args) -> Dict[str, Any]:
    payload = {"op": args.op, "grid": load_json(args.grid), "module": load_json(args.module)}
    if args.target:
        payload["target"] = _poset_arg(args.target)
    return payload


def _check_family_payload(args) -> Dict[str, Any]:
    data = load_json(args.grids)
    if not isinstance(data, dict):
        raise InvalidInputError(f"{args.grids} must hold an object with bound and grids")
    return {**data, "family": args.family}


def _precover_payload(args) -> Dict[str, Any]:
    payload = {"bound": _poset_arg(args.bound), "r": args.r, "s": args.s, "t": args.t}
    if args.candidates:
        payload["candidates"] = load_json(args.candidates)
    return payload


def _apply_prime(command: str, payload: Dict[str, Any], prime: int) -> None:
    """Put the field prime into every part of the payload that carries one and omits it."""
    model, _ = JOBS[command]
    if "prime" in model.model_fields and payload.get("prime") is None:
        payload["prime"] = prime
    module = payload.get("module")
    if isinstance(module, dict) and module.get("prime") is None:
        module["prime"] = prime


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spreadhom",
        description="Relative homological invariants of persistence modules over finite grids",
    )
    parser.add_argument("--prime", type=int, default=None,
                        help="Field characteristic (default: SPREADHOM_PRIME or 32003)")
    parser.add_argument("--output", "-o", default=None, help="Write the report here instead of stdout")
    parser.add_argument("--log-level", default=None, help="Logging level (default: LOG_LEVEL or WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hom", help="Dimension of Hom between two spread modules")
    p.add_argument("--spread1", required=True, help="Source spread JSON")
    p.add_argument("--spread2", required=True, help="Target spread JSON")
    p.add_argument("--poset", help="Shared poset (JSON file or sizes like 3x3)")
    p.set_defaults(payload=_hom_payload)

    p = sub.add_parser("resolve", help="Minimal relative resolution and signed decomposition")
    p.add_argument("--family", required=True, choices=FAMILY_KINDS)
    p.add_argument("--module", required=True, help="Module JSON")
    p.add_argument("--max-len", type=int, default=None, help="Resolution budget")
    p.add_argument("--spreads", help="Spreads of a custom family (JSON list)")
    p.set_defaults(payload=_resolve_payload)

    p = sub.add_parser("invariant", help="Dimension vector, rank invariant, barcode or Hom profile")
    p.add_argument("--which", required=True, choices=["dim", "rank", "barcode", "dimhom"])
    p.add_argument("--module", required=True, help="Module JSON")
    p.add_argument("--family", default="projectives", choices=FAMILY_KINDS, help="Probe family for dimhom")
    p.add_argument("--spreads", help="Spreads of a custom family (JSON list)")
    p.set_defaults(payload=_invariant_payload)

    p = sub.add_parser("quiver", help="Quiver of irreducible morphisms of a family")
    p.add_argument("--family", required=True, choices=FAMILY_KINDS)
    p.add_argument("--poset", required=True, help="Poset (JSON file or sizes like 3x3)")
    p.add_argument("--format", default="dot", choices=["dot", "json"])
    p.add_argument("--no-cross-check", action="store_true", help="Skip the linear-algebra oracle")
    p.add_argument("--spreads", help="Spreads of a custom family (JSON list)")
    p.set_defaults(payload=_quiver_payload)

    p = sub.add_parser("koszul", help="Staircase Koszul complex and its relative exactness")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--family", action="append", choices=FAMILY_KINDS,
                   help="Family to test relative exactness against (repeatable)")
    p.set_defaults(payload=_koszul_payload)

    p = sub.add_parser("functor", help="Restrict, extend or contract a module along an aligned subgrid")
    p.add_argument("--op", required=True, choices=["restrict", "extend", "contract"])
    p.add_argument("--grid", required=True, help="Aligned subgrid JSON")
    p.add_argument("--module", required=True, help="Module JSON")
    p.add_argument("--target", help="Ambient grid for extend (JSON file or sizes)")
    p.set_defaults(payload=_functor_payload)

    p = sub.add_parser("check-family", help="Check the extended projective class conditions")
    p.add_argument("--grids", required=True, help="JSON with bound, grids and optional test_modules")
    p.add_argument("--family", required=True, choices=FAMILY_KINDS)
    p.set_defaults(payload=_check_family_payload)

    p = sub.add_parser("probe-precover", help="Probe upset precovers of a hook within a bound")
    p.add_argument("--bound", required=True, help="Bounding grid (JSON file or sizes like 4x4)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--candidates", help="Candidate antichains (JSON list)")
    p.set_defaults(payload=_precover_payload)

    return parser


def _configure_logging(level: Optional[str]) -> None:
    level = (level or os.getenv("LOG_LEVEL", "WARNING")).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler()],
    )


def _write(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    with open(output, "w", encoding="utf-8") as fh:
        fh.write(text)
    logger.info(f"Wrote report to {output}")


def _fail(error: Exception, exit_code: int) -> int:
    report = ErrorReport(error=ErrorDetail(type=type(error).__name__, message=str(error), exit_code=exit_code))
    sys.stdout.write(render_json(report))
    return exit_code


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one sub-command.

    Args:
        argv: Arguments without the program name; defaults to ``sys.argv[1:]``.

    Returns:
        The process exit code.
    """
    load_dotenv()
    args = build_parser().parse_args(argv)
    _configure_logging(args.log_level)
    try:
        payload = args.payload(args)
        if args.prime is not None:
            _apply_prime(args.command, payload, FieldPrime(p=args.prime).p)
        report: BaseModel = run_job(args.command, payload)
        if args.command == "quiver" and args.format == "dot":
            text = report.to_dot()
        else:
            text = render_json(report)
        _write(text, args.output)
    except TruncatedError as e:
        logger.warning(f"{args.command}: {e}")
        return _fail(e, EXIT_TRUNCATED)
    except (InvalidInputError, TooLargeError, ValidationError, OSError) as e:
        logger.error(f"{args.command}: {e}")
        return _fail(e, EXIT_INVALID)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
