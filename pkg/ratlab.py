"""
Command-line entrypoint for the rationality lab.

    python ratlab.py analyze "frobenius(17,1,4)" --prime 17
    python ratlab.py affine sl2_5 --p 11
    python ratlab.py verify --suite thm1.1 --jobs 4 --csv summary.csv

JSON goes to stdout (or --out); logs and banners go to stderr.
"""

import argparse
import json
import logging
import os
import sys
from typing import Dict, List, Optional

from dotenv import load_dotenv

# Add current directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.config.corpus import parse_group_argument, parse_matgroup_argument
from src.config.settings import DEFAULT_MANIFEST, EXIT_CODES, EngineConfig
from src.services.errors import (
    GroupInputError,
    ResourceCapError,
    TableConsistencyError,
    VerificationFailure,
)
from src.tools.commands import (
    cmd_affine,
    cmd_analyze,
    cmd_bound,
    cmd_classify_prime,
    cmd_sp,
    cmd_table,
    cmd_verify,
    resolve_group,
    run_csv,
)
from src.tools.suites import SUITES

# ---------------------------------------------------------------------------
# ENV & LOGGING
# ---------------------------------------------------------------------------

load_dotenv()


def configure_logging() -> None:
    logging.basicConfig(
        level=EngineConfig.LOG_LEVEL,
        format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
        stream=sys.stderr,
    )


configure_logging()
logger = logging.getLogger("ratlab")


# ---------------------------------------------------------------------------
# ARGUMENTS
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ratlab", description="Almost p-rational characters and affine class numbers")
    parser.add_argument("--out", help="write the JSON document to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="rationality profile, detector and McKay-Navarro counts")
    analyze.add_argument("input", nargs="?", help="group JSON file or construction such as sym(4)")
    analyze.add_argument("--prime", type=int, required=True)
    analyze.add_argument("--id", help="corpus entry id instead of an input")
    analyze.add_argument("--manifest", default=DEFAULT_MANIFEST)

    affine = sub.add_parser("affine", help="class number k(HV) of an affine group")
    affine.add_argument("input", nargs="?", help="matrix group JSON file or construction such as sl2_5")
    affine.add_argument("--p", type=int)
    affine.add_argument("--n", type=int)
    affine.add_argument("--gens", help="generators as a JSON list of matrices")
    affine.add_argument("--cyclic", type=int, help="order e of a cyclic H <= GF(p)^* (closed form)")
    affine.add_argument("--certificate", action="store_true", help="Burnside lower-bound certificate")
    affine.add_argument("--id", help="corpus entry id instead of an input")
    affine.add_argument("--manifest", default=DEFAULT_MANIFEST)

    table = sub.add_parser("table", help="export the character table")
    table.add_argument("input", nargs="?")
    table.add_argument("--id")
    table.add_argument("--manifest", default=DEFAULT_MANIFEST)

    for name in ("sp", "classify-prime"):
        numbers = sub.add_parser(name)
        numbers.add_argument("--prime", type=int, required=True)

    bound = sub.add_parser("bound", help="certified evaluation of a numeric bound")
    bound.add_argument("kind", choices=["brauer_min_k", "partitions", "no_large_alt", "primitive_not_alt", "log_p"])
    bound.add_argument("--r", type=int)
    bound.add_argument("--d", type=int)
    bound.add_argument("--p", type=int)

    verify = sub.add_parser("verify", help="run verification suites over the corpus")
    verify.add_argument("--suite", action="append", required=True,
                        help=f"one of {', '.join(SUITES)}; repeat or comma-separate")
    verify.add_argument("--manifest", default=DEFAULT_MANIFEST)
    verify.add_argument("--jobs", type=int, default=1)
    verify.add_argument("--fail-fast", action="store_true")
    verify.add_argument("--csv", help="also write a CSV summary to this file")
    verify.add_argument("--id", action="append", help="restrict to these corpus ids")
    return parser


def _group_input(args):
    if args.id:
        return resolve_group(args.id, args.manifest)
    if not args.input:
        raise GroupInputError("give an input or --id", field="input")
    return parse_group_argument(args.input)


def _suites(values: List[str]) -> List[str]:
    return [s.strip() for v in values for s in v.split(",") if s.strip()]


def dispatch(args) -> Dict:
    if args.command == "analyze":
        return cmd_analyze(_group_input(args), args.prime)
    if args.command == "affine":
        if args.cyclic is not None:
            return cmd_affine(p=args.p, cyclic=args.cyclic)
        H = resolve_group(args.id, args.manifest) if args.id else \
            parse_matgroup_argument(args.input, p=args.p, n=args.n, gens=args.gens)
        return cmd_affine(H, certificate=args.certificate)
    if args.command == "table":
        return cmd_table(_group_input(args))
    if args.command == "sp":
        return cmd_sp(args.prime)
    if args.command == "classify-prime":
        return cmd_classify_prime(args.prime)
    if args.command == "bound":
        return cmd_bound(args.kind, r=args.r, d=args.d, p=args.p)
    if args.command == "verify":
        payload = cmd_verify(_suites(args.suite), manifest_path=args.manifest, jobs=args.jobs,
                             fail_fast=args.fail_fast, ids=args.id)
        if args.csv:
            with open(args.csv, "w", encoding="utf-8") as f:
                f.write(run_csv(payload["run"]))
        return payload
    raise GroupInputError(f"unknown command '{args.command}'", field="command")


def _emit(document: Dict, out: Optional[str]) -> None:
    text = json.dumps(document, sort_keys=True, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)


def _error_payload(kind: str, e: Exception) -> Dict:
    return {"status": "error", "error_type": kind, "message": str(e), "field": getattr(e, "field", None)}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload = dispatch(args)
    except GroupInputError as e:
        logger.error(f"Input error: {e}")
        _emit(_error_payload(type(e).__name__, e), None)
        return EXIT_CODES["input"]
    except ResourceCapError as e:
        logger.error(f"Resource cap: {e}")
        _emit(_error_payload(type(e).__name__, e), None)
        return EXIT_CODES["resource"]
    except (VerificationFailure, TableConsistencyError) as e:
        logger.error(f"Assertion failed: {e}")
        _emit(_error_payload(type(e).__name__, e), None)
        return EXIT_CODES["assertion"]

    _emit(payload["document"], args.out)
    if payload.get("banner"):
        print(payload["banner"], file=sys.stderr)
    return payload.get("exit_code", EXIT_CODES["success"])


if __name__ == "__main__":
    try:
        sys.exit(main())
    except Exception:
        logger.critical("ratlab failed", exc_info=True)
        raise
