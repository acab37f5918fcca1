"""
Command Implementations

One function per CLI subcommand. Each returns a payload dictionary:
    {"status": "success", "document": <dict>, ...}
Exceptions from the services propagate to the entrypoint, which maps them to
error payloads and exit codes.
"""

import csv
import io
import logging
from dataclasses import asdict
from typing import Dict, Optional, Sequence

from src.config.corpus import build_entry, read_manifest, resolve_entry
from src.config.settings import DEFAULT_MANIFEST, EXIT_CODES
import src.handlers.dispatch as dispatch
from src.models.reports import AnalysisReport, RunReport
from src.services.affine import (
    MatGroup,
    classify_prime_conditions,
    closed_form_report,
    k_lower_bound_certificate,
    k_semidirect,
    sp_exclusion_scan,
)
from src.services.arithmetic import is_prime
from src.services.bounds import brauer_min_k, partition_count, perm_order_bound
from src.services.character_table import character_table, export_table
from src.services.errors import GroupInputError, ResourceCapError
from src.services.groups import Group
from src.services.rationality import (
    detect_cyclic_sylow,
    mckay_navarro_check,
    parat_statistics,
    rationality_profile,
    sp_set,
    verify_theorem_1_1,
)

logger = logging.getLogger(__name__)

COUNTEREXAMPLE_BANNER = "*** COUNTEREXAMPLE CANDIDATE: detector disagreement (see flagged entries) ***"


def _require_group(built, command: str) -> Group:
    if isinstance(built, MatGroup):
        raise GroupInputError(f"'{command}' expects a permutation group, got a matrix group", field="input")
    return built


def _require_prime_input(p: int) -> None:
    if p < 2 or not is_prime(p):
        raise GroupInputError(f"{p} is composite", field="prime")


# ==================== ANALYZE ====================

def cmd_analyze(G: Group, p: int) -> Dict:
    """Rationality profile plus detector, McKay-Navarro counts and the lower bound check."""
    G = _require_group(G, "analyze")
    _require_prime_input(p)
    profile = rationality_profile(G, p)
    report = AnalysisReport(profile=profile)
    if G.order % p:
        message = f"p={p} does not divide |G| = {G.order}; detector and local counts skipped"
        logger.warning(f"[ANALYZE] {message}")
        report.warnings.append(message)
    else:
        report.detector = detect_cyclic_sylow(G, p, profile=profile)
        report.mckay_navarro = mckay_navarro_check(G, p, profile=profile)
        report.theorem_1_1 = verify_theorem_1_1(G, p, profile=profile)
        report.statistics = asdict(parat_statistics(G, p, profile=profile))
    logger.info(f"[ANALYZE] {G.name}, p={p}: counts {profile.counts.model_dump()}")
    return {"status": "success", "document": report.model_dump(mode="json", by_alias=True)}


# ==================== AFFINE ====================

def cmd_affine(H: Optional[MatGroup] = None, p: Optional[int] = None, cyclic: Optional[int] = None,
               certificate: bool = False) -> Dict:
    """
    Class number of V x| H. `cyclic=e` with n = 1 uses the closed form;
    `certificate` takes the Burnside route and never enumerates V.
    """
    if cyclic is not None:
        if p is None:
            raise GroupInputError("--cyclic needs --p", field="p")
        report = closed_form_report(p, cyclic)
        return {"status": "success", "document": report.model_dump(mode="json", by_alias=True)}
    if H is None:
        raise GroupInputError("no matrix group given", field="input")
    if not isinstance(H, MatGroup):
        raise GroupInputError("'affine' expects a matrix group", field="input")
    if certificate:
        cert = k_lower_bound_certificate(H)
        return {"status": "success", "document": cert.model_dump(mode="json", by_alias=True)}
    try:
        report = sp_exclusion_scan(H) if H.n >= 2 else k_semidirect(H)
    except ResourceCapError as e:
        raise ResourceCapError(f"{e}; rerun with --certificate for a Burnside lower bound")
    payload = {"status": "success", "document": report.model_dump(mode="json", by_alias=True)}
    if report.in_sp:
        payload["banner"] = f"*** COUNTEREXAMPLE CANDIDATE: k(HV) = {report.k_hv} lies in S_{H.p} with n = {H.n} ***"
    return payload


# ==================== NUMBERS ====================

def cmd_sp(p: int) -> Dict:
    _require_prime_input(p)
    return {"status": "success", "document": sp_set(p).model_dump()}


def cmd_classify_prime(p: int) -> Dict:
    _require_prime_input(p)
    return {"status": "success", "document": classify_prime_conditions(p).model_dump()}


def cmd_bound(kind: str, r: Optional[int] = None, d: Optional[int] = None, p: Optional[int] = None) -> Dict:
    """Certified bound evaluations: brauer_min_k, partitions, or a permutation order bound."""
    if kind == "brauer_min_k":
        if p is None:
            raise GroupInputError("brauer_min_k needs --p", field="p")
        document = brauer_min_k(p).model_dump()
    elif kind == "partitions":
        if d is None:
            raise GroupInputError("partitions needs --d", field="d")
        document = {"d": d, "partitions": partition_count(d)}
    else:
        if r is None:
            raise GroupInputError(f"{kind} needs --r", field="r")
        document = perm_order_bound(kind, r, d=d, p=p).model_dump()
    return {"status": "success", "document": document}


# ==================== TABLE ====================

def cmd_table(G: Group) -> Dict:
    G = _require_group(G, "table")
    return {"status": "success", "document": export_table(character_table(G))}


# ==================== VERIFY ====================

def resolve_group(entry_id: str, manifest_path: str = DEFAULT_MANIFEST):
    manifest = read_manifest(manifest_path)
    return build_entry(resolve_entry(manifest, entry_id))


def cmd_verify(suites: Sequence[str], manifest_path: str = DEFAULT_MANIFEST, jobs: int = 1,
               fail_fast: bool = False, ids: Optional[Sequence[str]] = None) -> Dict:
    """Run suites over the manifest; exit code 1 iff some hard check failed or errored."""
    manifest = read_manifest(manifest_path)
    run = dispatch.run_corpus(manifest, list(suites), manifest_path=manifest_path, jobs=jobs,
                     fail_fast=fail_fast, ids=ids)
    exit_code = EXIT_CODES["assertion"] if run.failures else EXIT_CODES["success"]
    payload = {"status": "success", "document": run.model_dump(mode="json", by_alias=True),
               "exit_code": exit_code, "run": run}
    if run.flagged:
        payload["banner"] = COUNTEREXAMPLE_BANNER
    logger.info(f"[VERIFY] {len(run.results)} results, {len(run.failures)} failures, {len(run.flagged)} flagged")
    return payload


_STATUS_RANK = {"skip": 0, "pass": 1, "flag": 2, "fail": 3, "error": 4}


def run_csv(run: RunReport) -> str:
    """
    One line per (entry, prime): id, p, status, suites, failed checks.
    Checks that carry no prime, and results without checks, share the row with
    an empty p. The row status is the worst status contributing to it.
    """
    rows: Dict[str, Dict[str, Dict]] = {}
    for result in run.results:
        by_prime = rows.setdefault(result.id, {})
        keyed = [(str(c.p) if c.p is not None else "", c) for c in result.checks if c.applicable]
        if not keyed:
            keyed = [("", None)]
        for p, check in keyed:
            row = by_prime.setdefault(p, {"status": "skip", "suites": [], "failed": []})
            if result.suite not in row["suites"]:
                row["suites"].append(result.suite)
            status = result.status if check is None or result.status in ("flag", "error") else \
                ("pass" if check.passed else "fail")
            if check is not None and not check.passed:
                row["failed"].append(f"{result.suite}:{check.name}")
            if _STATUS_RANK[status] > _STATUS_RANK[row["status"]]:
                row["status"] = status

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["id", "p", "status", "suites", "failed_checks"])
    for entry_id, by_prime in rows.items():
        for p in sorted(by_prime, key=lambda k: (k == "", int(k) if k else 0)):
            row = by_prime[p]
            writer.writerow([entry_id, p, row["status"], ";".join(row["suites"]), ";".join(row["failed"])])
    return buffer.getvalue()
