"""
Verification Suites

Each suite runs one family of checks on one corpus entry and returns an
EntryResult. Suites only decide applicability and collect CheckReports; the
computations live in the services.
"""

import logging
from dataclasses import asdict
from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, List, Optional, Tuple, Union

from src.config.settings import EngineConfig

from src.models.reports import CheckReport, CorpusEntry, EntryResult
from src.services.affine import (
    MatGroup,
    burnside_orbit_count,
    cyclic_matgroup,
    classify_prime_conditions,
    ernest_spot_check,
    k_lower_bound_certificate,
    k_semidirect,
    k_semidirect_oracle,
    metacyclic_k,
    sandwich_coefficient_claims,
)
from src.services.arithmetic import divisors, is_prime, prime_factors
from src.services.bounds import alt_aut_class_count, partition_count, partition_growth_check
from src.services.character_table import character_table, verify_orthogonality
from src.services.errors import ResourceCapError
from src.services.groups import Group, fingerprint, frattini_subgroup, is_abelian, is_solvable
from src.services.rationality import (
    default_p_prime_index_normal,
    detect_cyclic_sylow,
    find_pq_rational_witness,
    kernel_lemma_check,
    mckay_navarro_check,
    parat_statistics,
    principal_block_local_check,
    rationality_profile,
    sigma_fixed_exponent_check,
    two_rational_check,
    verify_brauer_permutation_lemma,
    verify_class_side_lemmas,
    verify_over_normal_lemma,
    verify_theorem_1_1,
    verify_theorem_1_3,
)

logger = logging.getLogger(__name__)

Built = Union[Group, MatGroup]
Suite = Callable[[CorpusEntry, Built], EntryResult]

WITNESS_PRIMES = (2, 3, 5, 7, 11, 13)


def _primes(entry: CorpusEntry, G: Group) -> List[int]:
    """Manifest primes dividing |G|, or every prime divisor when none are listed."""
    if entry.primes:
        return [p for p in entry.primes if G.order % p == 0]
    return list(prime_factors(G.order))


def _result(entry: CorpusEntry, suite: str, checks: List[CheckReport], G: Optional[Group] = None,
            details: Optional[Dict] = None, flagged: bool = False) -> EntryResult:
    applicable = [c for c in checks if c.applicable]
    if not applicable:
        status = "skip"
    elif any(not c.passed for c in applicable):
        status = "fail"
    elif flagged:
        status = "flag"
    else:
        status = "pass"
    return EntryResult(
        id=entry.id,
        suite=suite,
        status=status,
        fingerprint=fingerprint(G) if G is not None else None,
        checks=checks,
        details=details or {},
    )


def _skip(entry: CorpusEntry, suite: str, message: str) -> EntryResult:
    return EntryResult(id=entry.id, suite=suite, status="skip", message=message)


def _groups_only(run: Callable[[CorpusEntry, Group], EntryResult], suite: str) -> Suite:
    def wrapped(entry: CorpusEntry, built: Built) -> EntryResult:
        if isinstance(built, MatGroup):
            return _skip(entry, suite, "matrix group entry")
        return run(entry, built)
    return wrapped


def _matgroups_only(run: Callable[[CorpusEntry, MatGroup], EntryResult], suite: str) -> Suite:
    def wrapped(entry: CorpusEntry, built: Built) -> EntryResult:
        if not isinstance(built, MatGroup):
            return _skip(entry, suite, "permutation group entry")
        return run(entry, built)
    return wrapped


# ==================== CHARACTER SIDE ====================

def run_theorem_1_1(entry: CorpusEntry, G: Group) -> EntryResult:
    checks, statistics = [], {}
    for p in _primes(entry, G):
        profile = rationality_profile(G, p)
        checks.append(verify_theorem_1_1(G, p, profile=profile))
        statistics[str(p)] = asdict(parat_statistics(G, p, profile=profile))
    return _result(entry, "thm1.1", checks, G, details={"statistics": statistics})


def run_theorem_1_3(entry: CorpusEntry, G: Group) -> EntryResult:
    checks = [verify_theorem_1_3(G, p) for p in _primes(entry, G)]
    return _result(entry, "thm1.3", checks, G)


def run_class_side(entry: CorpusEntry, G: Group) -> EntryResult:
    checks = [verify_class_side_lemmas(G, p) for p in _primes(entry, G) if p != 2]
    return _result(entry, "lemmas3", checks, G)


def run_over_normal(entry: CorpusEntry, G: Group) -> EntryResult:
    checks = []
    for p in _primes(entry, G):
        N = default_p_prime_index_normal(G, p)
        checks.append(verify_over_normal_lemma(G, N, p))
    return _result(entry, "lemma4", checks, G)


def run_mckay_navarro(entry: CorpusEntry, G: Group) -> EntryResult:
    """Counts must agree on solvable groups; elsewhere they are recorded."""
    solvable = is_solvable(G)
    checks = []
    for p in _primes(entry, G):
        mn = mckay_navarro_check(G, p)
        check = CheckReport(name="mckay_navarro", p=p, facts=mn.model_dump())
        if not mn.equal and solvable:
            check.fail(f"|Irr_p',parat(G)| = {mn.lhs} but |Irr_parat(N_G(P)/P')| = {mn.rhs}")
        checks.append(check)
    return _result(entry, "mckay-navarro", checks, G, details={"solvable": solvable})


def run_detector(entry: CorpusEntry, G: Group) -> EntryResult:
    """A cyclic Sylow subgroup with count outside S_p is a failure; other disagreements are flagged."""
    checks = []
    flagged = False
    for p in _primes(entry, G):
        verdict = detect_cyclic_sylow(G, p)
        check = CheckReport(name="detector", p=p, facts=verdict.model_dump())
        if verdict.actual_cyclic and not verdict.in_sp:
            check.fail(f"cyclic Sylow {p}-subgroup but count {verdict.count} is not in S_{p}")
        elif not verdict.agree:
            flagged = True
        checks.append(check)
    return _result(entry, "detector", checks, G, flagged=flagged)


def run_pq_witness(entry: CorpusEntry, G: Group) -> EntryResult:
    if G.order == 1:
        return _skip(entry, "pq-witness", "trivial group")
    T = character_table(G)
    check = CheckReport(name="pq_witness")
    for p, q in combinations(WITNESS_PRIMES, 2):
        row = find_pq_rational_witness(G, p, q, table=T)
        check.facts[f"{p},{q}"] = row
        if row is None:
            check.fail(f"no almost {{{p},{q}}}-rational witness")
    return _result(entry, "pq-witness", [check], G)


def run_abelian(entry: CorpusEntry, G: Group) -> EntryResult:
    """Abelian p-groups: |Irr_parat| = |Irr_p',parat| = |P/Phi(P)|."""
    primes = prime_factors(G.order)
    if len(primes) != 1 or not is_abelian(G):
        return _skip(entry, "abelian", "not an abelian p-group")
    p = primes[0]
    counts = rationality_profile(G, p).counts
    expected = G.order // frattini_subgroup(G, p).order
    check = CheckReport(name="abelian_parat", p=p,
                        facts={"parat": counts.parat, "pprime_parat": counts.pprime_parat, "frattini_index": expected})
    if not counts.parat == counts.pprime_parat == expected:
        check.fail(f"counts {counts.parat}, {counts.pprime_parat} differ from |P/Phi(P)| = {expected}")
    return _result(entry, "abelian", [check], G)


def run_orthogonality(entry: CorpusEntry, G: Group) -> EntryResult:
    T = character_table(G)
    result = verify_orthogonality(T)
    check = CheckReport(name="orthogonality", facts={"rows": result.rows_checked, "degrees": T.degrees})
    for message in result.violations:
        check.fail(message)
    return _result(entry, "orthogonality", [check, verify_brauer_permutation_lemma(T)], G)


def run_bounds(entry: CorpusEntry, G: Group) -> EntryResult:
    """Partition counts against symmetric and alternating class numbers, and the growth bound."""
    check = CheckReport(name="partition_bounds", facts={"degree": G.degree, "k": len(G.classes)})
    d = G.degree
    if not partition_growth_check(d):
        check.fail(f"pi({d}) is below e^(2 sqrt {d})/14")
    if "sym" in entry.tags and len(G.classes) != partition_count(d):
        check.fail(f"k(Sym({d})) = {len(G.classes)} but pi({d}) = {partition_count(d)}")
    if "alt" in entry.tags and 5 <= d <= 10:
        expected = alt_aut_class_count(d)
        check.facts.update(k_star=expected.k_star, out_order=expected.out_order)
        if len(G.classes) != expected.k:
            check.fail(f"k(Alt({d})) = {len(G.classes)} but cycle types give {expected.k}")
    return _result(entry, "bounds", [check], G)


def run_kernel_lemma(entry: CorpusEntry, G: Group) -> EntryResult:
    checks = [kernel_lemma_check(G, p) for p in _primes(entry, G)]
    return _result(entry, "kernel-lemma", checks, G)


def run_two_rational(entry: CorpusEntry, G: Group) -> EntryResult:
    return _result(entry, "two-rational", [two_rational_check(G)], G)


def run_blockwise(entry: CorpusEntry, G: Group) -> EntryResult:
    checks = []
    for p in _primes(entry, G):
        checks.append(principal_block_local_check(G, p))
        checks.append(sigma_fixed_exponent_check(G, p))
    return _result(entry, "blockwise", checks, G)


# ==================== AFFINE SIDE ====================

def run_affine_oracle(entry: CorpusEntry, H: MatGroup) -> EntryResult:
    """Orbit-representative count against the permutation oracle, Burnside r and the certificate."""
    check = CheckReport(name="affine_oracle", p=H.p)
    report = k_semidirect(H)
    r = burnside_orbit_count(H)
    certificate = k_lower_bound_certificate(H)
    check.facts.update(k_hv=report.k_hv, orbit_count=report.orbit_count, burnside=r, bound=certificate.bound)
    if r != report.orbit_count:
        check.fail(f"Burnside count {r} differs from {report.orbit_count} enumerated orbits")
    if certificate.bound > report.k_hv:
        check.fail(f"certificate bound {certificate.bound} exceeds k(HV) = {report.k_hv}")
    try:
        oracle = k_semidirect_oracle(H)
        check.facts["oracle"] = oracle
        if oracle != report.k_hv:
            check.fail(f"orbit representatives give {report.k_hv}, the permutation oracle {oracle}")
    except ResourceCapError as e:
        logger.info(f"[VERIFY] {entry.id}: oracle skipped ({e})")
        check.facts["oracle"] = None
    ernest = ernest_spot_check(H.faithful_group())
    return _result(entry, "affine-oracle", [check, ernest], details={"report": report.model_dump(by_alias=True)})


def run_closed_form(entry: CorpusEntry, H: MatGroup) -> EntryResult:
    if H.n != 1:
        return _skip(entry, "closed-form", "dimension above 1")
    check = CheckReport(name="metacyclic_closed_form", p=H.p)
    k_hv = k_semidirect(H).k_hv
    expected = metacyclic_k(H.p, H.order)
    check.facts.update(k_hv=k_hv, closed_form=expected)
    if k_hv != expected:
        check.fail(f"k(HV) = {k_hv} but e + (p-1)/e = {expected}")
    return _result(entry, "closed-form", [check, closed_form_sweep(EngineConfig.CLOSED_FORM_MAX_P)])


@lru_cache(maxsize=None)
def _sweep_outcome(max_p: int) -> Tuple[int, Tuple[str, ...]]:
    instances, violations = 0, []
    for p in range(2, max_p + 1):
        if not is_prime(p):
            continue
        for e in divisors(p - 1):
            instances += 1
            k_hv = k_semidirect(cyclic_matgroup(p, e)).k_hv
            if k_hv != metacyclic_k(p, e):
                violations.append(f"p={p}, e={e}: k(HV) = {k_hv}")
    logger.info(f"[VERIFY] closed-form sweep to p={max_p}: {instances} instances, {len(violations)} violations")
    return instances, tuple(violations)


def closed_form_sweep(max_p: int = 200) -> CheckReport:
    """Every prime p <= max_p and every e | p-1: enumerated k(HV) = e + (p-1)/e."""
    instances, violations = _sweep_outcome(max_p)
    check = CheckReport(name="metacyclic_sweep", facts={"max_p": max_p, "instances": instances})
    for message in violations:
        check.fail(message)
    return check


def run_coefficients(entry: CorpusEntry, H: MatGroup) -> EntryResult:
    """Sandwich coefficients, prime-condition witnesses, and the sandwich on n = 2 instances."""
    claims = sandwich_coefficient_claims()
    verdict = classify_prime_conditions(H.p)
    witnesses = CheckReport(name="prime_condition_witnesses", p=H.p, facts=verdict.model_dump())
    m = verdict.cond_i_witness
    if m is not None and not (m % 2 == 0 and 12 <= m <= 36 and (H.p - 1) % m == 0):
        witnesses.fail(f"condition (i) witness {m} is invalid")
    m = verdict.cond_ii_witness
    if m is not None and not (H.p % 5 == 1 and (H.p - 1) % m == 0 and 5 <= m <= 55):
        witnesses.fail(f"condition (ii) witness {m} is invalid")
    checks = [claims, witnesses]
    if H.n == 2:
        report = k_semidirect(H)
        sandwich = CheckReport(name="n2_sandwich", p=H.p, applicable=report.sandwich_checked,
                               facts={"k_hv": report.k_hv, "lower": report.clifford_lower,
                                      "upper": report.sandwich_upper})
        checks.append(sandwich)
    return _result(entry, "coefficients", checks)


SUITES: Dict[str, Suite] = {
    "thm1.1": _groups_only(run_theorem_1_1, "thm1.1"),
    "thm1.3": _groups_only(run_theorem_1_3, "thm1.3"),
    "lemmas3": _groups_only(run_class_side, "lemmas3"),
    "lemma4": _groups_only(run_over_normal, "lemma4"),
    "mckay-navarro": _groups_only(run_mckay_navarro, "mckay-navarro"),
    "detector": _groups_only(run_detector, "detector"),
    "pq-witness": _groups_only(run_pq_witness, "pq-witness"),
    "abelian": _groups_only(run_abelian, "abelian"),
    "orthogonality": _groups_only(run_orthogonality, "orthogonality"),
    "bounds": _groups_only(run_bounds, "bounds"),
    "kernel-lemma": _groups_only(run_kernel_lemma, "kernel-lemma"),
    "two-rational": _groups_only(run_two_rational, "two-rational"),
    "blockwise": _groups_only(run_blockwise, "blockwise"),
    "affine-oracle": _matgroups_only(run_affine_oracle, "affine-oracle"),
    "closed-form": _matgroups_only(run_closed_form, "closed-form"),
    "coefficients": _matgroups_only(run_coefficients, "coefficients"),
}


def run_suite(suite: str, entry: CorpusEntry, built: Built) -> EntryResult:
    logger.debug(f"[VERIFY] {suite} on {entry.id}")
    return SUITES[suite](entry, built)
