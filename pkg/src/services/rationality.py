"""
Rationality Lab

p-rationality levels of irreducible characters, the counts built on them,
the S_p set and the Sylow-cyclicity detector, and verifiers for the
statements relating almost p-rational characters to local structure:
- lower bounds for |Irr_parat(G)| and |Irr_p',parat(G)| with equality shapes,
- class-side inequalities via Brauer's permutation lemma,
- McKay-Navarro counts against N_G(P)/P',
- characters over normal subgroups of p'-index,
- {p,q}-rational witnesses.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, log2
from typing import Dict, List, Optional, Sequence, Tuple

from src.models.reports import (
    CheckReport,
    DetectorVerdict,
    McKayNavarroReport,
    RationalityCounts,
    RationalityProfile,
    SpSet,
    fraction_str,
)
from src.services.arithmetic import (
    divisors,
    galois_kernel_generators,
    is_prime,
    p_level_generators,
    p_part,
    sigma_generator,
    valuation,
)
from src.services.bounds import brauer_min_k
from src.services.character_table import (
    CharacterTable,
    block_distribution,
    character_kernel,
    character_table,
    class_fusion,
    weighted_inner_sum,
)
from src.services.constructions import frobenius
from src.services.errors import GroupInputError
from src.services.groups import (
    Group,
    Subgroup,
    class_signature,
    derived_subgroup,
    fingerprint,
    frattini_subgroup,
    is_cyclic,
    is_normal,
    is_p_group,
    is_solvable,
    normal_closure,
    normalizer,
    p_core,
    p_prime_core,
    quotient_group,
    sylow_subgroup,
)

logger = logging.getLogger(__name__)


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise GroupInputError(f"{p} is not prime", field="p")


# ==================== LEVELS ====================

def p_rationality_level(T: CharacterTable, row: int, p: int) -> int:
    """Least a with the row fixed by every m = 1 (mod p^a * n_p'), via Galois row maps."""
    n = T.exponent
    top = valuation(n, p) if n > 1 else 0
    for a in range(top + 1):
        if all(T.galois_row_map(m)[row] == row for m in p_level_generators(n, p, a)):
            return a
    return top


def character_conductor(T: CharacterTable, row: int) -> int:
    """Least c with every value of the row in Q(zeta_c)."""
    c = 1
    for value in T.rows[row]:
        d = value.conductor()
        c = c * d // gcd(c, d)
    return c


def conductor_level(T: CharacterTable, row: int, p: int) -> int:
    """log_p of the p-part of the conductor, read off the canonical values."""
    return valuation(character_conductor(T, row), p)


def class_levels(G: Group, p: int) -> List[int]:
    return [valuation(c.element_order, p) for c in G.classes]


# ==================== PROFILE ====================

def rationality_profile(G: Group, p: int, table: Optional[CharacterTable] = None) -> RationalityProfile:
    """Levels, p'-degrees, blocks, class levels and every aggregate count for (G, p)."""
    _require_prime(p)
    T = table or character_table(G)
    levels = [p_rationality_level(T, r, p) for r in range(T.size)]
    p_prime_degree = [d % p != 0 for d in T.degrees]
    blocks = block_distribution(T, p)
    principal = set(blocks.principal_rows())
    cls_levels = class_levels(G, p)

    parat = [r for r in range(T.size) if levels[r] <= 1]
    pprime_parat = [r for r in parat if p_prime_degree[r]]
    counts = RationalityCounts(
        k=T.size,
        parat=len(parat),
        pprime_parat=len(pprime_parat),
        b0_pprime_parat=sum(1 for r in pprime_parat if r in principal),
        prat=sum(1 for a in levels if a == 0),
        cl_pareg=sum(1 for a in cls_levels if a <= 1),
        cl_preg=sum(1 for a in cls_levels if a == 0),
    )
    embedding = None
    if blocks.embedding is not None:
        emb = blocks.embedding
        embedding = {"p": emb.p, "k": emb.k, "order": emb.order, "modulus": emb.modulus, "theta": emb.theta}
    logger.debug(f"[RATLAB] {G.name}, p={p}: {counts.model_dump()}")
    return RationalityProfile(
        group=G.name,
        fingerprint=fingerprint(G),
        order=G.order,
        p=p,
        degrees=T.degrees,
        levels=levels,
        p_prime_degree=p_prime_degree,
        blocks=blocks.block_of,
        principal_block=blocks.principal_block_id,
        block_degenerate=blocks.degenerate,
        class_levels=cls_levels,
        counts=counts,
        embedding=embedding,
    )


# ==================== S_p AND DETECTOR ====================

def sp_set(p: int) -> SpSet:
    """{e + (p-1)/e : e | p-1}."""
    _require_prime(p)
    values = sorted({e + (p - 1) // e for e in divisors(p - 1)})
    return SpSet(p=p, values=values)


def detect_cyclic_sylow(G: Group, p: int, profile: Optional[RationalityProfile] = None) -> DetectorVerdict:
    """Predict cyclicity of a Sylow p-subgroup from |Irr_p',parat(B_0(G))| in S_p."""
    _require_prime(p)
    if G.order % p:
        raise GroupInputError(f"{p} does not divide |G| = {G.order}", field="p")
    profile = profile or rationality_profile(G, p)
    count = profile.counts.b0_pprime_parat
    in_sp = count in sp_set(p).values
    P = sylow_subgroup(G, p)
    actual = is_cyclic(P)
    verdict = DetectorVerdict(
        p=p,
        count=count,
        in_sp=in_sp,
        predicted_cyclic=in_sp,
        actual_cyclic=actual,
        agree=in_sp == actual,
        sylow_order=P.order,
    )
    if not verdict.agree:
        logger.warning(f"[DETECTOR] {G.name}, p={p}: count {count} predicts cyclic={in_sp}, "
                       f"Sylow subgroup is cyclic={actual}")
    return verdict


# ==================== McKAY-NAVARRO ====================

def local_quotient(G: Group, p: int) -> Tuple[Subgroup, Group]:
    """(N_G(P), N_G(P)/P') for the engine's Sylow p-subgroup P."""
    P = sylow_subgroup(G, p)
    N = normalizer(G, P)
    Pd = derived_subgroup(P)
    return N, quotient_group(N, Pd)


def mckay_navarro_check(G: Group, p: int, profile: Optional[RationalityProfile] = None) -> McKayNavarroReport:
    """|Irr_p',parat(G)| against |Irr_parat(N_G(P)/P')|; recorded, not asserted."""
    _require_prime(p)
    if G.order % p:
        raise GroupInputError(f"{p} does not divide |G| = {G.order}", field="p")
    profile = profile or rationality_profile(G, p)
    N, Q = local_quotient(G, p)
    rhs = rationality_profile(Q, p).counts.parat
    lhs = profile.counts.pprime_parat
    if lhs != rhs:
        logger.info(f"[MCKAY] {G.name}, p={p}: lhs {lhs} != rhs {rhs}")
    return McKayNavarroReport(p=p, lhs=lhs, rhs=rhs, equal=lhs == rhs,
                              normalizer_order=N.order, quotient_order=Q.order)


# ==================== BOUND THEOREMS ====================

def _frobenius_shape(H: Group, p: int, e: int) -> bool:
    """H has the order and class vector of C_{p^n} x| C_e with p^n = |H|_p."""
    pn = p_part(H.order, p)
    if pn == 1 or H.order != pn * e or (p - 1) % e:
        return False
    return class_signature(H) == class_signature(frobenius(p, valuation(pn, p), e))


def verify_theorem_1_1(G: Group, p: int, profile: Optional[RationalityProfile] = None) -> CheckReport:
    """|Irr_parat(G)| >= 2 sqrt(p-1), with equality only for the Frobenius shape."""
    report = CheckReport(name="parat_lower_bound", p=p)
    if G.order % p:
        report.applicable = False
        return report
    profile = profile or rationality_profile(G, p)
    count = profile.counts.parat
    bound = brauer_min_k(p)
    equality = count * count == 4 * (p - 1)
    report.facts.update(count=count, bound_floor=bound.floor, bound_ceiling=bound.ceiling,
                        perfect_square=bound.perfect_square, equality=equality)
    if count * count < 4 * (p - 1):
        report.fail(f"|Irr_parat| = {count} is below 2 sqrt({p - 1})")
    e = isqrt(p - 1)
    if e * e == p - 1:
        shape = _frobenius_shape(G, p, e)
        report.facts["frobenius_shape"] = shape
        if equality and not shape:
            report.fail(f"equality |Irr_parat| = {count} without the Frobenius shape")
        if shape and not equality:
            report.fail(f"Frobenius shape with |Irr_parat| = {count} != {2 * e}")
    return report


def verify_theorem_1_3(G: Group, p: int, profile: Optional[RationalityProfile] = None) -> CheckReport:
    """
    |Irr_p',parat(G)| >= 2 sqrt(p-1); and the equality for G, the equality for
    N_G(P), and "P cyclic with N_G(P) Frobenius P x| C_sqrt(p-1)" are equivalent.
    """
    report = CheckReport(name="pprime_parat_equivalences", p=p)
    if G.order % p:
        report.applicable = False
        return report
    profile = profile or rationality_profile(G, p)
    count = profile.counts.pprime_parat
    if count * count < 4 * (p - 1):
        report.fail(f"|Irr_p',parat| = {count} is below 2 sqrt({p - 1})")
    P = sylow_subgroup(G, p)
    N = normalizer(G, P)
    local_count = rationality_profile(N, p).counts.pprime_parat
    e = isqrt(p - 1)
    square = e * e == p - 1
    cond_i = count * count == 4 * (p - 1)
    cond_ii = local_count * local_count == 4 * (p - 1)
    cond_iii = square and is_cyclic(P) and _frobenius_shape(N, p, e)
    report.facts.update(count=count, local_count=local_count, cond_i=cond_i, cond_ii=cond_ii, cond_iii=cond_iii)
    if not cond_i == cond_ii == cond_iii:
        report.fail(f"conditions disagree: (i)={cond_i}, (ii)={cond_ii}, (iii)={cond_iii}")
    return report


# ==================== CLASS SIDE ====================

def brauer_permutation_check(T: CharacterTable, m: int) -> Tuple[int, int]:
    """(rows fixed by chi -> chi^sigma_m, classes fixed by the m-th power map)."""
    rows_fixed = sum(1 for r, s in enumerate(T.galois_row_map(m)) if r == s)
    pm = T.group.power_map(m % T.exponent if T.exponent > 1 else 1)
    classes_fixed = sum(1 for k, j in enumerate(pm) if k == j)
    return rows_fixed, classes_fixed


def galois_test_exponents(n: int, p: Optional[int] = None, limit: int = 96) -> List[int]:
    """Every unit mod n when there are few, else generators of (Z/n)^* plus sigma."""
    if n <= 2:
        return [1]
    units = [m for m in range(1, n) if gcd(m, n) == 1]
    if len(units) <= limit:
        return units
    exps = galois_kernel_generators(n, {})
    if p is not None and n % p == 0:
        exps.append(sigma_generator(n, p))
    return sorted(set(exps) | {1, n - 1})


def verify_brauer_permutation_lemma(T: CharacterTable, exponents: Optional[Sequence[int]] = None) -> CheckReport:
    """Rows fixed by sigma_m equal classes fixed by the m-th power map, for each tested m."""
    report = CheckReport(name="brauer_permutation")
    tested = list(exponents) if exponents is not None else galois_test_exponents(T.exponent)
    fixed = {}
    for m in tested:
        rows_fixed, classes_fixed = brauer_permutation_check(T, m)
        fixed[str(m)] = rows_fixed
        if rows_fixed != classes_fixed:
            report.fail(f"m={m}: {rows_fixed} fixed rows but {classes_fixed} fixed classes")
    report.facts.update(galois_elements_tested=len(tested), fixed_rows=fixed)
    return report


def counting_consistency(T: CharacterTable, p: int, levels: Sequence[int]) -> Tuple[int, int]:
    """(rows fixed by sigma = 1 + p on the p-part, |Irr_parat|), for odd p."""
    sigma = sigma_generator(T.exponent, p) if T.exponent > 1 else 1
    fixed = sum(1 for r, s in enumerate(T.galois_row_map(sigma)) if r == s)
    return fixed, sum(1 for a in levels if a <= 1)


def _classes_inside(G: Group, N: Group) -> List[int]:
    members = set(N.elements)
    return [k for k, c in enumerate(G.classes) if c.representative.images in members]


def verify_class_side_lemmas(G: Group, p: int, normals: Optional[Sequence[Group]] = None,
                             profile: Optional[RationalityProfile] = None) -> CheckReport:
    """
    |Cl_pareg(G)| <= |Irr_parat(G)| and |Cl_preg(G)| <= |Irr_prat(G)|; Brauer's
    permutation lemma for the tested Galois elements; and for normal p'-subgroups
    N, |Cl_pareg(G)| >= |Cl_pareg(G/N)| + n(G, Cl_pareg(N)) - 1.
    """
    if p == 2:
        raise GroupInputError("the class-side inequalities are stated for odd p", field="p")
    _require_prime(p)
    report = CheckReport(name="class_side", p=p)
    T = character_table(G)
    profile = profile or rationality_profile(G, p, table=T)
    c = profile.counts
    report.facts.update(cl_pareg=c.cl_pareg, parat=c.parat, cl_preg=c.cl_preg, prat=c.prat)
    if c.cl_pareg > c.parat:
        report.fail(f"|Cl_pareg| = {c.cl_pareg} exceeds |Irr_parat| = {c.parat}")
    if c.cl_preg > c.prat:
        report.fail(f"|Cl_preg| = {c.cl_preg} exceeds |Irr_prat| = {c.prat}")

    brauer = verify_brauer_permutation_lemma(T, galois_test_exponents(T.exponent, p))
    for message in brauer.violations:
        report.fail(message)
    report.facts["galois_elements_tested"] = brauer.facts["galois_elements_tested"]

    if p_part(T.exponent, p) >= p * p:
        fixed, parat = counting_consistency(T, p, profile.levels)
        report.facts["sigma_fixed_rows"] = fixed
        if fixed != parat:
            report.fail(f"sigma fixes {fixed} rows but |Irr_parat| = {parat}")

    if normals is None:
        core = p_prime_core(G, p)
        normals = [Group(G.degree, [], name="1")] + ([core] if core.order > 1 else [])
    for N in normals:
        if N.order % p or not is_normal(G, N):
            raise GroupInputError(f"{N.name} is not a normal p'-subgroup", field="normals")
        Q = quotient_group(G, N)
        q_pareg = sum(1 for a in class_levels(Q, p) if a <= 1)
        orbits = sum(1 for k in _classes_inside(G, N) if valuation(G.classes[k].element_order, p) <= 1)
        report.facts.setdefault("quotients", []).append(
            {"normal_order": N.order, "cl_pareg_quotient": q_pareg, "orbits": orbits})
        if c.cl_pareg < q_pareg + orbits - 1:
            report.fail(f"|N|={N.order}: {c.cl_pareg} < {q_pareg} + {orbits} - 1")
    return report


# ==================== OVER NORMAL SUBGROUPS ====================

def restriction_constituents(TG: CharacterTable, TN: CharacterTable, fusion: Sequence[int], row: int) -> Dict[int, int]:
    """Multiplicities <chi_N, theta> of the irreducible constituents of chi_N."""
    restricted = [TG.rows[row][k] for k in fusion]
    out = {}
    for t in range(TN.size):
        total = weighted_inner_sum(TN.classes, restricted, TN.rows[t])
        if total is None or total % TN.order:
            raise GroupInputError(f"restriction of row {row} is not a character of the subgroup")
        if total:
            out[t] = total // TN.order
    return out


def verify_over_normal_lemma(G: Group, N: Group, p: int) -> CheckReport:
    """For N normal of p'-index, chi almost p-rational iff its constituents on N are."""
    _require_prime(p)
    if not is_normal(G, N):
        raise GroupInputError(f"{N.name} is not normal in {G.name}", field="N")
    if (G.order // N.order) % p == 0:
        raise GroupInputError(f"p={p} divides |G:N| = {G.order // N.order}", field="N")
    report = CheckReport(name="over_normal", p=p)
    TG = character_table(G)
    TN = character_table(N)
    fusion = class_fusion(G, N)
    n_levels = [p_rationality_level(TN, t, p) for t in range(TN.size)]
    for r in range(TG.size):
        chi_parat = p_rationality_level(TG, r, p) <= 1
        constituents = restriction_constituents(TG, TN, fusion, r)
        if not constituents:
            report.fail(f"row {r} restricts to zero")
        for t in constituents:
            if (n_levels[t] <= 1) != chi_parat:
                report.fail(f"row {r} (almost p-rational={chi_parat}) lies over row {t} of N "
                            f"(almost p-rational={n_levels[t] <= 1})")
    report.facts.update(rows=TG.size, normal_order=N.order)
    return report


def default_p_prime_index_normal(G: Group, p: int) -> Subgroup:
    """O^p'(G), the normal closure of a Sylow p-subgroup."""
    P = sylow_subgroup(G, p)
    return normal_closure(G, P.gens, name=f"O^{p}'({G.name})")


# ==================== {p,q} WITNESS ====================

def find_pq_rational_witness(G: Group, p: int, q: int, table: Optional[CharacterTable] = None) -> Optional[int]:
    """First non-trivial row of {p,q}'-degree that is almost p- and almost q-rational."""
    _require_prime(p)
    _require_prime(q)
    if G.order == 1:
        raise GroupInputError("the trivial group has no non-trivial characters")
    T = table or character_table(G)
    for r in range(T.size):
        if r == T.trivial_index or T.degrees[r] % p == 0 or T.degrees[r] % q == 0:
            continue
        if p_rationality_level(T, r, p) <= 1 and p_rationality_level(T, r, q) <= 1:
            return r
    logger.warning(f"[RATLAB] {G.name}: no almost {{{p},{q}}}-rational witness")
    return None


# ==================== FURTHER CONSEQUENCES ====================

def two_rational_check(G: Group) -> CheckReport:
    """|G| even: at least two 2-rational rows, exactly two iff G is a non-trivial cyclic 2-group."""
    report = CheckReport(name="two_rational", p=2)
    if G.order % 2:
        report.applicable = False
        return report
    T = character_table(G)
    count = sum(1 for r in range(T.size) if p_rationality_level(T, r, 2) == 0)
    cyclic_2 = is_p_group(G, 2) and is_cyclic(G)
    report.facts.update(count=count, cyclic_2_group=cyclic_2)
    if count < 2:
        report.fail(f"only {count} 2-rational rows")
    if (count == 2) != cyclic_2:
        report.fail(f"{count} 2-rational rows but cyclic 2-group={cyclic_2}")
    return report


def kernel_lemma_check(G: Group, p: int, N: Optional[Group] = None) -> CheckReport:
    """
    N a normal p-subgroup, Sylow p-subgroups of G/N cyclic and those of G not:
    some p'-degree almost p-rational row has N outside its kernel.
    """
    report = CheckReport(name="kernel_lemma", p=p)
    if G.order % p:
        report.applicable = False
        return report
    N = N if N is not None else p_core(G, p)
    if not is_p_group(N, p) or not is_normal(G, N):
        raise GroupInputError(f"{N.name} is not a normal {p}-subgroup", field="N")
    if N.order == 1 or is_cyclic(sylow_subgroup(G, p)):
        report.applicable = False
        return report
    Q = quotient_group(G, N)
    if Q.order % p == 0 and not is_cyclic(sylow_subgroup(Q, p)):
        report.applicable = False
        return report
    T = character_table(G)
    inside = set(_classes_inside(G, N))
    witnesses = []
    for r in range(T.size):
        if T.degrees[r] % p == 0 or p_rationality_level(T, r, p) > 1:
            continue
        if not inside <= set(character_kernel(T, r)):
            witnesses.append(r)
    report.facts.update(normal_order=N.order, witnesses=witnesses)
    if not witnesses:
        report.fail(f"every p'-degree almost p-rational row contains N (|N| = {N.order}) in its kernel")
    return report


def principal_block_local_check(G: Group, p: int, profile: Optional[RationalityProfile] = None) -> CheckReport:
    """|Irr_p',parat(B_0(G))| against k(N_G(P)/Phi(P)O_p'(N_G(P))), asserted for solvable G."""
    report = CheckReport(name="principal_block_local", p=p)
    if G.order % p:
        report.applicable = False
        return report
    profile = profile or rationality_profile(G, p)
    P = sylow_subgroup(G, p)
    N = normalizer(G, P)
    phi = frattini_subgroup(P, p)
    core = p_prime_core(N, p)
    M = Subgroup(N, list(phi.gens) + list(core.gens), name="Phi(P)O_p'")
    local_k = len(quotient_group(N, M).classes)
    solvable = is_solvable(G)
    count = profile.counts.b0_pprime_parat
    report.facts.update(count=count, local_k=local_k, solvable=solvable)
    if count != local_k:
        if solvable:
            report.fail(f"|Irr_p',parat(B_0)| = {count} but the local class number is {local_k}")
        else:
            logger.info(f"[RATLAB] {G.name}, p={p}: blockwise counts differ ({count} vs {local_k})")
    return report


def sigma_fixed_exponent_check(G: Group, p: int, profile: Optional[RationalityProfile] = None) -> CheckReport:
    """If every p'-degree row is almost p-rational then P/P' has exponent dividing p."""
    report = CheckReport(name="sigma_fixed_exponent", p=p)
    if G.order % p:
        report.applicable = False
        return report
    profile = profile or rationality_profile(G, p)
    all_parat = profile.counts.pprime_parat == sum(profile.p_prime_degree)
    P = sylow_subgroup(G, p)
    exponent = quotient_group(P, derived_subgroup(P)).exponent
    report.facts.update(all_pprime_parat=all_parat, abelianization_exponent=exponent)
    if not all_parat:
        report.applicable = False
    elif exponent > p:
        report.fail(f"all p'-degree rows are almost p-rational but exp(P/P') = {exponent}")
    return report


@dataclass
class ParatStatistic:
    ratio_to_frattini_rank: Optional[float]
    parat_over_p: str


def parat_statistics(G: Group, p: int, profile: Optional[RationalityProfile] = None) -> ParatStatistic:
    """|Irr_p',parat| / log2|P/Phi(P)| and |Irr_parat| / p, for corpus scans only."""
    profile = profile or rationality_profile(G, p)
    P = sylow_subgroup(G, p)
    ratio = None
    if P.order > 1:
        quotient_order = P.order // frattini_subgroup(P, p).order
        ratio = profile.counts.pprime_parat / log2(quotient_order)
    return ParatStatistic(ratio, fraction_str(Fraction(profile.counts.parat, p)))
