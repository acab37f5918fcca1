"""
Affine Class Counting

Class numbers k(HV) of coprime affine groups V x| H, H <= GL_n(p) a p'-group
acting on V = GF(p)^n:
- exact counts from orbit representatives, k(HV) = sum over H-orbits of k(C_H(v)),
- an independent count on the affine permutation group,
- Burnside orbit counts from fixed-space ranks (no vector enumeration, any p),
- lower-bound certificates k(H) + r - 1,
- Clifford and n = 2 sandwich bounds, S_p exclusion scans and the prime classifier.
"""

import logging
import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import primitive_root

from src.config.settings import EngineConfig
from src.models.reports import (
    CheckReport,
    ClassCountReport,
    LowerBoundCertificate,
    OrbitRecord,
    PrimeConditionVerdict,
    fraction_str,
)
from src.services.arithmetic import is_prime
from src.services.constructions import elementary_abelian_semidirect, sl2_5_matrices, validate_matrices
from src.services.errors import CoprimalityError, GroupInputError, ResourceCapError, VerificationFailure
from src.services.groups import Group, Subgroup
from src.services.modular import decode_vector, mat_mul, mat_vec, minus_identity_rank, vector_permutation
from src.services.rationality import sp_set

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[int, ...], ...]

SANDWICH_SLACK = 7200


class MatGroup:
    """A p'-subgroup H of GL_n(p), enumerated as matrices."""

    def __init__(self, p: int, n: int, generators: Sequence = (), name: Optional[str] = None):
        if not is_prime(p):
            raise GroupInputError(f"{p} is not prime", field="p")
        if n < 1:
            raise GroupInputError("dimension must be positive", field="n")
        self.p = p
        self.n = n
        self.name = name or f"matgroup(p={p}, n={n})"
        identity = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        gens = []
        for A in validate_matrices(p, n, generators):
            A = tuple(tuple(row) for row in A)
            if A != identity and A not in gens:
                gens.append(A)
        self.generators: List[Matrix] = gens
        self.identity = identity
        self.elements = self._closure()
        if self.order % p == 0:
            raise CoprimalityError(f"p={p} divides |H| = {self.order}", field="generators")
        self._shadow: Optional[Group] = None
        self._faithful: Optional[Group] = None
        logger.debug(f"[AFFINE] {self.name}: |H| = {self.order}")

    def _closure(self) -> List[Matrix]:
        seen = {self.identity}
        elements = [self.identity]
        for x in elements:
            for g in self.generators:
                y = tuple(map(tuple, mat_mul(x, g, self.p)))
                if y not in seen:
                    seen.add(y)
                    elements.append(y)
                    if len(elements) > EngineConfig.MAX_GROUP_ORDER:
                        raise ResourceCapError(
                            f"matrix group closure exceeds {EngineConfig.MAX_GROUP_ORDER} elements")
        return elements

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def vector_count(self) -> int:
        return self.p ** self.n

    @property
    def perm_shadow(self) -> Group:
        """H acting on all p^n vectors."""
        if self._shadow is None:
            if self.vector_count > EngineConfig.MAX_VECTORS:
                raise ResourceCapError(
                    f"p^n = {self.vector_count} exceeds the vector cap of {EngineConfig.MAX_VECTORS}")
            gens = [vector_permutation(A, self.p, self.n) for A in self.generators]
            shadow = Group(self.vector_count, gens, name=f"{self.name} on V")
            if shadow.order != self.order:
                raise VerificationFailure(f"shadow order {shadow.order} != |H| = {self.order}")
            self._shadow = shadow
        return self._shadow

    def faithful_group(self) -> Group:
        """The shadow when V is enumerable, else H on the orbits of the standard basis."""
        if self.vector_count <= EngineConfig.MAX_VECTORS:
            return self.perm_shadow
        if self._faithful is None:
            points: Dict[Tuple[int, ...], int] = {}
            queue = []
            for k in range(self.n):
                e = tuple(1 if i == k else 0 for i in range(self.n))
                if e not in points:
                    points[e] = len(queue)
                    queue.append(e)
            for v in queue:
                for A in self.generators:
                    w = tuple(mat_vec(A, v, self.p))
                    if w not in points:
                        points[w] = len(queue)
                        queue.append(w)
            gens = [[points[tuple(mat_vec(A, v, self.p))] for v in queue] for A in self.generators]
            self._faithful = Group(len(queue), gens, name=f"{self.name} on basis orbits")
        return self._faithful

    def class_number(self) -> int:
        return len(self.faithful_group().classes)

    def __repr__(self) -> str:
        return f"<MatGroup {self.name} order={self.order}>"


def matgroup(p: int, n: int, mats: Sequence) -> MatGroup:
    return MatGroup(p, n, mats)


# ==================== NAMED MATRIX GROUPS ====================

def cyclic_matgroup(p: int, e: int) -> MatGroup:
    """The subgroup of order e of GF(p)^* as 1x1 matrices."""
    if not is_prime(p):
        raise GroupInputError(f"{p} is not prime", field="p")
    if e < 1 or (p - 1) % e:
        raise GroupInputError(f"e={e} does not divide p-1={p - 1}", field="e")
    g = int(primitive_root(p)) if p > 2 else 1
    return MatGroup(p, 1, [[[pow(g, (p - 1) // e, p)]]], name=f"cyclic_matgroup({p},{e})")


def scalar_matgroup(p: int, n: int, c: int) -> MatGroup:
    """<c I> in GL_n(p)."""
    mat = [[c % p if i == j else 0 for j in range(n)] for i in range(n)]
    return MatGroup(p, n, [mat], name=f"scalar_matgroup({p},{n},{c % p})")


def sl2_5_matgroup(p: int = 5) -> MatGroup:
    return MatGroup(p, 2, sl2_5_matrices(p), name=f"sl2_5 <= GL2({p})")


# ==================== BOUNDS ====================

def clifford_lower_bound(k_h: int, p: int, n: int, h_order: int) -> Fraction:
    """k(H) + (|V| - 1)/|H|."""
    return k_h + Fraction(p ** n - 1, h_order)


def sandwich_upper_bound(k_h: int, p: int, n: int, h_order: int) -> Fraction:
    return clifford_lower_bound(k_h, p, n, h_order) + SANDWICH_SLACK


# ==================== CLASS NUMBERS ====================

def _orbit_representatives(shadow: Group, size: int) -> List[List[int]]:
    """H-orbits on vector indices, each listed from its least index."""
    seen = bytearray(size)
    orbits = []
    gens = shadow.gens
    for start in range(size):
        if seen[start]:
            continue
        seen[start] = 1
        orbit = [start]
        for v in orbit:
            for g in gens:
                w = g[v]
                if not seen[w]:
                    seen[w] = 1
                    orbit.append(w)
        orbits.append(orbit)
    return orbits


def k_semidirect(H: MatGroup) -> ClassCountReport:
    """k(HV) = sum of k(C_H(v)) over orbit representatives v."""
    shadow = H.perm_shadow
    size = H.vector_count
    records = []
    for orbit in _orbit_representatives(shadow, size):
        v = orbit[0]
        stab = Subgroup.from_elements(shadow, [x for x in shadow.elements if x[v] == v],
                                      name=f"C_H({v})")
        records.append(OrbitRecord(
            representative=decode_vector(v, H.p, H.n),
            size=len(orbit),
            stabilizer_order=stab.order,
            k_stabilizer=len(stab.classes),
        ))
    k_hv = sum(r.k_stabilizer for r in records)
    k_h = records[0].k_stabilizer
    lower = clifford_lower_bound(k_h, H.p, H.n, H.order)
    if k_hv < lower:
        raise VerificationFailure(f"k(HV) = {k_hv} is below the Clifford bound {lower}")
    report = ClassCountReport(
        p=H.p, n=H.n, h_order=H.order, k_h=k_h, k_hv=k_hv, method="orbit_reps",
        orbit_count=len(records), orbits=records, clifford_lower=fraction_str(lower),
    )
    if H.n == 2 and k_hv <= H.p:
        upper = sandwich_upper_bound(k_h, H.p, H.n, H.order)
        report.sandwich_upper = fraction_str(upper)
        report.sandwich_checked = True
        if k_hv > upper:
            raise VerificationFailure(f"k(HV) = {k_hv} exceeds the sandwich bound {upper}")
    if H.n >= 2:
        report.sp_values = sp_set(H.p).values
        report.in_sp = k_hv in report.sp_values
    logger.info(f"[AFFINE] {H.name}: k(HV) = {k_hv} over {len(records)} orbits")
    return report


def k_semidirect_oracle(H: MatGroup) -> int:
    """Classes of the affine permutation group V x| H on p^n points."""
    if H.vector_count * H.order > EngineConfig.ORACLE_CAP:
        raise ResourceCapError(
            f"p^n |H| = {H.vector_count * H.order} exceeds the oracle cap of {EngineConfig.ORACLE_CAP}")
    HV = elementary_abelian_semidirect(H.p, H.n, [[list(row) for row in A] for A in H.generators])
    if HV.order != H.vector_count * H.order:
        raise VerificationFailure(f"affine group has order {HV.order}, expected {H.vector_count * H.order}")
    return len(HV.classes)


def metacyclic_k(p: int, e: int) -> int:
    """k(C_p x| C_e) = e + (p-1)/e."""
    if not is_prime(p):
        raise GroupInputError(f"{p} is not prime", field="p")
    if e < 1 or (p - 1) % e:
        raise GroupInputError(f"e={e} does not divide p-1={p - 1}", field="e")
    return e + (p - 1) // e


def closed_form_report(p: int, e: int) -> ClassCountReport:
    k_hv = metacyclic_k(p, e)
    return ClassCountReport(
        p=p, n=1, h_order=e, k_h=e, k_hv=k_hv, method="closed_form", orbit_count=1 + (p - 1) // e,
        clifford_lower=fraction_str(clifford_lower_bound(e, p, 1, e)),
    )


def burnside_orbit_count(H: MatGroup) -> int:
    """(1/|H|) sum over h of p^dim ker(h - 1), by ranks mod p."""
    total = sum(H.p ** (H.n - minus_identity_rank(h, H.p)) for h in H.elements)
    r, rem = divmod(total, H.order)
    if rem:
        raise VerificationFailure(f"fixed-point total {total} is not divisible by |H| = {H.order}")
    return r


def k_lower_bound_certificate(H: MatGroup) -> LowerBoundCertificate:
    """k(HV) >= k(H) + r - 1: the zero orbit gives k(H), every other orbit at least 1."""
    k_h = H.class_number()
    r = burnside_orbit_count(H)
    bound = k_h + r - 1
    logger.info(f"[AFFINE] certificate for {H.name}: r = {r}, bound = {bound}")
    return LowerBoundCertificate(p=H.p, n=H.n, h_order=H.order, k_h=k_h, orbit_count=r,
                                 bound=bound, exceeds_p=bound > H.p)


def sp_exclusion_scan(H: MatGroup) -> ClassCountReport:
    """k(HV) against S_p for n >= 2; a hit is reported, never asserted."""
    if H.n < 2:
        raise GroupInputError("the S_p exclusion scan is for n >= 2", field="n")
    report = k_semidirect(H)
    if report.in_sp:
        logger.warning(f"[AFFINE] COUNTEREXAMPLE candidate: {H.name} has k(HV) = {report.k_hv} in S_{H.p}")
    return report


def ernest_check(X: Group, Y: Group) -> bool:
    """k(Y)/|X:Y| <= k(X) for a subgroup Y of X."""
    return len(Y.classes) <= len(X.classes) * (X.order // Y.order)


def ernest_spot_check(X: Group, pairs: int = 50, seed: Optional[int] = None) -> CheckReport:
    """ernest_check on subgroups generated by one or two random elements of X."""
    rng = random.Random(EngineConfig.SEED if seed is None else seed)
    report = CheckReport(name="subgroup_class_number_inequality")
    elements = X.elements
    for _ in range(pairs):
        gens = rng.sample(elements, k=min(len(elements), rng.choice((1, 2))))
        Y = Subgroup(X, gens)
        if not ernest_check(X, Y):
            report.fail(f"k(Y) = {len(Y.classes)} > k(X)|X:Y| for |Y| = {Y.order}")
    report.facts["pairs"] = pairs
    return report


# ==================== PRIMES ====================

def classify_prime_conditions(p: int) -> PrimeConditionVerdict:
    """
    (i) p = 1 mod m for an even m in [12, 36];
    (ii) p = 1 mod 5 and some m | p-1 has 5 <= m <= 55 with (p-1)/m even, or
    12 <= m <= 48 with (p-1)/m odd. Witnesses are the least such m.
    """
    if not is_prime(p):
        raise GroupInputError(f"{p} is not prime", field="p")
    w1 = next((m for m in range(12, 37, 2) if (p - 1) % m == 0), None)
    w2 = None
    if p % 5 == 1:
        for m in range(5, 56):
            if (p - 1) % m:
                continue
            q = (p - 1) // m
            if q % 2 == 0 or (12 <= m <= 48 and q % 2):
                w2 = m
                break
    return PrimeConditionVerdict(p=p, cond_i=w1 is not None, cond_i_witness=w1,
                                 cond_ii=w2 is not None, cond_ii_witness=w2,
                                 any=w1 is not None or w2 is not None)


# ==================== SANDWICH COEFFICIENTS ====================

def sandwich_coefficient_claims() -> CheckReport:
    """Exact checks of the rational inequalities behind the n = 2 classification."""
    report = CheckReport(name="sandwich_coefficients")

    def f(a: Fraction, m: int, b: int) -> Fraction:
        return a / m + Fraction(m, b)

    for m in range(2, 47, 2):
        value = f(Fraction(8), m, 48)
        if 12 <= m <= 36:
            if not value < Fraction(973, 1000):
                report.fail(f"8/{m} + {m}/48 = {value} is not below 0.973")
        elif not value > Fraction(1002, 1000):
            report.fail(f"8/{m} + {m}/48 = {value} is not above 1.002")
    for m in range(9, 60):
        value = f(Fraction(9), m, 60)
        if 12 <= m <= 48:
            if not value <= Fraction(9875, 10000):
                report.fail(f"9/{m} + {m}/60 = {value} exceeds 0.9875")
        elif not value > Fraction(10003, 10000):
            report.fail(f"9/{m} + {m}/60 = {value} is not above 1.0003")
    for m in range(5, 60):
        value = f(Fraction(9, 2), m, 60)
        if m <= 55:
            if not value < Fraction(999, 1000):
                report.fail(f"4.5/{m} + {m}/60 = {value} is not below 0.999")
        elif not value > Fraction(101, 100):
            report.fail(f"4.5/{m} + {m}/60 = {value} is not above 1.01")
    report.facts["claims"] = 3
    return report
