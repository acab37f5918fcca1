"""
Bounds and Numbers

Exact counts and certified evaluations of the real-valued bounds used by
the class-number arguments:
- partition counts pi(d) and even-permutation cycle types pi'(d),
- permutation-group order bounds d!^((r-1)/(d-1)), 24^((r-1)/3), (log p)^(2(r-1)),
- 2 sqrt(p-1) and the growth bound pi(d) >= e^(2 sqrt d)/14.

Real values are enclosed in mpmath intervals, converted to exact rational
endpoints, and refined until floor and ceiling are certain.
"""

import logging
from fractions import Fraction
from math import ceil, factorial, floor, isqrt
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

from mpmath import iv
from mpmath.libmp import to_rational
from sympy import integer_nthroot
from sympy.utilities.iterables import partitions

from src.config.settings import EngineConfig
from src.models.reports import BoundEvaluation, fraction_str
from src.services.arithmetic import is_prime
from src.services.errors import GroupInputError

logger = logging.getLogger(__name__)

PARTITION_LIMIT = 10_000
INTERVAL_WIDTH = Fraction(1, 10 ** 9)


# ==================== PARTITIONS ====================

_PARTITIONS: List[int] = [1]


def partition_count(d: int) -> int:
    """pi(d) by Euler's pentagonal number recurrence."""
    if d < 0 or d > PARTITION_LIMIT:
        raise GroupInputError(f"d must lie in [0, {PARTITION_LIMIT}]", field="d")
    table = _PARTITIONS
    for m in range(len(table), d + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * table[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * table[m - g2]
            k += 1
        table.append(total)
    return table[d]


def even_partition_count(d: int) -> int:
    """pi'(d): partitions of d whose cycle type is an even permutation, by enumeration."""
    if d < 0 or d > 26:
        raise GroupInputError("even partitions are enumerated for 0 <= d <= 26", field="d")
    if d == 0:
        return 1
    count = 0
    for parts in partitions(d):
        # cycle type with c cycles has sign (-1)^(d - c)
        if (d - sum(parts.values())) % 2 == 0:
            count += 1
    return count


class AltAutClasses(NamedTuple):
    d: int
    k: int
    k_star: int
    out_order: int


def alt_aut_class_count(d: int) -> AltAutClasses:
    """
    k(Alt(d)) and k*(Alt(d)), the number of Aut(Alt(d))-orbits on classes.

    An even cycle type splits into two Alt(d)-classes exactly when its parts
    are distinct and odd; Sym(d) fuses each split pair. For d = 6 the extra
    outer automorphism also swaps 3-cycles with double 3-cycles.
    """
    if d < 5 or d > 10:
        raise GroupInputError("k*(Alt(d)) is tabulated for 5 <= d <= 10", field="d")
    k = 0
    types = 0
    for parts in partitions(d):
        if (d - sum(parts.values())) % 2:
            continue
        types += 1
        split = all(m == 1 and part % 2 for part, m in parts.items())
        k += 2 if split else 1
    k_star = types - 1 if d == 6 else types
    return AltAutClasses(d=d, k=k, k_star=k_star, out_order=4 if d == 6 else 2)


# ==================== CERTIFIED INTERVALS ====================

def _endpoints(x) -> Tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    return Fraction(*to_rational(lo)), Fraction(*to_rational(hi))


def certified_interval(build: Callable[[], object], exact: Optional[Fraction] = None) -> Tuple[Fraction, Fraction, int, int]:
    """
    Enclose build() in a rational interval narrower than 1e-9 whose floor and
    ceiling are determined; `exact` short-circuits values known to be rational.
    """
    if exact is not None:
        return exact, exact, floor(exact), ceil(exact)
    saved = iv.prec
    prec = EngineConfig.INTERVAL_PREC
    try:
        for _ in range(12):
            iv.prec = prec
            lo, hi = _endpoints(build())
            if hi - lo < INTERVAL_WIDTH and floor(lo) == floor(hi) and ceil(lo) == ceil(hi):
                return lo, hi, floor(lo), ceil(hi)
            prec *= 2
    finally:
        iv.prec = saved
    raise ArithmeticError("interval refinement did not separate the value from an integer")


def _evaluation(name: str, inputs: Dict, build: Callable[[], object],
                exact: Optional[Fraction] = None, **extra) -> BoundEvaluation:
    lo, hi, fl, ce = certified_interval(build, exact)
    return BoundEvaluation(
        name=name,
        inputs=inputs,
        lower=fraction_str(lo),
        upper=fraction_str(hi),
        floor=fl,
        ceiling=ce,
        exact=fraction_str(exact) if exact is not None else None,
        **extra,
    )


def _rational_power(base: int, num: int, den: int) -> Optional[Fraction]:
    """base^(num/den) when it is an integer, else None."""
    root, exact = integer_nthroot(base ** num, den)
    return Fraction(int(root)) if exact else None


# ==================== BOUNDS ====================

def perm_order_bound(kind: str, r: int, d: Optional[int] = None, p: Optional[int] = None) -> BoundEvaluation:
    """
    Order bounds for permutation groups of degree r:
    no_large_alt (d) -> d!^((r-1)/(d-1)); primitive_not_alt -> 24^((r-1)/3);
    log_p (p) -> (log p)^(2(r-1)).
    """
    if r < 1:
        raise GroupInputError("degree r must be positive", field="r")
    if kind == "no_large_alt":
        if d is None or d < 4:
            raise GroupInputError("no_large_alt needs d >= 4", field="d")
        base = factorial(d)
        return _evaluation(
            f"no_large_alt({d})", {"d": d, "r": r},
            lambda: iv.exp(iv.log(iv.mpf(base)) * (r - 1) / (d - 1)),
            _rational_power(base, r - 1, d - 1),
        )
    if kind == "primitive_not_alt":
        return _evaluation(
            "primitive_not_alt", {"r": r},
            lambda: iv.exp(iv.log(iv.mpf(24)) * (r - 1) / 3),
            _rational_power(24, r - 1, 3),
        )
    if kind == "log_p":
        if p is None or not is_prime(p):
            raise GroupInputError("log_p needs a prime p", field="p")
        exact = Fraction(1) if r == 1 else None
        return _evaluation(
            "log_p", {"p": p, "r": r},
            lambda: iv.log(iv.mpf(p)) ** (2 * (r - 1)),
            exact,
        )
    raise GroupInputError(f"unknown bound kind '{kind}'", field="kind")


def brauer_min_k(p: int) -> BoundEvaluation:
    """2 sqrt(p-1), flagged when p-1 is a perfect square."""
    if not is_prime(p):
        raise GroupInputError(f"{p} is not prime", field="p")
    s = isqrt(4 * (p - 1))
    exact = Fraction(s) if s * s == 4 * (p - 1) else None
    root = isqrt(p - 1)
    return _evaluation(
        "brauer_min_k", {"p": p},
        lambda: 2 * iv.sqrt(iv.mpf(p - 1)),
        exact,
        perfect_square=root * root == p - 1,
    )


def growth_bound(d: int) -> Tuple[Fraction, Fraction]:
    """Rational enclosure of e^(2 sqrt d)/14."""
    saved = iv.prec
    try:
        iv.prec = EngineConfig.INTERVAL_PREC
        return _endpoints(iv.exp(2 * iv.sqrt(iv.mpf(d))) / 14)
    finally:
        iv.prec = saved


def partition_growth_check(d: int) -> bool:
    """pi(d) >= e^(2 sqrt d)/14, decided on a certified enclosure."""
    if d < 1 or d > PARTITION_LIMIT:
        raise GroupInputError(f"d must lie in [1, {PARTITION_LIMIT}]", field="d")
    value = partition_count(d)
    lo, hi = growth_bound(d)
    if hi <= value:
        return True
    if lo > value:
        return False
    raise ArithmeticError(f"enclosure [{float(lo)}, {float(hi)}] of the growth bound contains pi({d})")
