"""
Number theory helpers: prime parts, unit-group generators and Galois exponents.

Galois elements of Q(zeta_n) are integers m modulo n with gcd(m, n) = 1,
acting by zeta_n -> zeta_n^m.
"""

import logging
from functools import lru_cache
from math import gcd, isqrt
from typing import Dict, List, Tuple

from sympy import factorint, isprime, primitive_root
from sympy.ntheory.modular import crt

logger = logging.getLogger(__name__)


def valuation(n: int, p: int) -> int:
    """Exponent of p in n (n != 0)."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def p_part(n: int, p: int) -> int:
    return p ** valuation(n, p)


def p_prime_part(n: int, p: int) -> int:
    return n // p_part(n, p)


@lru_cache(maxsize=4096)
def prime_factors(n: int) -> Tuple[int, ...]:
    return tuple(sorted(factorint(n)))


def divisors(n: int) -> List[int]:
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


# Deterministic Miller-Rabin bases, sufficient for n < 3.3 * 10^24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit inputs; sympy beyond that range."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    if n >= 3317044064679887385961981:
        return bool(isprime(n))
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def unit_kernel_generators(q: int, a: int, b: int) -> List[int]:
    """
    Generators of {x in (Z/q^b)^* : x = 1 mod q^a} for a prime q.

    The group is cyclic except for q = 2, a <= 1, b >= 3.
    """
    if a >= b:
        return []
    mod = q ** b
    if q != 2:
        if a == 0:
            return [int(primitive_root(mod))]
        return [1 + q ** a]
    if a >= 2:
        return [1 + 2 ** a]
    if b == 1:
        return []
    if b == 2:
        return [3]
    return [mod - 1, 5]


def crt_lift(residues: Dict[int, int], n: int) -> int:
    """The m mod n with m = residues[q^b] mod q^b for each prime power q^b || n."""
    moduli = list(residues)
    if not moduli:
        return 1 % n if n > 1 else 0
    value, _ = crt(moduli, [residues[m] for m in moduli])
    return int(value) % n


def galois_kernel_generators(n: int, levels: Dict[int, int]) -> List[int]:
    """
    Generators of U = {m in (Z/n)^* : m = 1 mod prod q^levels[q]}.

    `levels` gives, per prime q | n, the exponent a_q of the congruence on the
    q-part (missing primes default to a_q = 0, i.e. no condition).
    Each generator is 1 on every other prime-power component.
    """
    parts = {q: q ** valuation(n, q) for q in prime_factors(n)} if n > 1 else {}
    gens = []
    for q, qb in parts.items():
        b = valuation(qb, q)
        for local in unit_kernel_generators(q, levels.get(q, 0), b):
            residues = {m: 1 for m in parts.values()}
            residues[qb] = local
            gens.append(crt_lift(residues, n))
    return gens


def p_level_generators(n: int, p: int, a: int) -> List[int]:
    """Generators of {m : m = 1 mod p^a * n_p'} inside (Z/n)^*."""
    levels = {q: valuation(n, q) for q in prime_factors(n) if q != p} if n > 1 else {}
    levels[p] = a
    return galois_kernel_generators(n, levels)


def sigma_generator(n: int, p: int) -> int:
    """m = 1 + p on the p-part of n and m = 1 on the p'-part."""
    pb = p_part(n, p)
    residues = {q ** valuation(n, q): 1 for q in prime_factors(n)} if n > 1 else {}
    if pb > 1:
        residues[pb] = (1 + p) % pb
    return crt_lift(residues, n)


def multiplicative_order(m: int, n: int) -> int:
    if n == 1:
        return 1
    if gcd(m, n) != 1:
        raise ValueError(f"{m} is not a unit modulo {n}")
    k, x = 1, m % n
    while x != 1:
        x = x * m % n
        k += 1
    return k
