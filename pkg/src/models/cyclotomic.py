"""
Cyclotomic integers in canonical form.

A value lives in Q(zeta_n) for its ambient order n and is stored as the
integer coefficient vector (low to high) of its power-basis expansion in
zeta_n modulo the n-th cyclotomic polynomial, length phi(n).
"""

import cmath
from functools import lru_cache
from math import gcd, lcm
from typing import Dict, List, Mapping, Sequence, Tuple

from sympy import Poly, Symbol, cyclotomic_poly

from src.services.arithmetic import divisors, galois_kernel_generators, prime_factors, valuation

_x = Symbol("x")


@lru_cache(maxsize=512)
def cyclotomic_coeffs(n: int) -> Tuple[int, ...]:
    """Coefficients of Phi_n, low to high (monic)."""
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(n, _x), _x).all_coeffs()))


@lru_cache(maxsize=512)
def _reduction_terms(n: int) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
    phi = cyclotomic_coeffs(n)
    d = len(phi) - 1
    return d, tuple((j, a) for j, a in enumerate(phi[:d]) if a)


def fold(raw: Mapping[int, int] | Sequence[int], n: int) -> List[int]:
    """Reduce exponents modulo n (i.e. modulo x^n - 1)."""
    folded = [0] * n
    items = raw.items() if isinstance(raw, Mapping) else enumerate(raw)
    for i, c in items:
        if c:
            folded[i % n] += c
    return folded


def reduce_folded(folded: List[int], n: int) -> Tuple[int, ...]:
    """Canonical coefficients of a length-n vector modulo Phi_n (destroys `folded`)."""
    d, terms = _reduction_terms(n)
    for i in range(n - 1, d - 1, -1):
        c = folded[i]
        if c:
            folded[i] = 0
            shift = i - d
            for j, a in terms:
                folded[shift + j] -= c * a
    return tuple(folded[:d])


def vanishes(raw: Mapping[int, int] | Sequence[int], n: int) -> bool:
    """
    True iff sum raw[i] zeta_n^i == 0.

    Reduces in the tensor basis of the prime-power factors of n, using
    sum_{t<q} zeta^(c + t*n/q) = 0 once per prime; linear in n per prime.
    """
    vec = fold(raw, n)
    for q in prime_factors(n):
        qb = q ** valuation(n, q)
        step = qb // q
        m = n // qb
        delta = m * (step * pow(m, -1, qb) % qb) % n if qb > 1 else 0
        top = (q - 1) * step
        for i in range(n):
            v = vec[i]
            if v and i % qb >= top:
                vec[i] = 0
                for t in range(1, q):
                    vec[(i - t * delta) % n] -= v
    return not any(vec)


class CyclotomicValue:
    """Immutable element of Z[zeta_n] in canonical power-basis form."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Sequence[int]):
        if len(coeffs) != len(cyclotomic_coeffs(n)) - 1:
            raise ValueError(f"expected {len(cyclotomic_coeffs(n)) - 1} coefficients for n={n}")
        self.n = n
        self.coeffs = tuple(int(c) for c in coeffs)

    # ---- constructors ----

    @classmethod
    def from_raw(cls, n: int, raw: Mapping[int, int] | Sequence[int]) -> "CyclotomicValue":
        return cls(n, reduce_folded(fold(raw, n), n))

    @classmethod
    def from_exponents(cls, n: int, counts: Mapping[int, int]) -> "CyclotomicValue":
        """Sum of m_j zeta_n^j for counts {j: m_j}."""
        return cls.from_raw(n, counts)

    @classmethod
    def rational(cls, n: int, q: int) -> "CyclotomicValue":
        return cls.from_raw(n, {0: q})

    @classmethod
    def root_of_unity(cls, n: int, j: int = 1) -> "CyclotomicValue":
        return cls.from_raw(n, {j % n: 1})

    @property
    def conductor_n(self) -> int:
        return self.n

    # ---- arithmetic ----

    def raw(self) -> Dict[int, int]:
        return {i: c for i, c in enumerate(self.coeffs) if c}

    def embed(self, N: int) -> "CyclotomicValue":
        """Same value in Q(zeta_N) for a multiple N of n."""
        if N == self.n:
            return self
        if N % self.n:
            raise ValueError(f"cannot embed Q(zeta_{self.n}) into Q(zeta_{N})")
        k = N // self.n
        return CyclotomicValue.from_raw(N, {i * k: c for i, c in self.raw().items()})

    def _aligned(self, other: "CyclotomicValue"):
        if self.n == other.n:
            return self, other
        N = lcm(self.n, other.n)
        return self.embed(N), other.embed(N)

    def __add__(self, other):
        if isinstance(other, int):
            other = CyclotomicValue.rational(self.n, other)
        a, b = self._aligned(other)
        return CyclotomicValue(a.n, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicValue(self.n, [-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, int):
            other = CyclotomicValue.rational(self.n, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicValue(self.n, [c * other for c in self.coeffs])
        a, b = self._aligned(other)
        raw: Dict[int, int] = {}
        for i, c in a.raw().items():
            for j, e in b.raw().items():
                raw[i + j] = raw.get(i + j, 0) + c * e
        return CyclotomicValue.from_raw(a.n, raw)

    __rmul__ = __mul__

    def exact_div(self, k: int) -> "CyclotomicValue":
        if any(c % k for c in self.coeffs):
            raise ArithmeticError(f"{self} is not divisible by {k}")
        return CyclotomicValue(self.n, [c // k for c in self.coeffs])

    def galois(self, m: int) -> "CyclotomicValue":
        """Image under zeta_n -> zeta_n^m, gcd(m, n) = 1."""
        if gcd(m, self.n) != 1:
            raise ValueError(f"{m} is not a unit modulo {self.n}")
        return CyclotomicValue.from_raw(self.n, {i * m % self.n: c for i, c in self.raw().items()})

    def conjugate(self) -> "CyclotomicValue":
        return self.galois(-1)

    # ---- predicates ----

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def same_value(self, other: "CyclotomicValue") -> bool:
        a, b = self._aligned(other)
        return a.coeffs == b.coeffs

    def conductor(self) -> int:
        """Least d with the value in Q(zeta_d) (odd d preferred over 2d)."""
        for d in divisors(self.n):
            levels = {q: valuation(d, q) for q in prime_factors(self.n)} if self.n > 1 else {}
            if all(self.galois(m) == self for m in galois_kernel_generators(self.n, levels)):
                return d
        return self.n

    def to_complex(self) -> complex:
        w = cmath.exp(2j * cmath.pi / self.n)
        return sum(c * w ** i for i, c in enumerate(self.coeffs))

    def to_dict(self) -> dict:
        return {"conductor": self.n, "coeffs": list(self.coeffs)}

    @classmethod
    def from_dict(cls, data: Mapping) -> "CyclotomicValue":
        return cls(int(data["conductor"]), [int(c) for c in data["coeffs"]])

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.n, self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.is_rational() and self.coeffs[0] == other
        return isinstance(other, CyclotomicValue) and self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.n, self.coeffs))

    def __repr__(self) -> str:
        terms = [f"{c}*z{self.n}^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"
