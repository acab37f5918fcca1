"""
Character Table Service

Complex character tables by the Dixon-Schneider method:
- class multiplication coefficients and simultaneous eigenspaces modulo a
  prime l = 1 (mod exponent),
- exact lift of every value to a cyclotomic integer by Fourier inversion
  over the cyclic subgroup generated by each class representative,
- Galois conjugation of rows through power maps,
- p-block distribution from central characters reduced into GF(p^k).
"""

import logging
import random
from dataclasses import dataclass, field
from math import isqrt, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import primitive_root
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor_sqf, gf_irreducible_p, gf_mul, gf_pow_mod, gf_rem

from src.config.settings import EngineConfig, SCHEMA_TAGS, TOOL_VERSION
from src.models.cyclotomic import CyclotomicValue, vanishes
from src.models.permutation import compose, element_order, invert
from src.services.arithmetic import is_prime, multiplicative_order, p_prime_part, prime_factors
from src.services.cache import get_cache
from src.services.errors import ResourceCapError, TableConsistencyError
from src.services.groups import ConjugacyClass, Group, fingerprint, is_abelian
from src.services.modular import krylov_minimal_polynomial, mod_inv, nullspace, rref

logger = logging.getLogger(__name__)


@dataclass
class CharacterTable:
    group: Group
    classes: List[ConjugacyClass]
    exponent: int
    dixon_prime: int
    root: int                      # image of zeta_exponent in GF(l)
    degrees: List[int]
    rows: List[List[CyclotomicValue]]
    modular_rows: List[Tuple[int, ...]]
    eigenvalue_multisets: List[List[Dict[int, int]]]   # exponents of zeta_exponent
    trivial_index: int
    _lookup: Dict[Tuple[int, ...], int] = field(default_factory=dict, repr=False)
    _galois_maps: Dict[int, List[int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._lookup = {row: i for i, row in enumerate(self.modular_rows)}
        if len(self._lookup) != len(self.modular_rows):
            raise TableConsistencyError("rows are not distinct modulo the Dixon prime")

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def order(self) -> int:
        return self.group.order

    def centralizer_order(self, k: int) -> int:
        return self.group.order // self.classes[k].size

    def galois_row_map(self, m: int) -> List[int]:
        m %= self.exponent
        cached = self._galois_maps.get(m)
        if cached is None:
            cached = [galois_conjugate_row(self, r, m) for r in range(self.size)]
            self._galois_maps[m] = cached
        return cached


# ==================== PRIMES AND ROOTS ====================

def dixon_prime(exponent: int, order: int) -> int:
    """Smallest prime l = 1 (mod exponent) with l > 2 sqrt(order)."""
    candidate = exponent + 1
    while not (candidate * candidate > 4 * order and is_prime(candidate)):
        candidate += exponent
    return candidate


def root_of_unity_mod(ell: int, n: int) -> int:
    """z = g^((l-1)/n) for the least primitive root g of l."""
    g = int(primitive_root(ell))
    return pow(g, (ell - 1) // n, ell)


# ==================== CLASS ALGEBRA ====================

def _structure_constants(G: Group) -> List[List[Dict[int, int]]]:
    """consts[j][i][k] = a_ijk, the number of (x, y) in K_i x K_j with xy = g_k."""
    r = len(G.classes)
    class_of = G.class_of_element
    index = G.index
    inverses = [invert(x) for x in G.elements]
    consts: List[List[Dict[int, int]]] = [[{} for _ in range(r)] for _ in range(r)]
    for k, cls in enumerate(G.classes):
        gk = cls.representative.images
        for ix, xi in enumerate(inverses):
            i = class_of[ix]
            j = class_of[index[compose(xi, gk)]]
            row = consts[j][i]
            row[k] = row.get(k, 0) + 1
    return consts


def _split_space(basis: List[List[int]], pivots: List[int], matrix: List[Dict[int, int]],
                 ell: int, rng: random.Random) -> List[Tuple[List[List[int]], List[int]]]:
    """Split span(basis) into eigenspaces of `matrix` (sparse rows) restricted to it."""
    d = len(basis)
    C = [[0] * d for _ in range(d)]
    for s, b in enumerate(basis):
        for t, piv in enumerate(pivots):
            C[t][s] = sum(a * b[k] for k, a in matrix[piv].items()) % ell

    def apply(v):
        return [sum(C[t][s] * v[s] for s in range(d)) % ell for t in range(d)]

    roots = set()
    pieces: List[Tuple[List[List[int]], List[int]]] = []
    for _ in range(8):
        v = [rng.randrange(ell) for _ in range(d)]
        minpoly = krylov_minimal_polynomial(apply, v, ell)
        _, factors = gf_factor_sqf([c % ell for c in reversed(minpoly)], ell, ZZ)
        for f in factors:
            if len(f) != 2:
                raise TableConsistencyError("class matrix has an eigenvalue outside GF(l)")
            roots.add((-f[1]) % ell)
        if len(roots) == 1 and len(minpoly) == 2:
            continue
        pieces = []
        total = 0
        for lam in sorted(roots):
            shifted = [[(C[t][s] - (lam if s == t else 0)) % ell for s in range(d)] for t in range(d)]
            for_space = nullspace(shifted, ell)
            total += len(for_space)
            vectors = [[sum(x[s] * basis[s][k] for s in range(d)) % ell for k in range(len(basis[0]))]
                       for x in for_space]
            rows, piv = rref(vectors, ell)
            pieces.append((rows, piv))
        if total == d:
            return pieces
    if len(roots) == 1:
        return [(basis, pivots)]
    raise TableConsistencyError("eigenspaces of a class matrix do not span the space")


def _central_characters(G: Group, ell: int) -> List[List[int]]:
    """Simultaneous eigenvectors w (w[0] = 1) of all class matrices, modulo l."""
    r = len(G.classes)
    consts = _structure_constants(G)
    rng = random.Random(EngineConfig.SEED)
    spaces = [([[1 if i == j else 0 for i in range(r)] for j in range(r)], list(range(r)))]
    for j in range(1, r):
        if all(len(b) == 1 for b, _ in spaces):
            break
        refined = []
        for basis, pivots in spaces:
            if len(basis) == 1:
                refined.append((basis, pivots))
            else:
                refined.extend(_split_space(basis, pivots, consts[j], ell, rng))
        spaces = refined
    if len(spaces) != r or any(len(b) != 1 for b, _ in spaces):
        raise TableConsistencyError(f"class algebra split into {len(spaces)} pieces, expected {r}")
    vectors = []
    for basis, _ in spaces:
        w = basis[0]
        if not w[0]:
            raise TableConsistencyError("central character vanishes on the identity class")
        inv = mod_inv(w[0], ell)
        vectors.append([x * inv % ell for x in w])
    return vectors


def _modular_rows_dixon(G: Group, ell: int) -> List[Tuple[int, ...]]:
    classes = G.classes
    inverse_class = G.power_map(-1)
    order = G.order
    rows = []
    for w in _central_characters(G, ell):
        s = sum(w[k] * w[inverse_class[k]] * mod_inv(c.size, ell) for k, c in enumerate(classes)) % ell
        target = order * mod_inv(s, ell) % ell
        degree = next((d for d in range(1, isqrt(order) + 1) if d * d % ell == target), None)
        if degree is None:
            raise TableConsistencyError("no admissible degree for a central character")
        rows.append(tuple(w[k] * degree * mod_inv(c.size, ell) % ell for k, c in enumerate(classes)))
    return rows


def _lift(G: Group, modular: Sequence[Tuple[int, ...]], ell: int, z: int, n: int):
    """Eigenvalue multiplicities of rho(g_K) by Fourier inversion over <g_K>."""
    classes = G.classes
    rows: List[List[CyclotomicValue]] = [[] for _ in modular]
    multisets: List[List[Dict[int, int]]] = [[] for _ in modular]
    for cls in classes:
        g = cls.representative.images
        o = cls.element_order
        powers_classes = []
        x = G.identity
        for _ in range(o):
            powers_classes.append(G.class_index(x))
            x = compose(x, g)
        zo = pow(z, n // o, ell)
        zpow = [pow(zo, i, ell) for i in range(o)]
        inv_o = mod_inv(o, ell)
        for r, row in enumerate(modular):
            degree = row[0]
            counts = {}
            for j in range(o):
                total = sum(row[c] * zpow[(-j * t) % o] for t, c in enumerate(powers_classes))
                m = total * inv_o % ell
                if m > degree:
                    raise TableConsistencyError(f"eigenvalue multiplicity {m} exceeds degree {degree}")
                if m:
                    counts[j] = m
            rows[r].append(CyclotomicValue.from_exponents(o, counts))
            multisets[r].append({j * (n // o): m for j, m in counts.items()})
    return rows, multisets


def _abelian_table(G: Group, ell: int, z: int, n: int):
    """Linear characters from exponent vectors over the generators, checked on Cayley edges."""
    gens = list(G.gens)
    orders = [element_order(g) for g in gens]
    index = G.index
    vectors: Dict[int, Tuple[int, ...]] = {index[G.identity]: tuple(0 for _ in gens)}
    queue = [G.identity]
    for x in queue:
        base = vectors[index[x]]
        for i, g in enumerate(gens):
            y = compose(x, g)
            iy = index[y]
            if iy not in vectors:
                vectors[iy] = tuple(a + (1 if t == i else 0) for t, a in enumerate(base))
                queue.append(y)
    elem_vecs = [vectors[index[cls.representative.images]] for cls in G.classes]
    steps = [n // o for o in orders]
    edges = [(index[x], i, index[compose(x, g)]) for x in G.elements for i, g in enumerate(gens)]
    vec_by_index = vectors

    exps_rows = []

    def search(i: int, choice: List[int]):
        if i == len(gens):
            exps_rows.append(list(choice))
            return
        for c in range(orders[i]):
            choice.append(c)
            search(i + 1, choice)
            choice.pop()

    search(0, [])
    valid = []
    for choice in exps_rows:
        def value(ix):
            return sum(a * c * s for a, c, s in zip(vec_by_index[ix], choice, steps)) % n
        if all((value(a) + choice[i] * steps[i]) % n == value(b) for a, i, b in edges):
            valid.append([sum(a * c * s for a, c, s in zip(v, choice, steps)) % n for v in elem_vecs])
    if len(valid) != G.order:
        raise TableConsistencyError(f"found {len(valid)} linear characters for an abelian group of order {G.order}")
    modular = [tuple(pow(z, e, ell) for e in exps) for exps in valid]
    rows = []
    multisets = []
    for exps in valid:
        rows.append([CyclotomicValue.root_of_unity(cls.element_order, e // (n // cls.element_order))
                     for cls, e in zip(G.classes, exps)])
        multisets.append([{e: 1} for e in exps])
    return modular, rows, multisets


def _abelian_fast_path_ok(G: Group) -> bool:
    if not is_abelian(G):
        return False
    size = 1
    for g in G.gens:
        size *= element_order(g)
    return size <= 8 * G.order


# ==================== TABLE ====================

def character_table(G: Group, use_cache: bool = True) -> CharacterTable:
    """Complete character table of G with exact cyclotomic values."""
    classes = G.classes
    if len(classes) > EngineConfig.MAX_CLASSES:
        raise ResourceCapError(f"{len(classes)} classes exceed the table cap of {EngineConfig.MAX_CLASSES}")
    cache = get_cache()
    key = fingerprint(G)
    if use_cache:
        payload = cache.load(key)
        if payload is not None:
            table = table_from_payload(G, payload)
            if table is not None:
                return table

    n = G.exponent
    ell = dixon_prime(n, G.order)
    z = root_of_unity_mod(ell, n)
    logger.info(f"[TABLE] {G.name}: order {G.order}, {len(classes)} classes, exponent {n}, l={ell}")

    if G.order == 1:
        modular = [(1,)]
        rows = [[CyclotomicValue.rational(1, 1)]]
        multisets = [[{0: 1}]]
    elif _abelian_fast_path_ok(G):
        modular, rows, multisets = _abelian_table(G, ell, z, n)
    else:
        modular = _modular_rows_dixon(G, ell)
        rows, multisets = _lift(G, modular, ell, z, n)

    table = _assemble(G, n, ell, z, modular, rows, multisets)
    if use_cache:
        cache.store(key, export_table(table))
    return table


def _assemble(G, n, ell, z, modular, rows, multisets) -> CharacterTable:
    degrees = [row[0].rational_value() for row in rows]
    if sum(d * d for d in degrees) != G.order or any(G.order % d for d in degrees):
        raise TableConsistencyError(f"degrees {sorted(degrees)} do not fit a group of order {G.order}")
    order_keys = sorted(
        range(len(rows)),
        key=lambda r: (degrees[r], tuple(v.sort_key() for v in rows[r])),
    )
    rows = [rows[r] for r in order_keys]
    trivial = next((i for i, row in enumerate(rows) if all(v == 1 for v in row)), None)
    if trivial is None:
        raise TableConsistencyError("no trivial character")
    return CharacterTable(
        group=G,
        classes=G.classes,
        exponent=n,
        dixon_prime=ell,
        root=z,
        degrees=[degrees[r] for r in order_keys],
        rows=rows,
        modular_rows=[tuple(modular[r]) for r in order_keys],
        eigenvalue_multisets=[multisets[r] for r in order_keys],
        trivial_index=trivial,
    )


def export_table(T: CharacterTable) -> dict:
    return {
        "schema": SCHEMA_TAGS["table"],
        "tool_version": TOOL_VERSION,
        "fingerprint": fingerprint(T.group),
        "order": T.order,
        "exponent": T.exponent,
        "dixon_prime": T.dixon_prime,
        "root": T.root,
        "classes": [
            {"representative": list(c.representative.images), "size": c.size, "order": c.element_order}
            for c in T.classes
        ],
        "degrees": T.degrees,
        "values": [[v.to_dict() for v in row] for row in T.rows],
        "modular": [list(row) for row in T.modular_rows],
        "multisets": [[sorted([e, m] for e, m in ms.items()) for ms in row] for row in T.eigenvalue_multisets],
    }


def table_from_payload(G: Group, payload: dict) -> Optional[CharacterTable]:
    """Rebuild a cached table; None when the payload does not match G's classes."""
    try:
        reps = [list(c.representative.images) for c in G.classes]
        if payload.get("schema") != SCHEMA_TAGS["table"] or [c["representative"] for c in payload["classes"]] != reps:
            logger.warning(f"[CACHE] stale table payload for {G.name}; recomputing")
            return None
        table = CharacterTable(
            group=G,
            classes=G.classes,
            exponent=payload["exponent"],
            dixon_prime=payload["dixon_prime"],
            root=payload["root"],
            degrees=list(payload["degrees"]),
            rows=[[CyclotomicValue.from_dict(v) for v in row] for row in payload["values"]],
            modular_rows=[tuple(row) for row in payload["modular"]],
            eigenvalue_multisets=[[{e: m for e, m in ms} for ms in row] for row in payload["multisets"]],
            trivial_index=next(i for i, row in enumerate(payload["values"])
                               if all(v["coeffs"][0] == 1 and not any(v["coeffs"][1:]) for v in row)),
        )
        logger.debug(f"[CACHE] replayed table for {G.name}")
        return table
    except (KeyError, TypeError, ValueError, StopIteration, TableConsistencyError) as e:
        logger.warning(f"[CACHE] unreadable table payload for {G.name}: {e}")
        return None


# ==================== GALOIS ACTION ====================

def galois_conjugate_row(T: CharacterTable, row: int, m: int) -> int:
    """Row of chi^sigma_m, where chi^sigma_m(g) = chi(g^m)."""
    pm = T.group.power_map(m % T.exponent if T.exponent > 1 else 1)
    values = T.modular_rows[row]
    image = tuple(values[pm[k]] for k in range(len(values)))
    target = T._lookup.get(image)
    if target is None:
        raise TableConsistencyError(f"no row matches the Galois conjugate of row {row} under m={m}")
    return target


def character_kernel(T: CharacterTable, row: int) -> List[int]:
    """Classes K with chi(g_K) = chi(1)."""
    degree = T.degrees[row]
    return [k for k, v in enumerate(T.rows[row]) if v == degree]


def class_fusion(G: Group, N: Group) -> List[int]:
    """Map each class of N (a subgroup of G) to the class of G containing it."""
    return [G.class_index(c.representative.images) for c in N.classes]


def weighted_inner_sum(classes: Sequence[ConjugacyClass], a: Sequence[CyclotomicValue],
                       b: Sequence[CyclotomicValue]) -> Optional[int]:
    """
    Sum over classes of |K| a(K) conj(b(K)) for class functions a, b.

    Summed per element-order bucket; each bucket is rational for generalized
    characters. Returns None when some bucket is not.
    """
    buckets: Dict[int, List[int]] = {}
    for cls, x, y in zip(classes, a, b):
        o = cls.element_order
        acc = buckets.setdefault(o, [0] * o)
        sx, sy = o // x.n, o // y.n
        for i, c in x.raw().items():
            for j, e in y.raw().items():
                acc[(i * sx - j * sy) % o] += c * e * cls.size
    total = 0
    for o, acc in buckets.items():
        value = CyclotomicValue.from_raw(o, acc)
        if not value.is_rational():
            return None
        total += value.rational_value()
    return total


# ==================== BLOCKS ====================

@dataclass
class FieldEmbedding:
    """zeta_exponent -> theta, a primitive n_p'-th root of unity in GF(p^k) = GF(p)[x]/(modulus)."""
    p: int
    k: int
    order: int
    modulus: List[int]
    theta: List[int]
    powers: List[Tuple[int, ...]]


def _to_vector(poly: List[int], k: int) -> Tuple[int, ...]:
    low = list(reversed(poly))
    return tuple(low + [0] * (k - len(low)))


def _from_code(code: int, p: int) -> List[int]:
    digits = []
    while code:
        code, r = divmod(code, p)
        digits.append(r)
    return list(reversed(digits)) or [0]


def field_embedding(p: int, order: int) -> FieldEmbedding:
    """Least-degree field GF(p^k) containing primitive order-th roots, with deterministic choices."""
    k = multiplicative_order(p, order) if order > 1 else 1
    modulus = [1, 0]
    if k > 1:
        for code in range(p ** k):
            candidate = [1] + [0] * (k - len(_from_code(code, p))) + _from_code(code, p)
            if gf_irreducible_p(candidate, p, ZZ):
                modulus = candidate
                break
    size = p ** k
    theta = [1]
    if order > 1:
        for code in range(1, size):
            y = gf_pow_mod(_from_code(code, p), (size - 1) // order, modulus, p, ZZ)
            if all(gf_pow_mod(y, order // q, modulus, p, ZZ) != [1] for q in prime_factors(order)):
                theta = y
                break
    powers = []
    current = [1]
    for _ in range(order):
        powers.append(_to_vector(current, k))
        current = _mul_mod(current, theta, modulus, p)
    return FieldEmbedding(p=p, k=k, order=order, modulus=modulus, theta=theta, powers=powers)


def _mul_mod(a: List[int], b: List[int], modulus: List[int], p: int) -> List[int]:
    return gf_rem(gf_mul(a, b, p, ZZ), modulus, p, ZZ) or [0]


@dataclass
class BlockDistribution:
    p: int
    block_of: List[int]
    principal_block_id: int
    degenerate: bool
    embedding: Optional[FieldEmbedding] = None

    def principal_rows(self) -> List[int]:
        return [r for r, b in enumerate(self.block_of) if b == self.principal_block_id]

    def blocks(self) -> List[List[int]]:
        out: Dict[int, List[int]] = {}
        for r, b in enumerate(self.block_of):
            out.setdefault(b, []).append(r)
        return [out[b] for b in sorted(out)]


def block_distribution(T: CharacterTable, p: int) -> BlockDistribution:
    """p-blocks from central characters reduced modulo a maximal ideal over p."""
    size = T.size
    if T.order % p:
        return BlockDistribution(p, list(range(size)), T.trivial_index, degenerate=True)
    n = T.exponent
    emb = field_embedding(p, p_prime_part(n, p))
    keys: Dict[Tuple, int] = {}
    block_of = []
    for r in range(size):
        degree = T.degrees[r]
        reduced = []
        for cls, value in zip(T.classes, T.rows[r]):
            omega = (value * cls.size).exact_div(degree)
            step = n // value.n
            acc = [0] * emb.k
            for j, c in enumerate(omega.coeffs):
                c %= p
                if c:
                    vec = emb.powers[(j * step) % emb.order]
                    acc = [(a + c * b) % p for a, b in zip(acc, vec)]
            reduced.append(tuple(acc))
        block_of.append(keys.setdefault(tuple(reduced), len(keys)))
    logger.debug(f"[BLOCKS] {T.group.name}, p={p}: {len(keys)} blocks")
    return BlockDistribution(p, block_of, block_of[T.trivial_index], degenerate=False, embedding=emb)


# ==================== ORTHOGONALITY ====================

@dataclass
class OrthogonalityResult:
    rows_checked: int
    violations: List[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_orthogonality(T: CharacterTable) -> OrthogonalityResult:
    """Exact row and column orthogonality plus degree and absolute-value sanity checks."""
    violations: List[str] = []
    order = T.order
    size = T.size
    sizes = [c.size for c in T.classes]
    raws = [[v.raw() for v in row] for row in T.rows]

    for a in range(size):
        for b in range(a, size):
            buckets: Dict[int, List[int]] = {}
            for k, cls in enumerate(T.classes):
                o = cls.element_order
                acc = buckets.setdefault(o, [0] * o)
                for i, c in raws[a][k].items():
                    for j, e in raws[b][k].items():
                        acc[(i - j) % o] += c * e * sizes[k]
            total = 0
            for o, acc in buckets.items():
                value = CyclotomicValue.from_raw(o, acc)
                if not value.is_rational():
                    violations.append(f"rows {a},{b}: irrational partial sum on order-{o} classes")
                    break
                total += value.rational_value()
            else:
                expected = order if a == b else 0
                if total != expected:
                    violations.append(f"rows {a},{b}: inner product {total} != {expected}")

    for k in range(size):
        ok_ = T.classes[k].element_order
        for l in range(k, size):
            ol = T.classes[l].element_order
            N = lcm(ok_, ol)
            sk, sl = N // ok_, N // ol
            acc = [0] * N
            for r in range(size):
                for i, c in raws[r][k].items():
                    for j, e in raws[r][l].items():
                        acc[(i * sk - j * sl) % N] += c * e
            if k == l:
                acc[0] -= T.centralizer_order(k)
            if not vanishes(acc, N):
                violations.append(f"classes {k},{l}: column relation fails")

    for r in range(size):
        if T.rows[r][0] != T.degrees[r]:
            violations.append(f"row {r}: first column is not the degree")
        for k, v in enumerate(T.rows[r]):
            if abs(v.to_complex()) > T.degrees[r] + 1e-6:
                violations.append(f"row {r}, class {k}: |chi(g)| exceeds chi(1)")
    if sum(d * d for d in T.degrees) != order:
        violations.append("sum of squared degrees differs from the group order")
    for ms, d in zip(T.eigenvalue_multisets, T.degrees):
        if any(sum(m.values()) != d for m in ms):
            violations.append(f"eigenvalue multiset of size != {d}")
            break
    if violations:
        logger.warning(f"[TABLE] {T.group.name}: {len(violations)} orthogonality violations")
    return OrthogonalityResult(rows_checked=size, violations=violations)
