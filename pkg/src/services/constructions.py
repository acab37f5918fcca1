"""
Named Group Constructions

Faithful permutation representations of the families used by the corpus:
cyclic, dihedral, symmetric, alternating, Frobenius groups C_{p^n} x| C_e,
affine groups V x| H, SL2(5), Q8 and direct products.
"""

import logging
from typing import Any, List, Sequence

from sympy import primitive_root

from src.services.arithmetic import is_prime
from src.services.errors import GroupInputError
from src.services.groups import Group
from src.services.modular import (
    decode_vector,
    encode_vector,
    is_invertible,
    mat_vec,
    vector_permutation,
)

logger = logging.getLogger(__name__)


def _require_prime(p: int, field: str = "p") -> None:
    if not is_prime(p):
        raise GroupInputError(f"{p} is not prime", field=field)


def _cycle(degree: int, points: Sequence[int]) -> List[int]:
    images = list(range(degree))
    for pos, point in enumerate(points):
        images[point] = points[(pos + 1) % len(points)]
    return images


# ---- families ----

def cyclic(n: int) -> Group:
    if n < 1:
        raise GroupInputError("order must be positive", field="n")
    gens = [_cycle(n, list(range(n)))] if n > 1 else []
    return Group(n, gens, name=f"cyclic({n})")


def dihedral(n: int) -> Group:
    """Dihedral group of order 2n."""
    if n < 1:
        raise GroupInputError("n must be positive", field="n")
    if n == 1:
        return Group(2, [[1, 0]], name="dihedral(1)")
    if n == 2:
        return Group(4, [[1, 0, 3, 2], [2, 3, 0, 1]], name="dihedral(2)")
    rotation = [(i + 1) % n for i in range(n)]
    reflection = [(-i) % n for i in range(n)]
    return Group(n, [rotation, reflection], name=f"dihedral({n})")


def sym(n: int) -> Group:
    if n < 1:
        raise GroupInputError("degree must be positive", field="n")
    if n == 1:
        return Group(1, [], name="sym(1)")
    gens = [_cycle(n, [0, 1])]
    if n > 2:
        gens.append(_cycle(n, list(range(n))))
    return Group(n, gens, name=f"sym({n})")


def alt(n: int) -> Group:
    if n < 1:
        raise GroupInputError("degree must be positive", field="n")
    if n < 3:
        return Group(n, [], name=f"alt({n})")
    gens = [_cycle(n, [0, 1, 2])]
    if n > 3:
        long_cycle = list(range(n)) if n % 2 else list(range(1, n))
        gens.append(_cycle(n, long_cycle))
    return Group(n, gens, name=f"alt({n})")


def frobenius(p: int, n: int, e: int) -> Group:
    """C_{p^n} x| C_e acting on Z/p^n by x -> a x + b with a of order e."""
    _require_prime(p)
    if n < 1:
        raise GroupInputError("exponent n must be positive", field="n")
    if e < 1 or (p - 1) % e:
        raise GroupInputError(f"e={e} does not divide p-1={p - 1}", field="e")
    q = p ** n
    translation = [(i + 1) % q for i in range(q)]
    gens = [translation]
    if e > 1:
        g = int(primitive_root(q))
        phi = q // p * (p - 1)
        a = pow(g, phi // e, q)
        gens.append([a * i % q for i in range(q)])
    return Group(q, gens, name=f"frobenius({p},{n},{e})")


def validate_matrices(p: int, n: int, mats: Sequence[Sequence[Sequence[int]]]) -> List[List[List[int]]]:
    checked = []
    for k, A in enumerate(mats):
        field = f"generators[{k}]"
        if len(A) != n or any(len(row) != n for row in A):
            raise GroupInputError(f"expected a {n}x{n} matrix", field=field)
        A = [[int(x) % p for x in row] for row in A]
        if not is_invertible(A, p):
            raise GroupInputError(f"matrix is singular mod {p}", field=field)
        checked.append(A)
    return checked


def elementary_abelian_semidirect(p: int, n: int, mats: Sequence = ()) -> Group:
    """V x| H acting affinely on the p^n vectors of V = GF(p)^n."""
    _require_prime(p)
    if n < 1:
        raise GroupInputError("dimension must be positive", field="n")
    mats = validate_matrices(p, n, mats)
    size = p ** n
    gens = []
    for k in range(n):
        unit = [1 if i == k else 0 for i in range(n)]
        gens.append([
            encode_vector([(x + u) % p for x, u in zip(decode_vector(i, p, n), unit)], p)
            for i in range(size)
        ])
    gens.extend(vector_permutation(A, p, n) for A in mats)
    return Group(size, gens, name=f"affine({p},{n},{len(mats)} gens)")


def elementary_abelian(p: int, n: int) -> Group:
    group = elementary_abelian_semidirect(p, n, [])
    group.name = f"elementary_abelian({p},{n})"
    return group


def sl2_5_matrices(p: int = 5) -> List[List[List[int]]]:
    """
    Generators of a subgroup SL2(5) of SL2(p).

    For p != 5 this needs p = +-1 mod 5; the generators are a = [[0,-1],[1,0]]
    and the first b (in x, y search order) with trace 1, det 1 and
    tr(ab) a root of t^2 - t - 1, so that a, b, ab have orders 4, 6, 10.
    """
    _require_prime(p)
    if p == 5:
        return [[[1, 1], [0, 1]], [[0, 4], [1, 0]]]
    if p % 5 not in (1, 4):
        raise GroupInputError(f"SL2(5) does not embed in SL2({p}); need p = 5 or p = +-1 mod 5", field="p")
    taus = {t for t in range(p) if (t * t - t - 1) % p == 0}
    for x in range(p):
        w = (1 - x) % p
        for y in range(1, p):
            z = (x * w - 1) * pow(y, -1, p) % p
            if (y - z) % p in taus:
                return [[[0, p - 1], [1, 0]], [[x, y], [z, w]]]
    raise GroupInputError(f"no SL2(5) generators found over GF({p})", field="p")


def sl2_5(p: int = 5) -> Group:
    """SL2(5) acting on the p^2 - 1 nonzero vectors of GF(p)^2."""
    mats = sl2_5_matrices(p)
    nonzero = list(range(1, p * p))
    position = {v: i for i, v in enumerate(nonzero)}
    gens = []
    for A in mats:
        gens.append([
            position[encode_vector(mat_vec(A, decode_vector(v, p, 2), p), p)] for v in nonzero
        ])
    return Group(len(nonzero), gens, name=f"sl2_5({p})" if p != 5 else "sl2_5")


# quaternion units 1, i, j, k: (sign flip, unit) of u * v
_QUATERNION_TABLE = [
    [(0, 0), (0, 1), (0, 2), (0, 3)],
    [(0, 1), (1, 0), (0, 3), (1, 2)],
    [(0, 2), (1, 3), (1, 0), (0, 1)],
    [(0, 3), (0, 2), (1, 1), (1, 0)],
]


def quaternion(order: int = 8) -> Group:
    """Q8 in its right regular representation; element 4*s + u is (-1)^s * unit u."""
    if order != 8:
        raise GroupInputError("only the quaternion group of order 8 is supported", field="order")

    def right_mult(h: int) -> List[int]:
        images = []
        for x in range(8):
            s1, u1 = divmod(x, 4)
            s2, u2 = divmod(h, 4)
            flip, u = _QUATERNION_TABLE[u1][u2]
            images.append(4 * (s1 ^ s2 ^ flip) + u)
        return images

    return Group(8, [right_mult(1), right_mult(2)], name="quaternion(8)")


def direct_product(*factors: Group) -> Group:
    if not factors:
        return Group(1, [], name="trivial")
    degree = sum(f.degree for f in factors)
    gens = []
    offset = 0
    for f in factors:
        for g in f.gens:
            images = list(range(degree))
            for i, j in enumerate(g):
                images[offset + i] = offset + j
            gens.append(images)
        offset += f.degree
    return Group(degree, gens, name=" x ".join(f.name for f in factors))


# ---- dispatcher ----

_SIMPLE = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "sym": sym,
    "alt": alt,
    "frobenius": frobenius,
    "elementary_abelian": elementary_abelian,
    "quaternion": quaternion,
    "sl2_5": sl2_5,
}


def construct(name: str, params: Any = ()) -> Group:
    """Build a named group; `params` is a positional list (nested specs for direct_product)."""
    params = list(params) if isinstance(params, (list, tuple)) else [params]
    try:
        if name in _SIMPLE:
            group = _SIMPLE[name](*params)
        elif name == "elementary_abelian_semidirect":
            p, n, *rest = params
            group = elementary_abelian_semidirect(p, n, rest[0] if rest else [])
        elif name == "direct_product":
            group = direct_product(*(construct_from_spec(spec) for spec in params))
        else:
            raise GroupInputError(f"unknown construction '{name}'", field="construct")
    except TypeError as e:
        raise GroupInputError(f"bad parameters for {name}: {e}", field="params")
    logger.debug(f"[GROUP] constructed {group.name}")
    return group


def construct_from_spec(spec: Any) -> Group:
    """Accepts {"construct": name, "params": [...]} or [name, params]."""
    if isinstance(spec, dict):
        if "construct" not in spec:
            raise GroupInputError("missing 'construct'", field="construct")
        return construct(spec["construct"], spec.get("params", []))
    if isinstance(spec, (list, tuple)) and spec and isinstance(spec[0], str):
        return construct(spec[0], spec[1] if len(spec) > 1 else [])
    raise GroupInputError(f"cannot read construction spec {spec!r}")

