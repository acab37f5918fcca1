"""
Linear algebra over the prime field GF(p) with Python integers.

Matrices are lists of rows. Entries are kept in [0, p); p may be arbitrarily
large (fixed-space dimensions for huge primes only need ranks).
"""

from typing import Callable, List, Optional, Sequence, Tuple

Matrix = List[List[int]]
Vector = List[int]


def mod_inv(a: int, p: int) -> int:
    return pow(a % p, -1, p)


def rref(rows: Sequence[Sequence[int]], p: int) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form of `rows` over GF(p); returns (nonzero rows, pivot columns)."""
    A = [[x % p for x in row] for row in rows]
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    pivots = []
    i = 0
    for j in range(n):
        if i == m:
            break
        k = next((r for r in range(i, m) if A[r][j]), None)
        if k is None:
            continue
        A[i], A[k] = A[k], A[i]
        inv = mod_inv(A[i][j], p)
        A[i] = [x * inv % p for x in A[i]]
        pivot_row = A[i]
        for r in range(m):
            if r != i and A[r][j]:
                f = A[r][j]
                A[r] = [(x - f * y) % p for x, y in zip(A[r], pivot_row)]
        pivots.append(j)
        i += 1
    return A[:i], pivots


def rank(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(rref(rows, p)[1])


def nullspace(rows: Sequence[Sequence[int]], p: int, ncols: Optional[int] = None) -> Matrix:
    """Basis of {x : A x = 0} over GF(p), as a list of vectors."""
    if not rows:
        n = ncols or 0
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    n = len(rows[0])
    R, pivots = rref(rows, p)
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    basis = []
    for f in free:
        x = [0] * n
        x[f] = 1
        for row, pc in zip(R, pivots):
            x[pc] = (-row[f]) % p
        basis.append(x)
    return basis


def mat_vec(A: Sequence[Sequence[int]], v: Sequence[int], p: int) -> Vector:
    return [sum(a * b for a, b in zip(row, v)) % p for row in A]


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], p: int) -> Matrix:
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) % p for col in cols] for row in A]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def minus_identity_rank(A: Sequence[Sequence[int]], p: int) -> int:
    """rank(A - I) over GF(p)."""
    n = len(A)
    return rank([[(A[i][j] - (1 if i == j else 0)) % p for j in range(n)] for i in range(n)], p)


def krylov_minimal_polynomial(apply: Callable[[Vector], Vector], v: Vector, p: int) -> List[int]:
    """
    Minimal polynomial of v under the linear map `apply`, coefficients low to high.

    Incremental elimination of v, Av, A^2 v, ... with tracked combinations;
    the first dependency gives a monic relation.
    """
    basis: List[Tuple[Vector, int, Vector]] = []
    u = list(v)
    k = 0
    while True:
        w = list(u)
        combo = [0] * (k + 1)
        combo[k] = 1
        for bw, piv, bc in basis:
            f = w[piv]
            if f:
                w = [(x - f * y) % p for x, y in zip(w, bw)]
                for idx, c in enumerate(bc):
                    combo[idx] = (combo[idx] - f * c) % p
        piv = next((i for i, x in enumerate(w) if x), None)
        if piv is None:
            return combo
        inv = mod_inv(w[piv], p)
        basis.append(([x * inv % p for x in w], piv, [c * inv % p for c in combo]))
        u = apply(u)
        k += 1


# ---- vectors of GF(p)^n indexed by integers ----

def encode_vector(v: Sequence[int], p: int) -> int:
    """Index sum v_i p^(n-1-i); the lexicographically least vector has the least index."""
    idx = 0
    for x in v:
        idx = idx * p + (x % p)
    return idx


def decode_vector(idx: int, p: int, n: int) -> Vector:
    v = [0] * n
    for i in range(n - 1, -1, -1):
        idx, v[i] = divmod(idx, p)
    return v


def vector_permutation(A: Sequence[Sequence[int]], p: int, n: int) -> List[int]:
    """Images of v -> A v on all p^n vector indices."""
    return [encode_vector(mat_vec(A, decode_vector(i, p, n), p), p) for i in range(p ** n)]


def is_invertible(A: Sequence[Sequence[int]], p: int) -> bool:
    return len(A) > 0 and all(len(row) == len(A) for row in A) and rank(A, p) == len(A)
