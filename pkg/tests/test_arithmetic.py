from functools import reduce

import pytest
from sympy import isprime

from src.models.cyclotomic import CyclotomicValue, vanishes
from src.models.permutation import Permutation, compose, element_order, invert
from src.services.arithmetic import (
    divisors,
    is_prime,
    multiplicative_order,
    p_level_generators,
    p_part,
    p_prime_part,
    prime_factors,
    sigma_generator,
    valuation,
)
from src.services.errors import GroupInputError
from src.services.modular import (
    decode_vector,
    encode_vector,
    is_invertible,
    krylov_minimal_polynomial,
    mat_vec,
    minus_identity_rank,
    nullspace,
    rank,
    vector_permutation,
)


# ---- integers ----

def test_prime_parts():
    assert valuation(72, 2) == 3
    assert p_part(72, 3) == 9
    assert p_prime_part(72, 2) == 9
    assert prime_factors(60) == (2, 3, 5)
    assert divisors(12) == [1, 2, 3, 4, 6, 12]


def test_is_prime_matches_sympy():
    assert [n for n in range(2000) if is_prime(n)] == [n for n in range(2000) if isprime(n)]
    assert is_prime(7207)
    assert is_prime(2 ** 61 - 1)
    assert not is_prime(4)
    assert not is_prime(3215031751)


def test_galois_generators():
    assert sigma_generator(9, 3) == 4
    assert sigma_generator(36, 3) == 13
    assert p_level_generators(9, 3, 1) == [4]
    assert p_level_generators(9, 3, 2) == []
    assert multiplicative_order(2, 9) == 6


# ---- permutations ----

def test_composition_is_left_to_right():
    a = Permutation.from_cycles(3, [[0, 1]])
    b = Permutation.from_cycles(3, [[1, 2]])
    ab = a * b
    assert ab.images == compose(a.images, b.images)
    assert ab.images[0] == b.images[a.images[0]]
    assert (ab * ab.inverse()).is_identity()
    assert element_order(ab.images) == 3
    assert invert(invert(ab.images)) == ab.images


def test_permutation_rejects_non_bijection():
    with pytest.raises(GroupInputError):
        Permutation([0, 0, 1])
    with pytest.raises(GroupInputError):
        Permutation.from_cycles(3, [[0, 3]])


# ---- cyclotomic values ----

def test_roots_of_unity_relations():
    i = CyclotomicValue.root_of_unity(4)
    assert i * i == -1
    total = reduce(lambda x, y: x + y, (CyclotomicValue.root_of_unity(5, j) for j in range(5)))
    assert total.is_zero()
    assert vanishes({0: 1, 1: 1, 2: 1}, 3)
    assert not vanishes({0: 1, 1: 1}, 3)


def test_galois_action_and_conjugation():
    z5 = CyclotomicValue.root_of_unity(5)
    assert z5.galois(2) == CyclotomicValue.root_of_unity(5, 2)
    assert z5.conjugate() == CyclotomicValue.root_of_unity(5, 4)
    real = z5 + z5.conjugate()
    assert real.galois(4) == real
    with pytest.raises(ValueError):
        z5.galois(5)


def test_conductor():
    assert CyclotomicValue.root_of_unity(9).conductor() == 9
    assert CyclotomicValue.root_of_unity(9, 3).conductor() == 3
    assert CyclotomicValue.root_of_unity(4).conductor() == 4
    assert CyclotomicValue.root_of_unity(6).conductor() == 3
    assert CyclotomicValue.rational(12, 5).conductor() == 1


def test_embedding_keeps_the_value():
    z3 = CyclotomicValue.root_of_unity(3)
    assert z3.embed(6).same_value(CyclotomicValue.root_of_unity(6, 2))
    assert abs(z3.to_complex() - CyclotomicValue.root_of_unity(6, 2).to_complex()) < 1e-12
    with pytest.raises(ValueError):
        z3.embed(4)


def test_exact_division_and_payload():
    v = CyclotomicValue.from_raw(5, {0: 4, 2: 6})
    assert v.exact_div(2) == CyclotomicValue.from_raw(5, {0: 2, 2: 3})
    with pytest.raises(ArithmeticError):
        v.exact_div(4)
    assert CyclotomicValue.from_dict(v.to_dict()) == v
    with pytest.raises(ValueError):
        CyclotomicValue(5, [1, 2])


# ---- linear algebra over GF(p) ----

def test_rank_and_nullspace():
    assert rank([[1, 2], [2, 4]], 5) == 1
    basis = nullspace([[1, 2], [2, 4]], 5)
    assert len(basis) == 1
    assert mat_vec([[1, 2], [2, 4]], basis[0], 5) == [0, 0]
    assert minus_identity_rank([[2]], 5) == 1
    assert minus_identity_rank([[1, 0], [0, 1]], 7) == 0
    assert is_invertible([[0, 1], [1, 0]], 3)
    assert not is_invertible([[1, 2], [2, 4]], 5)


def test_krylov_minimal_polynomial():
    A = [[0, 1], [1, 0]]
    assert krylov_minimal_polynomial(lambda v: mat_vec(A, v, 3), [1, 0], 3) == [2, 0, 1]
    assert krylov_minimal_polynomial(lambda v: mat_vec(A, v, 3), [1, 1], 3) == [2, 1]


def test_vector_indexing():
    assert encode_vector([1, 2], 3) == 5
    assert decode_vector(5, 3, 2) == [1, 2]
    assert vector_permutation([[2]], 5, 1) == [0, 2, 4, 1, 3]
