from math import gcd

import pytest

from src.models.permutation import element_order
from src.services.arithmetic import multiplicative_order, p_prime_part
from src.services.cache import TableCache
from src.services.character_table import (
    block_distribution,
    character_kernel,
    character_table,
    class_fusion,
    dixon_prime,
    export_table,
    galois_conjugate_row,
    table_from_payload,
    verify_orthogonality,
    weighted_inner_sum,
)
from src.services.constructions import alt, cyclic, dihedral, frobenius, sym
from src.services.groups import Group, Subgroup


def test_degrees(sym4, q8, alt5):
    assert character_table(sym4).degrees == [1, 1, 2, 3, 3]
    assert character_table(q8).degrees == [1, 1, 1, 1, 2]
    assert character_table(alt5).degrees == [1, 3, 3, 4, 5]


def test_trivial_group_table():
    T = character_table(Group(3, []))
    assert T.size == 1
    assert T.rows[0][0] == 1


def test_trivial_row_is_constant_one(sym4):
    T = character_table(sym4)
    assert all(v == 1 for v in T.rows[T.trivial_index])


@pytest.mark.parametrize("G", [Group(2, []), sym(3), sym(4), alt(5), dihedral(5), cyclic(8), frobenius(7, 1, 3)],
                         ids=lambda G: G.name)
def test_orthogonality(G):
    result = verify_orthogonality(character_table(G))
    assert result.ok, result.violations


def test_quaternion_values_are_rational(q8):
    T = character_table(q8)
    assert all(v.is_rational() for row in T.rows for v in row)


def test_galois_conjugate_rows_on_cyclic_group():
    T = character_table(cyclic(5))
    assert T.degrees == [1] * 5
    for r in range(T.size):
        s = galois_conjugate_row(T, r, 2)
        assert all(T.rows[s][k] == v.galois(2) for k, v in enumerate(T.rows[r]))
        assert galois_conjugate_row(T, r, 1) == r
    assert sorted(T.galois_row_map(2)) == list(range(5))


def test_rational_table_is_fixed_by_galois(sym4):
    T = character_table(sym4)
    for m in (5, 7, 11):
        assert T.galois_row_map(m) == list(range(T.size))


def test_norm_of_each_row_is_group_order(alt5):
    T = character_table(alt5)
    for r in range(T.size):
        assert weighted_inner_sum(T.classes, T.rows[r], T.rows[r]) == T.order
    assert weighted_inner_sum(T.classes, T.rows[1], T.rows[2]) == 0


def test_kernel_of_sign_character(sym4):
    T = character_table(sym4)
    sign = next(r for r in range(T.size) if T.degrees[r] == 1 and r != T.trivial_index)
    kernel = character_kernel(T, sign)
    assert sum(T.classes[k].size for k in kernel) == 12


def test_class_fusion_alt4_into_sym4(sym4):
    A4 = Subgroup(sym4, alt(4).gens)
    fusion = class_fusion(sym4, A4)
    assert len(fusion) == 4
    assert len(set(fusion)) == 3


def test_blocks_of_sym4_at_three(sym4):
    T = character_table(sym4)
    dist = block_distribution(T, 3)
    assert sorted(T.degrees[r] for r in dist.principal_rows()) == [1, 1, 2]
    assert len(dist.blocks()) == 3
    assert not dist.degenerate


def test_blocks_when_p_does_not_divide_order(sym3):
    dist = block_distribution(character_table(sym3), 5)
    assert dist.degenerate
    assert len(dist.blocks()) == 3


def test_cyclic_p_group_has_one_block():
    dist = block_distribution(character_table(cyclic(9)), 3)
    assert len(dist.blocks()) == 1


def test_dixon_prime():
    assert dixon_prime(12, 24) == 13
    assert dixon_prime(1, 1) == 3


def test_payload_replays_table(sym4):
    T = character_table(sym4)
    replay = table_from_payload(sym4, export_table(T))
    assert replay is not None
    assert replay.rows == T.rows
    assert replay.trivial_index == T.trivial_index


def test_stale_payload_is_rejected(sym4):
    payload = export_table(character_table(sym4))
    payload["classes"] = payload["classes"][::-1]
    assert table_from_payload(sym4, payload) is None


def test_cache_round_trip_on_disk(tmp_path, sym3):
    cache = TableCache(directory=str(tmp_path), enabled=True)
    payload = export_table(character_table(sym3, use_cache=False))
    cache.store("abc", payload)
    assert list(tmp_path.glob("abc-v*.json"))
    fresh = TableCache(directory=str(tmp_path), enabled=True)
    assert fresh.load("abc") == payload


def test_cache_ignores_corrupt_files(tmp_path):
    cache = TableCache(directory=str(tmp_path), enabled=True)
    cache.store("bad", {"x": 1})
    path = next(tmp_path.glob("bad-v*.json"))
    path.write_text("{not json", encoding="utf-8")
    assert TableCache(directory=str(tmp_path), enabled=True).load("bad") is None


def test_deferred_writes_are_drained(tmp_path):
    cache = TableCache(directory=str(tmp_path), enabled=True)
    cache.defer_writes = True
    cache.store("k", {"v": 1})
    assert not list(tmp_path.glob("*.json"))
    pending = cache.drain()
    assert pending == [("k", {"v": 1})]
    assert cache.drain() == []
    writer = TableCache(directory=str(tmp_path), enabled=True)
    writer.store_payloads(pending)
    assert TableCache(directory=str(tmp_path), enabled=True).load("k") == {"v": 1}


@pytest.mark.slow
def test_navarro_group_has_a_single_eleven_block(navarro):
    T = character_table(navarro)
    assert T.size == 10
    assert len(block_distribution(T, 11).blocks()) == 1


@pytest.mark.parametrize("G", [cyclic(9), cyclic(8), dihedral(5), alt(5), frobenius(7, 1, 3), frobenius(13, 1, 3)],
                         ids=lambda G: G.name)
def test_galois_permutation_order_divides_unit_order(G):
    T = character_table(G)
    e = T.exponent
    for m in range(1, e):
        if gcd(m, e) != 1:
            continue
        perm = T.galois_row_map(m)
        assert sorted(perm) == list(range(T.size))
        assert multiplicative_order(m, e) % element_order(tuple(perm)) == 0


@pytest.mark.parametrize("G, p", [
    (sym(4), 2), (sym(4), 3), (alt(5), 2), (alt(5), 5),
    (frobenius(7, 1, 3), 3), (frobenius(13, 1, 3), 3), (frobenius(13, 1, 3), 13),
], ids=lambda v: getattr(v, "name", str(v)))
def test_blocks_respect_galois_action(G, p):
    T = character_table(G)
    dist = block_distribution(T, p)
    blocks = dist.block_of
    e = T.exponent
    q = p_prime_part(e, p)
    for m in range(1, e):
        if gcd(m, e) != 1:
            continue
        perm = T.galois_row_map(m)
        assert blocks[perm[T.trivial_index]] == dist.principal_block_id
        for r in range(T.size):
            for s in range(T.size):
                if blocks[r] == blocks[s]:
                    assert blocks[perm[r]] == blocks[perm[s]]
        if (m - 1) % q == 0:
            assert all(blocks[perm[r]] == blocks[r] for r in range(T.size))
