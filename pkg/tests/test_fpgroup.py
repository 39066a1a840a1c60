import itertools
import random

import numpy as np
import pytest

import oracles
from conftest import group
from psl2rp.bits import ElementSet
from psl2rp.fpgroup import GroupError, build_group, canonical, check_prime


# values frozen from oracles.elements / oracles.conjugacy_classes
ORDER_7 = 168
ORDER_13 = 1092
CLASSES_7 = 6


def test_group_orders_match_brute_force_census():
    assert group(7).order == ORDER_7 == len(oracles.elements(7))
    assert group(13).order == ORDER_13


@pytest.mark.parametrize("p", [7, 11, 13, 17, 19, 23])
def test_order_formula(p):
    assert group(p).order == p * (p * p - 1) // 2


@pytest.mark.parametrize("bad", [4, 6, 9, 1, 0, -7, 5, 3, 103])
def test_rejects_bad_p(bad):
    with pytest.raises(GroupError):
        build_group(bad)


def test_p5_only_with_override():
    G = build_group(5, allow_small=True)
    assert G.order == 60
    with pytest.raises(GroupError):
        check_prime(5)


def test_identity_first_and_rest_lexicographic(G7):
    assert G7.matrix(0) == (1, 0, 0, 1)
    rest = [G7.matrix(g) for g in range(1, G7.order)]
    assert rest == sorted(rest)
    assert len(set(map(tuple, G7.mats.tolist()))) == G7.order


def test_canonical_is_two_to_one():
    p = 7
    images = {}
    for m in itertools.product(range(p), repeat=4):
        a, b, c, d = m
        if (a * d - b * c) % p == 1:
            cm = canonical(a, b, c, d, p)
            assert canonical(*cm, p) == cm
            assert canonical(*((-x) % p for x in m), p) == cm
            images.setdefault(cm, set()).add(m)
    assert len(images) == p * (p * p - 1) // 2
    assert all(len(v) == 2 for v in images.values())


def test_specific_product():
    for p in (7, 13):
        G = group(p)
        x = G.index([[1, 1], [0, 1]])
        y = G.index([[1, 0], [1, 1]])
        assert G.mul(x, y) == G.index([[2, 1], [1, 1]])


def test_identity_and_inverse_laws(G13):
    idx = G13.all
    assert np.array_equal(G13.mul_many(0, idx), idx)
    assert np.array_equal(G13.mul_many(idx, G13.inv[idx]), np.zeros_like(idx))
    assert np.array_equal(G13.inv[G13.inv], idx)


@pytest.mark.parametrize("p", [13, 41])
def test_associativity_spot_check(p):
    G = group(p)
    rng = np.random.default_rng(1)
    a, b, c = (rng.integers(0, G.order, 1000) for _ in range(3))
    assert np.array_equal(G.mul_many(G.mul_many(a, b), c), G.mul_many(a, G.mul_many(b, c)))


def test_multiplication_agrees_with_matrix_arithmetic():
    G = group(41)
    rng = random.Random(3)
    for _ in range(200):
        g, h = rng.randrange(G.order), rng.randrange(G.order)
        assert G.matrix(G.mul(g, h)) == canonical(*oracles.mul(G.matrix(g), G.matrix(h), 41), 41)


def test_element_orders(G13):
    p = 13
    assert G13.elem_order(0) == 1
    assert G13.elem_order(G13.index([[1, 1], [0, 1]])) == p
    assert G13.elem_order(G13.index([[0, 1], [p - 1, 0]])) == 2
    for g in range(1, G13.order):
        k = G13.elem_order(g)
        assert k > 1 and G13.order % k == 0
        assert G13.power(g, k) == 0
        assert all(G13.power(g, j) != 0 for j in range(1, k))


@pytest.mark.parametrize("p", [7, 11, 13, 17, 19, 23, 29, 31, 37, 41])
def test_orders_divide_p_or_half_p_pm1(p):
    G = group(p)
    for k in np.unique(G.elem_orders):
        assert k == 1 or k == p or (p - 1) // 2 % k == 0 or (p + 1) // 2 % k == 0


def test_conjugacy_classes_p7():
    G = group(7)
    assert len(G.classes) == CLASSES_7 == len(oracles.conjugacy_classes(7))
    assert sum(len(c) for c in G.classes) == G.order
    assert list(G.classes[int(G.class_of[0])]) == [0]
    for c in G.classes:
        assert int(c[0]) == int(c.min())


def test_class_sizes_match_brute_force():
    G = group(7)
    assert sorted(len(c) for c in G.classes) == sorted(len(c) for c in oracles.conjugacy_classes(7))


def test_closure_basics(G13):
    assert G13.closure([0]) == ElementSet(1)
    x = G13.index([[1, 1], [0, 1]])
    y = G13.index([[1, 0], [1, 1]])
    assert G13.closure([x, y]).size == G13.order
    for g in range(0, G13.order, 37):
        assert G13.closure([g]).size == G13.elem_order(g)


def test_closure_order_invariance(G13):
    rng = random.Random(5)
    for _ in range(20):
        gens = [rng.randrange(G13.order) for _ in range(3)]
        ref = G13.closure(gens)
        for perm in itertools.permutations(gens):
            assert G13.closure(perm) == ref


def test_closure_matches_naive_closure(G7):
    rng = random.Random(9)
    for _ in range(30):
        gens = [rng.randrange(G7.order) for _ in range(2)]
        naive = oracles.closure([G7.matrix(g) for g in gens], 7)
        mine = {canonical(*G7.matrix(int(g)), 7) for g in G7.closure(gens).indices()}
        assert {oracles.canon(m, 7) for m in mine} == set(naive)


def test_index_rejects_non_sl2(G7):
    with pytest.raises(GroupError):
        G7.index([[1, 1], [1, 1]])


def test_cache_round_trip(tmp_path):
    G = build_group(11, cache_dir=tmp_path)
    H = build_group(11, cache_dir=tmp_path)
    assert list(tmp_path.iterdir())
    assert np.array_equal(G.mats, H.mats)
    assert np.array_equal(G.inv, H.inv)
    assert np.array_equal(G.elem_orders, H.elem_orders)
    assert [list(c) for c in G.classes] == [list(c) for c in H.classes]


def test_product_table_and_direct_path_agree():
    from psl2rp.fpgroup import PSL2, _enumerate_canonical

    a = PSL2(11, _enumerate_canonical(11))
    b = PSL2(11, _enumerate_canonical(11), table_threshold=0)
    rng = np.random.default_rng(0)
    g, h = rng.integers(0, a.order, 500), rng.integers(0, a.order, 500)
    assert np.array_equal(a.mul_many(g, h), b.mul_many(g, h))
