"""Property-based checks over random elements, sequences and tuples."""

import numpy as np
from hypothesis import given, settings, strategies as st

from conftest import group, maximals
from psl2rp.bits import ElementSet
from psl2rp.genseq import is_generating, is_irredundant, is_irredundant_generating
from psl2rp.rp import in_general_position, radical

PRIMES = st.sampled_from([7, 11, 13, 17])


@settings(max_examples=60, deadline=None)
@given(PRIMES, st.data())
def test_conjugating_a_sequence_preserves_irredundant_generation(p, data):
    G, mx = group(p), maximals(p)
    s = data.draw(st.lists(st.integers(1, G.order - 1), min_size=2, max_size=4))
    h = data.draw(st.integers(0, G.order - 1))
    t = [int(G.conj(g, h)) for g in s]
    assert is_irredundant_generating(mx, s) == is_irredundant_generating(mx, t)
    assert is_generating(G, s) == is_generating(G, t)


@settings(max_examples=60, deadline=None)
@given(PRIMES, st.data())
def test_mask_generation_matches_closure(p, data):
    G, mx = group(p), maximals(p)
    s = data.draw(st.lists(st.integers(0, G.order - 1), min_size=1, max_size=3))
    assert mx.generates(s) == is_generating(G, s)


@settings(max_examples=60, deadline=None)
@given(PRIMES, st.data())
def test_radical_properties(p, data):
    mx = maximals(p)
    G = mx.group
    ks = data.draw(st.lists(st.integers(0, len(mx) - 1), min_size=2, max_size=4, unique=True))
    sets = [mx[k].set for k in ks]
    rad = radical(sets)
    assert G.is_subgroup(rad)
    assert all(rad <= s for s in sets)
    if in_general_position(sets):
        assert not any(G.elem_orders[g] == p for g in rad.indices())
    # adding a member can only shrink the radical
    extra = data.draw(st.integers(0, len(mx) - 1))
    assert radical(sets + [mx[extra].set]) <= rad


@settings(max_examples=40, deadline=None)
@given(PRIMES, st.data())
def test_closure_insertion_order(p, data):
    G = group(p)
    s = data.draw(st.lists(st.integers(0, G.order - 1), min_size=1, max_size=4))
    perm = data.draw(st.permutations(s))
    assert G.closure(s) == G.closure(perm)


@settings(max_examples=100, deadline=None)
@given(PRIMES, st.data())
def test_element_order_and_inverse(p, data):
    G = group(p)
    g = data.draw(st.integers(0, G.order - 1))
    k = G.elem_order(g)
    assert G.power(g, k) == 0
    assert G.mul(g, int(G.inv[g])) == 0
    assert G.closure([g]).size == k


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 199), max_size=30), st.lists(st.integers(0, 199), max_size=30))
def test_element_set_algebra(a, b):
    A, B = ElementSet.from_indices(a), ElementSet.from_indices(b)
    assert (A & B).size == len(set(a) & set(b))
    assert (A | B).size == len(set(a) | set(b))
    assert set((A - B).indices().tolist()) == set(a) - set(b)
    assert (A & B) <= A and A <= (A | B)
    assert list(A.indices()) == sorted(set(a))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_irredundant_sequences_found_by_search_are_valid(data):
    from psl2rp.genseq import _search

    mx = maximals(13)
    G = mx.group
    n = data.draw(st.integers(2, 3))
    root = data.draw(st.sampled_from([int(c[0]) for c in G.classes[1:]]))
    res = _search(mx, n, 100000, roots=[root])
    if res.nonempty:
        s = list(res.witness_sequence)
        assert is_generating(G, s) and is_irredundant(G, s)
