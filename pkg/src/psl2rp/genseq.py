"""Irredundant generating sequences: predicates, existence search, r(G), m(G)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bits import ElementSet, iter_bits
from .fpgroup import PSL2
from .subgroups import Maximals, MaximalSubgroup

DEFAULT_BUDGET = 2_000_000


class UnresolvedError(RuntimeError):
    """A search ran out of budget; the question is left open, not answered."""


def is_generating(G: PSL2, s: Sequence[int]) -> bool:
    return G.closure(s).size == G.order


def is_irredundant(G: PSL2, s: Sequence[int]) -> bool:
    """No position can be dropped without shrinking the generated subgroup."""
    whole = G.closure(s)
    for i in range(len(s)):
        if G.closure(list(s[:i]) + list(s[i + 1:])) == whole:
            return False
    return True


def is_irredundant_generating(mx: Maximals, s: Sequence[int]) -> bool:
    """Mask-based test: nothing contains all of s, something contains each s minus one."""
    if mx.containing(s):
        return False
    return all(mx.containing(s[:i] + s[i + 1:]) for i in range(len(s)))


def corresponding_maximals(mx: Maximals, s: Sequence[int]) -> tuple[MaximalSubgroup, ...]:
    """For each i, the lowest-index maximal subgroup over <s minus position i>."""
    G = mx.group
    s = [int(g) for g in s]
    out = []
    for i, gi in enumerate(s):
        rest = s[:i] + s[i + 1:]
        mask = mx.containing(rest)
        if not mask:
            raise ValueError(f"dropping position {i} still generates the group")
        M = mx[(mask & -mask).bit_length() - 1]
        if gi in M.set:
            raise ValueError("sequence does not generate the group")
        if not G.closure(rest).issubset(M.set):
            raise RuntimeError("maximal subgroup does not contain the subsequence span")
        out.append(M)
    from .rp import in_general_position

    if len(out) > 1 and not in_general_position([M.set for M in out]):
        raise RuntimeError("corresponding maximal subgroups are not in general position")
    return tuple(out)


@dataclass
class SearchStats:
    nodes: int = 0
    prunes: int = 0


@dataclass
class GammaResult:
    """Outcome of an existence question for Gamma_n.

    ``nonempty`` is None when the search was cut off by its budget.
    """

    n: int
    nonempty: bool | None
    witness_sequence: tuple[int, ...] | None = None
    method: str = "search"
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def resolved(self) -> bool:
        return self.nonempty is not None


def candidate_elements(mx: Maximals) -> list[int]:
    """One element per distinct maximal-incidence mask.

    Generation by a set of elements depends only on their masks, so elements
    with equal masks (in particular generators of one cyclic subgroup) are
    interchangeable in existence searches.
    """
    seen: dict[int, int] = {}
    for g in range(1, mx.group.order):
        seen.setdefault(mx.elem_masks[g], g)
    return sorted(seen.values())


def class_representatives(G: PSL2, include_identity: bool = False) -> list[int]:
    reps = [int(c[0]) for c in G.classes]
    return reps if include_identity else [r for r in reps if r != 0]


def _search(mx: Maximals, n: int, budget: int, roots: list[int] | None = None) -> GammaResult:
    G = mx.group
    stats = SearchStats()
    cands = candidate_elements(mx)
    cmask = [mx.elem_masks[c] for c in cands]
    if roots is None:
        roots = class_representatives(G)
    full = mx.all_mask

    def extend(chosen: list[int], masks: list[int], start: int):
        k = len(masks)
        prefix = full
        for m in masks:
            prefix &= m
        others = []
        for i in range(k):
            acc = full
            for j in range(k):
                if j != i:
                    acc &= masks[j]
            others.append(acc & ~masks[i])
        last = k + 1 == n
        for ci in range(start, len(cands)):
            stats.nodes += 1
            if stats.nodes > budget:
                raise UnresolvedError
            m = cmask[ci]
            if not prefix & ~m:
                stats.prunes += 1
                continue
            if last:
                if prefix & m:
                    continue
            elif not prefix & m:
                stats.prunes += 1
                continue
            if any(not o & m for o in others):
                stats.prunes += 1
                continue
            seq = chosen + [cands[ci]]
            if last:
                return seq
            found = extend(seq, masks + [m], ci + 1)
            if found:
                return found
        return None

    try:
        for r in roots:
            if n == 1:
                stats.nodes += 1
                if mx.elem_masks[r] == 0:
                    return GammaResult(n, True, (r,), "search", stats)
                continue
            found = extend([r], [mx.elem_masks[r]], 0)
            if found:
                return GammaResult(n, True, tuple(found), "search", stats)
    except UnresolvedError:
        return GammaResult(n, None, None, "search", stats)
    return GammaResult(n, False, None, "search", stats)


def gamma_nonempty(mx: Maximals, n: int, budget: int = DEFAULT_BUDGET, method: str = "auto") -> GammaResult:
    """Decide whether an irredundant generating sequence of length n exists.

    ``method``: "search" runs the symmetry-reduced backtracking only; "tuples"
    settles the question through general-position tuples of maximal
    subgroups (n >= 2); "auto" searches first and falls back to tuples when
    the budget runs out.  The first entry ranges over conjugacy-class
    representatives only, which is enough because Gamma_n is closed under
    simultaneous conjugation.
    """
    if n < 1:
        raise ValueError("n must be positive")
    res = None
    if method in ("search", "auto"):
        res = _search(mx, n, budget)
        if res.resolved or method == "search":
            return _reverify(mx, res)
    if n < 2:
        return res
    from .rp import realizable_tuple_exists

    found, tstats = realizable_tuple_exists(mx, n, budget=None)
    stats = res.stats if res else SearchStats()
    stats.nodes += tstats
    return _reverify(mx, GammaResult(n, found is not None, found, "tuples", stats))


def _reverify(mx: Maximals, res: GammaResult) -> GammaResult:
    if res.nonempty:
        G = mx.group
        s = list(res.witness_sequence)
        if not (is_generating(G, s) and is_irredundant(G, s)):
            raise RuntimeError(f"search returned a bad sequence {s}")
    return res


def compute_r(mx: Maximals, budget: int = DEFAULT_BUDGET) -> int:
    """Least n with Gamma_n nonempty."""
    n = 1
    while True:
        res = gamma_nonempty(mx, n, budget)
        if res.nonempty is None:
            raise UnresolvedError(f"Gamma_{n} unresolved within budget")
        if res.nonempty:
            return n
        n += 1


@dataclass
class MResult:
    m: int
    witness_sequence: tuple[int, ...]
    upper: GammaResult


def compute_m(mx: Maximals, budget: int = DEFAULT_BUDGET, start: int = 2) -> MResult:
    """Greatest n with Gamma_n nonempty.

    Lengths are tried upward; existence comes from the search, and the first
    empty length is proven empty by exhausting general-position tuples.
    Lengths past the first empty one are empty because the set of lengths of
    irredundant generating sequences has no gaps.
    """
    n = start
    best = None
    while True:
        res = _search(mx, n, budget)
        if res.nonempty:
            best = _reverify(mx, res).witness_sequence
            n += 1
            continue
        proof = gamma_nonempty(mx, n, budget, method="tuples")
        if proof.nonempty:
            best = proof.witness_sequence
            n += 1
            continue
        if best is None:
            raise UnresolvedError("no irredundant generating sequence found at the start length")
        return MResult(n - 1, best, proof)
