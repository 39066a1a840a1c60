"""Definition-level RP check using nothing but closures in PSL(2, p).

No maximal subgroups and no radicals are involved: Gamma_m is enumerated up
to conjugacy, and for each sequence the elements that fail every replacement
are computed directly.  Meant only for small p, to cross-check the radical
criterion.
"""

from __future__ import annotations

import numpy as np

from .bits import ElementSet, iter_bits
from .fpgroup import PSL2
from .genseq import UnresolvedError
from .rp import RPReport, WitnessReport, FailureCertificate, known_m, predict_rp

ORACLE_MAX_ORDER = 1092  # p = 13


class _Spans:
    """Memoized closures of generator tuples and their non-generating completions."""

    def __init__(self, G: PSL2):
        self.G = G
        self.spans: dict[tuple[int, ...], ElementSet] = {(): ElementSet(1)}
        self.blockers: dict[int, int] = {}
        self.closures = 0

    def span(self, key: tuple[int, ...]) -> ElementSet:
        key = tuple(sorted(key))
        s = self.spans.get(key)
        if s is None:
            seed = self.span(key[:-1])
            if key[-1] in seed:
                s = seed
            else:
                self.closures += 1
                s = self.G.closure(key, seed=seed)
            self.spans[key] = s
        return s

    def blocked(self, key: tuple[int, ...]) -> int:
        """Bitset of g with <key, g> != G."""
        K = self.span(key)
        hit = self.blockers.get(K.bits)
        if hit is not None:
            return hit
        G = self.G
        pending = np.ones(G.order, dtype=bool)
        pending[K.indices()] = False
        out = K.bits
        kidx = K.indices()
        while pending.any():
            g = int(np.flatnonzero(pending)[0])
            self.closures += 1
            H = G.closure(list(key) + [g], seed=K)
            if H.size == G.order:
                left = G.mul_many(kidx, g)
                pending[G.mul_many(left[:, None], kidx[None, :]).ravel()] = False
            else:
                out |= H.bits
                pending[H.indices()] = False
        self.blockers[K.bits] = out
        return out


def cyclic_representatives(G: PSL2) -> np.ndarray:
    """rep[g] = smallest index generating the same cyclic subgroup as g."""
    rep = np.full(G.order, -1, dtype=np.int64)
    for g in range(G.order):
        if rep[g] >= 0:
            continue
        k = int(G.elem_orders[g])
        x = 0
        for e in range(1, k + 1):
            x = G.mul(x, g)
            if np.gcd(e, k) == 1:
                rep[x] = g
    return rep


def oracle_check_rp(G: PSL2, m: int | None = None, budget: int | None = None,
                    max_order: int = ORACLE_MAX_ORDER) -> RPReport:
    """Brute-force RP: enumerate Gamma_m up to conjugacy and test replacements.

    The first entry runs over conjugacy-class representatives, the rest over
    one generator per cyclic subgroup (replacing an entry by another
    generator of the same cyclic subgroup changes no span).
    """
    if G.order > max_order:
        raise ValueError(f"group order {G.order} exceeds the oracle ceiling {max_order}")
    p = G.p
    m_source = "given"
    if m is None:
        m, m_source = known_m(p), "known"
    sp = _Spans(G)
    rep = cyclic_representatives(G)
    cyc = sorted({int(r) for r in rep[1:]})
    roots = sorted({int(rep[int(c[0])]) for c in G.classes if c[0] != 0})
    full = G.full.bits
    witness_bits = 0
    certs: dict[int, FailureCertificate] = {}
    count = 0

    def finish(s: tuple[int, ...]):
        nonlocal witness_bits, count
        count += 1
        if budget is not None and count > budget:
            raise UnresolvedError
        bad = full & ~1
        for i in range(m):
            bad &= sp.blocked(s[:i] + s[i + 1:])
        new = bad & ~witness_bits
        for w in iter_bits(new):
            cls = int(G.class_of[w])
            certs.setdefault(cls, FailureCertificate(p, (), s, w, variant="oracle"))
        witness_bits |= bad

    def rec(s: tuple[int, ...], start: int):
        k = len(s)
        last = k + 1 == m
        if last:
            cand = full & ~sp.blocked(s)
            for i in range(k):
                cand &= sp.blocked(s[:i] + s[i + 1:])
        else:
            cand = sp.blocked(s) & ~sp.span(s).bits
        for pos in range(start, len(cyc)):
            c = cyc[pos]
            if c == s[0] or not (cand >> c) & 1:
                continue
            t = s + (c,)
            if last:
                finish(t)
                continue
            if any(t[i] in sp.span(t[:i] + t[i + 1:]) for i in range(k)):
                continue
            rec(t, pos + 1)

    try:
        for r in roots:
            if m == 1:
                if sp.span((r,)).size == G.order:
                    finish((r,))
                continue
            rec((r,), 0)
    except UnresolvedError:
        return RPReport(p, m, m_source, "unresolved", None, [], 0, count, 0, 0, {},
                        predict_rp(p), method="oracle")
    # the witness set is a union of classes: conjugates of witnesses are witnesses
    witnesses = [WitnessReport(c.witness, int(G.elem_orders[c.witness]), len(G.classes[cls]), c)
                 for cls, c in sorted(certs.items())]
    total = sum(w.class_size for w in witnesses)
    return RPReport(p, m, m_source, "resolved", not witnesses, witnesses, total, count, 0, 0, {},
                    predict_rp(p), method="oracle")
