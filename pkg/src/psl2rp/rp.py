"""The replacement property for PSL(2, p) via radicals of maximal-subgroup tuples.

RP fails exactly when some general-position tuple of m(G) maximal subgroups
with nontrivial radical is realized by an irredundant generating sequence;
the nonidentity radical elements of such tuples are the witnesses to failure.
Tuples are searched up to conjugacy: every nontrivial radical contains an
element of prime order, and conjugating moves it to a class representative.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .bits import ElementSet, iter_bits
from .fpgroup import PSL2
from .genseq import UnresolvedError, class_representatives, is_generating, is_irredundant
from .subgroups import Maximals, TypeTag, pm1, pm3

log = logging.getLogger(__name__)

EXCEPTIONAL = (7, 11, 19, 31)
POOL_SCAN_LIMIT = 400


# -- predictions ------------------------------------------------------------

def predict_rp(p: int) -> bool:
    """True if PSL(2, p) is predicted to satisfy the replacement property."""
    if p in EXCEPTIONAL:
        return True
    return pm3(p, 8) and pm3(p, 10)


def predict_witness_orders(p: int) -> set[int]:
    if predict_rp(p):
        return set()
    return {2, 3} if pm1(p, 10) else {2}


def known_m(p: int) -> int:
    return 4 if p in EXCEPTIONAL else 3


# -- tuple primitives -------------------------------------------------------

@dataclass(frozen=True)
class MaximalTuple:
    members: tuple[int, ...]
    radical: ElementSet

    def __len__(self) -> int:
        return len(self.members)


def radical(sets: Sequence[ElementSet]) -> ElementSet:
    if not sets:
        raise ValueError("radical of an empty tuple")
    bits = sets[0].bits
    for s in sets[1:]:
        bits &= s.bits
    return ElementSet(bits)


def in_general_position(sets: Sequence[ElementSet]) -> bool:
    """For every j, the intersection of the others is not inside member j."""
    n = len(sets)
    if n < 2:
        raise ValueError("general position needs at least two subgroups")
    for j in range(n):
        others = radical([s for i, s in enumerate(sets) if i != j])
        if others.issubset(sets[j]):
            return False
    return True


def make_tuple(mx: Maximals, members: Iterable[int]) -> MaximalTuple:
    members = tuple(sorted(int(k) for k in members))
    return MaximalTuple(members, radical([mx[k].set for k in members]))


def _leave_one_out(bits: list[int], full: int) -> list[int]:
    out = []
    for i in range(len(bits)):
        acc = full
        for j, b in enumerate(bits):
            if j != i:
                acc &= b
        out.append(acc)
    return out


def enumerate_gp_tuples(mx: Maximals, n: int, require_nontrivial_radical: bool = False,
                        pool: Iterable[int] | None = None) -> Iterator[MaximalTuple]:
    """All general-position n-subsets of ``pool`` (default: every maximal subgroup).

    Members are chosen in increasing index order.  A partial tuple is kept only
    if it is itself in general position (sub-tuples of general-position tuples
    are), and with ``require_nontrivial_radical`` the running radical must stay
    nontrivial.
    """
    G = mx.group
    full = G.full.bits
    pool = sorted(range(len(mx)) if pool is None else {int(k) for k in pool})
    sets = {k: mx[k].set.bits for k in pool}

    def rec(chosen: list[int], bits: list[int], start: int):
        k = len(chosen)
        if k == n:
            yield MaximalTuple(tuple(chosen), ElementSet(_and(bits, full)))
            return
        rad = _and(bits, full)
        loo = _leave_one_out(bits, full)
        # each member j needs an element of (others) \ M_j inside the newcomer
        need = [loo[j] & ~bits[j] for j in range(k)]
        for pos in range(start, len(pool)):
            c = pool[pos]
            m = sets[c]
            if k and not rad & ~m:
                continue
            if any(not d & m for d in need):
                continue
            if require_nontrivial_radical and (rad & m).bit_count() <= 1:
                continue
            yield from rec(chosen + [c], bits + [m], pos + 1)

    if n < 1:
        raise ValueError("n must be positive")
    yield from rec([], [], 0)


def _and(bits: list[int], full: int) -> int:
    acc = full
    for b in bits:
        acc &= b
    return acc


def prime_order_reps(G: PSL2) -> list[int]:
    out = []
    for r in class_representatives(G):
        k = int(G.elem_orders[r])
        if all(k % d for d in range(2, int(k ** 0.5) + 1)):
            out.append(r)
    return out


def pool_through(mx: Maximals, x: int) -> list[int]:
    return list(iter_bits(mx.elem_masks[int(x)]))


def nontrivial_radical_tuples(mx: Maximals, n: int) -> Iterator[tuple[int, MaximalTuple]]:
    """(x, tuple) for every general-position n-tuple through a prime-order class rep x.

    Every general-position tuple with nontrivial radical is conjugate to one of
    these.
    """
    for x in prime_order_reps(mx.group):
        for t in enumerate_gp_tuples(mx, n, pool=pool_through(mx, x)):
            yield x, t


def gp_tuples_up_to_conjugacy(mx: Maximals, n: int) -> Iterator[MaximalTuple]:
    """General-position n-tuples (n >= 2) covering every conjugacy class.

    In a general-position tuple any n-1 members share a nontrivial element, so
    some conjugate has n-1 members through a prime-order class representative;
    the last member is then any maximal subgroup keeping general position.
    Duplicates are suppressed.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    G = mx.group
    full = G.full.bits
    seen: set[tuple[int, ...]] = set()
    for x in prime_order_reps(G):
        for base in enumerate_gp_tuples(mx, n - 1, pool=pool_through(mx, x)):
            bits = [mx[k].set.bits for k in base.members]
            if n - 1 == 1:
                cand = mx.all_mask & ~(1 << base.members[0])
            else:
                loo = _leave_one_out(bits, full)
                cand = mx.all_mask
                for j, b in enumerate(bits):
                    cand &= mx.containing_any(iter_bits(loo[j] & ~b))
                # the radical of the base must not lie inside the newcomer
                cand &= ~mx.containing(iter_bits(base.radical.bits))
            for c in iter_bits(cand):
                if c in base.members:
                    continue
                members = tuple(sorted(base.members + (c,)))
                if members in seen:
                    continue
                seen.add(members)
                t = make_tuple(mx, members)
                if in_general_position([mx[k].set for k in members]):
                    yield t


def slots(mx: Maximals, members: Sequence[int]) -> list[list[int]]:
    """Candidate elements per position: in every other member, outside this one."""
    G = mx.group
    bits = [mx[k].set.bits for k in members]
    loo = _leave_one_out(bits, G.full.bits)
    return [list(iter_bits(loo[i] & ~bits[i])) for i in range(len(members))]


def realizes(mx: Maximals, t: MaximalTuple | Sequence[int]) -> tuple[int, ...] | None:
    """A generating sequence corresponding to the tuple, or None if none exists.

    Slot candidates are deduplicated by maximal-incidence mask (generation
    depends on nothing else).  The search prunes a partial choice when the
    masks common to every candidate of the remaining slots already force a
    maximal subgroup to contain the whole sequence.
    """
    members = t.members if isinstance(t, MaximalTuple) else tuple(t)
    cand = []
    for slot in slots(mx, members):
        by_mask: dict[int, int] = {}
        for g in slot:
            by_mask.setdefault(mx.elem_masks[g], g)
        if not by_mask:
            return None
        cand.append(sorted(by_mask.items(), key=lambda kv: kv[1]))
    n = len(cand)
    order = sorted(range(n), key=lambda i: len(cand[i]))
    common = []
    for i in order:
        acc = mx.all_mask
        for m, _ in cand[i]:
            acc &= m
        common.append(acc)
    # suffix[k] = AND of common masks for order[k:]
    suffix = [mx.all_mask] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix[k] = suffix[k + 1] & common[k]
    chosen = [0] * n

    def rec(k: int, acc: int) -> bool:
        if k == n:
            return acc == 0
        if acc & suffix[k]:
            return False
        for m, g in cand[order[k]]:
            chosen[order[k]] = g
            if rec(k + 1, acc & m):
                return True
        return False

    if rec(0, mx.all_mask):
        return tuple(chosen)
    return None


def realizable_tuple_exists(mx: Maximals, n: int, budget: int | None = None):
    """Exhaustively decide whether some general-position n-tuple is realizable.

    Returns (sequence or None, tuples examined).
    """
    examined = 0
    for t in gp_tuples_up_to_conjugacy(mx, n):
        examined += 1
        if budget is not None and examined > budget:
            raise UnresolvedError(f"more than {budget} tuples of length {n}")
        s = realizes(mx, t)
        if s is not None:
            return s, examined
    return None, examined


# -- certificates and reports ----------------------------------------------

@dataclass
class FailureCertificate:
    """Replayable evidence that ``witness`` cannot replace any entry of ``sequence``."""

    p: int
    members: tuple[int, ...]
    sequence: tuple[int, ...]
    witness: int
    variant: str = "search"
    diagram: dict[str, ElementSet] = field(default_factory=dict)
    notes: dict[str, object] = field(default_factory=dict)


def replay_failure(G: PSL2, sequence: Sequence[int], witness: int) -> list[int] | None:
    """Closure sizes after putting ``witness`` at each position, or None.

    None means the replay failed: the sequence is not irredundant generating,
    the witness is trivial, or some replacement regenerates G.
    """
    s = [int(g) for g in sequence]
    if witness == 0 or not is_generating(G, s) or not is_irredundant(G, s):
        return None
    sizes = []
    for i in range(len(s)):
        size = G.closure(s[:i] + [int(witness)] + s[i + 1:]).size
        if size == G.order:
            return None
        sizes.append(size)
    return sizes


def verify_certificate(mx: Maximals, cert: FailureCertificate) -> None:
    """Raise AssertionError naming the first violated condition."""
    G = mx.group
    sets = [mx[k].set for k in cert.members]
    n = len(sets)
    if len(cert.sequence) != n:
        raise AssertionError("sequence length differs from tuple length")
    if not in_general_position(sets):
        raise AssertionError("tuple is not in general position")
    rad = radical(sets)
    if cert.witness not in rad or cert.witness == 0:
        raise AssertionError("witness is not a nontrivial radical element")
    for i, g in enumerate(cert.sequence):
        for j, M in enumerate(sets):
            if (g in M) != (i != j):
                raise AssertionError(f"sequence entry {i} does not correspond to member {j}")
    if replay_failure(G, cert.sequence, cert.witness) is None:
        raise AssertionError("direct replay of the replacement failure did not hold")


@dataclass
class WitnessReport:
    element: int
    order: int
    class_size: int
    certificate: FailureCertificate


@dataclass
class RPReport:
    p: int
    m: int
    m_source: str
    status: str  # "resolved" or "unresolved"
    holds: bool | None
    witnesses: list[WitnessReport]
    witness_count: int
    tuples_examined: int
    tuples_nontrivial: int
    tuples_realizable: int
    realizable_tags: dict[str, int]
    prediction: bool
    method: str = "radical"

    @property
    def verdict(self) -> str:
        if self.holds is None:
            return "unresolved"
        return "holds" if self.holds else "fails"

    @property
    def agreement(self) -> bool:
        return self.holds is not None and self.holds == self.prediction

    @property
    def witness_orders(self) -> set[int]:
        return {w.order for w in self.witnesses}

    def witness_classes(self, G: PSL2) -> set[int]:
        return {int(G.class_of[w.element]) for w in self.witnesses}


def check_rp(mx: Maximals, m: int | None = None, budget: int | None = None) -> RPReport:
    """Decide RP by the radical criterion and collect all witnesses to failure."""
    G = mx.group
    p = G.p
    m_source = "given"
    if m is None:
        m, m_source = known_m(p), "known"
    examined = nontrivial = realizable = 0
    tags: dict[str, int] = {}
    found: dict[int, FailureCertificate] = {}  # witness conjugacy class -> certificate
    try:
        for x, t in nontrivial_radical_tuples(mx, m):
            examined += 1
            nontrivial += 1
            if budget is not None and examined > budget:
                raise UnresolvedError
            s = realizes(mx, t)
            if s is None:
                continue
            realizable += 1
            for k in t.members:
                label = mx[k].tag.label(p)
                tags[label] = tags.get(label, 0) + 1
            for w in iter_bits(t.radical.bits & ~1):
                cls = int(G.class_of[w])
                if cls not in found:
                    found[cls] = FailureCertificate(p, t.members, s, w)
    except UnresolvedError:
        return RPReport(p, m, m_source, "unresolved", None, [], 0, examined, nontrivial,
                        realizable, tags, predict_rp(p))
    witnesses = []
    for cls in sorted(found):
        cert = found[cls]
        verify_certificate(mx, cert)
        w = cert.witness
        witnesses.append(WitnessReport(w, int(G.elem_orders[w]), len(G.classes[cls]), cert))
    count = sum(w.class_size for w in witnesses)
    return RPReport(p, m, m_source, "resolved", not witnesses, witnesses, count, examined,
                    nontrivial, realizable, tags, predict_rp(p))


def witness_set(G: PSL2, report: RPReport) -> ElementSet:
    """All witnesses: the union of the witness conjugacy classes."""
    idx = [G.classes[int(G.class_of[w.element])] for w in report.witnesses]
    return ElementSet.from_indices(np.concatenate(idx)) if idx else ElementSet(0)
