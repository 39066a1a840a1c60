"""Maximal subgroups of PSL(2, p), isomorphism fingerprints and counting.

Maximal subgroups are found by construction plus verification: candidates
come from the stabilizer of a projective point, normalizers of the cyclic
tori of order (p-1)/2 and (p+1)/2, and closures of (involution, order-3)
pairs of size 12, 24 or 60.  Each candidate class is saturated under
conjugation and kept only if maximality is verified by closures.
"""

from __future__ import annotations

import enum
import itertools
import json
import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bits import ElementSet, indices_to_int, int_to_indices, iter_bits
from .fpgroup import PSL2

log = logging.getLogger(__name__)

SMALL_LATTICE_LIMIT = 60


class SubgroupError(RuntimeError):
    """Internal consistency failure while building subgroup data."""


class TypeTag(enum.Enum):
    BOREL = "Borel"
    DIHEDRAL_PMINUS1 = "D(p-1)"
    DIHEDRAL_PPLUS1 = "D(p+1)"
    A4 = "A4"
    S4 = "S4"
    A5 = "A5"
    OTHER = "Other"

    def label(self, p: int) -> str:
        if self is TypeTag.DIHEDRAL_PMINUS1:
            return f"D{p - 1}"
        if self is TypeTag.DIHEDRAL_PPLUS1:
            return f"D{p + 1}"
        return self.value


TAG_ORDER = [TypeTag.BOREL, TypeTag.DIHEDRAL_PMINUS1, TypeTag.DIHEDRAL_PPLUS1,
             TypeTag.A4, TypeTag.S4, TypeTag.A5]


def pm1(p: int, n: int) -> bool:
    return p % n in (1, n - 1)


def pm3(p: int, n: int) -> bool:
    return p % n in (3, n - 3)


def dickson_tags(p: int) -> set[TypeTag]:
    """Maximal subgroup types expected for PSL(2, p), p > 5.

    Beyond the congruence conditions, D(p-1) is not maximal for p in {7, 11}
    and D(p+1) is not maximal for p = 7.
    """
    tags = {TypeTag.BOREL}
    if p not in (7, 11):
        tags.add(TypeTag.DIHEDRAL_PMINUS1)
    if p != 7:
        tags.add(TypeTag.DIHEDRAL_PPLUS1)
    if pm1(p, 10):
        tags.add(TypeTag.A5)
    if pm1(p, 8):
        tags.add(TypeTag.S4)
    if pm3(p, 10) and pm3(p, 8):
        tags.add(TypeTag.A4)
    return tags


# -- fingerprints ---------------------------------------------------------

@dataclass(frozen=True)
class Fingerprint:
    order: int
    order_multiset: tuple[tuple[int, int], ...]
    is_abelian: bool
    center_size: int

    def __post_init__(self) -> None:
        if sum(c for _, c in self.order_multiset) != self.order:
            raise ValueError("order multiset does not sum to the group order")

    @property
    def orders(self) -> dict[int, int]:
        return dict(self.order_multiset)


def _perm_closure(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    n = len(gens[0])
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(x[g[i]] for i in range(n))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def _perm_fingerprint(elems: list[tuple[int, ...]]) -> Fingerprint:
    n = len(elems[0])
    ident = tuple(range(n))

    def compose(a, b):
        return tuple(a[b[i]] for i in range(n))

    def order(a):
        k, x = 1, a
        while x != ident:
            x = compose(x, a)
            k += 1
        return k

    counts = Counter(order(a) for a in elems)
    center = [a for a in elems if all(compose(a, b) == compose(b, a) for b in elems)]
    return Fingerprint(len(elems), tuple(sorted(counts.items())),
                       len(center) == len(elems), len(center))


def _cycle(n: int, k: int) -> tuple[int, ...]:
    """k-cycle (0 1 ... k-1) acting on n points."""
    return tuple(list(range(1, k)) + [0] + list(range(k, n)))


@lru_cache(maxsize=None)
def model_fingerprint(name: str, p: int | None = None) -> Fingerprint:
    """Fingerprint of a small abstract group built as a permutation group.

    Names: ``Z<n>``, ``D<n>`` (order n), ``V4``, ``A4``, ``S4``, ``A5``,
    ``Borel`` (needs p: affine maps x -> a x + b with a a nonzero square).
    """
    if name == "Borel":
        if p is None:
            raise ValueError("Borel model needs p")
        sq = sorted({(x * x) % p for x in range(1, p)})
        gen_sq = next(a for a in sq if len({pow(a, k, p) for k in range(p)}) == len(sq))
        shift = tuple((x + 1) % p for x in range(p))
        scale = tuple((gen_sq * x) % p for x in range(p))
        return _perm_fingerprint(_perm_closure([shift, scale]))
    if name == "V4":
        return _perm_fingerprint(_perm_closure([(1, 0, 3, 2), (2, 3, 0, 1)]))
    if name == "A4":
        return _perm_fingerprint(_perm_closure([(1, 2, 0, 3), (1, 0, 3, 2)]))
    if name == "S4":
        return _perm_fingerprint(_perm_closure([_cycle(4, 4), (1, 0, 2, 3)]))
    if name == "A5":
        return _perm_fingerprint(_perm_closure([_cycle(5, 5), (1, 2, 0, 3, 4)]))
    if name.startswith("Z"):
        n = int(name[1:])
        return _perm_fingerprint(_perm_closure([_cycle(n, n)] if n > 1 else [(0,)]))
    if name.startswith("D"):
        n = int(name[1:])
        m = n // 2
        if n % 2 or m < 2:
            raise ValueError(f"no dihedral group of order {n}")
        if m == 2:
            return model_fingerprint("V4")
        refl = tuple((-i) % m for i in range(m))
        return _perm_fingerprint(_perm_closure([_cycle(m, m), refl]))
    raise ValueError(f"unknown model {name!r}")


def fingerprint(G: PSL2, H: ElementSet) -> Fingerprint:
    idx = H.indices()
    counts = Counter(G.elem_orders[idx].tolist())
    left = G.mul_many(idx[:, None], idx[None, :])
    commute = left == left.T
    center = int(commute.all(axis=1).sum())
    return Fingerprint(len(idx), tuple(sorted(counts.items())), center == len(idx), center)


def reference_fingerprints(p: int) -> dict[TypeTag, Fingerprint]:
    refs = {
        TypeTag.BOREL: model_fingerprint("Borel", p),
        TypeTag.DIHEDRAL_PMINUS1: model_fingerprint(f"D{p - 1}"),
        TypeTag.DIHEDRAL_PPLUS1: model_fingerprint(f"D{p + 1}"),
        TypeTag.A4: model_fingerprint("A4"),
        TypeTag.S4: model_fingerprint("S4"),
        TypeTag.A5: model_fingerprint("A5"),
    }
    if len(set(refs.values())) != len(refs):
        raise SubgroupError(f"reference fingerprints collide for p={p}")
    return refs


def classify(G: PSL2, H: ElementSet) -> TypeTag:
    fp = fingerprint(G, H)
    for tag, ref in reference_fingerprints(G.p).items():
        if ref == fp:
            return tag
    return TypeTag.OTHER


def iso_name(G: PSL2, H: ElementSet) -> str:
    """Short isomorphism-type name for small subgroups (Z3, V4, S3, D10, A4...)."""
    fp = fingerprint(G, H)
    n = fp.order
    candidates = [f"Z{n}"]
    if n == 4:
        candidates.append("V4")
    if n == 6:
        candidates.append("S3")
    elif n % 2 == 0 and n >= 8:
        candidates.append(f"D{n}")
    candidates += {12: ["A4"], 24: ["S4"], 60: ["A5"]}.get(n, [])
    if n == G.p * (G.p - 1) // 2:
        candidates.append("Borel")
    for name in candidates:
        model = "D6" if name == "S3" else name
        if model_fingerprint(model, G.p if name == "Borel" else None) == fp:
            return name
    return f"?{n}"


# -- maximal subgroups ----------------------------------------------------

@dataclass(frozen=True)
class MaximalSubgroup:
    index: int
    set: ElementSet
    tag: TypeTag
    class_id: int
    generators: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.set.size


def small_generators(G: PSL2, H: ElementSet, max_gens: int = 3) -> tuple[int, ...]:
    """A short generating list for H, greedy by decreasing element order."""
    idx = H.indices()
    idx = idx[idx != 0]
    if idx.size == 0:
        return ()
    ranked = idx[np.lexsort((idx, -G.elem_orders[idx]))]
    gens: list[int] = []
    span = ElementSet(1)
    for g in ranked:
        if int(g) in span:
            continue
        gens.append(int(g))
        span = G.closure(gens)
        if span == H:
            break
    if span != H:
        raise SubgroupError("greedy generators do not generate the subgroup")
    if len(gens) > max_gens:
        for pair in itertools.combinations(ranked.tolist(), 2):
            if G.closure(pair) == H:
                return tuple(int(x) for x in pair)
        raise SubgroupError(f"no generating list of length <= {max_gens}")
    return tuple(gens)


def conjugates_with(G: PSL2, H: ElementSet) -> list[tuple[ElementSet, int]]:
    """Distinct conjugates of H with the first conjugating element for each."""
    idx = H.indices()
    images = np.sort(G.conj(idx[None, :], G.all[:, None]), axis=1)
    first: dict[bytes, int] = {}
    for h, row in enumerate(images):
        first.setdefault(row.tobytes(), h)
    rows = sorted((tuple(images[h].tolist()), h) for h in first.values())
    return [(ElementSet.from_indices(r), h) for r, h in rows]


def double_coset(G: PSL2, H: ElementSet, g: int) -> np.ndarray:
    idx = H.indices()
    left = G.mul_many(idx, g)
    return np.unique(G.mul_many(left[:, None], idx[None, :]))


def verify_maximal(G: PSL2, M: ElementSet, gens: tuple[int, ...]) -> bool:
    """True iff closure(M + g) = G for every g outside M.

    Only one g per double coset M g M is tried, since <M, g> = <M, m g m'>.
    """
    if M.size >= G.order or G.order % M.size:
        return False
    pending = np.ones(G.order, dtype=bool)
    pending[M.indices()] = False
    while pending.any():
        g = int(np.flatnonzero(pending)[0])
        span = G.closure(list(gens) + [g], seed=M)
        if span.size != G.order:
            return False
        pending[double_coset(G, M, g)] = False
    return True


def _candidates(G: PSL2) -> list[ElementSet]:
    p = G.p
    out = [ElementSet.from_mask(G._c == 0)]
    for k in ((p - 1) // 2, (p + 1) // 2):
        g = int(np.flatnonzero(G.elem_orders == k)[0])
        out.append(G.normalizer(G.closure([g])))
    t = int(G.classes[_involution_class(G)][0])
    seen: set[int] = set()
    for y in np.flatnonzero(G.elem_orders == 3):
        H = G.closure([t, int(y)], limit=SMALL_LATTICE_LIMIT)
        if H is not None and H.size in (12, 24, 60) and H.bits not in seen:
            seen.add(H.bits)
            out.append(H)
    return out


def _involution_class(G: PSL2) -> int:
    reps = [c for c, members in enumerate(G.classes) if G.elem_orders[members[0]] == 2]
    if len(reps) != 1:
        raise SubgroupError("expected a single class of involutions")
    return reps[0]


class Maximals:
    """All maximal subgroups of a group plus per-element incidence masks.

    ``elem_masks[g]`` has bit k set iff element g lies in maximal subgroup k,
    so a set of elements generates G iff the AND of their masks is zero.
    """

    def __init__(self, G: PSL2, subgroups: list[MaximalSubgroup]):
        self.group = G
        self.subgroups = subgroups
        self.count = len(subgroups)
        self.all_mask = (1 << self.count) - 1
        members: list[list[int]] = [[] for _ in range(G.order)]
        for M in subgroups:
            for g in M.set.indices():
                members[g].append(M.index)
        self.elem_masks = [sum(1 << k for k in ks) for ks in members]
        self.class_sizes = Counter(M.class_id for M in subgroups)

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, k: int) -> MaximalSubgroup:
        return self.subgroups[k]

    def __iter__(self):
        return iter(self.subgroups)

    def containing(self, elements) -> int:
        """Mask of maximal subgroups containing every given element."""
        mask = self.all_mask
        for g in elements:
            mask &= self.elem_masks[int(g)]
        return mask

    def containing_any(self, elements) -> int:
        mask = 0
        for g in elements:
            mask |= self.elem_masks[int(g)]
        return mask

    def generates(self, elements) -> bool:
        return self.containing(elements) == 0

    def census(self) -> dict[str, int]:
        counts = Counter(M.tag for M in self.subgroups)
        return {t.label(self.group.p): counts[t] for t in TAG_ORDER if counts[t]}

    def class_reps(self) -> list[MaximalSubgroup]:
        seen: dict[int, MaximalSubgroup] = {}
        for M in self.subgroups:
            seen.setdefault(M.class_id, M)
        return [seen[c] for c in sorted(seen)]

    def of_tag(self, tag: TypeTag) -> list[MaximalSubgroup]:
        return [M for M in self.subgroups if M.tag is tag]

    def to_json(self) -> dict:
        G = self.group
        classes = []
        for rep in self.class_reps():
            classes.append({
                "class_id": rep.class_id,
                "tag": rep.tag.label(G.p),
                "order": rep.order,
                "class_size": self.class_sizes[rep.class_id],
                "generators": [list(G.matrix(g)) for g in rep.generators],
            })
        return {"p": G.p, "group_order": G.order, "census": self.census(), "classes": classes}


def maximal_subgroups(G: PSL2, verify: str = "auto", seed: int = 0,
                      full_threshold: int = 5000, sample_size: int = 8) -> Maximals:
    """Enumerate, classify and verify all maximal subgroups of G.

    ``verify``: "full" checks maximality of every subgroup, "reps" checks one
    per conjugacy class plus a seeded sample of other members, "auto" picks
    "full" when |G| <= ``full_threshold``.
    """
    if verify == "auto":
        verify = "full" if G.order <= full_threshold else "reps"
    classes: list[tuple[TypeTag, list[tuple[ElementSet, int]], tuple[int, ...]]] = []
    covered: set[int] = set()
    verified: set[int] = set()
    for cand in _candidates(G):
        if cand.bits in covered:
            continue
        orbit = conjugates_with(G, cand)
        covered.update(s.bits for s, _ in orbit)
        if not G.is_subgroup(cand):
            raise SubgroupError("candidate is not closed under multiplication")
        rep = orbit[0][0]
        gens = small_generators(G, rep)
        if not verify_maximal(G, rep, gens):
            log.debug("p=%d: discarding non-maximal candidate of order %d", G.p, rep.size)
            continue
        verified.add(rep.bits)
        tag = classify(G, rep)
        if tag is TypeTag.OTHER:
            raise SubgroupError(f"maximal subgroup of order {rep.size} matches no known type")
        classes.append((tag, orbit, gens))

    classes.sort(key=lambda c: (TAG_ORDER.index(c[0]), tuple(c[1][0][0].indices())))
    subgroups: list[MaximalSubgroup] = []
    for class_id, (tag, orbit, gens) in enumerate(classes):
        rep_set, rep_h = orbit[0]
        back = int(G.inv[rep_h])
        for s, h in orbit:
            # h_rep maps the candidate to rep; h maps candidate to s
            k = G.mul(h, back)
            cg = tuple(int(x) for x in G.conj(np.array(gens), k))
            subgroups.append(MaximalSubgroup(-1, s, tag, class_id, cg))
    subgroups.sort(key=lambda M: (M.class_id, tuple(M.set.indices())))
    subgroups = [MaximalSubgroup(k, M.set, M.tag, M.class_id, M.generators)
                 for k, M in enumerate(subgroups)]
    result = Maximals(G, subgroups)
    _certify(result, verify, seed, sample_size, verified)
    return result


def _certify(mx: Maximals, verify: str, seed: int, sample_size: int,
             verified: set[int] = frozenset()) -> None:
    G = mx.group
    for g, mask in enumerate(mx.elem_masks):
        if mask == 0 and g != 0:
            raise SubgroupError(f"cyclic subgroup of element {g} lies in no listed maximal subgroup")
    if len({M.set.bits for M in mx}) != len(mx):
        raise SubgroupError("duplicate maximal subgroups")
    for M in mx:
        if G.order % M.order or mx.class_sizes[M.class_id] * M.order != G.order:
            raise SubgroupError(f"class {M.class_id} is not self-normalizing")
    if verify == "none":
        return
    if verify == "full":
        to_check = list(mx)
    else:
        rng = random.Random(seed)
        to_check = mx.class_reps()
        others = [M for M in mx if M not in to_check]
        to_check += rng.sample(others, min(sample_size, len(others)))
    for M in to_check:
        if G.closure(M.generators) != M.set:
            raise SubgroupError(f"stored generators do not generate maximal subgroup {M.index}")
        if M.set.bits not in verified and not verify_maximal(G, M.set, M.generators):
            raise SubgroupError(f"maximal subgroup {M.index} failed the maximality check")


def frattini(mx: Maximals) -> ElementSet:
    bits = mx.group.full.bits
    for M in mx:
        bits &= M.set.bits
    return ElementSet(bits)


# -- small subgroup lattices ----------------------------------------------

@dataclass
class Lattice:
    """All subgroups of a small group H with containment relations.

    ``subgroups`` are sorted by order; ``contains[i]`` lists j with
    subgroups[j] a proper subgroup of subgroups[i].
    """

    top: ElementSet
    subgroups: list[ElementSet]
    contains: list[list[int]]
    names: list[str] = field(default_factory=list)

    def index_of(self, s: ElementSet) -> int:
        return next(i for i, t in enumerate(self.subgroups) if t == s)

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges (bigger, smaller)."""
        edges = []
        for i, below in enumerate(self.contains):
            bs = set(below)
            for j in below:
                if not any(j in self.contains[k] for k in bs if k != j):
                    edges.append((i, j))
        return edges

    def chains_from_top(self, length: int) -> list[tuple[int, ...]]:
        """Strict chains top > K2 > ... of nontrivial subgroups with ``length`` members."""
        top = self.index_of(self.top)
        out = []

        def walk(chain):
            if len(chain) == length:
                out.append(tuple(chain))
                return
            for j in self.contains[chain[-1]]:
                if self.subgroups[j].size > 1:
                    walk(chain + [j])

        walk([top])
        return out


def all_subgroups_small(G: PSL2, H: ElementSet, limit: int = SMALL_LATTICE_LIMIT) -> Lattice:
    """Subgroup lattice of H for |H| <= 60 via closures of all element pairs."""
    if H.size > limit:
        raise ValueError(f"subgroup of order {H.size} exceeds the small-lattice limit {limit}")
    idx = H.indices()
    k = len(idx)
    pos = {int(g): i for i, g in enumerate(idx)}
    table = G.mul_many(idx[:, None], idx[None, :])
    local = np.vectorize(pos.__getitem__)(table) if k else table

    def close(gens):
        seen = 1  # local index 0 is the identity
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(local[x, g])
                    if not (seen >> y) & 1:
                        seen |= 1 << y
                        nxt.append(y)
            frontier = nxt
        return seen

    found = {1}
    for a in range(k):
        found.add(close([a]))
    for a, b in itertools.combinations(range(1, k), 2):
        found.add(close([a, b]))
    local_sets = sorted(found, key=lambda s: (s.bit_count(), s))
    subs = [ElementSet.from_indices(idx[list(iter_bits(s))]) for s in local_sets]
    if subs[-1] != H:
        raise SubgroupError("pair closures did not recover the whole subgroup")
    contains = [[j for j in range(i) if local_sets[j] & ~local_sets[i] == 0 and local_sets[j] != local_sets[i]]
                for i in range(len(subs))]
    names = [iso_name(G, s) for s in subs]
    return Lattice(H, subs, contains, names)


def lattice_to_dot(lat: Lattice, labels: dict[int, str] | None = None, name: str = "lattice") -> str:
    lines = [f"graph {name} {{", "  rankdir=BT;"]
    for i, s in enumerate(lat.subgroups):
        label = (labels or {}).get(i, lat.names[i] if lat.names else str(s.size))
        lines.append(f'  n{i} [label="{label}"];')
    for big, small in lat.covers():
        lines.append(f"  n{small} -- n{big};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- counting -------------------------------------------------------------

def _dihedral_over(G: PSL2, t: int, rot_order: int) -> list[ElementSet]:
    """Dihedral subgroups <t, y> with y of the given order inverted by t."""
    out = {}
    ys = np.flatnonzero(G.elem_orders == rot_order)
    inverted = ys[G.conj(ys, t) == G.inv[ys]]
    for y in inverted:
        H = G.closure([t, int(y)], limit=2 * rot_order)
        if H is not None and H.size == 2 * rot_order:
            out[H.bits] = H
    return list(out.values())


def subgroups_of_type(G: PSL2, name: str) -> list[ElementSet]:
    """Every subgroup of G of type S3, D10, A4, S4 or A5.

    A representative set is found among subgroups containing a fixed involution
    (all involutions are conjugate) and then saturated under conjugation.
    """
    t = int(G.classes[_involution_class(G)][0])
    if name == "S3":
        seeds = _dihedral_over(G, t, 3)
    elif name == "D10":
        seeds = _dihedral_over(G, t, 5)
    elif name in ("A4", "S4", "A5"):
        size = {"A4": 12, "S4": 24, "A5": 60}[name]
        seeds = []
        for y in np.flatnonzero(G.elem_orders == 3):
            H = G.closure([t, int(y)], limit=size)
            if H is not None and H.size == size:
                seeds.append(H)
    else:
        raise ValueError(f"unsupported subgroup type {name!r}")
    ref = model_fingerprint("D6" if name == "S3" else name)
    all_subs: dict[int, ElementSet] = {}
    for H in seeds:
        if H.bits in all_subs or fingerprint(G, H) != ref:
            continue
        for s, _ in conjugates_with(G, H):
            all_subs[s.bits] = s
    return sorted(all_subs.values(), key=lambda s: tuple(s.indices()))


def count_by_type(G: PSL2, names=("S3", "D10", "S4", "A5")) -> dict[str, int]:
    """Number of subgroups of each type; cross-checked against |G|/|N(H)|.

    Types absent for this p (D10, A5 unless p = +-1 mod 10; S4 unless
    p = +-1 mod 8) come out as 0 by the same search.
    """
    counts = {}
    for name in names:
        subs = subgroups_of_type(G, name)
        by_index = 0
        remaining = {s.bits for s in subs}
        while remaining:
            rep = ElementSet(min(remaining, key=lambda b: tuple(int_to_indices(b))))
            orbit = {s.bits for s, _ in conjugates_with(G, rep)}
            n_norm = G.normalizer(rep).size
            if len(orbit) * n_norm != G.order:
                raise SubgroupError(f"{name}: orbit size disagrees with normalizer index")
            by_index += G.order // n_norm
            remaining -= orbit
        if by_index != len(subs):
            raise SubgroupError(f"{name}: conjugate counts disagree")
        counts[name] = len(subs)
    return counts


def find_intersecting_pair(mx: Maximals, tag: TypeTag, target: str | None = None):
    """Two distinct maximal subgroups of ``tag`` meeting in a copy of ``target``.

    Defaults: S4 pairs meeting in S3, A5 pairs meeting in D10.
    """
    G = mx.group
    if tag not in (TypeTag.S4, TypeTag.A5):
        raise ValueError("tag must be S4 or A5")
    if target is None:
        target = "S3" if tag is TypeTag.S4 else "D10"
    members = mx.of_tag(tag)
    if not members:
        cond = "p = +-1 mod 8" if tag is TypeTag.S4 else "p = +-1 mod 10"
        raise ValueError(f"PSL(2,{G.p}) has no maximal {tag.value} (needs {cond})")
    size = {"S3": 6, "D10": 10, "A4": 12}[target]
    for A in [mx[c.index] for c in mx.class_reps() if c.tag is tag]:
        for B in members:
            if B.index == A.index:
                continue
            inter = A.set & B.set
            if inter.size == size and iso_name(G, inter) == target:
                return A, B, inter
    raise SubgroupError(f"no two {tag.value} subgroups meet in {target} at p={G.p}")


def census_json(mx: Maximals) -> str:
    return json.dumps(mx.to_json(), indent=2, sort_keys=True)
