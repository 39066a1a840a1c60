"""Explicit failure certificates built from pairs of S4 or A5 subgroups.

Three configurations are supported, each a general-position triple
(M1, M2, M3) with a corresponding sequence (g1, g2, g3) and a radical
element w that fails every replacement:

``case1``  (p = +-1 mod 8)   M1, M3 = S4 meeting in S3, M2 = C(w), w an involution, g2 of order 3
``case2``  (p = +-1 mod 10)  M1, M3 = A5 meeting in D10, M2 = C(w), g2 of order 5
``order3`` (p = +-1 mod 10)  M1 dihedral over N(<w>), M2, M3 = A5 meeting in A4, w of order 3

Certificates serialize to self-contained JSON that :func:`replay_certificate`
re-checks with nothing but :mod:`psl2rp.fpgroup`.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass

import numpy as np

from .bits import ElementSet
from .fpgroup import GroupError, PSL2, build_group, check_prime
from .rp import EXCEPTIONAL, FailureCertificate, in_general_position, predict_rp, radical, replay_failure
from .subgroups import Maximals, TypeTag, find_intersecting_pair, iso_name, pm1

SCHEMA_VERSION = 1
VARIANTS = ("case1", "case2", "order3")


class ConstructionError(RuntimeError):
    """A step of an explicit construction could not be carried out."""


def applicable_variants(p: int) -> list[str]:
    out = []
    if pm1(p, 8):
        out.append("case1")
    if pm1(p, 10):
        out += ["case2", "order3"]
    return out


def variant_obstruction(p: int, variant: str) -> str | None:
    """Why ``variant`` is unavailable at p, or None if it is available."""
    if variant not in VARIANTS:
        return f"unknown variant {variant!r} (choose from {', '.join(VARIANTS)})"
    if variant == "case1" and not pm1(p, 8):
        return f"case1 needs p = +-1 mod 8, but p = {p % 8} mod 8"
    if variant in ("case2", "order3") and not pm1(p, 10):
        return f"{variant} needs p = +-1 mod 10, but p = {p % 10} mod 10"
    return None


# -- construction ---------------------------------------------------------

def _klein_through(G: PSL2, M: ElementSet, w: int) -> list[ElementSet]:
    """Klein four-subgroups of M containing the involution w."""
    cm = M & G.centralizer(w)
    out = {}
    for u in cm.indices():
        u = int(u)
        if u in (0, w) or G.elem_orders[u] != 2:
            continue
        V = ElementSet.from_indices([0, w, u, G.mul(w, u)])
        out[V.bits] = V
    return [out[b] for b in sorted(out)]


def _lowest_over(mx: Maximals, H: ElementSet) -> int:
    mask = mx.containing(H.indices())
    if not mask:
        raise ConstructionError("subgroup lies in no maximal subgroup")
    return (mask & -mask).bit_length() - 1


def _of_order(G: PSL2, S: ElementSet, k: int) -> list[int]:
    idx = S.indices()
    return [int(g) for g in idx[G.elem_orders[idx] == k]]


def _involution_case(mx: Maximals, variant: str) -> FailureCertificate:
    G = mx.group
    tag = TypeTag.S4 if variant == "case1" else TypeTag.A5
    M1, M3, I13 = find_intersecting_pair(mx, tag)
    w = min(_of_order(G, I13, 2))
    A = _klein_through(G, M1.set, w)
    B = _klein_through(G, M3.set, w)
    if len(A) != 1 or len(B) != 1:
        raise ConstructionError(f"expected one Klein subgroup through w in each member, got {len(A)}, {len(B)}")
    A, B = A[0], B[0]
    C = G.centralizer(w)
    k2 = _lowest_over(mx, C)
    M2 = mx[k2]
    notes = {"centralizer_order": C.size, "centralizer_is_maximal": M2.set == C,
             "centralizer_contains_A_and_B": A <= C and B <= C}
    g2_order = 3 if variant == "case1" else 5
    # g1 in B outside M1; case1 additionally asks for a conjugate of w inside M3
    m3_conj_w = set(G.conj(w, M3.set.indices()).tolist())
    g1s = [g for g in _of_order(G, B, 2) if g != w and g not in M1.set
           and (variant != "case1" or g in m3_conj_w)]
    g3s = [g for g in _of_order(G, A, 2) if g != w and g not in M3.set]
    g2s = [g for g in _of_order(G, I13, g2_order) if g not in M2.set]
    members = (M1.index, k2, M3.index)
    for g1, g2, g3 in itertools.product(g1s, g2s, g3s):
        if G.closure([g1, g2]) != M3.set:
            continue
        cert = FailureCertificate(G.p, members, (g1, g2, g3), w, variant=variant, notes=notes)
        cert.diagram = {"M1": M1.set, "M2": M2.set, "M3": M3.set, "A": A, "B": B,
                        "M1 ∩ M3": I13, "<g1>": G.closure([g1]), "<g2>": G.closure([g2]),
                        "<g3>": G.closure([g3]), "<w>": G.closure([w])}
        return cert
    raise ConstructionError(f"no admissible (g1, g2, g3) for {variant} at p={G.p}")


def _order3_case(mx: Maximals) -> FailureCertificate:
    G = mx.group
    M2, M3, I23 = find_intersecting_pair(mx, TypeTag.A5, "A4")
    w = min(_of_order(G, I23, 3))
    W = G.closure([w])
    N = G.normalizer(W)
    k1 = _lowest_over(mx, N)
    M1 = mx[k1]
    if M1.tag not in (TypeTag.DIHEDRAL_PMINUS1, TypeTag.DIHEDRAL_PPLUS1):
        raise ConstructionError(f"maximal subgroup over N(<w>) is {M1.tag.value}, not dihedral")
    I12, I13 = M1.set & M2.set, M1.set & M3.set
    g1s = [g for g in _of_order(G, I23, 3) if g not in M1.set and g not in W]
    g2s = [g for g in _of_order(G, I13, 2) if g not in M2.set]
    g3s = [g for g in _of_order(G, I12, 2) if g not in M3.set]
    members = (k1, M2.index, M3.index)
    notes = {"normalizer_order": N.size, "normalizer_is_maximal": M1.set == N}
    for g1, g3 in itertools.product(g1s, g3s):
        if G.closure([g1, g3]) != M2.set:
            continue
        for g2 in g2s:
            cert = FailureCertificate(G.p, members, (g1, g2, g3), w, variant="order3", notes=notes)
            cert.diagram = {"M1": M1.set, "M2": M2.set, "M3": M3.set, "M1 ∩ M2": I12,
                            "M1 ∩ M3": I13, "M2 ∩ M3": I23, "<g1>": G.closure([g1]),
                            "<g2>": G.closure([g2]), "<g3>": G.closure([g3]), "<w>": W}
            return cert
    raise ConstructionError(f"no admissible (g1, g2, g3) for order3 at p={G.p}")


def construct_failure_certificate(mx: Maximals, variant: str | None = None,
                                  allow_exceptional: bool = False) -> FailureCertificate:
    """Build and verify one of the explicit configurations.

    ``variant`` defaults to the first applicable one.  At p in {7, 11, 19, 31}
    the group has RP, the longest irredundant sequences have length 4 and a
    triple-level configuration says nothing about RP; it is only built when
    ``allow_exceptional`` is set.
    """
    G = mx.group
    p = G.p
    if predict_rp(p) and not (allow_exceptional and p in EXCEPTIONAL):
        raise ConstructionError(f"PSL(2,{p}) has the replacement property; no failure to certify")
    if variant is None:
        options = applicable_variants(p)
        if not options:
            raise ConstructionError(f"no construction applies at p={p}")
        variant = options[0]
    why = variant_obstruction(p, variant)
    if why:
        raise ConstructionError(why)
    cert = _order3_case(mx) if variant == "order3" else _involution_case(mx, variant)
    _check(mx, cert)
    return cert


def _check(mx: Maximals, cert: FailureCertificate) -> None:
    G = mx.group
    sets = [mx[k].set for k in cert.members]
    if not in_general_position(sets):
        raise ConstructionError("constructed triple is not in general position")
    if cert.witness not in radical(sets):
        raise ConstructionError("witness is not in the radical")
    for i, g in enumerate(cert.sequence):
        for j, M in enumerate(sets):
            if (g in M) != (i != j):
                raise ConstructionError(f"g{i + 1} does not correspond to M{j + 1}")
    sizes = replay_failure(G, cert.sequence, cert.witness)
    if sizes is None:
        raise ConstructionError("replacement failure does not replay")
    cert.notes["replay"] = sizes


# -- JSON -----------------------------------------------------------------

def _mat(G: PSL2, g: int) -> list[list[int]]:
    a, b, c, d = G.matrix(g)
    return [[a, b], [c, d]]


def digest(data: dict) -> str:
    body = {k: v for k, v in data.items() if k != "digest"}
    text = json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(text.encode()).hexdigest()


def certificate_to_json(mx: Maximals, cert: FailureCertificate) -> dict:
    G = mx.group
    sets = [mx[k].set for k in cert.members]
    data = {
        "schema_version": SCHEMA_VERSION,
        "kind": "failure_certificate",
        "p": G.p,
        "variant": cert.variant,
        "level": "triple" if G.p in EXCEPTIONAL else "m",
        "tuple": [{"generators": [_mat(G, g) for g in mx[k].generators],
                   "tag": mx[k].tag.label(G.p), "order": mx[k].order} for k in cert.members],
        "sequence": [_mat(G, g) for g in cert.sequence],
        "sequence_orders": [int(G.elem_orders[g]) for g in cert.sequence],
        "witness": _mat(G, cert.witness),
        "witness_order": int(G.elem_orders[cert.witness]),
        "radical_size": radical(sets).size,
        "replay": replay_failure(G, cert.sequence, cert.witness),
    }
    data["digest"] = digest(data)
    return data


# -- replay ---------------------------------------------------------------

@dataclass
class ReplayResult:
    ok: bool
    failed_check: str | None = None
    message: str = ""

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "ok": self.ok,
                "failed_check": self.failed_check, "message": self.message}


class _Reject(Exception):
    def __init__(self, check: str, message: str):
        super().__init__(message)
        self.check = check


def _expect(cond: bool, check: str, message: str) -> None:
    if not cond:
        raise _Reject(check, message)


def _tag_order(tag: str, p: int) -> int | None:
    if tag == "Borel":
        return p * (p - 1) // 2
    if tag in ("A4", "S4", "A5"):
        return {"A4": 12, "S4": 24, "A5": 60}[tag]
    if tag.startswith("D") and tag[1:].isdigit() and int(tag[1:]) in (p - 1, p + 1):
        return int(tag[1:])
    return None


_KEYS = {"schema_version", "kind", "p", "variant", "level", "tuple", "sequence", "sequence_orders",
         "witness", "witness_order", "radical_size", "replay", "digest"}


def replay_certificate(data: dict, check_digest: bool = True, group: PSL2 | None = None) -> ReplayResult:
    """Re-verify a certificate from its JSON form using only group closures.

    Checks run in a fixed order and the first one that fails is reported by
    name.  The digest is checked last, so semantic problems are named even
    when the digest is also wrong.
    """
    try:
        _replay(data, check_digest, group)
    except _Reject as e:
        return ReplayResult(False, e.check, str(e))
    return ReplayResult(True)


def _replay(data: dict, check_digest: bool, group: PSL2 | None) -> None:
    _expect(isinstance(data, dict) and set(data) == _KEYS, "schema", "unexpected or missing fields")
    _expect(data["schema_version"] == SCHEMA_VERSION and data["kind"] == "failure_certificate",
            "schema", "unsupported schema version or kind")
    p = data["p"]
    try:
        check_prime(p)
    except (GroupError, TypeError) as e:
        raise _Reject("prime", str(e)) from None
    G = group if group is not None and group.p == p else build_group(p)

    def element(m, what):
        ok = (isinstance(m, list) and len(m) == 2 and all(isinstance(r, list) and len(r) == 2 for r in m)
              and all(isinstance(x, int) and not isinstance(x, bool) and 0 <= x < p for r in m for x in r))
        _expect(ok, "matrices", f"{what} is not a 2x2 matrix over F_{p}")
        try:
            return G.index(m)
        except GroupError as e:
            raise _Reject("matrices", f"{what}: {e}") from None

    tup = data["tuple"]
    _expect(isinstance(tup, list) and len(tup) >= 2, "schema", "tuple must list at least two members")
    seq = data["sequence"]
    _expect(isinstance(seq, list) and len(seq) == len(tup), "schema", "sequence length differs from tuple length")
    sets = []
    for j, member in enumerate(tup):
        _expect(isinstance(member, dict) and set(member) == {"generators", "tag", "order"},
                "schema", f"member {j + 1} has unexpected fields")
        gens = [element(m, f"generator of member {j + 1}") for m in member["generators"]]
        H = G.closure(gens)
        _expect(H.size == member["order"], "member_order", f"member {j + 1} has order {H.size}")
        _expect(_tag_order(member["tag"], p) == H.size, "member_tag",
                f"tag {member['tag']!r} does not fit order {H.size}")
        sets.append(H)
    _expect(len({s.bits for s in sets}) == len(sets), "distinct_members", "repeated member")
    _expect(in_general_position(sets), "general_position", "tuple is not in general position")
    s = [element(m, f"sequence entry {i + 1}") for i, m in enumerate(seq)]
    _expect(data["sequence_orders"] == [int(G.elem_orders[g]) for g in s], "sequence_orders",
            "recorded element orders of the sequence are wrong")
    w = element(data["witness"], "witness")
    _expect(w != 0, "witness", "witness is the identity")
    _expect(data["witness_order"] == int(G.elem_orders[w]), "witness_order", "recorded witness order is wrong")
    rad = radical(sets)
    _expect(data["radical_size"] == rad.size, "radical", f"radical has size {rad.size}")
    _expect(w in rad, "radical", "witness is outside the radical")
    for i, g in enumerate(s):
        for j, H in enumerate(sets):
            _expect((g in H) == (i != j), "correspondence", f"g{i + 1} vs member {j + 1}")
    _expect(G.closure(s).size == G.order, "generation", "sequence does not generate")
    for i in range(len(s)):
        _expect(G.closure(s[:i] + s[i + 1:]).size < G.order, "irredundance", f"entry {i + 1} is redundant")
    sizes = []
    for i in range(len(s)):
        size = G.closure(s[:i] + [w] + s[i + 1:]).size
        _expect(size < G.order, "replacement", f"witness replaces entry {i + 1}")
        sizes.append(size)
    _expect(data["replay"] == sizes, "replay", f"recorded closure sizes differ from {sizes}")
    _check_variant(data, p)
    if check_digest:
        _expect(data["digest"] == digest(data), "digest", "digest mismatch")


def _check_variant(data: dict, p: int) -> None:
    v = data["variant"]
    tags = [m["tag"] for m in data["tuple"]]
    _expect(data["level"] == ("triple" if p in EXCEPTIONAL else "m"), "level", "level does not match p")
    if v == "search":
        return
    _expect(v in VARIANTS and variant_obstruction(p, v) is None, "variant", f"variant {v!r} not available at p={p}")
    dihedral = tags[1 if v != "order3" else 0].startswith("D")
    if v == "case1":
        ok = tags[0] == tags[2] == "S4" and dihedral and data["witness_order"] == 2 and data["sequence_orders"][1] == 3
    elif v == "case2":
        ok = tags[0] == tags[2] == "A5" and dihedral and data["witness_order"] == 2 and data["sequence_orders"][1] == 5
    else:
        ok = tags[1] == tags[2] == "A5" and dihedral and data["witness_order"] == 3
    _expect(ok and len(tags) == 3, "variant", f"tuple shape does not match variant {v}")


# -- diagram --------------------------------------------------------------

def diagram_dot(mx: Maximals, cert: FailureCertificate) -> str:
    """DOT containment diagram of the named subgroups of a certificate."""
    G = mx.group
    names = list(cert.diagram)
    sets = [cert.diagram[n] for n in names]
    labels = []
    for n, S in zip(names, sets):
        iso = iso_name(G, S)
        if n == "M2" and cert.variant != "order3" and S == G.centralizer(cert.witness):
            n = "M2 = C(w)"
        labels.append(f"{n} ≅ {iso}".replace("<", "⟨").replace(">", "⟩"))
    order = sorted(range(len(sets)), key=lambda i: (-sets[i].size, i))
    lines = [f"graph certificate_p{G.p}_{cert.variant} {{", "  rankdir=TB;"]
    for i in order:
        lines.append(f'  n{i} [label="{labels[i]}"];')
    for i, j in itertools.permutations(range(len(sets)), 2):
        if not (sets[j] < sets[i]):
            continue
        # Hasse edge: nothing named sits strictly between
        if any(sets[j] < sets[k] < sets[i] for k in range(len(sets))):
            continue
        lines.append(f"  n{i} -- n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
