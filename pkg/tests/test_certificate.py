import copy
import json
import random

import pytest

from conftest import group, maximals, rp_report
from psl2rp.certificate import (ConstructionError, applicable_variants, certificate_to_json,
                                construct_failure_certificate, diagram_dot, digest, replay_certificate)
from psl2rp.rp import verify_certificate, witness_set
from psl2rp.subgroups import iso_name

CASES = [(17, "case1"), (23, "case1"), (29, "case2"), (29, "order3"),
         (41, "case1"), (41, "case2"), (41, "order3")]


def _cert(p, variant, allow=False):
    return construct_failure_certificate(maximals(p), variant, allow_exceptional=allow)


def test_applicable_variants():
    assert applicable_variants(17) == ["case1"]
    assert applicable_variants(29) == ["case2", "order3"]
    assert applicable_variants(41) == ["case1", "case2", "order3"]
    assert applicable_variants(13) == []


@pytest.mark.parametrize("p,variant", CASES)
def test_construction_replays(p, variant):
    mx = maximals(p)
    cert = _cert(p, variant)
    verify_certificate(mx, cert)
    data = certificate_to_json(mx, cert)
    assert replay_certificate(data, group=mx.group).ok
    # the witness is a genuine element of W(G)
    assert cert.witness in witness_set(mx.group, rp_report(p))


def test_case1_p17_shape():
    mx = maximals(17)
    G = mx.group
    cert = _cert(17, "case1")
    M1, M2, M3 = (mx[k] for k in cert.members)
    g1, g2, g3 = cert.sequence
    assert G.elem_orders[cert.witness] == 2 and G.elem_orders[g2] == 3
    assert G.closure([g1, g2]) == M3.set and iso_name(G, M3.set) == "S4"
    assert M2.set == G.centralizer(cert.witness)
    assert iso_name(G, M1.set & M3.set) == "S3"


def test_case2_p29_shape():
    mx = maximals(29)
    G = mx.group
    cert = _cert(29, "case2")
    M1, _, M3 = (mx[k] for k in cert.members)
    assert G.elem_orders[cert.witness] == 2 and G.elem_orders[cert.sequence[1]] == 5
    assert iso_name(G, M1.set & M3.set) == "D10"


def test_order3_p29_shape():
    mx = maximals(29)
    G = mx.group
    cert = _cert(29, "order3")
    M1, M2, M3 = (mx[k] for k in cert.members)
    rad = M1.set & M2.set & M3.set
    assert iso_name(G, rad) == "Z3" and G.elem_orders[cert.witness] == 3
    assert iso_name(G, M2.set & M3.set) == "A4"
    assert iso_name(G, M1.set & M2.set) == "S3" == iso_name(G, M1.set & M3.set)
    g1, _, g3 = cert.sequence
    assert G.closure([g1, g3]) == M2.set
    assert G.closure([g1]) != G.closure([cert.witness])


def test_rejected_when_rp_holds():
    with pytest.raises(ConstructionError):
        construct_failure_certificate(maximals(13))
    with pytest.raises(ConstructionError):
        construct_failure_certificate(maximals(11), "case2")


def test_variant_obstruction_named():
    with pytest.raises(ConstructionError, match="mod 8"):
        _cert(29, "case1")
    with pytest.raises(ConstructionError, match="mod 10"):
        _cert(17, "order3")


@pytest.mark.parametrize("p", [11, 19, 31])
def test_triple_level_at_exceptional_primes(p):
    mx = maximals(p)
    for v in applicable_variants(p):
        data = certificate_to_json(mx, _cert(p, v, allow=True))
        assert data["level"] == "triple"
        assert replay_certificate(data, group=mx.group).ok


def test_schema_fields():
    data = certificate_to_json(maximals(17), _cert(17, "case1"))
    assert data["schema_version"] == 1
    assert data["radical_size"] >= 2
    assert data["digest"] == digest(data)
    assert json.loads(json.dumps(data)) == data
    assert [m["tag"] for m in data["tuple"]] == ["S4", "D16", "S4"]


# -- mutations ----------------------------------------------------------------

def _paths(obj, prefix=()):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _paths(obj[k], prefix + (k,))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _paths(v, prefix + (i,))
    else:
        yield prefix


def _get(obj, path):
    for k in path:
        obj = obj[k]
    return obj


def _set(obj, path, value):
    for k in path[:-1]:
        obj = obj[k]
    obj[path[-1]] = value


def mutate(data, rng):
    """Change one leaf field to a different value of the same kind."""
    out = copy.deepcopy(data)
    path = rng.choice(list(_paths(data)))
    old = _get(data, path)
    p = data["p"]
    if isinstance(old, bool):
        new = not old
    elif isinstance(old, int):
        if path[0] in ("sequence", "witness") or "generators" in path:
            new = (old + rng.randrange(1, p)) % p
        else:
            new = old + rng.choice([-2, -1, 1, 2, 7])
    elif isinstance(old, str):
        new = rng.choice([s for s in ("S4", "A5", "D16", "case1", "case2", "order3", "m", "triple", "x", old + "0")
                          if s != old])
    else:
        new = 0
    _set(out, path, new)
    return out, path


@pytest.mark.parametrize("p,variant", CASES)
def test_replay_rejects_single_field_mutations(p, variant):
    mx = maximals(p)
    data = certificate_to_json(mx, _cert(p, variant))
    rng = random.Random(p * 7 + len(variant))
    for _ in range(120):
        bad, path = mutate(data, rng)
        res = replay_certificate(bad, group=mx.group)
        assert not res.ok, path
        assert res.failed_check


@pytest.mark.parametrize("p,variant", [(17, "case1"), (29, "order3")])
def test_semantic_checks_without_digest(p, variant):
    """With the digest recomputed, a mutation is rejected unless it is itself a valid certificate."""
    mx = maximals(p)
    G = mx.group
    data = certificate_to_json(mx, _cert(p, variant))
    rng = random.Random(1)
    rejected = 0
    for _ in range(150):
        bad, _ = mutate(data, rng)
        bad["digest"] = digest(bad)
        res = replay_certificate(bad, group=G)
        if res.ok:
            # accepted only if an independent check also finds it valid
            s = [G.index(m) for m in bad["sequence"]]
            w = G.index(bad["witness"])
            assert G.generates(s) and w != 0
            assert all(G.closure(s[:i] + [w] + s[i + 1:]).size < G.order for i in range(len(s)))
        else:
            rejected += 1
            assert res.failed_check != "digest"
    assert rejected > 100


def test_failing_check_is_named():
    mx = maximals(17)
    data = certificate_to_json(mx, _cert(17, "case1"))
    bad = copy.deepcopy(data)
    bad["replay"][0] += 1
    assert replay_certificate(bad, group=mx.group).failed_check == "replay"
    bad = copy.deepcopy(data)
    bad["schema_version"] = 99
    assert replay_certificate(bad).failed_check == "schema"
    bad = copy.deepcopy(data)
    bad["p"] = 15
    assert replay_certificate(bad).failed_check == "prime"


# -- diagrams -----------------------------------------------------------------

def test_diagram_case1_labels():
    dot = diagram_dot(maximals(17), _cert(17, "case1"))
    for label in ("M1 ≅ S4", "M1 ∩ M3 ≅ S3", "⟨w⟩ ≅ Z2", "M2 = C(w) ≅ D16", "A ≅ V4", "⟨g2⟩ ≅ Z3"):
        assert label in dot


def test_diagram_case2_labels():
    dot = diagram_dot(maximals(29), _cert(29, "case2"))
    assert "M1 ∩ M3 ≅ D10" in dot and "⟨g2⟩ ≅ Z5" in dot


def test_diagram_order3_labels():
    dot = diagram_dot(maximals(29), _cert(29, "order3"))
    for label in ("M1 ≅ D30", "M2 ∩ M3 ≅ A4", "M1 ∩ M2 ≅ S3", "⟨w⟩ ≅ Z3"):
        assert label in dot


def test_diagram_edges_are_containments():
    mx = maximals(17)
    cert = _cert(17, "case1")
    dot = diagram_dot(mx, cert)
    names = list(cert.diagram)
    for line in dot.splitlines():
        if "--" in line:
            a, b = (int(x.strip(" ;n")) for x in line.split("--"))
            assert cert.diagram[names[b]] < cert.diagram[names[a]]
