import pytest

from conftest import group, rp_report
from psl2rp.genseq import is_generating
from psl2rp.oracle import cyclic_representatives, oracle_check_rp
from psl2rp.rp import witness_set


@pytest.mark.parametrize("p", [7, 13])
def test_oracle_agrees_with_radical_criterion(p):
    G = group(p)
    o = oracle_check_rp(G)
    r = rp_report(p)
    assert o.method == "oracle" and o.status == "resolved"
    assert o.verdict == r.verdict == "holds"
    assert witness_set(G, o) == witness_set(G, r)
    assert o.tuples_examined > 0


def test_oracle_ceiling():
    with pytest.raises(ValueError):
        oracle_check_rp(group(17))


def test_oracle_budget():
    r = oracle_check_rp(group(7), budget=3)
    assert r.status == "unresolved" and r.verdict == "unresolved"


def test_replacing_by_itself_regenerates(G7):
    # the witness quantifier runs over g != 1 only; g_i itself always works
    s = [G7.index([[1, 1], [0, 1]]), G7.index([[1, 0], [1, 1]])]
    for i in range(2):
        t = list(s)
        t[i] = s[i]
        assert is_generating(G7, t)


def test_cyclic_representatives(G13):
    rep = cyclic_representatives(G13)
    for g in range(1, G13.order, 7):
        r = int(rep[g])
        assert r <= g
        assert G13.closure([r]) == G13.closure([g])
