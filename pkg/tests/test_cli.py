import io
import json

import pytest

from psl2rp.cli import parse_primes, render_text, run, UsageError


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_table_predict():
    code, out = call("table", "7..43", "--mode", "predict")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    holds = [r["p"] for r in doc["rows"] if r["predicted"] == "holds"]
    fails = [r["p"] for r in doc["rows"] if r["predicted"] == "fails"]
    assert holds == [7, 11, 13, 19, 31, 37, 43]
    assert fails == [17, 23, 29, 41]


def test_table_verify_p13():
    code, out = call("table", "13..13", "--mode", "verify")
    row = json.loads(out)["rows"][0]
    assert code == 0 and row["verified"] == "holds" and row["agreement"] is True


def test_empty_range_is_usage_error():
    assert call("table", "20..22")[0] == 2
    with pytest.raises(UsageError):
        parse_primes("8..10")


def test_parse_primes():
    assert parse_primes("7..20") == [7, 11, 13, 17, 19]
    assert parse_primes("13,7") == [7, 13]


def test_maximals():
    code, out = call("maximals", "7")
    doc = json.loads(out)["results"][0]
    assert code == 0 and doc["census"] == {"Borel": 8, "S4": 14}
    code, out = call("maximals", "11")
    assert json.loads(out)["results"][0]["census"]["A5"] == 22
    assert call("maximals", "6")[0] == 2


def test_witnesses_p17():
    code, out = call("witnesses", "17")
    doc = json.loads(out)["results"][0]
    assert code == 0
    assert doc["witness_orders"] == [2]
    assert all(w["order"] == 2 for w in doc["witnesses"])


def test_ceilings():
    assert call("verify", "43")[0] == 2
    assert call("verify", "17", "--mode", "oracle")[0] == 2


def test_certify_and_replay(tmp_path):
    path = tmp_path / "cert.json"
    code, _ = call("certify", "29", "--variant", "order3", "-o", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    assert data["witness_order"] == 3 and data["radical_size"] == 3
    assert call("replay", str(path))[0] == 0
    data["sequence"][0][0][0] = (data["sequence"][0][0][0] + 1) % 29
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out = call("replay", str(bad))
    assert code == 1
    assert json.loads(out)["results"][0]["failed_check"]


def test_certify_bundle_replays(tmp_path):
    path = tmp_path / "all.json"
    assert call("certify", "41", "-o", str(path))[0] == 0
    assert len(json.loads(path.read_text())["certificates"]) == 3
    assert call("replay", str(path))[0] == 0


def test_replay_missing_file(tmp_path):
    assert call("replay", str(tmp_path / "nope.json"))[0] == 2


def test_diagram():
    code, out = call("diagram", "17", "--variant", "case1")
    assert code == 0 and "M1 ∩ M3 ≅ S3" in out and "⟨w⟩ ≅ Z2" in out
    code, out = call("diagram", "29", "--variant", "case2")
    assert "M1 ∩ M3 ≅ D10" in out and "⟨g2⟩ ≅ Z5" in out
    assert call("diagram", "13")[0] == 2
    assert call("diagram", "17", "--variant", "case2")[0] == 2


def test_output_is_deterministic():
    a = call("verify", "17", "--format", "json")
    b = call("verify", "17", "--format", "json", "--threads", "1")
    assert a == b


def test_text_derived_from_json():
    code, out = call("table", "7..13", "--format", "text")
    assert code == 0 and "predicted" in out and "schema_version: 1" in out
    assert render_text({"a": 1, "rows": [{"p": 7}]}).splitlines()[0] == "a: 1"


def test_threads_env(monkeypatch):
    monkeypatch.setenv("PSL2RP_THREADS", "2")
    code, out = call("table", "7..13", "--mode", "verify")
    assert code == 0
    assert [r["p"] for r in json.loads(out)["rows"]] == [7, 11, 13]
    monkeypatch.setenv("PSL2RP_THREADS", "zero")
    assert call("table", "7", "--mode", "verify")[0] == 2


def test_cache_env(monkeypatch, tmp_path):
    monkeypatch.setenv("PSL2RP_CACHE", str(tmp_path))
    a = call("maximals", "13")
    assert any(tmp_path.iterdir())
    assert call("maximals", "13") == a


def test_compute_m_flag():
    code, out = call("verify", "7", "--compute-m")
    doc = json.loads(out)["results"][0]
    assert code == 0 and doc["m"] == 4 and doc["m_source"] == "computed"


def test_unresolved_exit_code():
    assert call("verify", "17", "--budget", "1")[0] == 3
