import json
from pathlib import Path

from fanocalc.claims import ClaimResult, enumerative_claims_check, load_claims

DATA = Path(__file__).resolve().parents[1] / "src" / "fanocalc" / "data"


def test_all_bundled_claims_exact():
    report = enumerative_claims_check()
    assert report.ok
    statuses = {r.claim_id: r.status for r in report.results}
    assert statuses["case2/table1"] == "exact"
    assert statuses["case2/rmax14-unique"] == "exact"
    assert statuses["case5/rmax13-p4eq1-packings"] == "exact"
    assert statuses["case3/one-twelfth-descendants"] == "exact"
    assert statuses["case5/rx504-min-k3"] == "exact"
    assert statuses["case4/rmax24-min-k3"] == "exact"
    # the ledger-facing r_X possibility sets are all pinned
    for rmax in (9, 10, 11, 12, 13):
        assert statuses[f"case5/rmax{rmax}-rx-set"] == "exact"


def test_claims_report_is_sorted_and_serialisable():
    report = enumerative_claims_check()
    ids = [r.claim_id for r in report.results]
    assert ids == sorted(ids)
    payload = report.to_json()
    assert payload["ok"] is True
    json.dumps(payload)


def test_superset_is_reported_not_hidden(tmp_path):
    # drop one expected row from a claim: the enumeration now returns a
    # strict superset, which must surface as such
    claims = load_claims()
    table = json.loads((DATA / "table1.json").read_text())
    target = next(c for c in claims if c["id"] == "case2/table1")
    target["expected"] = table["rows"][1:]
    from fanocalc.claims import _check_enumeration

    result = _check_enumeration(target)
    assert result.status == "superset"
    assert "extras" in result.detail


def test_mismatched_value_is_reported():
    claims = load_claims()
    target = next(c for c in claims if c["id"] == "case2/rmax14-unique")
    target["expected"][0]["k3"] = "1/7"
    from fanocalc.claims import _check_enumeration

    result = _check_enumeration(target)
    assert result.status == "mismatch"


def test_claim_result_json():
    result = ClaimResult("x", "exact", "fine")
    assert result.to_json() == {"id": "x", "status": "exact", "detail": "fine"}
