from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from spinbranch.schemas import BranchResult, DufloResult, OrbitImageResult, Report
from spinbranch.service import app, build_rep, dispatch, parse_nu
from spinbranch.schemas import RepSpec

client = TestClient(app)


def test_health():
    r = client.get("/health")
    assert r.status_code == 200 and r.json()["status"] == "ok"


def test_branch_endpoint():
    r = client.post("/branch", json={"m": 3, "rep": "ds", "gamma": ["3/2", "1/2"], "sign": "-"})
    assert r.status_code == 200
    body = r.json()
    assert body["result"]["components"] == [{"tau": ["1"]}]
    _, res = Report.model_validate(body).typed()
    assert isinstance(res, BranchResult)


def test_orbit_image_endpoint_with_point():
    r = client.post("/orbit-image", json={"m": 3, "kind": "elliptic", "a": ["2", "1"], "b": [1.0, 0.0]})
    body = r.json()
    assert body["result"]["x1"] == ["1", "2"] and body["result"]["pf"] == "+"
    assert all(c["pass"] for c in body["checks"]) and body["ok"]
    _, res = Report.model_validate(body).typed()
    assert isinstance(res, OrbitImageResult)


def test_duflo_endpoint():
    payload = {"m": 5, "rep": "aq", "j": 2, "lam": ["1", "0", "0"], "bound": "5"}
    body = client.post("/duflo-verify", json=payload).json()
    assert body["result"]["matched"] is True
    assert body["result"]["branch_set"] == [["1", "0"], ["2", "0"]]
    _, res = Report.model_validate(body).typed()
    assert isinstance(res, DufloResult)


@pytest.mark.parametrize("command,payload", [
    ("branch", {"m": 3, "rep": "ds", "gamma": ["3/2", "1/2"]}),  # missing sign
    ("branch", {"m": 4, "rep": "ds", "gamma": ["2", "1", "0"], "sign": "+"}),  # no DS for even m
    ("classify", {"m": 1, "gamma": ["1"]}),
    ("orbit-image", {"m": 3, "kind": "elliptic", "a": ["1", "2"]}),
    ("duflo-verify", {"m": 3, "rep": "ps", "mu": ["3"], "nu": "1i", "bound": "1"}),
])
def test_bad_requests_give_422(command, payload):
    assert client.post(f"/{command}", json=payload).status_code == 422


def test_classify_and_self_test_dispatch():
    rep = dispatch("classify", {"m": 3, "gamma": ["3/2", "1/2"]})
    assert rep.result["class"] == "Lambda0" and len(rep.result["irreducibles"]) == 4
    req, res = rep.typed()
    assert res.infl_class == "Lambda0" and req.m == 3
    st = dispatch("self-test", {"seed": 0})
    assert st.ok and st.result["failed"] == 0


def test_parse_nu_and_build_rep():
    assert parse_nu("3/2") == parse_nu("1.5")
    assert parse_nu("2i") == 2j
    assert parse_nu("0.5+1.5i") == 0.5 + 1.5j
    with pytest.raises(ValueError):
        parse_nu("abc")
    with pytest.raises(ValueError):
        build_rep(RepSpec(m=3, rep="pij", gamma=["3/2", "3/2"], j=1))
