from __future__ import annotations

import io
import json

import httpx
import pytest
from fastapi.testclient import TestClient

from spinbranch.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, run
from spinbranch.schemas import Report
from spinbranch.service import app


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_branch_example():
    code, out, _ = call("branch", "--m", "3", "--rep", "ds", "--gamma", "3/2,1/2", "--sign", "-")
    assert code == EXIT_OK
    body = json.loads(out)
    assert body["result"]["components"] == [{"tau": ["1"]}]
    assert set(body) >= {"request", "result", "checks"}


def test_orbit_image_example():
    code, out, _ = call("orbit-image", "--m", "3", "--kind", "elliptic", "--a", "2,1")
    body = json.loads(out)
    assert code == EXIT_OK and body["result"]["x1"] == ["1", "2"] and body["result"]["pf"] == "+"


def test_duflo_example():
    code, out, _ = call("duflo-verify", "--m", "3", "--rep", "ds", "--gamma", "3/2,1/2", "--sign", "-", "--bound", "5")
    assert code == EXIT_OK and json.loads(out)["result"]["matched"] is True


def test_mismatch_exit_code():
    code, out, _ = call("analysis-verify", "--check", "kbessel", "--tol", "kbessel=1e-15")
    assert code == EXIT_MISMATCH
    assert json.loads(out)["checks"][0]["pass"] is False


@pytest.mark.parametrize("argv", [
    ("branch", "--m", "3", "--rep", "ds", "--gamma", "3/2,1/2"),
    ("classify", "--m", "3", "--gamma", "3/x"),
    ("orbit-image", "--m", "3", "--kind", "hyperbolic", "--a", "2,1"),
    ("classify",),
    ("frobnicate",),
])
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == EXIT_USAGE and out == ""


def test_usage_error_is_json_on_stderr():
    _, _, err = call("branch", "--m", "3", "--rep", "ds", "--gamma", "3/2,1/2")
    assert "error" in json.loads(err)


def test_csv_and_text_output():
    code, out, _ = call("branch", "--m", "5", "--rep", "pij", "--gamma", "7/2,3/2,1/2", "--j", "2", "--output", "csv")
    assert code == EXIT_OK
    assert out.splitlines() == ["tau1,tau2", "1,0", "2,0"]
    code, out, _ = call("orbit-image", "--m", "3", "--kind", "nonelliptic", "--a", "2,1", "--output", "csv")
    assert out.splitlines()[:2] == ["slot,lo,hi,lo_open,hi_open", "x1,0,2,False,False"]
    code, out, _ = call("self-test", "--output", "text")
    assert code == EXIT_OK and out.startswith("self-test: ok") and "[FAIL]" not in out


def test_determinism_and_round_trip():
    argv = ("orbit-image", "--m", "5", "--kind", "nonsemisimple", "--a", "3,1", "--sign", "-",
            "--b", "0.6,0.3,0.275")
    first, second = call(*argv), call(*argv)
    assert first == second and first[0] == EXIT_OK
    for argv in [argv, ("classify", "--m", "4", "--gamma", "2,1,0"),
                 ("duflo-verify", "--m", "4", "--rep", "ps", "--mu", "1,0", "--nu", "1.5i", "--bound", "4")]:
        code, out, _ = call(*argv)
        report = Report.model_validate(json.loads(out))
        req, res = report.typed()
        assert req.m == int(argv[2])
        body = json.loads(out)
        assert report.model_dump(by_alias=True) == body
        typed = res.model_dump(by_alias=True)
        assert all(body["result"][k] == v for k, v in typed.items() if k in body["result"])


def test_remote_mode_matches_local(monkeypatch):
    client = TestClient(app)

    def fake_post(url, json=None, timeout=None):
        return client.post(url.replace("http://svc", ""), json=json)

    monkeypatch.setattr(httpx, "post", fake_post)
    argv = ("branch", "--m", "3", "--rep", "ps", "--mu", "1", "--nu", "2i")
    local = call(*argv)
    remote = call(*argv, "--url", "http://svc")
    assert local[0] == remote[0] == EXIT_OK
    assert json.loads(local[1]) == json.loads(remote[1])
    code, _, err = call("branch", "--m", "3", "--rep", "ds", "--gamma", "3/2,3/2", "--sign", "+", "--url", "http://svc")
    assert code == EXIT_USAGE and "error" in json.loads(err)
