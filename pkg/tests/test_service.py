import numpy as np
import pytest
from fastapi.testclient import TestClient

from duality.service import create_app
from duality.states import pure_state, state_to_dict


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


@pytest.fixture(scope="module")
def cusp_payload():
    rho = pure_state([0.5, 0.5, 0.0], [np.pi, 0.0, 0.0])
    return state_to_dict(rho)


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_measure_endpoint(client, cusp_payload):
    resp = client.post(
        "/measure", json={"state": cusp_payload, "measure": "one-guess"}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["p"] == pytest.approx(0.25, abs=1e-9)
    assert body["v"] == pytest.approx(0.5, abs=1e-6)
    assert body["argmax_fourier"]["family"] == "central-n3-first"
    assert not body["lower_bound_only"]


def test_measure_invalid_state_gives_422(client):
    bad = {"n": 2, "entries": [[[0.5, 0.0], [0.8, 0.0]], [[0.8, 0.0], [0.5, 0.0]]]}
    resp = client.post("/measure", json={"state": bad, "measure": "purity"})
    assert resp.status_code == 422
    body = resp.json()
    assert body["error"] == "NotPositive"


def test_measure_unknown_measure_gives_422(client, cusp_payload):
    resp = client.post("/measure", json={"state": cusp_payload, "measure": "wat"})
    assert resp.status_code == 422
    assert resp.json()["error"] == "BadMeasure"


def test_border_endpoint_quarter_circle(client):
    resp = client.post("/border", json={"n": 3, "measure": "linear", "samples": 11})
    assert resp.status_code == 200
    curves = resp.json()["curves"]
    assert len(curves) == 1
    pts = curves[0]["points"]
    assert len(pts) == 11
    worst = max(abs(q["p"] ** 2 + q["v"] ** 2 - 1) for q in pts)
    assert worst < 1e-9


def test_border_both_curves(client):
    resp = client.post(
        "/border", json={"n": 3, "measure": "one-guess", "samples": 11, "curve": "both"}
    )
    labels = [c["label"] for c in resp.json()["curves"]]
    assert labels == ["outer", "inner"]


def test_border_dispatch_errors(client):
    resp = client.post("/border", json={"n": 6, "measure": "linear", "samples": 5})
    assert resp.status_code == 422
    resp = client.post(
        "/border", json={"n": 3, "measure": "linear", "samples": 5, "curve": "bogus"}
    )
    assert resp.status_code == 422


def test_border_conjectured_curves(client):
    resp = client.post("/border", json={"n": 4, "measure": "linear", "samples": 9})
    curve = resp.json()["curves"][0]
    assert curve["kind"] == "conjectured"
    resp = client.post("/border", json={"n": 10, "measure": "entropy", "samples": 9})
    assert resp.json()["curves"][0]["kind"] == "conjectured"
    resp = client.post("/border", json={"n": 7, "measure": "renyi:inf", "samples": 9})
    assert resp.json()["curves"][0]["kind"] == "analytic"


def test_scan_deterministic(client):
    req = {"n": 2, "measure": "purity", "count": 5, "seed": 3}
    a = client.post("/scan", json=req).json()
    b = client.post("/scan", json=req).json()
    assert a == b
    assert len(a["points"]) == 5


def test_simulate_records_and_estimate(client, cusp_payload):
    req = {
        "state": cusp_payload,
        "shots": 5000,
        "seed": 11,
        "measure": "one-guess",
        "optimize": True,
    }
    body = client.post("/simulate", json=req).json()
    assert body["records"][0]["mode"] == "particle"
    assert body["records"][1]["mode"] == "wave"
    est = body["estimate"]
    assert est["p"] == pytest.approx(0.25, abs=5 * est["p_stderr"] + 0.02)
    assert est["v"] == pytest.approx(0.5, abs=5 * est["v_stderr"] + 0.02)


def test_simulate_estimate_needs_wave_runs(client, cusp_payload):
    req = {"state": cusp_payload, "shots": 100, "measure": "one-guess"}
    resp = client.post("/simulate", json=req)
    assert resp.status_code == 422
    assert resp.json()["error"] == "EmptyRuns"


def test_simulate_with_explicit_fourier(client, cusp_payload):
    fam = {"n": 3, "family": "central-n3-first", "input_phases": [0.0, 0.0, 0.0]}
    req = {"state": cusp_payload, "shots": 2000, "seed": 1, "fourier": [fam]}
    body = client.post("/simulate", json=req).json()
    wave = body["records"][1]
    assert wave["fourier"]["family"] == "central-n3-first"
    # the state is a fixed point of this transform: detector 3 stays silent
    assert wave["counts"][2] == 0


def test_verify_endpoint(client):
    body = client.post("/verify", json={"suite": "qunit"}).json()
    assert body["suite"] == "qunit"
    assert body["passed"] is True
    assert all("residual" in c for c in body["checks"])
    resp = client.post("/verify", json={"suite": "nope"})
    assert resp.status_code == 422


def test_border_curve_selector_mismatches(client):
    resp = client.post(
        "/border", json={"n": 2, "measure": "purity", "samples": 5, "curve": "inner"}
    )
    assert resp.status_code == 422
    resp = client.post(
        "/border",
        json={"n": 3, "measure": "linear", "samples": 5, "curve": "conjectured"},
    )
    assert resp.status_code == 422
