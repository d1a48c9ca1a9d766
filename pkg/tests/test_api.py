import mpmath
import pytest
from fastapi.testclient import TestClient

from main import app

client = TestClient(app)


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy"}


def test_eval():
    response = client.post("/eval", json={"c": -4.0, "kappa": 1.0})
    assert response.status_code == 200
    body = response.json()
    assert body["u"]["value"] == pytest.approx(float(mpmath.besseli(0, 2)), rel=1e-14)
    assert body["u_second"]["value"] == pytest.approx(float(mpmath.besseli(2, 2)), rel=1e-14)
    assert body["params"] == {"c": -4.0, "kappa": 1.0}


@pytest.mark.parametrize("payload", [{"c": 0.0, "kappa": 1.0}, {"c": -1.0, "kappa": 0.0}])
def test_eval_rejects_bad_parameters(payload):
    response = client.post("/eval", json=payload)
    assert response.status_code == 422


def test_eval_degenerate_allowed():
    response = client.post("/eval", json={"c": 0.0, "kappa": 1.0, "allow_degenerate": True})
    assert response.status_code == 200
    assert response.json()["u"]["value"] == 1.0


def test_certify_default_conditions():
    response = client.post("/certify", json={"c": -1.0, "kappa": 1.0, "alpha": 0.0, "beta": 0.0})
    assert response.status_code == 200
    body = response.json()
    ids = [c["condition_id"] for c in body["certificates"]]
    assert ids == ["T1_HH", "T2_Q", "T3_GH", "T4_66", "T6_G_HH", "T8_G_66"]
    assert body["certificates"][0]["margin"] == pytest.approx(0.16877501825550674, rel=1e-12)
    assert body["all_hold"] is False


def test_certify_with_rtau():
    response = client.post("/certify", json={
        "c": -1.0, "kappa": 1.0, "alpha": 0.0, "beta": 0.0,
        "A": 1.0, "B": 0.0, "tau": 1.0, "conditions": ["T5_D3", "T7_D3EXP"],
    })
    assert response.status_code == 200
    t5, t7 = response.json()["certificates"]
    assert t5["holds"] is True
    assert t5["meta"]["scale"] == pytest.approx(1.0)
    assert t7["condition_id"] == "T7_D3EXP"


def test_certify_accepts_tau_as_pair():
    response = client.post("/certify", json={
        "c": -1.0, "kappa": 1.0, "alpha": 0.0, "beta": 0.0,
        "A": 1.0, "B": 0.0, "tau": [0.0, 2.0], "conditions": ["T5_D3"],
    })
    assert response.status_code == 200
    (t5,) = response.json()["certificates"]
    assert t5["meta"]["scale"] == pytest.approx(2.0)
    assert t5["meta"]["rtau"]["tau"] == [0.0, 2.0]
    assert t5["holds"] is False


@pytest.mark.parametrize("payload", [
    {"c": -1.0, "kappa": 1.0, "alpha": 2.0, "beta": 0.0},
    {"c": -1.0, "kappa": 1.0, "alpha": 0.0, "beta": 0.0, "A": 1.0},
    {"c": -1.0, "kappa": 1.0, "alpha": 0.0, "beta": 0.0, "conditions": ["T5_D3"]},
    {"c": 1.0, "kappa": 1.0, "alpha": 0.0, "beta": 0.0},
])
def test_certify_rejects_invalid_requests(payload):
    assert client.post("/certify", json=payload).status_code == 422
