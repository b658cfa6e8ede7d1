from fastapi.testclient import TestClient

from bbd.config import settings
from bbd.main import app


client = TestClient(app)


def test_health():
    r = client.get("/v1/health")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"
    assert r.json()["solver_max_order"] == 2 * settings.solver_max_half_order


def test_analysis_requires_api_key():
    r = client.post("/v1/analyze", json={"graph": "a=1\n", "k": 2})
    assert r.status_code == 401


def test_wrong_api_key_rejected():
    r = client.post("/v1/cycle-factor", json={"graph": "a=1\n"}, headers={"X-API-Key": settings.api_key + "x"})
    assert r.status_code == 401


def test_bearer_token_accepted():
    r = client.post("/v1/cycle-factor", json={"graph": "a=1\n"}, headers={"Authorization": f"Bearer {settings.api_key}"})
    assert r.status_code == 200
