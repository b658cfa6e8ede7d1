import inspect

from fastapi.testclient import TestClient

from bbd.config import settings
from bbd.main import app
from bbd.routers.analysis import router
from bbd.services.bbd_format import serialize
from bbd.services.constructions import build_d8


client = TestClient(app)
HEADERS = {"X-API-Key": settings.api_key}
D8 = serialize(build_d8())


def test_analyze_d8():
    r = client.post("/v1/analyze", json={"graph": D8, "k": 2}, headers=HEADERS)
    assert r.status_code == 200
    body = r.json()
    assert body["strong"]["strong"] is True
    assert body["hamiltonian"] is False
    assert len(body["dominating_pairs"]) == 10


def test_check_condition():
    r = client.post("/v1/check", json={"graph": D8, "condition": "Bk", "params": {"k": 2}}, headers=HEADERS)
    assert r.status_code == 200
    assert r.json()["holds"] is False
    assert r.json()["witness"]["vertices"] == ["X0", "X2"]


def test_check_unknown_condition():
    r = client.post("/v1/check", json={"graph": D8, "condition": "nope"}, headers=HEADERS)
    assert r.status_code == 404


def test_check_missing_parameter():
    r = client.post("/v1/check", json={"graph": D8, "condition": "max_dominating"}, headers=HEADERS)
    assert r.status_code == 400


def test_malformed_graph():
    r = client.post("/v1/cycle-factor", json={"graph": "a=2\nX0 -> X1\n"}, headers=HEADERS)
    assert r.status_code == 400
    assert "line 2" in r.json()["detail"]


def test_cycle_factor_violator():
    graph = "a=2\nX0 -> Y0\nX1 -> Y0\nY0 -> X0\nY1 -> X1\n"
    r = client.post("/v1/cycle-factor", json={"graph": graph}, headers=HEADERS)
    assert r.status_code == 200
    body = r.json()
    assert body["exists"] is False
    assert body["missing_direction"] == "XtoY"
    assert body["violator"]["S"] == ["X0", "X1"]


def test_solver_endpoints_run_in_the_threadpool():
    endpoints = [route.endpoint for route in router.routes]
    assert len(endpoints) == 3
    assert not any(inspect.iscoroutinefunction(endpoint) for endpoint in endpoints)
