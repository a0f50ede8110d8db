import json

import pytest
from fastapi.testclient import TestClient

from keke.server import SESSION_TTL_SECONDS, create_app


@pytest.fixture()
def client(tmp_path):
    app = create_app(reports_dir=tmp_path / "reports")
    with TestClient(app) as c:
        yield c


def test_levelsets_listing(client):
    response = client.get("/api/levelsets")
    assert response.status_code == 200
    assert response.json() == ["demo", "mini"]


def test_levelset_detail(client):
    response = client.get("/api/levelsets/mini")
    assert response.status_code == 200
    doc = response.json()
    assert doc["name"] == "mini"
    assert [l["id"] for l in doc["levels"]] == ["one-move", "corridor", "push-sink"]
    assert client.get("/api/levelsets/nope").status_code == 404


def test_agents_listing(client):
    response = client.get("/api/agents")
    assert response.json()[:4] == ["bfs", "dfs", "best_first", "random"]


def test_evaluate_returns_report_and_persists(client):
    response = client.post(
        "/api/evaluate",
        json={"agent": "bfs", "levelset": "mini", "max_nodes": 5000},
    )
    assert response.status_code == 200
    doc = response.json()
    assert doc["agent"] == "bfs"
    assert doc["levelset"] == "mini"
    assert len(doc["results"]) == 3
    listing = client.get("/api/reports").json()
    assert [(r["agent"], r["levelset"]) for r in listing] == [("bfs", "mini")]
    detail = client.get("/api/reports/bfs/mini")
    assert detail.status_code == 200
    assert json.loads(detail.text) == doc


def test_evaluate_unknown_levelset(client):
    response = client.post(
        "/api/evaluate", json={"agent": "bfs", "levelset": "missing"}
    )
    assert response.status_code == 404


def test_evaluate_unknown_agent_is_error_report(client):
    response = client.post(
        "/api/evaluate", json={"agent": "nessie", "levelset": "mini"}
    )
    assert response.status_code == 200
    assert response.json()["error"] is not None


def test_report_detail_missing(client):
    assert client.get("/api/reports/none/none").status_code == 404


def test_play_session_one_move_win(client):
    response = client.post(
        "/api/play/new", json={"levelset": "mini", "level_id": "one-move"}
    )
    assert response.status_code == 200
    doc = response.json()
    sid = doc["session"]
    assert doc["outcome"] == "ongoing"
    assert doc["tick"] == 0
    assert "BABA-IS-YOU" in doc["rules"]

    move = client.post(f"/api/play/{sid}/action", json={"action": "R"})
    assert move.status_code == 200
    frame = move.json()
    assert frame["outcome"] == "win"
    assert frame["tick"] == 1

    # terminal sessions reject further actions
    stuck = client.post(f"/api/play/{sid}/action", json={"action": "R"})
    assert stuck.status_code == 409

    assert client.delete(f"/api/play/{sid}").json() == {"deleted": True}
    gone = client.post(f"/api/play/{sid}/action", json={"action": "R"})
    assert gone.status_code == 404


def test_play_rejects_bad_action(client):
    sid = client.post(
        "/api/play/new", json={"levelset": "mini", "level_id": "corridor"}
    ).json()["session"]
    assert (
        client.post(f"/api/play/{sid}/action", json={"action": "X"}).status_code
        == 400
    )


def test_play_unknown_level(client):
    assert (
        client.post(
            "/api/play/new", json={"levelset": "mini", "level_id": "void"}
        ).status_code
        == 404
    )


def test_play_session_expiry(tmp_path):
    now = [0.0]
    app = create_app(reports_dir=tmp_path, clock=lambda: now[0])
    with TestClient(app) as client:
        sid = client.post(
            "/api/play/new", json={"levelset": "mini", "level_id": "corridor"}
        ).json()["session"]
        now[0] += SESSION_TTL_SECONDS + 1
        assert (
            client.post(f"/api/play/{sid}/action", json={"action": "R"}).status_code
            == 404
        )


def test_frames_originate_from_engine(client):
    sid = client.post(
        "/api/play/new", json={"levelset": "mini", "level_id": "corridor"}
    ).json()["session"]
    frame = client.post(f"/api/play/{sid}/action", json={"action": "R"}).json()
    assert frame["ascii"].splitlines()[1].startswith("_b")
    assert frame["tick"] == 1


def test_static_ui_mounts_when_built(tmp_path):
    ui = tmp_path / "ui"
    ui.mkdir()
    (ui / "index.html").write_text("<html><body>keke ui</body></html>")
    app = create_app(reports_dir=tmp_path / "r", ui_dir=ui)
    with TestClient(app) as client:
        page = client.get("/")
        assert page.status_code == 200
        assert "keke ui" in page.text
        # API routes still win over the static mount
        assert client.get("/api/levelsets").status_code == 200
