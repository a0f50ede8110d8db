"""HTTP API consumed by the web UI; mirrors the CLI's behaviour.

All game logic stays on this side: the UI only posts actions and renders
the frames it gets back. Play sessions are in-memory values that expire
after 30 minutes idle; evaluation runs are serialized through a single
gate so wall-clock scores are not skewed by concurrent runs.
"""
from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel

from .agents import Budget, available_agents
from .bundled import UnknownLevelSet, list_level_sets, load_bundled
from .engine import (
    GameState,
    SteppedTerminalState,
    init_state,
    parse_actions,
    step,
)
from .evaluator import evaluate_agent, read_report, report_to_json, write_report
from .levels import KekeError, serialize_ascii_map

SESSION_TTL_SECONDS = 30 * 60


class EvaluateRequest(BaseModel):
    agent: str
    levelset: str
    seed: int = 0
    max_nodes: int = 100_000
    max_millis: int = 60_000
    max_len: int = 200
    deterministic: bool = False


class PlayNewRequest(BaseModel):
    levelset: str
    level_id: str


class PlayActionRequest(BaseModel):
    action: str


@dataclass
class _Session:
    state: GameState
    touched: float


def _frame(state: GameState) -> dict:
    return {
        "ascii": serialize_ascii_map(state.board),
        "rules": list(state.rules.render()),
        "outcome": state.outcome.value,
        "tick": state.tick,
    }


def create_app(
    reports_dir: Path | None = None,
    ui_dir: Path | None = None,
    deterministic: bool = False,
    clock=time.monotonic,
) -> FastAPI:
    app = FastAPI(title="keke", docs_url=None, redoc_url=None)
    sessions: dict[str, _Session] = {}
    evaluate_gate = threading.Lock()
    reports_dir = Path(reports_dir) if reports_dir is not None else None

    def _expire_sessions() -> None:
        now = clock()
        for sid in [
            sid
            for sid, session in sessions.items()
            if now - session.touched > SESSION_TTL_SECONDS
        ]:
            del sessions[sid]

    def _get_session(sid: str) -> _Session:
        _expire_sessions()
        session = sessions.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown or expired session")
        return session

    @app.get("/api/levelsets")
    def levelsets() -> list[str]:
        return list(list_level_sets())

    @app.get("/api/levelsets/{name}")
    def levelset(name: str) -> dict:
        try:
            level_set = load_bundled(name)
        except UnknownLevelSet:
            raise HTTPException(status_code=404, detail=f"unknown level set {name!r}")
        return {
            "name": level_set.name,
            "levels": [
                {
                    "id": level.id,
                    "name": level.name,
                    "author": level.author,
                    "ascii": level.ascii,
                    "solution": level.solution,
                }
                for level in level_set.levels
            ],
        }

    @app.get("/api/agents")
    def agents() -> list[str]:
        return list(available_agents())

    @app.post("/api/evaluate")
    def evaluate(request: EvaluateRequest) -> Response:
        try:
            level_set = load_bundled(request.levelset)
        except UnknownLevelSet:
            raise HTTPException(
                status_code=404, detail=f"unknown level set {request.levelset!r}"
            )
        budget = Budget(
            max_nodes=request.max_nodes,
            max_millis=request.max_millis,
            max_solution_length=request.max_len,
        )
        with evaluate_gate:
            report = evaluate_agent(
                request.agent, level_set, budget, seed=request.seed
            )
        normalized = request.deterministic or deterministic
        if reports_dir is not None:
            reports_dir.mkdir(parents=True, exist_ok=True)
            write_report(
                report,
                reports_dir / f"{report.agent}_{level_set.name}.json",
                deterministic=normalized,
            )
        return Response(
            content=report_to_json(report, deterministic=normalized),
            media_type="application/json",
        )

    @app.get("/api/reports")
    def reports() -> list[dict]:
        if reports_dir is None or not reports_dir.is_dir():
            return []
        found = []
        for path in sorted(reports_dir.glob("*.json")):
            try:
                report = read_report(path)
            except KekeError:
                continue
            found.append(
                {
                    "agent": report.agent,
                    "levelset": report.levelset,
                    "solve_rate": report.solve_rate,
                    "avg_score": report.avg_score,
                    "error": report.error,
                    "submitted_at": report.submitted_at,
                }
            )
        return found

    @app.get("/api/reports/{agent}/{levelset}")
    def report_detail(agent: str, levelset: str) -> Response:
        if reports_dir is None:
            raise HTTPException(status_code=404, detail="no reports directory")
        path = reports_dir / f"{agent}_{levelset}.json"
        if not path.is_file():
            raise HTTPException(status_code=404, detail="no such report")
        return Response(content=path.read_text(), media_type="application/json")

    @app.post("/api/play/new")
    def play_new(request: PlayNewRequest) -> dict:
        _expire_sessions()
        try:
            level_set = load_bundled(request.levelset)
            level = level_set.get(request.level_id)
        except (UnknownLevelSet, KeyError):
            raise HTTPException(status_code=404, detail="unknown level")
        state = init_state(level)
        sid = uuid.uuid4().hex[:16]
        sessions[sid] = _Session(state=state, touched=clock())
        return {"session": sid, **_frame(state)}

    @app.post("/api/play/{sid}/action")
    def play_action(sid: str, request: PlayActionRequest) -> dict:
        session = _get_session(sid)
        try:
            (action,) = parse_actions(request.action)
        except ValueError:
            raise HTTPException(
                status_code=400, detail=f"bad action {request.action!r}"
            )
        try:
            session.state = step(session.state, action)
        except SteppedTerminalState:
            raise HTTPException(status_code=409, detail="session is terminal")
        session.touched = clock()
        return _frame(session.state)

    @app.delete("/api/play/{sid}")
    def play_delete(sid: str) -> dict:
        sessions.pop(sid, None)
        return {"deleted": True}

    if ui_dir is not None and ui_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
