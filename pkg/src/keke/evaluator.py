"""Run agents over level sets, score them, rank them, persist reports.

The competition metric rewards short solutions found fast: a solved
level scores (1 / seconds) / solution-length, and an agent's average is
taken over its solved levels only. Ranking puts error-free agents above
errored ones, then more solved levels, then higher average score, then
earlier submission.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable

import jsonschema

from .agents import Budget, Clock, preprocess_agent, solve
from .engine import render_actions
from .levels import KekeError, LevelSet, SchemaError

EPOCH_ISO = "1970-01-01T00:00:00+00:00"


class DomainError(KekeError):
    """A score was requested for inputs outside the metric's domain."""


@dataclass(frozen=True, slots=True)
class LevelResult:
    level_id: str
    solved: bool
    solution: str
    length: int
    elapsed_millis: int
    nodes_expanded: int
    score: float


@dataclass(frozen=True, slots=True)
class AgentReport:
    agent: str
    levelset: str
    results: tuple[LevelResult, ...]
    solve_rate: float
    avg_score: float
    error: str | None
    submitted_at: str

    def solved_count(self) -> int:
        return sum(1 for r in self.results if r.solved)


@dataclass(frozen=True, slots=True)
class Leaderboard:
    entries: tuple[AgentReport, ...]


def level_score(elapsed_millis: int, length: int) -> float:
    """(1 / seconds) / length; higher is better."""
    if elapsed_millis <= 0 or length < 1:
        raise DomainError(
            f"score needs positive time and length, got {elapsed_millis}ms / {length}"
        )
    return (1.0 / (elapsed_millis / 1000.0)) / length


def evaluate_agent(
    agent: str,
    level_set: LevelSet,
    budget: Budget | None = None,
    *,
    seed: int = 0,
    clock: Clock = time.perf_counter,
    now: Callable[[], datetime] | None = None,
) -> AgentReport:
    """Run one agent over every level of a set, in file order.

    Failures never escape: a preprocessing failure (unknown agent,
    missing entry point) skips all levels, and a crash mid-run stops the
    sweep; both end up in the report's error field.
    """
    if not level_set.levels:
        raise ValueError("level set is empty")
    budget = budget or Budget()
    submitted = (now() if now is not None else datetime.now(timezone.utc)).isoformat()

    results: list[LevelResult] = []
    error = preprocess_agent(agent)
    if error is None:
        for level in level_set.levels:
            try:
                outcome = solve(agent, level, budget, seed=seed, clock=clock)
            except Exception as exc:  # agent code is untrusted
                error = f"level {level.id}: {exc}"
                break
            # A sub-millisecond solve still took time; floor at 1ms so the
            # metric stays finite.
            score = (
                level_score(max(1, outcome.elapsed_millis), len(outcome.actions))
                if outcome.solved
                else 0.0
            )
            results.append(
                LevelResult(
                    level_id=level.id,
                    solved=outcome.solved,
                    solution=render_actions(outcome.actions),
                    length=len(outcome.actions),
                    elapsed_millis=outcome.elapsed_millis,
                    nodes_expanded=outcome.nodes_expanded,
                    score=score,
                )
            )

    solved_scores = [r.score for r in results if r.solved]
    return AgentReport(
        agent=agent,
        levelset=level_set.name,
        results=tuple(results),
        solve_rate=len(solved_scores) / len(level_set.levels),
        avg_score=sum(solved_scores) / len(solved_scores) if solved_scores else 0.0,
        error=error,
        submitted_at=submitted,
    )


def _submitted_key(stamp: str) -> datetime:
    parsed = datetime.fromisoformat(stamp.replace("Z", "+00:00"))
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed


def rank_agents(reports: Iterable[AgentReport]) -> Leaderboard:
    """Order reports by the competition's criteria; stable for full ties."""
    ordered = sorted(
        reports,
        key=lambda r: (
            0 if r.error is None else 1,
            -r.solved_count(),
            -r.avg_score,
            _submitted_key(r.submitted_at),
        ),
    )
    return Leaderboard(tuple(ordered))


_REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "agent",
        "levelset",
        "submitted_at",
        "error",
        "results",
        "solve_rate",
        "avg_score",
    ],
    "properties": {
        "agent": {"type": "string"},
        "levelset": {"type": "string"},
        "submitted_at": {"type": "string"},
        "error": {"type": ["string", "null"]},
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "id",
                    "solved",
                    "solution",
                    "length",
                    "elapsed_millis",
                    "nodes_expanded",
                    "score",
                ],
                "properties": {
                    "id": {"type": "string"},
                    "solved": {"type": "boolean"},
                    "solution": {"type": "string", "pattern": "^[UDLRW]*$"},
                    "length": {"type": "integer", "minimum": 0},
                    "elapsed_millis": {"type": "integer", "minimum": 0},
                    "nodes_expanded": {"type": "integer", "minimum": 0},
                    "score": {"type": "number", "minimum": 0},
                },
            },
        },
        "solve_rate": {"type": "number", "minimum": 0, "maximum": 1},
        "avg_score": {"type": "number", "minimum": 0},
    },
}


def normalize_report(report: AgentReport) -> AgentReport:
    """Zero every timing-derived field so output is machine-independent."""
    return replace(
        report,
        submitted_at=EPOCH_ISO,
        avg_score=0.0,
        results=tuple(
            replace(r, elapsed_millis=0, score=0.0) for r in report.results
        ),
    )


def report_to_dict(report: AgentReport) -> dict:
    return {
        "agent": report.agent,
        "levelset": report.levelset,
        "submitted_at": report.submitted_at,
        "error": report.error,
        "results": [
            {
                "id": r.level_id,
                "solved": r.solved,
                "solution": r.solution,
                "length": r.length,
                "elapsed_millis": r.elapsed_millis,
                "nodes_expanded": r.nodes_expanded,
                "score": r.score,
            }
            for r in report.results
        ],
        "solve_rate": report.solve_rate,
        "avg_score": report.avg_score,
    }


def report_from_dict(doc: dict) -> AgentReport:
    try:
        jsonschema.validate(doc, _REPORT_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.json_path, exc.message) from exc
    return AgentReport(
        agent=doc["agent"],
        levelset=doc["levelset"],
        results=tuple(
            LevelResult(
                level_id=r["id"],
                solved=r["solved"],
                solution=r["solution"],
                length=r["length"],
                elapsed_millis=r["elapsed_millis"],
                nodes_expanded=r["nodes_expanded"],
                score=r["score"],
            )
            for r in doc["results"]
        ),
        solve_rate=doc["solve_rate"],
        avg_score=doc["avg_score"],
        error=doc["error"],
        submitted_at=doc["submitted_at"],
    )


def report_to_json(report: AgentReport, deterministic: bool = False) -> str:
    if deterministic:
        report = normalize_report(report)
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def write_report(
    report: AgentReport, path: str | Path, deterministic: bool = False
) -> Path:
    path = Path(path)
    path.write_text(report_to_json(report, deterministic), encoding="utf-8")
    return path


def read_report(path: str | Path) -> AgentReport:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON: {exc}") from exc
    return report_from_dict(doc)
