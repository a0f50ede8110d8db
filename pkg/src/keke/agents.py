"""Baseline solver agents: BFS, DFS, best-first search and random sequences.

All searches expand actions in the fixed order U, D, L, R, W and prune
duplicates with the engine's full state hash; position-only hashing
would be unsound here because rules change under the player's feet.
"""
from __future__ import annotations

import random
import time
from collections import deque
from dataclasses import dataclass, replace
from enum import Enum
from heapq import heappop, heappush
from typing import Callable, Iterable

from .engine import (
    ACTION_ORDER,
    Action,
    GameState,
    Outcome,
    init_state,
    parse_actions,
    simulate,
    state_hash,
    step,
)
from .levels import KekeError, Level

Clock = Callable[[], float]

# The random agent's protocol: exactly this many uniform draws.
RANDOM_SEQUENCE_LENGTH = 50

# Largest finite heuristic score; stands in for +infinity on lost states.
LOSE_SCORE = float(2**53)


class AgentContractViolation(KekeError):
    """An external agent returned something that is not an action plan."""


class UnknownAgent(KekeError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"unknown agent {name!r}")


@dataclass(frozen=True, slots=True)
class Budget:
    """Caps for one solve attempt; whichever hits first ends the search."""

    max_nodes: int = 100_000
    max_millis: int = 60_000
    max_solution_length: int = 200

    def __post_init__(self) -> None:
        if self.max_nodes <= 0 or self.max_millis <= 0 or self.max_solution_length <= 0:
            raise ValueError("budget caps must be positive")


class TerminatedBy(Enum):
    SOLVED = "solved"
    NODE_CAP = "node_cap"
    TIME_CAP = "time_cap"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True, slots=True)
class SolveResult:
    solved: bool
    actions: tuple[Action, ...]
    nodes_expanded: int
    elapsed_millis: int
    terminated_by: TerminatedBy


@dataclass(frozen=True, slots=True)
class AgentSpec:
    name: str
    kind: str  # bfs | dfs | best_first | random | external


def heuristic(state: GameState) -> float:
    """Distance-to-goal estimate; lower is better.

    With a WIN object on the board: smallest Manhattan distance from any
    YOU object to any WIN object. Without one: distance from a YOU
    object to the nearest word sprite plus width+height, so every
    no-WIN state ranks behind every state that has a goal.
    """
    if state.outcome is Outcome.WIN:
        return 0.0
    if state.outcome is Outcome.LOSE or not state.index.you:
        return LOSE_SCORE
    yous = [(s.pos.x, s.pos.y) for s in state.index.you]
    wins = [(s.pos.x, s.pos.y) for s in state.index.win]
    if wins:
        return float(
            min(abs(x - wx) + abs(y - wy) for x, y in yous for wx, wy in wins)
        )
    words = [
        (s.pos.x, s.pos.y) for s in state.board.sprites if s.kind.is_word
    ]
    offset = float(state.board.width + state.board.height)
    if not words:
        return offset
    return offset + float(
        min(abs(x - wx) + abs(y - wy) for x, y in yous for wx, wy in words)
    )


def _elapsed_ms(clock: Clock, start: float) -> int:
    return int(round((clock() - start) * 1000))


def _reconstruct(nodes: list[tuple[int, Action | None]], idx: int) -> tuple[Action, ...]:
    path: list[Action] = []
    while idx >= 0:
        parent, action = nodes[idx]
        if action is not None:
            path.append(action)
        idx = parent
    path.reverse()
    return tuple(path)


def bfs_solve(
    state: GameState, budget: Budget | None = None, clock: Clock = time.perf_counter
) -> SolveResult:
    """Breadth-first search; returns a minimum-length winning sequence."""
    budget = budget or Budget()
    start = clock()
    if state.outcome is Outcome.WIN:
        return SolveResult(True, (), 0, _elapsed_ms(clock, start), TerminatedBy.SOLVED)
    if state.outcome is Outcome.LOSE:
        return SolveResult(False, (), 0, _elapsed_ms(clock, start), TerminatedBy.EXHAUSTED)
    visited = {state_hash(state)}
    nodes: list[tuple[int, Action | None]] = [(-1, None)]
    queue: deque[tuple[GameState, int, int]] = deque([(state, 0, 0)])
    expanded = 0
    terminated = TerminatedBy.EXHAUSTED
    while queue:
        if expanded >= budget.max_nodes:
            terminated = TerminatedBy.NODE_CAP
            break
        if _elapsed_ms(clock, start) >= budget.max_millis:
            terminated = TerminatedBy.TIME_CAP
            break
        current, idx, depth = queue.popleft()
        expanded += 1
        for action in ACTION_ORDER:
            child = step(current, action)
            if child.outcome is Outcome.WIN:
                actions = _reconstruct(nodes, idx) + (action,)
                return SolveResult(
                    True, actions, expanded, _elapsed_ms(clock, start), TerminatedBy.SOLVED
                )
            if child.outcome is not Outcome.ONGOING:
                continue
            if depth + 1 >= budget.max_solution_length:
                continue
            digest = state_hash(child)
            if digest in visited:
                continue
            visited.add(digest)
            nodes.append((idx, action))
            queue.append((child, len(nodes) - 1, depth + 1))
    return SolveResult(False, (), expanded, _elapsed_ms(clock, start), terminated)


def dfs_solve(
    state: GameState, budget: Budget | None = None, clock: Clock = time.perf_counter
) -> SolveResult:
    """Depth-first search with duplicate pruning and a depth limit.

    Returns the first winning path found, not necessarily the shortest.
    """
    budget = budget or Budget()
    start = clock()
    if state.outcome is Outcome.WIN:
        return SolveResult(True, (), 0, _elapsed_ms(clock, start), TerminatedBy.SOLVED)
    if state.outcome is Outcome.LOSE:
        return SolveResult(False, (), 0, _elapsed_ms(clock, start), TerminatedBy.EXHAUSTED)
    visited = {state_hash(state)}
    nodes: list[tuple[int, Action | None]] = [(-1, None)]
    stack: list[tuple[GameState, int, int]] = [(state, 0, 0)]
    expanded = 0
    terminated = TerminatedBy.EXHAUSTED
    while stack:
        if expanded >= budget.max_nodes:
            terminated = TerminatedBy.NODE_CAP
            break
        if _elapsed_ms(clock, start) >= budget.max_millis:
            terminated = TerminatedBy.TIME_CAP
            break
        current, idx, depth = stack.pop()
        expanded += 1
        children: list[tuple[GameState, int, int]] = []
        for action in ACTION_ORDER:
            child = step(current, action)
            if child.outcome is Outcome.WIN:
                actions = _reconstruct(nodes, idx) + (action,)
                return SolveResult(
                    True, actions, expanded, _elapsed_ms(clock, start), TerminatedBy.SOLVED
                )
            if child.outcome is not Outcome.ONGOING:
                continue
            if depth + 1 >= budget.max_solution_length:
                continue
            digest = state_hash(child)
            if digest in visited:
                continue
            visited.add(digest)
            nodes.append((idx, action))
            children.append((child, len(nodes) - 1, depth + 1))
        # Reversed so the U child is popped (hence explored) first.
        stack.extend(reversed(children))
    return SolveResult(False, (), expanded, _elapsed_ms(clock, start), terminated)


def best_first_solve(
    state: GameState, budget: Budget | None = None, clock: Clock = time.perf_counter
) -> SolveResult:
    """Greedy best-first search ordered by the heuristic, ties by insertion."""
    budget = budget or Budget()
    start = clock()
    if state.outcome is Outcome.WIN:
        return SolveResult(True, (), 0, _elapsed_ms(clock, start), TerminatedBy.SOLVED)
    if state.outcome is Outcome.LOSE:
        return SolveResult(False, (), 0, _elapsed_ms(clock, start), TerminatedBy.EXHAUSTED)
    visited = {state_hash(state)}
    nodes: list[tuple[int, Action | None]] = [(-1, None)]
    counter = 0
    heap: list[tuple[float, int, GameState, int, int]] = [
        (heuristic(state), counter, state, 0, 0)
    ]
    expanded = 0
    terminated = TerminatedBy.EXHAUSTED
    while heap:
        if expanded >= budget.max_nodes:
            terminated = TerminatedBy.NODE_CAP
            break
        if _elapsed_ms(clock, start) >= budget.max_millis:
            terminated = TerminatedBy.TIME_CAP
            break
        _, _, current, idx, depth = heappop(heap)
        expanded += 1
        for action in ACTION_ORDER:
            child = step(current, action)
            if child.outcome is Outcome.WIN:
                actions = _reconstruct(nodes, idx) + (action,)
                return SolveResult(
                    True, actions, expanded, _elapsed_ms(clock, start), TerminatedBy.SOLVED
                )
            if child.outcome is not Outcome.ONGOING:
                continue
            if depth + 1 >= budget.max_solution_length:
                continue
            digest = state_hash(child)
            if digest in visited:
                continue
            visited.add(digest)
            nodes.append((idx, action))
            counter += 1
            heappush(heap, (heuristic(child), counter, child, len(nodes) - 1, depth + 1))
    return SolveResult(False, (), expanded, _elapsed_ms(clock, start), terminated)


def random_solve(
    state: GameState,
    budget: Budget | None = None,
    rng_seed: int = 0,
    clock: Clock = time.perf_counter,
) -> SolveResult:
    """Draw 50 uniform actions from a seeded generator and play them out.

    Solved iff a win occurs; on a win the plan is truncated at the
    winning step, otherwise the full drawn sequence is reported.
    """
    start = clock()
    rng = random.Random(rng_seed)
    drawn = [rng.choice(ACTION_ORDER) for _ in range(RANDOM_SEQUENCE_LENGTH)]
    current = state
    applied = 0
    for i, action in enumerate(drawn):
        if current.outcome is not Outcome.ONGOING:
            break
        current = step(current, action)
        applied += 1
        if current.outcome is Outcome.WIN:
            return SolveResult(
                True,
                tuple(drawn[: i + 1]),
                applied,
                _elapsed_ms(clock, start),
                TerminatedBy.SOLVED,
            )
    return SolveResult(
        False, tuple(drawn), applied, _elapsed_ms(clock, start), TerminatedBy.EXHAUSTED
    )


_BUILTIN_ORDER = ("bfs", "dfs", "best_first", "random")
_external_agents: dict[str, object] = {}


def register_agent(name: str, agent: object) -> None:
    """Register an external agent under a unique name.

    The agent must expose ``solve(state, budget)`` (as an attribute or
    by being callable) returning either a SolveResult or a sequence of
    actions / action characters.
    """
    if name in _BUILTIN_ORDER:
        raise ValueError(f"{name!r} is reserved for a baseline agent")
    _external_agents[name] = agent


def unregister_agent(name: str) -> None:
    _external_agents.pop(name, None)


def available_agents() -> tuple[str, ...]:
    return _BUILTIN_ORDER + tuple(_external_agents)


def agent_spec(name: str) -> AgentSpec:
    if name in _BUILTIN_ORDER:
        return AgentSpec(name, name)
    if name in _external_agents:
        return AgentSpec(name, "external")
    raise UnknownAgent(name)


def preprocess_agent(name: str) -> str | None:
    """The evaluation-gate check; returns an error message or None.

    Mirrors a competition server's preprocessing step: an agent whose
    entry point is missing never reaches the levels.
    """
    try:
        spec = agent_spec(name)
    except UnknownAgent as exc:
        return str(exc)
    if spec.kind != "external":
        return None
    entry = _external_agents[name]
    fn = getattr(entry, "solve", entry)
    if not callable(fn):
        return f"agent {name!r} has no callable solve entry point"
    return None


def _coerce_actions(raw: object) -> tuple[Action, ...]:
    if isinstance(raw, str):
        return parse_actions(raw)
    if isinstance(raw, Iterable):
        actions: list[Action] = []
        for item in raw:
            if isinstance(item, Action):
                actions.append(item)
            elif isinstance(item, str):
                actions.extend(parse_actions(item))
            else:
                raise AgentContractViolation(f"not an action: {item!r}")
        return tuple(actions)
    raise AgentContractViolation(f"agent returned {type(raw).__name__}, not actions")


def solve(
    agent: AgentSpec | str,
    level: Level,
    budget: Budget | None = None,
    *,
    seed: int = 0,
    clock: Clock = time.perf_counter,
) -> SolveResult:
    """Run one agent on one level; elapsed time covers the whole call."""
    spec = agent_spec(agent) if isinstance(agent, str) else agent
    budget = budget or Budget()
    start = clock()
    state = init_state(level)
    if spec.kind == "bfs":
        result = bfs_solve(state, budget, clock)
    elif spec.kind == "dfs":
        result = dfs_solve(state, budget, clock)
    elif spec.kind == "best_first":
        result = best_first_solve(state, budget, clock)
    elif spec.kind == "random":
        result = random_solve(state, budget, seed, clock)
    elif spec.kind == "external":
        result = _run_external(spec.name, state, budget)
    else:
        raise UnknownAgent(spec.name)
    return replace(result, elapsed_millis=_elapsed_ms(clock, start))


def _run_external(name: str, state: GameState, budget: Budget) -> SolveResult:
    entry = _external_agents.get(name)
    if entry is None:
        raise UnknownAgent(name)
    fn = getattr(entry, "solve", entry)
    if not callable(fn):
        raise AgentContractViolation(f"agent {name!r} has no callable solve entry point")
    raw = fn(state, budget)
    if isinstance(raw, SolveResult):
        actions = raw.actions
        nodes = raw.nodes_expanded
    else:
        actions = _coerce_actions(raw)
        nodes = 0
    if len(actions) > budget.max_solution_length:
        raise AgentContractViolation(
            f"agent {name!r} returned {len(actions)} actions, over the cap of "
            f"{budget.max_solution_length}"
        )
    # Never trust an external solved flag; replay the plan.
    outcome = simulate(state, actions).outcome
    solved = outcome is Outcome.WIN
    return SolveResult(
        solved,
        tuple(actions),
        nodes,
        0,
        TerminatedBy.SOLVED if solved else TerminatedBy.EXHAUSTED,
    )
