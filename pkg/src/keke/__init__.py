"""Deterministic word-rule puzzle engine, solvers and evaluation harness.

The game is a Sokoban-like grid puzzle whose rules are spelled out by
word blocks on the board and change as the player pushes them around.
This package provides the simulation engine, four baseline solver
agents, a competition-style evaluator with leaderboard ranking, a CLI,
and an HTTP API for the browser UI.
"""

from .levels import (
    Board,
    DuplicateId,
    EmptyMap,
    KekeError,
    Level,
    LevelParseError,
    LevelSet,
    Position,
    RaggedRows,
    SchemaError,
    Sprite,
    SpriteKind,
    UnknownCharacter,
    load_level_set,
    level_set_to_json,
    parse_ascii_map,
    serialize_ascii_map,
)
from .rules import (
    PropertyIndex,
    Rule,
    RuleSet,
    apply_transformations,
    classify_objects,
    scan_rules,
)
from .engine import (
    ACTION_ORDER,
    Action,
    GameState,
    Outcome,
    PushResult,
    SimulationResult,
    SteppedTerminalState,
    copy_state,
    init_state,
    parse_actions,
    push_chain,
    render_actions,
    reset_state,
    set_state,
    simulate,
    state_ascii,
    state_hash,
    step,
)
from .agents import (
    AgentContractViolation,
    AgentSpec,
    Budget,
    SolveResult,
    TerminatedBy,
    UnknownAgent,
    available_agents,
    agent_spec,
    best_first_solve,
    bfs_solve,
    dfs_solve,
    heuristic,
    preprocess_agent,
    random_solve,
    register_agent,
    solve,
    unregister_agent,
)
from .evaluator import (
    AgentReport,
    DomainError,
    Leaderboard,
    LevelResult,
    evaluate_agent,
    level_score,
    normalize_report,
    rank_agents,
    read_report,
    report_from_dict,
    report_to_dict,
    report_to_json,
    write_report,
)
from .bundled import list_level_sets, load_bundled, resolve_level_set

__version__ = "0.1.0"
