"""The deterministic game-state machine.

A tick applies one of five actions through a fixed phase order: player
motion with push chains, autonomous movers, rule re-scan, one layer of
transformations, a property refresh, destructive interactions, then the
win/lose check. States are values: stepping returns a new state and
never mutates its input, which is what lets search agents branch freely.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .levels import (
    Board,
    DELTAS,
    FACING_IDS,
    KIND_IDS,
    KekeError,
    Level,
    OBJECT,
    OBJECT_KINDS,
    OPPOSITE,
    Position,
    Sprite,
    SpriteKind,
    WORD,
    parse_ascii_map,
    serialize_ascii_map,
)
from .rules import (
    PropertyIndex,
    Rule,
    RuleSet,
    classify_objects,
    scan_rules,
    scan_word_cells,
    transform_targets,
)


class Action(Enum):
    UP = "U"
    DOWN = "D"
    LEFT = "L"
    RIGHT = "R"
    WAIT = "W"

    @property
    def char(self) -> str:
        return self.value

    @property
    def facing(self) -> str | None:
        """Movement direction, or None for WAIT."""
        return _ACTION_FACINGS[self]


_ACTION_FACINGS = {
    Action.UP: "up",
    Action.DOWN: "down",
    Action.LEFT: "left",
    Action.RIGHT: "right",
    Action.WAIT: None,
}

# Fixed expansion order used by every search agent.
ACTION_ORDER = (Action.UP, Action.DOWN, Action.LEFT, Action.RIGHT, Action.WAIT)

_CHAR_TO_ACTION = {a.value: a for a in Action}


def parse_actions(text: str) -> tuple[Action, ...]:
    """Decode a solution string (U/D/L/R/W) into actions."""
    try:
        return tuple(_CHAR_TO_ACTION[ch] for ch in text)
    except KeyError as exc:
        raise ValueError(f"unknown action character {exc.args[0]!r}") from exc


def render_actions(actions: Iterable[Action]) -> str:
    return "".join(a.value for a in actions)


class Outcome(Enum):
    ONGOING = "ongoing"
    WIN = "win"
    LOSE = "lose"


class SteppedTerminalState(KekeError):
    def __init__(self, outcome: Outcome) -> None:
        self.outcome = outcome
        super().__init__(f"cannot step a state whose outcome is {outcome.value}")


@dataclass(frozen=True)
class GameState:
    """Everything a solver sees: board, active rules, property buckets.

    ``rules`` and ``index`` are always consistent with ``board``;
    ``level`` is kept so the state can be reset to its origin.
    """

    level: Level
    board: Board
    rules: RuleSet
    index: PropertyIndex
    outcome: Outcome
    tick: int


@dataclass(frozen=True, slots=True)
class PushResult:
    moved: bool
    board: Board


@dataclass(frozen=True, slots=True)
class SimulationResult:
    state: GameState
    outcome: Outcome
    steps_used: int


class _Rec:
    """Mutable per-tick view of one sprite.

    ``sprite`` keeps the original frozen sprite until something changes,
    so untouched sprites are reused when the next state is built.
    """

    __slots__ = ("kind", "x", "y", "facing", "alive", "sprite")

    def __init__(self, sprite: Sprite) -> None:
        self.kind = sprite.kind
        self.x = sprite.pos.x
        self.y = sprite.pos.y
        self.facing = sprite.facing
        self.alive = True
        self.sprite = sprite

    def set_facing(self, facing: str) -> None:
        if facing != self.facing:
            self.facing = facing
            self.sprite = None

    def set_kind(self, kind: SpriteKind) -> None:
        self.kind = kind
        self.sprite = None

    def freeze(self) -> Sprite:
        if self.sprite is not None:
            return self.sprite
        return Sprite(self.kind, Position(self.x, self.y), self.facing)


# Cell index keyed by (x << 8) | y; boards stay well under 256 a side.
_Cells = dict[int, list[_Rec]]


def _build_cells(recs: list[_Rec]) -> _Cells:
    cells: _Cells = {}
    for rec in recs:
        key = (rec.x << 8) | rec.y
        bucket = cells.get(key)
        if bucket is None:
            cells[key] = [rec]
        else:
            bucket.append(rec)
    return cells


def _move_rec(rec: _Rec, x: int, y: int, cells: _Cells) -> None:
    cells[(rec.x << 8) | rec.y].remove(rec)
    rec.x = x
    rec.y = y
    rec.sprite = None
    key = (x << 8) | y
    bucket = cells.get(key)
    if bucket is None:
        cells[key] = [rec]
    else:
        bucket.append(rec)


def _chain_move(
    rec: _Rec,
    dx: int,
    dy: int,
    cells: _Cells,
    width: int,
    height: int,
    push_nouns: frozenset[str],
    stop_nouns: frozenset[str],
) -> tuple[bool, bool]:
    """Try to advance ``rec`` one cell, shifting any push chain ahead of it.

    The chain is the contiguous run of pushable sprites (rule-PUSH
    objects plus every word) in front of ``rec``. The move succeeds iff
    the cell beyond the run is in bounds and holds no blocking STOP
    object; the map boundary blocks. Returns (moved, pushed_a_word).
    """
    run: list[_Rec] = []
    cx, cy = rec.x + dx, rec.y + dy
    while True:
        if not (0 <= cx < width and 0 <= cy < height):
            return False, False
        cell = cells.get((cx << 8) | cy)
        if cell:
            pushable = [
                o
                for o in cell
                if o.alive
                and (o.kind.category == WORD or o.kind.name in push_nouns)
            ]
            if pushable:
                run.extend(pushable)
                cx += dx
                cy += dy
                continue
            # PUSH beats STOP, so only a non-pushable STOP object blocks.
            if any(
                o.alive and o.kind.category == OBJECT and o.kind.name in stop_nouns
                for o in cell
            ):
                return False, False
        break
    pushed_word = False
    for o in run:
        _move_rec(o, o.x + dx, o.y + dy, cells)
        if o.kind.category == WORD:
            pushed_word = True
    _move_rec(rec, rec.x + dx, rec.y + dy, cells)
    return True, pushed_word


def _scan_records(recs: list[_Rec]) -> tuple[Rule, ...]:
    words: dict[tuple[int, int], list[SpriteKind]] = {}
    for rec in recs:
        if rec.alive and rec.kind.category == WORD:
            words.setdefault((rec.x, rec.y), []).append(rec.kind)
    return scan_word_cells(words)


def init_state(level: Level) -> GameState:
    """Build the starting state for a level.

    The outcome starts Ongoing in every case; win and lose conditions
    are only evaluated inside step, so a level whose player sprite is
    already a win condition still takes exactly one action to finish.
    """
    board = parse_ascii_map(level.ascii)
    rules = RuleSet(_scan_records([_Rec(s) for s in board.sprites]))
    index = classify_objects(board, rules)
    return GameState(level, board, rules, index, Outcome.ONGOING, 0)


def step(state: GameState, action: Action) -> GameState:
    """Apply one action and return the resulting state.

    Phases, in order: player motion (every YOU object, cells farthest
    along the direction first), autonomous movers (row-major, reverse
    and retry once when blocked), rule re-scan, one transformation
    layer, property refresh, destructive interactions (SINK, then KILL,
    then HOT/MELT), then the outcome check.
    """
    if state.outcome is not Outcome.ONGOING:
        raise SteppedTerminalState(state.outcome)

    board = state.board
    width, height = board.width, board.height
    recs = [_Rec(s) for s in board.sprites]
    cells = _build_cells(recs)

    rules = state.rules
    you_nouns = rules.nouns_with("YOU")
    move_nouns = rules.nouns_with("MOVE")
    push_nouns = rules.nouns_with("PUSH")
    stop_nouns = rules.nouns_with("STOP")

    word_moved = False

    # Phase 1: every player-controlled object attempts the action.
    facing = action.facing
    if facing is not None:
        dx, dy = DELTAS[facing]
        yous = [
            r
            for r in recs
            if r.kind.category == OBJECT and r.kind.name in you_nouns
        ]
        # Objects farther along the movement direction move first, so a
        # YOU following another YOU is not blocked by it.
        yous.sort(key=lambda r: (-(r.x * dx + r.y * dy), r.y, r.x))
        for rec in yous:
            rec.set_facing(facing)
            moved, pushed_word = _chain_move(
                rec, dx, dy, cells, width, height, push_nouns, stop_nouns
            )
            word_moved |= pushed_word

    # Phase 2: movers advance along their facing, reversing once if blocked.
    movers = [
        r
        for r in recs
        if r.kind.category == OBJECT and r.kind.name in move_nouns
    ]
    movers.sort(key=lambda r: (r.y, r.x))
    for rec in movers:
        if not rec.alive:
            continue
        dx, dy = DELTAS[rec.facing]
        moved, pushed_word = _chain_move(
            rec, dx, dy, cells, width, height, push_nouns, stop_nouns
        )
        if not moved:
            rec.set_facing(OPPOSITE[rec.facing])
            dx, dy = DELTAS[rec.facing]
            moved, pushed_word = _chain_move(
                rec, dx, dy, cells, width, height, push_nouns, stop_nouns
            )
        word_moved |= pushed_word

    # Phase 3: re-read the rules; words cannot move in later phases.
    new_rules = RuleSet(_scan_records(recs)) if word_moved else rules

    # Phase 4: one transformation layer, earlier anchors first.
    transformed: set[int] = set()
    for subject, target in transform_targets(new_rules):
        target_kind = OBJECT_KINDS[target]
        for i, rec in enumerate(recs):
            if i in transformed or not rec.alive:
                continue
            if rec.kind.category == OBJECT and rec.kind.name == subject:
                rec.set_kind(target_kind)
                transformed.add(i)

    # Phase 5: refresh property membership against the new nouns.
    you_nouns = new_rules.nouns_with("YOU")
    win_nouns = new_rules.nouns_with("WIN")
    kill_nouns = new_rules.nouns_with("KILL")
    sink_nouns = new_rules.nouns_with("SINK")
    hot_nouns = new_rules.nouns_with("HOT")
    melt_nouns = new_rules.nouns_with("MELT")

    # Phase 6: destructive interactions. Overlaps live in a single cell,
    # so SINK, then KILL, then HOT/MELT resolve cell by cell; victims of
    # one sub-phase are gone before the next looks.
    for cell in cells.values():
        if len(cell) < 2:
            continue
        objects = [r for r in cell if r.alive and r.kind.category == OBJECT]
        if len(objects) >= 2:
            if any(r.kind.name in sink_nouns for r in objects):
                for r in objects:
                    r.alive = False
                continue
            killers = [r for r in objects if r.kind.name in kill_nouns]
            if killers:
                for r in objects:
                    if r.kind.name in you_nouns and any(
                        k is not r for k in killers
                    ):
                        r.alive = False
            hots = [
                r for r in objects if r.alive and r.kind.name in hot_nouns
            ]
            if hots:
                for r in objects:
                    if (
                        r.alive
                        and r.kind.name in melt_nouns
                        and any(h is not r for h in hots)
                    ):
                        r.alive = False

    # Phase 7: outcome. Win before lose; a YOU that is itself WIN wins.
    new_board = Board(
        width, height, tuple(r.freeze() for r in recs if r.alive)
    )
    new_index = classify_objects(new_board, new_rules)
    win_cells = {(s.pos.x, s.pos.y) for s in new_index.win}
    if new_index.you and any(
        (s.pos.x, s.pos.y) in win_cells for s in new_index.you
    ):
        outcome = Outcome.WIN
    elif not you_nouns or not new_index.you:
        outcome = Outcome.LOSE
    else:
        outcome = Outcome.ONGOING

    return GameState(state.level, new_board, new_rules, new_index, outcome, state.tick + 1)


def push_chain(board: Board, origin: Position, direction: str) -> PushResult:
    """Shift the push chain in front of ``origin`` one cell, if possible.

    The sprite at ``origin`` itself does not move; this answers "could
    something standing here advance, and what would the board become".
    When nothing moves the original board is returned untouched.
    """
    if not board.in_bounds(origin.x, origin.y):
        raise ValueError(f"origin {origin} out of bounds")
    rules = scan_rules(board)
    push_nouns = rules.nouns_with("PUSH")
    stop_nouns = rules.nouns_with("STOP")
    recs = [_Rec(s) for s in board.sprites]
    cells = _build_cells(recs)
    dx, dy = DELTAS[direction]

    run: list[_Rec] = []
    cx, cy = origin.x + dx, origin.y + dy
    while True:
        if not (0 <= cx < board.width and 0 <= cy < board.height):
            return PushResult(False, board)
        cell = cells.get((cx << 8) | cy)
        if cell:
            pushable = [
                o
                for o in cell
                if o.kind.category == WORD or o.kind.name in push_nouns
            ]
            if pushable:
                run.extend(pushable)
                cx += dx
                cy += dy
                continue
            if any(
                o.kind.category == OBJECT and o.kind.name in stop_nouns
                for o in cell
            ):
                return PushResult(False, board)
        break
    if not run:
        return PushResult(True, board)
    for o in run:
        _move_rec(o, o.x + dx, o.y + dy, cells)
    return PushResult(
        True, Board(board.width, board.height, tuple(r.freeze() for r in recs))
    )


def copy_state(state: GameState) -> GameState:
    """An independent copy; states are immutable so sharing is safe."""
    return GameState(
        state.level, state.board, state.rules, state.index, state.outcome, state.tick
    )


def set_state(state: GameState, ascii_map: str) -> GameState:
    """Rebuild the state from a map dump, keeping the original level."""
    board = parse_ascii_map(ascii_map)
    rules = RuleSet(_scan_records([_Rec(s) for s in board.sprites]))
    index = classify_objects(board, rules)
    return GameState(state.level, board, rules, index, Outcome.ONGOING, 0)


def reset_state(state: GameState) -> GameState:
    """Back to the level's starting setup."""
    return init_state(state.level)


def simulate(state: GameState, actions: Sequence[Action]) -> SimulationResult:
    """Apply actions in order, stopping at the first terminal outcome."""
    current = state
    steps = 0
    for action in actions:
        if current.outcome is not Outcome.ONGOING:
            break
        current = step(current, action)
        steps += 1
    return SimulationResult(current, current.outcome, steps)


_OUTCOME_IDS = {Outcome.ONGOING: 0, Outcome.WIN: 1, Outcome.LOSE: 2}

_MASK64 = (1 << 64) - 1
# Lazily filled table of per-(kind, x, y, facing) random words. Keys are
# packed ints; values come from a seeded generator so digests are stable
# across processes. Summing (not XOR) keeps duplicate sprites visible.
_ZOBRIST: dict[int, int] = {}


def _zobrist(key: int) -> int:
    value = _ZOBRIST.get(key)
    if value is None:
        value = random.Random(key).getrandbits(64)
        _ZOBRIST[key] = value
    return value


def state_hash(state: GameState) -> int:
    """64-bit digest of the sprite multiset and outcome; ignores tick."""
    cached = state.__dict__.get("_digest")
    if cached is not None:
        return cached
    board = state.board
    total = _zobrist(
        (1 << 40)
        | (board.width << 16)
        | (board.height << 8)
        | _OUTCOME_IDS[state.outcome]
    )
    kind_ids = KIND_IDS
    facing_ids = FACING_IDS
    table = _ZOBRIST
    for s in board.sprites:
        pos = s.pos
        key = (
            (kind_ids[s.kind] << 24)
            | (pos.x << 16)
            | (pos.y << 8)
            | facing_ids[s.facing]
        )
        value = table.get(key)
        if value is None:
            value = random.Random(key).getrandbits(64)
            table[key] = value
        total += value
    digest = total & _MASK64
    object.__setattr__(state, "_digest", digest)
    return digest


def state_ascii(state: GameState) -> str:
    """Map dump plus one rendered rule per line, for debugging and replay."""
    lines = [serialize_ascii_map(state.board)]
    lines.extend(state.rules.render())
    return "\n".join(lines)
