"""ASCII level maps and JSON level-set files.

This module owns the on-disk formats shared by the engine, the solvers,
the evaluator, the CLI and the web UI: the one-character-per-cell map
encoding and the level-set JSON schema. Everything else in the package
builds on the sprite vocabulary defined here.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import jsonschema

# Closed noun vocabulary: object sprites and noun words share these names.
NOUNS = ("BABA", "WALL", "FLAG", "ROCK", "WATER", "SKULL", "GRASS", "LAVA")
# Property keywords a rule can assign to a noun.
PROPERTIES = ("YOU", "WIN", "PUSH", "STOP", "MOVE", "KILL", "SINK", "HOT", "MELT")
IS = "IS"

NOUN_SET = frozenset(NOUNS)
PROPERTY_SET = frozenset(PROPERTIES)

OBJECT = "object"
WORD = "word"

UP, DOWN, LEFT, RIGHT = "up", "down", "left", "right"
FACINGS = (UP, DOWN, LEFT, RIGHT)
DELTAS = {UP: (0, -1), DOWN: (0, 1), LEFT: (-1, 0), RIGHT: (1, 0)}
OPPOSITE = {UP: DOWN, DOWN: UP, LEFT: RIGHT, RIGHT: LEFT}

EMPTY_CODE = "_"
OBJECT_CODES = {
    "b": "BABA", "w": "WALL", "f": "FLAG", "r": "ROCK",
    "a": "WATER", "s": "SKULL", "g": "GRASS", "l": "LAVA",
}
NOUN_WORD_CODES = {
    "B": "BABA", "W": "WALL", "F": "FLAG", "R": "ROCK",
    "A": "WATER", "S": "SKULL", "G": "GRASS", "L": "LAVA",
}
KEYWORD_CODES = {
    "1": IS, "U": "YOU", "N": "WIN", "P": "PUSH", "T": "STOP",
    "M": "MOVE", "K": "KILL", "V": "SINK", "H": "HOT", "E": "MELT",
}


class KekeError(Exception):
    """Base class for every error this package raises on purpose."""


class MapError(KekeError):
    """A map text could not be parsed into a board."""


class EmptyMap(MapError):
    def __init__(self) -> None:
        super().__init__("map text has no rows")


class RaggedRows(MapError):
    def __init__(self, row: int) -> None:
        self.row = row
        super().__init__(f"row {row} has a different length than row 0")


class UnknownCharacter(MapError):
    def __init__(self, char: str, row: int, col: int) -> None:
        self.char = char
        self.row = row
        self.col = col
        super().__init__(f"unknown cell code {char!r} at row {row}, col {col}")


class SchemaError(KekeError):
    """A JSON document does not match its declared schema."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        super().__init__(f"{path}: {message}")


class LevelParseError(KekeError):
    def __init__(self, level_id: str, cause: MapError) -> None:
        self.level_id = level_id
        self.cause = cause
        super().__init__(f"level {level_id!r}: {cause}")


class DuplicateId(KekeError):
    def __init__(self, level_id: str) -> None:
        self.level_id = level_id
        super().__init__(f"duplicate level id {level_id!r}")


@dataclass(frozen=True, slots=True)
class Position:
    x: int
    y: int


@dataclass(frozen=True, slots=True)
class SpriteKind:
    """What a sprite is: a game object, a noun word, IS, or a property word.

    ``name`` is set for objects and noun words, ``keyword`` for IS and
    property words; exactly one of the two is non-empty.
    """

    category: str
    name: str = ""
    keyword: str = ""
    # Kinds are used as dict keys in the engine's hot path; precompute.
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_hash", hash((self.category, self.name, self.keyword))
        )

    def __hash__(self) -> int:
        return self._hash

    @property
    def is_object(self) -> bool:
        return self.category == OBJECT

    @property
    def is_word(self) -> bool:
        return self.category == WORD

    @property
    def is_noun_word(self) -> bool:
        return self.category == WORD and bool(self.name)

    @property
    def is_is_word(self) -> bool:
        return self.keyword == IS

    @property
    def is_property_word(self) -> bool:
        return self.keyword in PROPERTY_SET

    def __str__(self) -> str:
        return self.name or self.keyword


# Interned kinds so the engine can build sprites without fresh allocations.
OBJECT_KINDS = {noun: SpriteKind(OBJECT, name=noun) for noun in NOUNS}
NOUN_WORD_KINDS = {noun: SpriteKind(WORD, name=noun) for noun in NOUNS}
KEYWORD_KINDS = {kw: SpriteKind(WORD, keyword=kw) for kw in (IS, *PROPERTIES)}

CODE_TO_KIND: dict[str, SpriteKind] = {}
for _code, _noun in OBJECT_CODES.items():
    CODE_TO_KIND[_code] = OBJECT_KINDS[_noun]
for _code, _noun in NOUN_WORD_CODES.items():
    CODE_TO_KIND[_code] = NOUN_WORD_KINDS[_noun]
for _code, _kw in KEYWORD_CODES.items():
    CODE_TO_KIND[_code] = KEYWORD_KINDS[_kw]

KIND_TO_CODE = {kind: code for code, kind in CODE_TO_KIND.items()}

# Stable small integers per kind, used by the engine's state digest.
KIND_IDS = {kind: i for i, kind in enumerate(CODE_TO_KIND.values())}
FACING_IDS = {facing: i for i, facing in enumerate(FACINGS)}


@dataclass(frozen=True, slots=True)
class Sprite:
    kind: SpriteKind
    pos: Position
    facing: str = RIGHT


@dataclass(frozen=True, slots=True)
class Board:
    width: int
    height: int
    sprites: tuple[Sprite, ...]

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def word_sprites(self) -> tuple[Sprite, ...]:
        return tuple(s for s in self.sprites if s.kind.is_word)

    def object_sprites(self) -> tuple[Sprite, ...]:
        return tuple(s for s in self.sprites if s.kind.is_object)


@dataclass(frozen=True, slots=True)
class Level:
    id: str
    ascii: str
    name: str = ""
    author: str = ""
    solution: str = ""


@dataclass(frozen=True, slots=True)
class LevelSet:
    name: str
    levels: tuple[Level, ...]

    def get(self, level_id: str) -> Level:
        for level in self.levels:
            if level.id == level_id:
                return level
        raise KeyError(level_id)

    def ids(self) -> tuple[str, ...]:
        return tuple(level.id for level in self.levels)


def parse_ascii_map(text: str) -> Board:
    """Parse newline-separated cell codes into a board.

    One sprite per non-empty cell; every sprite starts facing right.
    """
    rows = text.splitlines()
    if not rows or len(rows[0]) == 0:
        raise EmptyMap()
    if len(rows) > 255 or len(rows[0]) > 255:
        raise MapError("maps larger than 255 cells a side are not supported")
    width = len(rows[0])
    sprites: list[Sprite] = []
    for y, row in enumerate(rows):
        if len(row) != width:
            raise RaggedRows(y)
        for x, char in enumerate(row):
            if char == EMPTY_CODE:
                continue
            kind = CODE_TO_KIND.get(char)
            if kind is None:
                raise UnknownCharacter(char, y, x)
            sprites.append(Sprite(kind, Position(x, y)))
    return Board(width, len(rows), tuple(sprites))


def serialize_ascii_map(board: Board) -> str:
    """Render a board back to cell codes.

    A cell holding several sprites shows the topmost one: words cover
    objects, and within a category the sprite later in the board's list
    wins. Overlaps only arise at runtime, so authored maps round-trip.
    """
    grid = [[EMPTY_CODE] * board.width for _ in range(board.height)]
    word_here: set[tuple[int, int]] = set()
    for sprite in board.sprites:
        x, y = sprite.pos.x, sprite.pos.y
        if sprite.kind.is_word:
            grid[y][x] = KIND_TO_CODE[sprite.kind]
            word_here.add((x, y))
        elif (x, y) not in word_here:
            grid[y][x] = KIND_TO_CODE[sprite.kind]
    return "\n".join("".join(row) for row in grid)


_LEVELSET_SCHEMA = {
    "type": "object",
    "required": ["name", "levels"],
    "properties": {
        "name": {"type": "string"},
        "levels": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "ascii"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "name": {"type": "string"},
                    "author": {"type": "string"},
                    "ascii": {"type": "string"},
                    "solution": {"type": "string", "pattern": "^[UDLRW]*$"},
                },
            },
        },
    },
}


def load_level_set(json_text: str) -> LevelSet:
    """Parse and validate a level-set JSON document.

    Unknown fields are ignored for forward compatibility; every level's
    map is parsed so a bad level fails here, not at play time.
    """
    try:
        doc = json.loads(json_text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(doc, _LEVELSET_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.json_path, exc.message) from exc

    levels: list[Level] = []
    seen: set[str] = set()
    for entry in doc["levels"]:
        level_id = entry["id"]
        if level_id in seen:
            raise DuplicateId(level_id)
        seen.add(level_id)
        try:
            parse_ascii_map(entry["ascii"])
        except MapError as exc:
            raise LevelParseError(level_id, exc) from exc
        levels.append(
            Level(
                id=level_id,
                ascii=entry["ascii"],
                name=entry.get("name", ""),
                author=entry.get("author", ""),
                solution=entry.get("solution", ""),
            )
        )
    return LevelSet(doc["name"], tuple(levels))


def level_set_to_json(level_set: LevelSet) -> str:
    """Inverse of load_level_set, used by the CLI and the HTTP API."""
    doc = {
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
    return json.dumps(doc, indent=2)
