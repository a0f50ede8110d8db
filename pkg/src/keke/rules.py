"""Rule scanning, object classification and transformation rules.

Rules are read off the board every tick: three consecutive cells holding
noun-word, IS, then a noun or property word form a rule, horizontally
(left to right) or vertically (top to bottom). Reversed lines are inert.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Mapping, Sequence

from .levels import (
    Board,
    OBJECT,
    OBJECT_KINDS,
    PROPERTY_SET,
    Position,
    Sprite,
    SpriteKind,
)

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


@dataclass(frozen=True, slots=True)
class Rule:
    """An active subject-IS-predicate triple anchored at its IS word."""

    subject: str
    predicate: str
    anchor: Position
    orientation: str

    @property
    def is_property(self) -> bool:
        return self.predicate in PROPERTY_SET

    @property
    def is_transform(self) -> bool:
        return self.predicate not in PROPERTY_SET and self.predicate != self.subject

    @property
    def is_reflexive(self) -> bool:
        return self.predicate == self.subject

    def render(self) -> str:
        return f"{self.subject}-IS-{self.predicate}"


class RuleSet:
    """Active rules, deduplicated by (subject, predicate).

    Iteration follows board scan order (row-major by IS anchor,
    horizontal before vertical), which is what makes transformation
    conflicts deterministic. Equality ignores order and anchors.
    """

    __slots__ = ("rules", "_pairs", "_noun_sets", "_noun_props")

    def __init__(self, rules: Iterable[Rule] = ()) -> None:
        kept: list[Rule] = []
        pairs: set[tuple[str, str]] = set()
        for rule in rules:
            pair = (rule.subject, rule.predicate)
            if pair not in pairs:
                pairs.add(pair)
                kept.append(rule)
        self.rules: tuple[Rule, ...] = tuple(kept)
        self._pairs: frozenset[tuple[str, str]] = frozenset(pairs)
        # Rule sets are shared across many ticks; memoize derived views.
        self._noun_sets: dict[str, frozenset[str]] = {}
        self._noun_props: dict[str, tuple[str, ...]] | None = None

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RuleSet):
            return NotImplemented
        return self._pairs == other._pairs

    def __hash__(self) -> int:
        return hash(self._pairs)

    def __repr__(self) -> str:
        return f"RuleSet({', '.join(r.render() for r in self.rules)})"

    def has(self, subject: str, predicate: str) -> bool:
        return (subject, predicate) in self._pairs

    def nouns_with(self, keyword: str) -> frozenset[str]:
        """Nouns assigned the given property by some active rule."""
        cached = self._noun_sets.get(keyword)
        if cached is None:
            cached = frozenset(
                r.subject for r in self.rules if r.predicate == keyword
            )
            self._noun_sets[keyword] = cached
        return cached

    def noun_properties(self) -> dict[str, tuple[str, ...]]:
        """Noun -> property keywords, in rule scan order."""
        if self._noun_props is None:
            props: dict[str, list[str]] = {}
            for rule in self.rules:
                if rule.is_property:
                    props.setdefault(rule.subject, []).append(rule.predicate)
            self._noun_props = {n: tuple(p) for n, p in props.items()}
        return self._noun_props

    def render(self) -> tuple[str, ...]:
        return tuple(rule.render() for rule in self.rules)


@dataclass(frozen=True, slots=True)
class PropertyIndex:
    """Object sprites bucketed by the property active rules give them.

    Word sprites never appear here: their pushability is intrinsic.
    """

    you: tuple[Sprite, ...] = ()
    win: tuple[Sprite, ...] = ()
    push: tuple[Sprite, ...] = ()
    stop: tuple[Sprite, ...] = ()
    move: tuple[Sprite, ...] = ()
    kill: tuple[Sprite, ...] = ()
    sink: tuple[Sprite, ...] = ()
    hot: tuple[Sprite, ...] = ()
    melt: tuple[Sprite, ...] = ()

    def of(self, keyword: str) -> tuple[Sprite, ...]:
        return getattr(self, keyword.lower())


def scan_word_cells(
    words: Mapping[tuple[int, int], Sequence[SpriteKind]],
) -> tuple[Rule, ...]:
    """Scan a cell -> word-kinds mapping for rule triples.

    Shared between the public board scan and the engine's internal
    record-based scan so both read rules identically.
    """
    found: list[Rule] = []
    anchors = sorted(
        (pos for pos, kinds in words.items() if any(k.is_is_word for k in kinds)),
        key=lambda pos: (pos[1], pos[0]),
    )
    for x, y in anchors:
        for orientation, before, after in (
            (HORIZONTAL, (x - 1, y), (x + 1, y)),
            (VERTICAL, (x, y - 1), (x, y + 1)),
        ):
            subjects = [k.name for k in words.get(before, ()) if k.is_noun_word]
            if not subjects:
                continue
            predicates = [
                k.name or k.keyword
                for k in words.get(after, ())
                if k.is_noun_word or k.is_property_word
            ]
            anchor = Position(x, y)
            for subject in subjects:
                for predicate in predicates:
                    found.append(Rule(subject, predicate, anchor, orientation))
    return tuple(found)


def _word_cells(board: Board) -> dict[tuple[int, int], list[SpriteKind]]:
    cells: dict[tuple[int, int], list[SpriteKind]] = {}
    for sprite in board.sprites:
        if sprite.kind.is_word:
            cells.setdefault((sprite.pos.x, sprite.pos.y), []).append(sprite.kind)
    return cells


def scan_rules(board: Board) -> RuleSet:
    """Read every active rule from the board's word sprites."""
    return RuleSet(scan_word_cells(_word_cells(board)))


def classify_objects(board: Board, rules: RuleSet) -> PropertyIndex:
    """Bucket object sprites under the properties the rules assign them."""
    noun_props = rules.noun_properties()
    buckets: dict[str, list[Sprite]] = {}
    for sprite in board.sprites:
        kind = sprite.kind
        if kind.category != OBJECT:
            continue
        props = noun_props.get(kind.name)
        if props:
            for prop in props:
                buckets.setdefault(prop, []).append(sprite)
    return PropertyIndex(
        **{kw.lower(): tuple(b) for kw, b in buckets.items()}
    )


def transform_targets(rules: RuleSet) -> tuple[tuple[str, str], ...]:
    """(subject, target) pairs in application order, reflexive-shielded."""
    return tuple(
        (rule.subject, rule.predicate)
        for rule in rules
        if rule.is_transform and not rules.has(rule.subject, rule.subject)
    )


def apply_transformations(board: Board, rules: RuleSet) -> Board:
    """Apply one layer of X-IS-Y transformations to object sprites.

    Each object changes noun at most once per call; position and facing
    are kept and word sprites are never touched. Conflicting rules apply
    in scan order, so the earlier anchor wins.
    """
    targets = transform_targets(rules)
    if not targets:
        return board
    sprites = list(board.sprites)
    done: set[int] = set()
    for subject, target in targets:
        for i, sprite in enumerate(sprites):
            if i in done or not sprite.kind.is_object:
                continue
            if sprite.kind.name == subject:
                sprites[i] = replace(sprite, kind=OBJECT_KINDS[target])
                done.add(i)
    if not done:
        return board
    return Board(board.width, board.height, tuple(sprites))
