"""Locate and load the level sets shipped with the package.

The KEKE_LEVELSET_DIR environment variable points the whole stack
(CLI, server, UI) at a different directory of level-set JSON files.
"""
from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from .levels import KekeError, LevelSet, load_level_set

ENV_LEVELSET_DIR = "KEKE_LEVELSET_DIR"


class UnknownLevelSet(KekeError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"unknown level set {name!r}")


def _override_dir() -> Path | None:
    raw = os.environ.get(ENV_LEVELSET_DIR)
    return Path(raw) if raw else None


def list_level_sets() -> tuple[str, ...]:
    override = _override_dir()
    if override is not None:
        return tuple(sorted(p.stem for p in override.glob("*.json")))
    root = resources.files("keke").joinpath("levelsets")
    return tuple(
        sorted(
            entry.name[: -len(".json")]
            for entry in root.iterdir()
            if entry.name.endswith(".json")
        )
    )


def load_bundled(name: str) -> LevelSet:
    override = _override_dir()
    if override is not None:
        path = override / f"{name}.json"
        if not path.is_file():
            raise UnknownLevelSet(name)
        return load_level_set(path.read_text(encoding="utf-8"))
    entry = resources.files("keke").joinpath("levelsets", f"{name}.json")
    if not entry.is_file():
        raise UnknownLevelSet(name)
    return load_level_set(entry.read_text(encoding="utf-8"))


def resolve_level_set(ref: str) -> LevelSet:
    """Accept either a bundled set name or a path to a level-set file."""
    path = Path(ref)
    if path.suffix == ".json" or path.is_file():
        if not path.is_file():
            raise UnknownLevelSet(ref)
        return load_level_set(path.read_text(encoding="utf-8"))
    return load_bundled(ref)
