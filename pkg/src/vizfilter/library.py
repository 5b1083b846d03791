"""Saved programs (one JSON file per program) and runtime configuration."""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from .program import Program, decode_program, encode_program
from .registry import Registry

_NAME = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_. -]*$")


class LibraryError(Exception):
    pass


@dataclass(frozen=True)
class LibraryEntry:
    name: str
    path: Path
    modified: datetime


@dataclass
class Library:
    root: Path

    def _path(self, name: str) -> Path:
        if not _NAME.match(name) or name.endswith("."):
            raise LibraryError(f"invalid program name {name!r}")
        return self.root / f"{name}.json"

    def save(self, name: str, program: Program, force: bool = False) -> Path:
        path = self._path(name)
        if path.exists() and not force:
            raise LibraryError(f"program {name!r} already exists (use --force to overwrite)")
        self.root.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(encode_program(replace(program, name=name)), indent=2) + "\n")
        return path

    def load(self, name: str, registry: Registry | None = None) -> Program:
        path = self._path(name)
        if not path.exists():
            raise LibraryError(f"no program named {name!r}")
        return decode_program(path.read_text(), registry)

    def delete(self, name: str) -> None:
        path = self._path(name)
        if not path.exists():
            raise LibraryError(f"no program named {name!r}")
        path.unlink()

    def entries(self) -> list[LibraryEntry]:
        if not self.root.is_dir():
            return []
        out = []
        for p in sorted(self.root.glob("*.json")):
            out.append(LibraryEntry(p.stem, p, datetime.fromtimestamp(p.stat().st_mtime, timezone.utc)))
        return out


def default_library_path() -> Path:
    env = os.environ.get("VIZFILTER_LIB")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CONFIG_HOME") or Path.home() / ".config"
    return Path(base) / "vizfilter" / "library"


@dataclass
class Config:
    registry_path: Path | None = None  # None = bundled registry
    library_path: Path | None = None
    llm_url: str | None = None
    llm_token: str | None = None
    debounce_n: int = 5
    brief: bool = False

    @classmethod
    def from_env(cls, **overrides) -> "Config":
        cfg = cls(
            library_path=default_library_path(),
            llm_url=os.environ.get("VIZFILTER_LLM_URL"),
            llm_token=os.environ.get("VIZFILTER_LLM_TOKEN"),
        )
        for k, v in overrides.items():
            if v is not None:
                setattr(cfg, k, v)
        return cfg
