"""Target and adjective vocabulary.

Every item a program can name lives in a JSON registry file.  Each entry
records the detector backend that serves it, so new detectors are added by
editing data rather than code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

TARGET_KINDS = ("object", "text", "property")

COLORS = (
    "black", "dark gray", "light gray", "white", "gray", "red", "green",
    "blue", "cyan", "yellow", "magenta", "orange", "purple", "brown",
)

# 3x3 grid, row-major from the top
LOCATIONS = (
    "upper left", "upper center", "upper right",
    "left middle", "center middle", "right middle",
    "lower left", "lower center", "lower right",
)

SIZES = ("largest", "smallest")

ADJECTIVE_ALIASES = {
    "center lower": "lower center",
    "center upper": "upper center",
    "top left": "upper left",
    "top center": "upper center",
    "top middle": "upper center",
    "top right": "upper right",
    "bottom left": "lower left",
    "bottom center": "lower center",
    "bottom middle": "lower center",
    "bottom right": "lower right",
    "middle left": "left middle",
    "middle right": "right middle",
    "center": "center middle",
    "middle": "center middle",
    "centre": "center middle",
    "grey": "gray",
    "dark grey": "dark gray",
    "light grey": "light gray",
    "biggest": "largest",
    "tiniest": "smallest",
}


def adjective_kind(value: str) -> str:
    if value in COLORS:
        return "color"
    if value in LOCATIONS:
        return "location"
    if value in SIZES:
        return "size"
    raise KeyError(value)


def canonical_adjective(word: str) -> str | None:
    """Canonical adjective for ``word`` (case-insensitive), or None."""
    w = " ".join(word.lower().split())
    w = ADJECTIVE_ALIASES.get(w, w)
    if w in COLORS or w in LOCATIONS or w in SIZES:
        return w
    return None


def all_adjective_names() -> list[str]:
    return [*COLORS, *LOCATIONS, *SIZES]


@dataclass(frozen=True)
class TargetSpec:
    name: str
    kind: str
    aliases: tuple[str, ...] = ()
    group_members: tuple[str, ...] | None = None
    backend_id: str = ""

    @property
    def is_group(self) -> bool:
        return bool(self.group_members)


class RegistryError(ValueError):
    pass


@dataclass
class Registry:
    targets: dict[str, TargetSpec]
    _lookup: dict[str, str] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        lookup: dict[str, str] = {}
        for name, spec in self.targets.items():
            if spec.kind not in TARGET_KINDS:
                raise RegistryError(f"target {name!r}: bad kind {spec.kind!r}")
            for key in (name, *spec.aliases):
                key = _norm(key)
                if key in lookup and lookup[key] != name:
                    raise RegistryError(f"name {key!r} maps to both {lookup[key]!r} and {name!r}")
                lookup[key] = name
        self._lookup = lookup

    @classmethod
    def from_dict(cls, data: dict) -> "Registry":
        targets: dict[str, TargetSpec] = {}
        for i, entry in enumerate(data.get("targets", [])):
            try:
                name = _norm(entry["name"])
                kind = entry["kind"]
            except KeyError as e:
                raise RegistryError(f"targets[{i}]: missing field {e.args[0]!r}") from None
            if name in targets:
                raise RegistryError(f"targets[{i}]: duplicate name {name!r}")
            members = entry.get("group_members")
            targets[name] = TargetSpec(
                name=name,
                kind=kind,
                aliases=tuple(_norm(a) for a in entry.get("aliases", [])),
                group_members=tuple(_norm(m) for m in members) if members else None,
                backend_id=entry.get("backend_id", ""),
            )
        return cls(targets)

    @classmethod
    def load(cls, path: str | Path | None = None) -> "Registry":
        if path is None:
            text = resources.files("vizfilter").joinpath("data/registry.json").read_text()
        else:
            text = Path(path).read_text()
        return cls.from_dict(json.loads(text))

    def resolve(self, name: str) -> TargetSpec | None:
        canonical = self._lookup.get(_norm(name))
        return self.targets[canonical] if canonical else None

    def names(self) -> list[str]:
        return list(self.targets)

    def all_names(self) -> list[str]:
        """Canonical names plus aliases."""
        return list(self._lookup)

    def expand(self, name: str) -> frozenset[str]:
        """Detector labels that satisfy object class ``name``."""
        spec = self.resolve(name)
        if spec is None:
            return frozenset({_norm(name)})
        if spec.group_members:
            return frozenset({spec.name, *spec.group_members})
        return frozenset({spec.name})

    def suggest(self, name: str, max_distance: int = 2, limit: int | None = None) -> list[str]:
        """Canonical names whose name or alias is within ``max_distance`` edits."""
        q = _norm(name)
        best: dict[str, int] = {}
        for key, canonical in self._lookup.items():
            d = edit_distance(q, key)
            if d <= max_distance and d < best.get(canonical, max_distance + 1):
                best[canonical] = d
        ranked = sorted(best, key=lambda n: (best[n], n))
        return ranked[:limit] if limit is not None else ranked


_default: Registry | None = None


def default_registry() -> Registry:
    global _default
    if _default is None:
        _default = Registry.load()
    return _default


def resolve_target(name: str, registry: Registry | None = None) -> TargetSpec | None:
    return (registry or default_registry()).resolve(name)


def edit_distance(a: str, b: str) -> int:
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def _norm(s: str) -> str:
    return " ".join(s.lower().split())
