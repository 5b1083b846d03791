"""Program AST for ``find X on Y`` filters, with text and JSON forms.

A program is a list of parallel chains.  Each chain is stored innermost
first: ``find NUMBER on BUS`` is ``[number, bus]``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import NamedTuple, Union

from .registry import (
    COLORS,
    LOCATIONS,
    SIZES,
    Registry,
    TargetSpec,
    adjective_kind,
    canonical_adjective,
    default_registry,
)

# recognizer kind -> display name
TEXT_TYPES = {
    "number": "number",
    "time": "time",
    "date": "date",
    "address": "address",
    "email": "email",
    "flight_number": "flight number",
    "iban": "iban",
    "isbn": "isbn",
    "money": "money",
    "credit_card": "credit card number",
    "us_phone": "us phone number",
    "tracking_number": "tracking number",
    "url": "url",
}
TEXT_KIND_BY_NAME = {v: k for k, v in TEXT_TYPES.items()}
PROPERTIES = ("color", "count")


@dataclass(frozen=True)
class AnyObject:
    @property
    def name(self) -> str:
        return "any object"


@dataclass(frozen=True)
class ObjectClass:
    label: str

    @property
    def name(self) -> str:
        return self.label


@dataclass(frozen=True)
class AnyText:
    @property
    def name(self) -> str:
        return "any text"


@dataclass(frozen=True)
class TextType:
    kind: str

    def __post_init__(self):
        if self.kind not in TEXT_TYPES:
            raise ValueError(f"unknown text type {self.kind!r}")

    @property
    def name(self) -> str:
        return TEXT_TYPES[self.kind]


@dataclass(frozen=True)
class Property:
    kind: str

    def __post_init__(self):
        if self.kind not in PROPERTIES:
            raise ValueError(f"unknown property {self.kind!r}")

    @property
    def name(self) -> str:
        return self.kind


Target = Union[AnyObject, ObjectClass, AnyText, TextType, Property]


def is_text_target(t: Target) -> bool:
    return isinstance(t, (AnyText, TextType))


def target_noun(t: Target) -> str:
    """Bare noun for a target: 'object', 'text', 'number', 'bus'."""
    if isinstance(t, AnyObject):
        return "object"
    if isinstance(t, AnyText):
        return "text"
    return t.name


@dataclass(frozen=True)
class Adjective:
    value: str

    def __post_init__(self):
        adjective_kind(self.value)

    @property
    def kind(self) -> str:
        return adjective_kind(self.value)

    @classmethod
    def of(cls, word: str) -> "Adjective":
        canon = canonical_adjective(word)
        if canon is None:
            raise ValueError(f"unknown adjective {word!r}")
        return cls(canon)


@dataclass(frozen=True)
class Item:
    target: Target
    adjective: Adjective | None = None


@dataclass(frozen=True)
class FindChain:
    items: tuple[Item, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if not self.items:
            raise ValueError("a find chain needs at least one item")

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]


@dataclass(frozen=True)
class Program:
    chains: tuple[FindChain, ...]
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "chains", tuple(self.chains))
        if not self.chains:
            raise ValueError("a program needs at least one chain")

    @classmethod
    def of(cls, *chains: list[Item], name: str | None = None) -> "Program":
        return cls(tuple(FindChain(tuple(c)) for c in chains), name)


def default_program() -> Program:
    """What a new block-mode program starts as."""
    return Program.of([Item(AnyObject()), Item(AnyObject())])


def target_from_spec(spec: TargetSpec) -> Target:
    if spec.kind == "property":
        return Property(spec.name)
    if spec.kind == "text":
        if spec.name == "any text":
            return AnyText()
        kind = spec.backend_id[5:] if spec.backend_id.startswith("text:") else TEXT_KIND_BY_NAME[spec.name]
        return TextType(kind)
    if spec.name == "any object":
        return AnyObject()
    return ObjectClass(spec.name)


def target_from_name(name: str, registry: Registry | None = None) -> Target:
    """Resolve ``name`` to a target; unknown names become ObjectClass(name)."""
    spec = (registry or default_registry()).resolve(name)
    if spec is not None:
        return target_from_spec(spec)
    return ObjectClass(" ".join(name.lower().split()))


# ---------------------------------------------------------------- errors


class ProgramError(ValueError):
    pass


class ProgramSyntaxError(ProgramError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownTargetError(ProgramError):
    def __init__(self, token: str, offset: int, suggestions: list[str]):
        msg = f"unknown target {token!r} at offset {offset}"
        if suggestions:
            msg += "; did you mean " + ", ".join(repr(s) for s in suggestions) + "?"
        super().__init__(msg)
        self.token = token
        self.offset = offset
        self.suggestions = suggestions


class ProgramDecodeError(ProgramError):
    pass


# ---------------------------------------------------------------- text form

_TOKEN = re.compile(r",|[^\s,]+")


def parse_program(text: str, registry: Registry | None = None) -> Program:
    """Parse ``find ITEM on ITEM, find ITEM ...`` into a Program.

    Keywords and names are case-insensitive.  An item is an optional
    adjective followed by a registry target name; names may span several
    words.
    """
    registry = registry or default_registry()
    if not text.strip():
        raise ProgramSyntaxError("empty program", 0)
    tokens = [(m.group(), m.start()) for m in _TOKEN.finditer(text)]
    chains: list[FindChain] = []
    i = 0
    while True:
        if i >= len(tokens):
            raise ProgramSyntaxError("expected 'find'", len(text))
        tok, off = tokens[i]
        if tok.lower() != "find":
            raise ProgramSyntaxError(f"expected 'find', got {tok!r}", off)
        i += 1
        items: list[Item] = []
        while True:
            j = i
            while j < len(tokens) and tokens[j][0].lower() not in ("on", ","):
                j += 1
            if j == i:
                where = tokens[i][1] if i < len(tokens) else len(text)
                raise ProgramSyntaxError("expected an item", where)
            items.append(_parse_item(tokens[i:j], registry))
            i = j
            if i < len(tokens) and tokens[i][0].lower() == "on":
                i += 1
                continue
            break
        # written outermost-last already: "find A on B" -> [A, B]
        chains.append(FindChain(tuple(items)))
        if i == len(tokens):
            break
        i += 1  # the comma
    return Program(tuple(chains))


def _parse_item(span: list[tuple[str, int]], registry: Registry) -> Item:
    words = [w for w, _ in span]
    whole = registry.resolve(" ".join(words))
    if whole is not None:
        return Item(target_from_spec(whole))
    for n in (2, 1):
        if len(words) <= n:
            continue
        adj = canonical_adjective(" ".join(words[:n]))
        if adj is None:
            continue
        rest = words[n:]
        spec = registry.resolve(" ".join(rest))
        if spec is not None:
            return Item(target_from_spec(spec), Adjective(adj))
        for m in (2, 1):
            if len(rest) > m and canonical_adjective(" ".join(rest[:m])) is not None:
                raise ProgramSyntaxError("at most one adjective per item", span[n][1])
        token = " ".join(rest)
        raise UnknownTargetError(token, span[n][1], registry.suggest(token, 2, limit=5))
    token = " ".join(words)
    raise UnknownTargetError(token, span[0][1], registry.suggest(token, 2, limit=5))


def _item_text(item: Item) -> str:
    name = item.target.name.upper()
    return f"{item.adjective.value} {name}" if item.adjective else name


def print_program(p: Program) -> str:
    return ", ".join("find " + " on ".join(_item_text(it) for it in chain) for chain in p.chains)


def _phrase(item: Item) -> str:
    if item.adjective:
        return f"{item.adjective.value} {target_noun(item.target)}"
    return f"any {target_noun(item.target)}"


def summarize(p: Program) -> str:
    """Plain-language reading of a program, as shown in the program summary."""
    parts = ["find " + " on ".join(_phrase(it) for it in chain) for chain in p.chains]
    text = ". Then, ".join(parts) + "."
    return text[0].upper() + text[1:]


# ---------------------------------------------------------------- JSON form


def encode_item(item: Item) -> dict:
    d = {}
    if item.adjective:
        d["descriptor"] = item.adjective.value
    d["object"] = item.target.name
    return d


def encode_program(p: Program) -> dict:
    d: dict = {}
    if p.name is not None:
        d["name"] = p.name
    d["chains"] = [[encode_item(it) for it in chain] for chain in p.chains]
    return d


def to_json(p: Program, indent: int | None = None) -> str:
    return json.dumps(encode_program(p), indent=indent)


def decode_item(d, registry: Registry | None = None, where: str = "item") -> Item:
    if not isinstance(d, dict):
        raise ProgramDecodeError(f"{where}: expected an object")
    extra = set(d) - {"object", "descriptor"}
    if extra:
        raise ProgramDecodeError(f"{where}: unknown field(s) {sorted(extra)}")
    obj = d.get("object")
    if not isinstance(obj, str) or not obj.strip():
        raise ProgramDecodeError(f"{where}.object: expected a non-empty string")
    adj = None
    if d.get("descriptor") is not None:
        canon = canonical_adjective(str(d["descriptor"]))
        if canon is None:
            raise ProgramDecodeError(f"{where}.descriptor: unknown adjective {d['descriptor']!r}")
        adj = Adjective(canon)
    return Item(target_from_name(obj, registry), adj)


def decode_program(data, registry: Registry | None = None) -> Program:
    """Inverse of :func:`encode_program`; accepts a dict or a JSON string."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise ProgramDecodeError(f"malformed JSON: {e}") from None
    if not isinstance(data, dict):
        raise ProgramDecodeError("expected a JSON object")
    extra = set(data) - {"name", "chains"}
    if extra:
        raise ProgramDecodeError(f"unknown field(s) {sorted(extra)}")
    chains = data.get("chains")
    if not isinstance(chains, list) or not chains:
        raise ProgramDecodeError("chains: expected a non-empty list")
    out = []
    for ci, chain in enumerate(chains):
        if not isinstance(chain, list) or not chain:
            raise ProgramDecodeError(f"chains[{ci}]: expected a non-empty list")
        out.append(FindChain(tuple(
            decode_item(d, registry, f"chains[{ci}][{ii}]") for ii, d in enumerate(chain))))
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise ProgramDecodeError("name: expected a string")
    return Program(tuple(out), name)


# ---------------------------------------------------------------- validation


class UnsupportedSlot(NamedTuple):
    chain: int
    item: int
    name: str
    reason: str = "unknown target"


@dataclass(frozen=True)
class ValidationReport:
    unsupported_slots: tuple[UnsupportedSlot, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.unsupported_slots

    def __bool__(self):
        return self.ok


def validate_program(p: Program, registry: Registry | None = None) -> ValidationReport:
    registry = registry or default_registry()
    slots = []
    for ci, chain in enumerate(p.chains):
        for ii, item in enumerate(chain):
            t = item.target
            spec = registry.resolve(t.name)
            if spec is None or target_from_spec(spec) != t:
                slots.append(UnsupportedSlot(ci, ii, t.name))
            elif isinstance(t, Property) and (ii != 0 or len(chain) < 2):
                slots.append(UnsupportedSlot(ci, ii, t.name, "property needs a parent item"))
    return ValidationReport(tuple(slots))


__all__ = [
    "AnyObject", "ObjectClass", "AnyText", "TextType", "Property", "Target",
    "Adjective", "Item", "FindChain", "Program", "COLORS", "LOCATIONS", "SIZES",
    "TEXT_TYPES", "PROPERTIES", "parse_program", "print_program", "summarize",
    "encode_program", "decode_program", "to_json", "validate_program",
    "ValidationReport", "UnsupportedSlot", "ProgramError", "ProgramSyntaxError",
    "UnknownTargetError", "ProgramDecodeError", "target_from_name", "default_program",
]
