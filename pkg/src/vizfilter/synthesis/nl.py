"""Question mode: natural language to programs through a function-calling LLM."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from ..program import (
    Adjective,
    FindChain,
    Item,
    Program,
    UnsupportedSlot,
    ValidationReport,
    encode_item,
    target_from_name,
    validate_program,
)
from ..registry import Registry, all_adjective_names, canonical_adjective, default_registry

MODIFY_PREFIX = "Modify the previous program: "
FUNCTION_NAME = "interpret_object_query"


@lru_cache(maxsize=1)
def prompt_data() -> dict:
    return json.loads(resources.files("vizfilter").joinpath("data/nl_prompt.json").read_text())


def fewshot_pairs() -> list[tuple[str, str]]:
    return [(p["user"], p["assistant"]) for p in prompt_data()["fewshot"]]


@dataclass
class NLRequest:
    function: dict
    system: str
    history: list[dict]
    user: str
    prior: Program | None = None

    @property
    def messages(self) -> list[dict]:
        msgs = [{"role": "system", "content": self.system}, *self.history]
        if self.prior is not None:
            msgs.append({"role": "assistant", "content": program_to_query_json(self.prior)})
        msgs.append({"role": "user", "content": self.user})
        return msgs

    def payload(self, model: str = "gpt-4") -> dict:
        return {
            "model": model,
            "messages": self.messages,
            "functions": [self.function],
            "function_call": {"name": self.function["name"]},
        }


@dataclass
class NLOutcome:
    kind: str  # "program" | "refusal" | "parse_failure"
    program: Program | None = None
    report: ValidationReport = field(default_factory=ValidationReport)
    text: str = ""

    @property
    def is_program(self) -> bool:
        return self.kind == "program"


def program_to_query_json(p: Program) -> str:
    return json.dumps({"query": [[encode_item(it) for it in chain] for chain in p.chains]})


def build_nl_request(question: str, prior: Program | None = None,
                     registry: Registry | None = None) -> NLRequest:
    registry = registry or default_registry()
    if not question.strip():
        raise ValueError("empty question")
    names = registry.names()
    if not names:
        raise ValueError("registry has no targets to offer the model")
    data = prompt_data()
    fn = copy.deepcopy(data["function"])
    props = fn["parameters"]["properties"]["query_items"]["items"]["properties"]
    props["object"]["enum"] = names
    props["descriptor"]["enum"] = all_adjective_names()
    history = []
    for user, assistant in fewshot_pairs():
        history.append({"role": "user", "content": user})
        history.append({"role": "assistant", "content": assistant})
    user = question.strip()
    if prior is not None and not user.startswith(MODIFY_PREFIX):
        user = MODIFY_PREFIX + user
    return NLRequest(fn, data["system"], history, user, prior)


def parse_nl_response(body: str, registry: Registry | None = None) -> NLOutcome:
    """Read a model reply: program JSON, or plain prose (a refusal)."""
    registry = registry or default_registry()
    text = body.strip()
    if not text.startswith(("{", "[")):
        return NLOutcome("refusal", text=text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        return NLOutcome("parse_failure", text=f"malformed JSON: {e}")
    if isinstance(data, dict):
        key = "query" if "query" in data else "query_items" if "query_items" in data else None
        if key is None:
            return NLOutcome("parse_failure", text="reply has neither 'query' nor 'query_items'")
        data = data[key]
    if not isinstance(data, list) or not data:
        return NLOutcome("parse_failure", text="query must be a non-empty list")
    raw_chains = data if all(isinstance(c, list) for c in data) else [data]
    chains = []
    dropped: list[UnsupportedSlot] = []
    for ci, raw in enumerate(raw_chains):
        if not raw:
            return NLOutcome("parse_failure", text=f"chain {ci} is empty")
        items = []
        for ii, entry in enumerate(raw):
            if not isinstance(entry, dict) or not isinstance(entry.get("object"), str) or not entry["object"].strip():
                return NLOutcome("parse_failure", text=f"chain {ci} item {ii}: expected an object with a name")
            adj = None
            desc = entry.get("descriptor")
            if desc:
                canon = canonical_adjective(str(desc))
                if canon is None:
                    dropped.append(UnsupportedSlot(ci, ii, str(desc), "unknown adjective"))
                else:
                    adj = Adjective(canon)
            items.append(Item(target_from_name(entry["object"], registry), adj))
        chains.append(FindChain(tuple(items)))
    program = Program(tuple(chains))
    report = validate_program(program, registry)
    if dropped:
        report = ValidationReport(tuple(sorted(report.unsupported_slots + tuple(dropped))))
    return NLOutcome("program", program, report)


def repair_program(p: Program, registry: Registry | None = None):
    """Validate ``p`` and offer replacements for each unsupported slot.

    Returns ``(program, report, suggestions)``; the program is untouched and
    ``suggestions`` maps ``(chain, item)`` to at most three registry names.
    """
    registry = registry or default_registry()
    report = validate_program(p, registry)
    suggestions = {}
    for slot in report.unsupported_slots:
        if slot.reason == "unknown target":
            suggestions[(slot.chain, slot.item)] = registry.suggest(slot.name, max_distance=3, limit=3)
        else:
            suggestions[(slot.chain, slot.item)] = []
    return p, report, suggestions
