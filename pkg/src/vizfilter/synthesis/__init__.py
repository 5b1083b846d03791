from __future__ import annotations

from ..program import Program
from ..registry import Registry
from .llm import LLMClient, LLMTransportError
from .nl import (
    MODIFY_PREFIX,
    NLOutcome,
    NLRequest,
    build_nl_request,
    fewshot_pairs,
    parse_nl_response,
    program_to_query_json,
    repair_program,
)
from .offline import REFUSAL, offline_synthesize
from .scene_graph import (
    SceneGraph,
    SceneNode,
    SelectableItem,
    SelectionError,
    build_scene_graph,
    generate_from_selection,
    list_items,
)


def ask(question: str, prior: Program | None = None, mode: str = "offline",
        registry: Registry | None = None, client: LLMClient | None = None) -> NLOutcome:
    """Turn a question into a program, either offline or through an LLM.

    With ``prior`` the question is a follow-up and the returned program
    replaces ``prior`` as a whole.
    """
    if mode == "offline":
        return offline_synthesize(question, prior, registry)
    if mode != "llm":
        raise ValueError(f"unknown mode {mode!r}")
    client = client or LLMClient.from_env()
    body = client.complete(build_nl_request(question, prior, registry))
    return parse_nl_response(body, registry)


def apply_followup(prior: Program, question: str, mode: str = "offline",
                   registry: Registry | None = None, client: LLMClient | None = None) -> NLOutcome:
    return ask(question, prior, mode, registry, client)


__all__ = [
    "ask", "apply_followup", "offline_synthesize", "build_nl_request", "parse_nl_response",
    "repair_program", "program_to_query_json", "fewshot_pairs", "NLOutcome", "NLRequest",
    "LLMClient", "LLMTransportError", "MODIFY_PREFIX", "REFUSAL", "SceneGraph", "SceneNode",
    "SelectableItem", "SelectionError", "build_scene_graph", "generate_from_selection", "list_items",
]
