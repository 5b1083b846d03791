"""Deterministic question-to-program rules, used when no model is available.

The rules cover the question shapes in the few-shot prompt plus follow-up
edits (add, only, instead, remove).  They are a stand-in for a language
model, not a parser of English: anything they do not recognise is refused.
"""

from __future__ import annotations

import re

from ..program import (
    Adjective,
    AnyObject,
    FindChain,
    Item,
    Program,
    ProgramError,
    Property,
    is_text_target,
    parse_program,
    target_from_name,
    target_from_spec,
)
from ..registry import Registry, canonical_adjective, default_registry
from .nl import MODIFY_PREFIX, NLOutcome, repair_program

REFUSAL = "I'm sorry, I don't know what you mean, can you clarify?"

# phrase -> items, innermost first, as (target name, adjective)
LEXICON: dict[str, list[tuple[str, str | None]]] = {
    "license plate number": [("any text", None), ("license plate", None)],
    "plate number": [("any text", None), ("license plate", None)],
    "expiration date": [("date", None)],
    "expiry date": [("date", None)],
    "best by date": [("date", None)],
    "sell by date": [("date", None)],
    "route": [("number", None)],
    "route number": [("number", None)],
    "route name": [("any text", None)],
    "name": [("any text", "largest")],
    "names": [("any text", "largest")],
    "title": [("any text", "largest")],
    "temperature": [("number", None)],
    "tempurature": [("number", None)],
    "words": [("any text", None)],
    "writing": [("any text", None)],
    "product": [("grocery product", None)],
    "products": [("grocery product", None)],
    "bottle": [("grocery product", None)],
    "bottles": [("grocery product", None)],
    "table": [("dining table", None)],
    "people": [("person", None)],
}

_DETERMINERS = {"the", "this", "these", "that", "those", "my", "a", "an", "any", "all", "some", "our", "your"}
_VAGUE = {"this", "that", "it", "these", "those", "thing", "things", "something", "anything",
          "here", "there", "what", "everything", "stuff"}
_STOP = {"is", "are", "was", "going", "doing", "happening", "you", "me", "i", "it", "do", "does", "on", "in"}

_SPLIT = re.compile(r"(?:^|\s+)(?:on|of|in|at|inside|from)\s+")


def normalize(question: str) -> str:
    q = question.strip().replace("’", "'").lower()
    q = re.sub(r"\b(what|where|who|that|it)'s\b", r"\1 is", q)
    q = re.sub(r"[?!.,;:\"]", " ", q)
    return " ".join(q.split())


def _strip_determiners(words: list[str]) -> list[str]:
    while words and words[0] in _DETERMINERS:
        words = words[1:]
    return words


def _singulars(noun: str) -> list[str]:
    out = [noun]
    if noun.endswith("sses"):
        out.append(noun[:-3])
    if noun.endswith("ies"):
        out.append(noun[:-3] + "y")
    if noun.endswith("es"):
        out.append(noun[:-2])
    if noun.endswith("s"):
        out.append(noun[:-1])
    return out


class _Resolver:
    def __init__(self, registry: Registry):
        self.registry = registry

    def known(self, noun: str) -> list[Item] | None:
        if noun in LEXICON:
            return [Item(target_from_name(n, self.registry), Adjective(a) if a else None) for n, a in LEXICON[noun]]
        for form in _singulars(noun):
            spec = self.registry.resolve(form)
            if spec is not None:
                return [Item(target_from_spec(spec))]
        words = noun.split()
        # compound noun: "product names" -> names on products
        for k in range(1, len(words)):
            head = self.known(" ".join(words[k:]))
            mod = self.known(" ".join(words[:k]))
            if head and mod:
                return head + mod
        return None

    def noun(self, noun: str) -> list[Item] | None:
        if not noun or noun in _VAGUE:
            return None
        items = self.known(noun)
        if items is not None:
            return items
        words = noun.split()
        if len(words) > 2 or any(w in _STOP or w.endswith("ing") or not w.isalpha() for w in words):
            return None
        # keep unknown nouns; validation flags them as unsupported later
        return [Item(target_from_name(noun, self.registry))]

    def segment(self, seg: str) -> list[Item] | None:
        words = _strip_determiners(seg.split())
        for n in (2, 1):
            if len(words) > n:
                adj = canonical_adjective(" ".join(words[:n]))
                if adj is not None:
                    items = self.noun(" ".join(_strip_determiners(words[n:])))
                    if items is None:
                        return None
                    first = items[0]
                    return [Item(first.target, Adjective(adj)), *items[1:]]
        return self.noun(" ".join(words))

    def phrase(self, np: str) -> list[Item] | None:
        """Items for a noun phrase such as 'the text in the middle of this envelope'."""
        out: list[Item] = []
        pending = None
        segments = _SPLIT.split(np)
        if segments and not segments[0]:
            segments = segments[1:]
        for seg in segments:
            words = _strip_determiners(seg.split())
            loc = canonical_adjective(" ".join(words)) if words else None
            if loc is not None and Adjective(loc).kind == "location":
                pending = loc
                continue
            items = self.segment(seg)
            if items is None:
                return None
            if pending is not None:
                if items[0].adjective is None:
                    items[0] = Item(items[0].target, Adjective(pending))
                pending = None
            out.extend(items)
        if pending is not None:
            out.append(Item(AnyObject(), Adjective(pending)))
        return out or None


def _valid_chain(items: list[Item] | None) -> list[Item] | None:
    if not items:
        return None
    for i, it in enumerate(items):
        if isinstance(it.target, Property) and (i != 0 or len(items) < 2):
            return None
    return items


def _fresh(q: str, original: str, r: _Resolver) -> list[list[Item]] | None:
    if q.startswith("find "):
        try:
            p = parse_program(original, r.registry)
            return [list(c.items) for c in p.chains]
        except ProgramError:
            pass
    rules = [
        (r"^how many (?P<x>.+?) (?:are |is )?(?:there )?(?:\w+ing )?(?:on|in|at|inside) (?P<y>.+)$",
         lambda m: _cat([Item(Property("count"))], r.phrase(m["x"]), r.phrase(m["y"]))),
        (r"^how many (?P<x>.+?)(?: are there| is there| do you see| can you see)?$",
         lambda m: _cat([Item(Property("count"))], r.phrase(m["x"]))),
        (r"^what does (?P<y>.+?) say$",
         lambda m: _cat([Item(target_from_name("any text", r.registry))], r.phrase(m["y"]))),
        (r"^what (?:\w+ )?is (?P<y>.+?) set to$",
         lambda m: _cat([Item(target_from_name("number", r.registry))], r.phrase(m["y"]))),
        (r"^(?:is|are) (?P<y>.+?) empty$",
         lambda m: _cat([Item(AnyObject())], r.phrase(m["y"]))),
        (r"^(?:is|are) (?:there )?(?P<x>.+?) (?:on|in|at|inside) (?P<y>.+)$",
         lambda m: _cat(r.phrase(m["x"]), r.phrase(m["y"]))),
        (r"^(?:read|say|find|show me|tell me|look for|where is|where are)(?: out)? (?P<x>.+)$",
         lambda m: r.phrase(m["x"])),
        (r"^what (?:is|are) (?P<x>.+)$", lambda m: r.phrase(m["x"])),
    ]
    for pattern, build in rules:
        m = re.match(pattern, q)
        if m:
            chain = _valid_chain(build(m))
            return [chain] if chain else None
    return None


def _cat(*parts):
    if any(p is None for p in parts):
        return None
    return [it for p in parts for it in p]


def _program(chains: list[list[Item]]) -> Program:
    return Program(tuple(FindChain(tuple(c)) for c in chains))


def _replace_innermost(prior: Program, item: Item) -> list[list[Item]]:
    out = []
    for chain in prior.chains:
        items = list(chain.items)
        if is_text_target(items[0].target) == is_text_target(item.target) or len(prior.chains) == 1:
            items[0] = item
        out.append(items)
    return out


def _followup(q: str, prior: Program, r: _Resolver) -> list[list[Item]] | None:
    chains = [list(c.items) for c in prior.chains]
    q = re.sub(r"^(?:actually|please|ok|okay|now|and then|then)\s+", "", q)

    m = re.match(r"^(?:also|add|plus|additionally|and)\s+(?:also\s+)?(?P<rest>.+)$", q)
    if m:
        new = _fresh(m["rest"], m["rest"], r) or ([_valid_chain(r.phrase(m["rest"]))] if r.phrase(m["rest"]) else None)
        if not new or not new[0]:
            return None
        extra = []
        for c in new:
            if len(c) == 1 and not isinstance(c[0].target, Property):
                c = c + [chains[0][-1]]
            extra.append(c)
        return chains + extra

    m = re.match(r"^(?:only|just) (?:for|on|with) (?P<np>.+)$", q)
    if m:
        items = r.segment(m["np"])
        if not items or items[0].adjective is None:
            return None
        want = items[0]
        hit = False
        for c in chains:
            for i, it in enumerate(c):
                if it.target == want.target:
                    c[i] = Item(it.target, want.adjective)
                    hit = True
        return chains if hit else None

    m = re.match(r"^(?:just|only) (?:say|read|tell me|give me)(?: out)? (?P<np>.+)$", q)
    if m:
        items = _valid_chain(r.phrase(m["np"]))
        if not items:
            return None
        return _replace_innermost(prior, items[0]) if len(items) == 1 else [items]

    m = re.match(r"^(?P<body>.+?) instead$", q)
    if m:
        body = m["body"]
        new = _fresh(body, body, r)
        if new is None:
            items = _valid_chain(r.phrase(body))
            new = [items] if items else None
        if not new:
            return None
        if len(new) == 1 and len(new[0]) == 1:
            return _replace_innermost(prior, new[0][0])
        return new

    m = re.match(r"^what is (?:in|on|at) (?:the )?(?P<loc>.+)$", q)
    if m:
        loc = canonical_adjective(m["loc"])
        if loc is not None and Adjective(loc).kind == "location":
            return [[c[0], Item(AnyObject(), Adjective(loc))] for c in chains]

    m = re.match(r"^(?:is|are) (?:there )?(?P<x>.+?) (?:here|there|visible)$", q)
    if m:
        items = r.phrase(m["x"])
        return [_cat(items, [chains[0][-1]])] if items else None

    m = re.match(r"^(?:remove|drop|delete|forget|skip|don't read|do not read|stop reading) (?P<np>.+)$", q)
    if m:
        items = r.phrase(m["np"])
        if not items:
            return None
        gone = {it.target for it in items}
        kept = [c for c in chains if not any(it.target in gone for it in c)]
        return kept if kept and len(kept) < len(chains) else None

    return _fresh(q, q, r)


def offline_synthesize(question: str, prior: Program | None = None,
                       registry: Registry | None = None) -> NLOutcome:
    """Map a question (or a follow-up edit of ``prior``) to a program."""
    registry = registry or default_registry()
    r = _Resolver(registry)
    text = question.strip()
    if text.lower().startswith(MODIFY_PREFIX.lower().strip()):
        text = text[len(MODIFY_PREFIX.strip()):].strip()
    q = normalize(text)
    chains = _followup(q, prior, r) if prior is not None else _fresh(q, text, r)
    if not chains:
        return NLOutcome("refusal", text=REFUSAL)
    program = _program(chains)
    _, report, _ = repair_program(program, registry)
    return NLOutcome("program", program, report)
