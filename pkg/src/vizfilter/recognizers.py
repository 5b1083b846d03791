"""Local recognizers for typed text (numbers, dates, IBANs, ...).

Checksummed kinds (ISBN, IBAN, credit card) only match whole tokens whose
checksum verifies; their ``value`` has separators stripped.  The address
recognizer is a keyword heuristic and will miss many real addresses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator

KINDS = (
    "number", "time", "date", "address", "email", "flight_number", "iban",
    "isbn", "money", "credit_card", "us_phone", "tracking_number", "url",
)

# most specific first
PRIORITY = (
    "iban", "credit_card", "isbn", "tracking_number", "flight_number", "us_phone",
    "email", "url", "money", "address", "date", "time", "number",
)


@dataclass(frozen=True)
class TextMatch:
    kind: str
    value: str
    span: tuple[int, int]


# ---------------------------------------------------------------- checksums


def luhn_valid(digits: str) -> bool:
    if not digits.isdigit():
        return False
    total = 0
    for i, ch in enumerate(reversed(digits)):
        d = int(ch)
        if i % 2 == 1:
            d = d * 2
            if d > 9:
                d -= 9
        total += d
    return total % 10 == 0


def isbn10_valid(s: str) -> bool:
    if len(s) != 10 or not s[:9].isdigit() or not (s[9].isdigit() or s[9] in "Xx"):
        return False
    total = sum((10 - i) * int(c) for i, c in enumerate(s[:9]))
    total += 10 if s[9] in "Xx" else int(s[9])
    return total % 11 == 0


def isbn13_valid(s: str) -> bool:
    if len(s) != 13 or not s.isdigit():
        return False
    return sum(int(c) * (1 if i % 2 == 0 else 3) for i, c in enumerate(s)) % 10 == 0


def iban_valid(s: str) -> bool:
    s = s.upper()
    if not re.fullmatch(r"[A-Z]{2}\d{2}[A-Z0-9]{11,30}", s):
        return False
    rotated = s[4:] + s[:4]
    return int("".join(str(int(c, 36)) for c in rotated)) % 97 == 1


# ---------------------------------------------------------------- patterns

_B = r"(?<![A-Za-z0-9])"  # token start
_E = r"(?![A-Za-z0-9])"   # token end

_MONTHS = "jan|feb|mar|apr|may|jun|jul|aug|sep|sept|oct|nov|dec"
_CURRENCY_CODES = "USD|EUR|GBP|CAD|AUD|JPY|CHF|CNY|INR|MXN"
_AMOUNT = r"\d{1,3}(?:,\d{3})+(?:\.\d+)?|\d+(?:\.\d+)?"

_PATTERNS = {
    "number": re.compile(_B + r"(?:\d{1,3}(?:,\d{3})+(?:\.\d+)?|\d+(?:\.\d+)?)" + r"(?![\d,]?\d)(?!\.\d)"),
    "time": re.compile(
        _B + r"(?:[01]?\d|2[0-3]):[0-5]\d(?::[0-5]\d)?(?:\s?[ap]\.?m\.?" + _E + r")?" + r"(?![\d:])",
        re.IGNORECASE),
    "date": re.compile(
        _B + r"(?:(?:" + _MONTHS + r")\.?\s+\d{1,2},?\s+\d{4}"
        r"|\d{4}-\d{2}-\d{2}"
        r"|\d{1,2}/\d{1,2}/(?:\d{4}|\d{2})"
        r"|\d{1,2}/\d{4})" + _E + r"(?!/)",
        re.IGNORECASE),
    "money": re.compile(
        r"(?:[$€£]\s?(?:" + _AMOUNT + r")|" + _B + r"(?:" + _AMOUNT + r")\s?(?:" + _CURRENCY_CODES + r"))" + _E),
    "email": re.compile(r"(?<![\w.+-])[A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,}" + _E),
    "url": re.compile(
        r"(?<![\w@./-])(?:https?://[^\s]+|www\.[^\s]+"
        r"|[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.(?:com|org|net|edu|gov|io|co|us|uk|info)(?:/[^\s]*)?" + _E + r")",
        re.IGNORECASE),
    "us_phone": re.compile(
        r"(?<![\w+])(?:\+?1[\s.-]?)?(?:\(\d{3}\)\s?|\d{3}[\s.-]?)\d{3}[\s.-]?\d{4}" + _E),
    "flight_number": re.compile(_B + r"(?:[A-Z][A-Z0-9]|[0-9][A-Z])\s?\d{1,4}" + _E),
    "tracking_number": re.compile(_B + r"(?:1Z[A-Z0-9]{16}|\d{20,22}|\d{15}|\d{12})" + _E),
    "address": re.compile(
        _B + r"\d+[A-Za-z]?(?:\s+[A-Za-z0-9.'-]+){0,3}?\s+"
        r"(?:St|Street|Ave|Avenue|Rd|Road|Blvd|Dr|Drive|Lane|Ln|Way|Ct)\b\.?",
        re.IGNORECASE),
}

_TRAILING_PUNCT = ".,;:!?)]}'\""


def _regex(kind: str) -> Callable[[str], Iterator[TextMatch]]:
    pat = _PATTERNS[kind]

    def find(s: str) -> Iterator[TextMatch]:
        for m in pat.finditer(s):
            start, end = m.span()
            if kind == "url":
                while end > start and s[end - 1] in _TRAILING_PUNCT:
                    end -= 1
            yield TextMatch(kind, s[start:end], (start, end))

    return find


# maximal runs of digit (or alphanumeric) groups joined by single separators
_DIGIT_RUN = re.compile(_B + r"[0-9Xx]+(?:[ -][0-9Xx]+)*" + _E)
_ALNUM_RUN = re.compile(_B + r"[A-Za-z0-9]+(?: [A-Za-z0-9]+)*" + _E)


def _grouped(run_pattern: re.Pattern, valid: Callable[[str], bool], kind: str) -> Callable[[str], Iterator[TextMatch]]:
    """Scan separator-joined groups; emit the longest valid group sequence at each start."""

    def find(s: str) -> Iterator[TextMatch]:
        for run in run_pattern.finditer(s):
            groups = [(g.start() + run.start(), g.end() + run.start())
                      for g in re.finditer(r"[A-Za-z0-9]+", run.group())]
            i = 0
            while i < len(groups):
                for j in range(len(groups) - 1, i - 1, -1):
                    start, end = groups[i][0], groups[j][1]
                    compact = re.sub(r"[ -]", "", s[start:end])
                    if valid(compact):
                        yield TextMatch(kind, compact.upper(), (start, end))
                        i = j + 1
                        break
                else:
                    i += 1

    return find


def _isbn_ok(s: str) -> bool:
    return isbn10_valid(s) or isbn13_valid(s)


def _card_ok(s: str) -> bool:
    return 13 <= len(s) <= 19 and luhn_valid(s)


def _iban_ok(s: str) -> bool:
    return 15 <= len(s) <= 34 and iban_valid(s)


_FINDERS: dict[str, Callable[[str], Iterator[TextMatch]]] = {
    **{k: _regex(k) for k in _PATTERNS},
    "isbn": _grouped(_DIGIT_RUN, _isbn_ok, "isbn"),
    "credit_card": _grouped(_DIGIT_RUN, _card_ok, "credit_card"),
    "iban": _grouped(_ALNUM_RUN, _iban_ok, "iban"),
}


def recognize(kind: str, s: str) -> list[TextMatch]:
    """All non-overlapping matches of text type ``kind`` in ``s``, left to right."""
    try:
        finder = _FINDERS[kind]
    except KeyError:
        raise ValueError(f"unknown text kind {kind!r}") from None
    return list(finder(s))


def classify_text(s: str) -> set[str]:
    """Kinds with a match spanning the whole (stripped) string."""
    stripped = s.strip()
    if not stripped:
        return set()
    lead = len(s) - len(s.lstrip())
    whole = (lead, lead + len(stripped))
    return {k for k in KINDS if any(m.span == whole for m in recognize(k, s))}


def most_specific(s: str) -> str | None:
    """The most specific kind for ``s``, or None when it is just text."""
    kinds = classify_text(s)
    for k in PRIORITY:
        if k in kinds:
            return k
    return None
