"""Test-side generators that don't belong in the package."""

import random

from vizfilter.program import Adjective, FindChain, Item, Program, target_from_spec
from vizfilter.registry import COLORS, LOCATIONS, SIZES

ADJECTIVES = COLORS + LOCATIONS + SIZES


def any_registry_program(rng: random.Random, registry, max_chains=3, max_depth=4) -> Program:
    """Random program over every registry name, properties innermost only."""
    specs = [registry.resolve(n) for n in registry.names()]
    plain = [s for s in specs if s.kind != "property"]
    props = [s for s in specs if s.kind == "property"]
    chains = []
    for _ in range(rng.randint(1, max_chains)):
        depth = rng.randint(1, max_depth)
        items = []
        for i in range(depth):
            if i == 0 and depth > 1 and rng.random() < 0.2:
                items.append(Item(target_from_spec(rng.choice(props))))
                continue
            adj = Adjective(rng.choice(ADJECTIVES)) if rng.random() < 0.4 else None
            items.append(Item(target_from_spec(rng.choice(plain)), adj))
        chains.append(FindChain(tuple(items)))
    return Program(tuple(chains))


def luhn_check_digit(payload: str) -> str:
    total = 0
    for i, ch in enumerate(reversed(payload)):
        d = int(ch)
        if i % 2 == 0:
            d *= 2
            if d > 9:
                d -= 9
        total += d
    return str((10 - total % 10) % 10)


def isbn13_check_digit(payload: str) -> str:
    total = sum(int(c) * (1 if i % 2 == 0 else 3) for i, c in enumerate(payload))
    return str((10 - total % 10) % 10)


def iban_with_check(country: str, bban: str) -> str:
    rearranged = bban + country + "00"
    num = int("".join(str(int(c, 36)) for c in rearranged))
    return f"{country}{98 - num % 97:02d}{bban}"


def mutate_digit(s: str, pos: int, rng: random.Random) -> str:
    old = s[pos]
    new = rng.choice([d for d in "0123456789" if d != old])
    return s[:pos] + new + s[pos + 1:]
