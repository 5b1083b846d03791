"""Visual filtering programs: ``find NUMBER on BUS`` and friends."""

from .interpreter import run_chain, run_program, run_sequence
from .program import (
    Adjective,
    AnyObject,
    AnyText,
    FindChain,
    Item,
    ObjectClass,
    Program,
    Property,
    TextType,
    decode_program,
    encode_program,
    parse_program,
    print_program,
    summarize,
    validate_program,
)
from .registry import Registry, default_registry, resolve_target
from .scene import FixtureBackend, SceneFrame, load_scene

__version__ = "0.1.0"

__all__ = [
    "Adjective", "AnyObject", "AnyText", "FindChain", "Item", "ObjectClass", "Program", "Property",
    "TextType", "decode_program", "encode_program", "parse_program", "print_program", "summarize",
    "validate_program", "Registry", "default_registry", "resolve_target", "FixtureBackend",
    "SceneFrame", "load_scene", "run_chain", "run_program", "run_sequence",
]
