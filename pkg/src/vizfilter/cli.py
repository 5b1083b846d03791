"""``vizfilter`` command line.

Exit codes: 0 ok, 1 usage or library error, 2 program syntax, 3 unsupported
target, 4 scene file error, 5 LLM transport error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .interpreter import run_sequence
from .library import Config, Library, LibraryError
from .program import (
    Program,
    ProgramDecodeError,
    ProgramSyntaxError,
    UnknownTargetError,
    decode_program,
    parse_program,
    print_program,
    summarize,
    validate_program,
)
from .recognizers import classify_text, most_specific
from .registry import Registry, RegistryError
from .scene import FixtureBackend, SceneError, SceneFrame, load_scene
from .synthesis import (
    LLMClient,
    LLMTransportError,
    SelectionError,
    ask,
    build_scene_graph,
    generate_from_selection,
    list_items,
    repair_program,
)

EXIT_OK, EXIT_USAGE, EXIT_SYNTAX, EXIT_UNSUPPORTED, EXIT_SCENE, EXIT_LLM = range(6)


class CommandError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _out(line: str = "") -> None:
    sys.stdout.write(line + "\n")


def _context(args) -> tuple[Config, Registry, Library]:
    cfg = Config.from_env(
        registry_path=args.registry,
        library_path=args.lib,
        debounce_n=getattr(args, "debounce", None),
        brief=getattr(args, "brief", None) or None,
    )
    try:
        registry = Registry.load(cfg.registry_path)
    except (OSError, RegistryError, ValueError) as e:
        raise CommandError(f"cannot load registry: {e}", EXIT_USAGE) from None
    return cfg, registry, Library(cfg.library_path)


def _load_program(spec: str, registry: Registry, lib: Library) -> Program:
    """``@name`` loads from the library; a path loads a file; anything else is program text."""
    try:
        if spec.startswith("@"):
            return lib.load(spec[1:], registry)
        path = Path(spec)
        if not spec.lstrip().lower().startswith("find") and path.is_file():
            text = path.read_text()
            if path.suffix == ".json" or text.lstrip().startswith("{"):
                return decode_program(text, registry)
            return parse_program(text, registry)
        return parse_program(spec, registry)
    except LibraryError as e:
        raise CommandError(str(e), EXIT_USAGE) from None
    except UnknownTargetError as e:
        raise CommandError(str(e), EXIT_UNSUPPORTED) from None
    except (ProgramSyntaxError, ProgramDecodeError) as e:
        raise CommandError(str(e), EXIT_SYNTAX) from None


def _report_unsupported(p: Program, registry: Registry) -> bool:
    """Print unsupported slots with suggestions; True if there were any."""
    _, report, suggestions = repair_program(p, registry)
    for slot in report.unsupported_slots:
        line = f"unsupported: chain {slot.chain + 1}, item {slot.item + 1}: {slot.name!r} ({slot.reason})"
        sugg = suggestions.get((slot.chain, slot.item))
        if sugg:
            line += "; try: " + ", ".join(sugg)
        _out(line)
    return not report.ok


def _load_frames(path: str) -> list[SceneFrame]:
    try:
        return load_scene(path)
    except (SceneError, OSError) as e:
        raise CommandError(f"cannot load scene: {e}", EXIT_SCENE) from None


def _save(lib: Library, name: str | None, p: Program, force: bool) -> None:
    if not name:
        return
    try:
        path = lib.save(name, p, force=force)
    except LibraryError as e:
        raise CommandError(str(e), EXIT_USAGE) from None
    _out(f"saved {name} -> {path}")


# ---------------------------------------------------------------- commands


def cmd_validate(args) -> int:
    _, registry, lib = _context(args)
    p = _load_program(args.program, registry, lib)
    if _report_unsupported(p, registry):
        return EXIT_UNSUPPORTED
    _out(summarize(p))
    return EXIT_OK


def cmd_run(args) -> int:
    cfg, registry, lib = _context(args)
    frames = _load_frames(args.scene)
    p = _load_program(args.program, registry, lib)
    if _report_unsupported(p, registry):
        return EXIT_UNSUPPORTED
    if args.frame:
        frames = [f for f in frames if f.frame_id == args.frame]
        if not frames:
            raise CommandError(f"no frame {args.frame!r} in scene", EXIT_USAGE)
    for a in run_sequence(p, frames, FixtureBackend(), registry, cfg.debounce_n, cfg.brief):
        _out(f"{a.frame_id}\t{a.text}")
    return EXIT_OK


def _pick(items, choice: str) -> str:
    if choice.isdigit() and 1 <= int(choice) <= len(items):
        return items[int(choice) - 1].node_id
    return choice


def cmd_explore(args) -> int:
    _, registry, lib = _context(args)
    frames = _load_frames(args.scene)
    if args.frame:
        frames = [f for f in frames if f.frame_id == args.frame]
    if not frames:
        raise CommandError("scene has no frames", EXIT_SCENE)
    g = build_scene_graph(frames[0])
    items = list_items(g)
    for i, it in enumerate(items, 1):
        _out(f"{i:>3}. {it.display}  [{it.node_id}]")
    if args.select is not None:
        try:
            p = generate_from_selection(g, _pick(items, args.select))
        except SelectionError as e:
            raise CommandError(str(e), EXIT_USAGE) from None
    else:
        if not items:
            raise CommandError("nothing to select", EXIT_USAGE)
        while True:
            # prompt on stderr so stdout stays parseable
            sys.stderr.write("select an item: ")
            sys.stderr.flush()
            line = sys.stdin.readline()
            if not line:
                raise CommandError("no selection made", EXIT_USAGE)
            try:
                p = generate_from_selection(g, _pick(items, line.strip()))
                break
            except SelectionError as e:
                print(f"invalid selection: {e}", file=sys.stderr)
    _out(print_program(p))
    _out(summarize(p))
    _save(lib, args.save, p, args.force)
    return EXIT_UNSUPPORTED if not validate_program(p, registry).ok else EXIT_OK


def cmd_ask(args) -> int:
    cfg, registry, lib = _context(args)
    prior = None
    if args.modify:
        try:
            prior = lib.load(args.modify, registry)
        except (LibraryError, ProgramDecodeError) as e:
            raise CommandError(str(e), EXIT_USAGE) from None
    mode = "llm" if args.llm else "offline"
    client = None
    if mode == "llm":
        if not cfg.llm_url:
            raise CommandError("no LLM endpoint configured (set VIZFILTER_LLM_URL)", EXIT_LLM)
        client = LLMClient(cfg.llm_url, cfg.llm_token, timeout=args.timeout)
    try:
        outcome = ask(args.question, prior, mode, registry, client)
    except LLMTransportError as e:
        raise CommandError(f"LLM request failed: {e}", EXIT_LLM) from None
    if outcome.kind == "refusal":
        _out(outcome.text)
        return EXIT_OK
    if outcome.kind == "parse_failure":
        raise CommandError(f"could not read the model's reply: {outcome.text}", EXIT_SYNTAX)
    p = outcome.program
    _out(print_program(p))
    _out(summarize(p))
    unsupported = _report_unsupported(p, registry) or not outcome.report.ok
    _save(lib, args.save, p, args.force)
    return EXIT_UNSUPPORTED if unsupported else EXIT_OK


def cmd_lib(args) -> int:
    _, registry, lib = _context(args)
    try:
        if args.action == "list":
            for e in lib.entries():
                _out(f"{e.name}\t{e.path}\t{e.modified.isoformat(timespec='seconds')}")
        elif args.action == "save":
            p = _load_program(args.program, registry, lib)
            _save(lib, args.name, p, args.force)
        elif args.action == "show":
            p = lib.load(args.name, registry)
            _out(print_program(p))
            _out(summarize(p))
        elif args.action == "delete":
            lib.delete(args.name)
            _out(f"deleted {args.name}")
    except (LibraryError, ProgramDecodeError) as e:
        raise CommandError(str(e), EXIT_USAGE) from None
    return EXIT_OK


def cmd_classify(args) -> int:
    kinds = classify_text(args.text)
    _out(" ".join(sorted(kinds)) if kinds else "(none)")
    _out(f"most specific: {most_specific(args.text) or 'any text'}")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vizfilter", description="Visual filtering programs.")
    ap.add_argument("--registry", type=Path, help="target registry JSON (default: bundled)")
    ap.add_argument("--lib", type=Path, help="program library directory (env VIZFILTER_LIB)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and check a program")
    p.add_argument("program", help="program text, a program file, or @name")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="run a program over a scene file")
    p.add_argument("program")
    p.add_argument("scene")
    p.add_argument("--brief", action="store_true", help="drop parent and position clauses")
    p.add_argument("--debounce", type=int, default=None, metavar="N",
                   help="repeat an unchanged announcement every N frames (default 5)")
    p.add_argument("--frame", help="only this frame id")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("explore", help="generate a program by selecting a detected item")
    p.add_argument("scene")
    p.add_argument("--select", help="item number or detection id (omit for a prompt)")
    p.add_argument("--frame", help="frame id (default: first frame)")
    p.add_argument("--save", metavar="NAME")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("ask", help="generate a program from a question")
    p.add_argument("question")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--offline", action="store_true", help="rule-based (default)")
    mode.add_argument("--llm", action="store_true", help="call the configured LLM endpoint")
    p.add_argument("--modify", metavar="NAME", help="edit a saved program")
    p.add_argument("--timeout", type=float, default=30.0)
    p.add_argument("--save", metavar="NAME")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_ask)

    p = sub.add_parser("lib", help="manage saved programs")
    lsub = p.add_subparsers(dest="action", required=True)
    q = lsub.add_parser("save")
    q.add_argument("name")
    q.add_argument("program")
    q.add_argument("--force", action="store_true")
    lsub.add_parser("list")
    q = lsub.add_parser("show")
    q.add_argument("name")
    q = lsub.add_parser("delete")
    q.add_argument("name")
    p.set_defaults(func=cmd_lib)

    p = sub.add_parser("classify", help="show which text types a string matches")
    p.add_argument("text")
    p.set_defaults(func=cmd_classify)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if getattr(args, "debounce", None) is not None and args.debounce < 1:
        print("error: --debounce must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except CommandError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
