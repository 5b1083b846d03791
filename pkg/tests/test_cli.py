import io
import subprocess
import sys
from pathlib import Path

import pytest

from vizfilter import cli


@pytest.fixture(autouse=True)
def isolated(monkeypatch, tmp_path):
    monkeypatch.setenv("VIZFILTER_LIB", str(tmp_path / "lib"))
    monkeypatch.delenv("VIZFILTER_LLM_URL", raising=False)


def run(capsys, *argv):
    code = cli.main(list(map(str, argv)))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_ok(capsys):
    assert run(capsys, "validate", "find number on red bus") == (0, "Find any number on red bus.\n", "")


def test_validate_unknown_target(capsys):
    code, _, err = run(capsys, "validate", "find number on buss")
    assert code == 3 and "bus" in err


def test_validate_syntax_error(capsys):
    assert run(capsys, "validate", "number on bus")[0] == 2


def test_validate_program_file(capsys, tmp_path):
    (tmp_path / "p.txt").write_text("find date on can\n")
    (tmp_path / "p.json").write_text('{"chains": [[{"object": "date"}, {"object": "can"}]]}')
    assert run(capsys, "validate", tmp_path / "p.txt")[1] == "Find any date on any can.\n"
    assert run(capsys, "validate", tmp_path / "p.json")[1] == "Find any date on any can.\n"


def test_run_scene_errors(capsys, fixtures_dir, tmp_path):
    assert run(capsys, "run", "find bus", fixtures_dir / "bad_bbox.json")[0] == 4
    assert run(capsys, "run", "find bus", tmp_path / "missing.json")[0] == 4
    (tmp_path / "junk.json").write_text("{not json")
    assert run(capsys, "run", "find bus", tmp_path / "junk.json")[0] == 4


def test_run_brief_and_frame(capsys, fixtures_dir):
    code, out, _ = run(capsys, "run", "--brief", "find date on any object", fixtures_dir / "date_can.json")
    assert (code, out) == (0, "f1\tFound date, JAN 10 2024.\n")
    code, out, _ = run(capsys, "run", "--frame", "f3", "--debounce", "2", "find number on bus",
                       fixtures_dir / "bus_sequence.json")
    assert (code, out) == (0, "f3\tFound number 73 on bus, left of frame.\n")
    assert run(capsys, "run", "--frame", "nope", "find bus", fixtures_dir / "bus_two.json")[0] == 1
    assert run(capsys, "run", "--debounce", "0", "find bus", fixtures_dir / "bus_two.json")[0] == 1


def test_run_unsupported_program(capsys, fixtures_dir, tmp_path):
    (tmp_path / "p.json").write_text('{"chains": [[{"object": "keys"}, {"object": "bench"}]]}')
    code, out, _ = run(capsys, "run", tmp_path / "p.json", fixtures_dir / "bus_two.json")
    assert code == 3 and "unsupported" in out


def test_interactive_explore(capsys, fixtures_dir, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("9\n2\n"))
    code, out, err = run(capsys, "explore", fixtures_dir / "explore_bus.json")
    assert code == 0
    assert "invalid selection" in err
    assert out.splitlines()[-2:] == ["find NUMBER on BUS", "Find any number on any bus."]


def test_explore_without_input(capsys, fixtures_dir, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(""))
    assert run(capsys, "explore", fixtures_dir / "explore_bus.json")[0] == 1
    assert run(capsys, "explore", fixtures_dir / "empty.json", "--select", "1")[0] == 4


def test_lib_commands(capsys):
    assert run(capsys, "lib", "save", "r", "find number on bus")[0] == 0
    assert run(capsys, "lib", "save", "r", "find bus")[0] == 1
    assert run(capsys, "lib", "list")[1].startswith("r\t")
    assert run(capsys, "lib", "show", "r")[1] == "find NUMBER on BUS\nFind any number on any bus.\n"
    assert run(capsys, "lib", "delete", "r")[0] == 0
    assert run(capsys, "lib", "show", "r")[0] == 1


def test_ask_offline_and_refusal(capsys):
    code, out, _ = run(capsys, "ask", "What is the route of this bus?")
    assert code == 0 and out.splitlines()[0] == "find NUMBER on BUS"
    code, out, _ = run(capsys, "ask", "What is this?")
    assert code == 0 and out.startswith("I'm sorry")


def test_ask_llm_unreachable(capsys, monkeypatch):
    assert run(capsys, "ask", "--llm", "hi")[0] == 5
    monkeypatch.setenv("VIZFILTER_LLM_URL", "http://127.0.0.1:9/v1")
    assert run(capsys, "ask", "--llm", "--timeout", "1", "hi")[0] == 5


def test_ask_modify_missing_program(capsys):
    assert run(capsys, "ask", "--modify", "nothing", "Only for blue busses")[0] == 1


def test_classify(capsys):
    assert run(capsys, "classify", "JAN 10 2024")[1] == "date\nmost specific: date\n"


def test_bad_usage(capsys):
    assert run(capsys, "frobnicate")[0] == 1


def test_module_entry_point(fixtures_dir):
    r = subprocess.run([sys.executable, "-m", "vizfilter", "run", "find number on bus",
                        str(fixtures_dir / "bus_empty.json")], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "f1\tNo bus found.\n"


def test_sweep_script():
    script = Path(__file__).resolve().parent.parent / "scripts" / "sweep.py"
    r = subprocess.run([sys.executable, str(script), "--frames", "40"], capture_output=True, text=True)
    assert r.returncode == 0, r.stdout + r.stderr
    assert "0 mismatches" in r.stdout and "0 not re-found" in r.stdout
