import io
import json
import subprocess
import sys

import pytest

from lothnn.cli import _scalar, render_human, run
from conftest import DATA

W1 = str(DATA / "w1.lot")
THREE = str(DATA / "three.lot")


def call(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def _leaves(doc):
    if isinstance(doc, dict):
        for v in doc.values():
            yield from _leaves(v)
    elif isinstance(doc, list):
        for v in doc:
            yield from _leaves(v)
    else:
        yield doc


@pytest.mark.parametrize("command", ["validate", "info", "present", "decompose", "conjecture"])
def test_commands_on_three(command):
    code, out, err = call(command, THREE, "--format", "structured")
    assert code == 0, err
    doc = json.loads(out)
    assert doc["schema"] == 1 and doc["command"] == command


@pytest.mark.parametrize("command", ["info", "hnn", "decompose"])
def test_human_and_structured_carry_the_same_facts(command):
    _, structured, _ = call(command, W1, "--format", "structured")
    _, human, _ = call(command, W1)
    doc = json.loads(structured)
    assert human == render_human(doc) + "\n"
    for leaf in _leaves(doc):
        assert _scalar(leaf) in human


def test_hnn_is_byte_identical_across_runs():
    runs = [subprocess.run([sys.executable, "-m", "lothnn", "hnn", W1, "--format", "structured"],
                           capture_output=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1]
    assert json.loads(runs[0])["result"]["ok"] is True


def test_stdin_input(monkeypatch):
    code, out, _ = call("validate", "-", "--format", "structured", stdin="u x y\ny u x\n", monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out)["result"]["reduced"] is True


def test_domain_errors_exit_one(monkeypatch):
    code, out, err = call("hnn", THREE)
    assert code == 1 and not out and err.startswith("lothnn: hnn: core hypotheses fail")
    code, _, err = call("validate", "-", stdin="u x w\n", monkeypatch=monkeypatch)
    assert code == 1 and "line 1: label 'w' is not a vertex" in err
    code, _, err = call("derive", THREE)
    assert code == 1 and "no cycle" in err
    code, _, err = call("info", "/nonexistent/file.lot")
    assert code == 1 and "cannot read" in err


def test_usage_errors_exit_two():
    assert call("bogus", THREE)[0] == 2
    assert call("hnn")[0] == 2
    assert call("enum", THREE)[0] == 2
    assert call("derive", THREE, "--steps", "-1")[0] == 2
    assert call("enum", "--max-vertices", "9")[0] == 1


def test_derive_trace():
    code, out, _ = call("derive", W1, "--seed", "T", "--steps", "2", "--format", "structured")
    res = json.loads(out)["result"]
    assert code == 0 and res["direction"] == "backward"
    assert res["stopped_at_lift_failure"] and len(res["trace"]) == 1
    assert all(t["certificate_ok"] for t in res["trace"])


def test_enum_small():
    code, out, _ = call("enum", "--max-vertices", "3", "--format", "structured")
    res = json.loads(out)["result"]
    assert code == 0 and res["counts"] == {"1": 1, "2": 2, "3": 27}
    assert all(c["failed"] == 0 for c in res["checks"])
    assert "minimal-oracle" in {c["check"] for c in res["checks"]}
