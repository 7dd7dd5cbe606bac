import io
import json
import logging

import pytest

from switchbench.io.cli import (
    EXIT_CONTROLLABLE,
    EXIT_DISAGREEMENT,
    EXIT_INPUT_ERROR,
    EXIT_NOT_CONTROLLABLE,
    main,
)
from switchbench.io.documents import render_spec


@pytest.fixture(autouse=True)
def restore_logging():
    root = logging.getLogger()
    level = root.level
    yield
    # drop the stderr handler installed by main(); it points at a captured stream
    for handler in root.handlers[:]:
        if type(handler) is logging.StreamHandler:
            root.removeHandler(handler)
    root.setLevel(level)


@pytest.fixture
def write_system(tmp_path):
    def write(system, name="system.json"):
        path = tmp_path / name
        path.write_text(render_spec(system), encoding="utf-8")
        return str(path)
    return write


def test_analyze_two_mode(two_mode_path, capsys):
    assert main(["analyze", str(two_mode_path)]) == EXIT_CONTROLLABLE
    out = capsys.readouterr().out
    assert "Structurally controllable: yes" in out
    assert "union-graph sufficient test: no" in out


def test_analyze_uncontrollable(write_system, all_zero_system, capsys):
    assert main(["analyze", write_system(all_zero_system)]) == EXIT_NOT_CONTROLLABLE
    assert "nonaccessible" in capsys.readouterr().out


def test_json_report_with_oracle(two_mode_path, capsys):
    assert main(["analyze", str(two_mode_path), "--json", "--oracle", "20", "--seed", "3"]) == EXIT_CONTROLLABLE
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"]["controllable"] is True
    assert data["oracle"]["dimensions"] == [3] * 20
    assert data["oracle"]["agreement"] is True


def test_exit_code_ignores_formatting(write_system, fan_system, capsys):
    path = write_system(fan_system)
    assert main(["analyze", path]) == main(["analyze", path, "--json"]) == EXIT_NOT_CONTROLLABLE


def test_stdin_input(monkeypatch, two_mode_system, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(render_spec(two_mode_system)))
    assert main(["analyze", "-"]) == EXIT_CONTROLLABLE


@pytest.mark.parametrize("content", ['{"n": 1', '{"n": 1, "r": 1, "m": 1, "subsystems": []}', "[]"])
def test_input_errors(tmp_path, content, capsys):
    path = tmp_path / "bad.json"
    path.write_text(content, encoding="utf-8")
    assert main(["analyze", str(path)]) == EXIT_INPUT_ERROR
    assert "switchbench: error:" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(["analyze", str(tmp_path / "nope.json")]) == EXIT_INPUT_ERROR


def test_disagreement_exit_code(two_mode_path, monkeypatch):
    monkeypatch.setattr("switchbench.core.analyzer.oracle_dimensions", lambda *args, **kwargs: [2, 2])
    assert main(["analyze", str(two_mode_path), "--oracle", "2"]) == EXIT_DISAGREEMENT


@pytest.mark.parametrize("graph, expected", [
    ("union", '"u1" -> "x1";'),
    ("colored", 'label="2"'),
    ("subsystem:1", '"u1" -> "x3" [label="1"'),
])
def test_export_dot(two_mode_path, tmp_path, graph, expected):
    out = tmp_path / "graph.dot"
    assert main(["export-dot", str(two_mode_path), "--graph", graph, "-o", str(out)]) == 0
    assert expected in out.read_text(encoding="utf-8")


def test_export_dot_bad_subsystem(two_mode_path):
    assert main(["export-dot", str(two_mode_path), "--graph", "subsystem:7"]) == EXIT_INPUT_ERROR


def test_export_dot_bad_kind(two_mode_path):
    with pytest.raises(SystemExit):
        main(["export-dot", str(two_mode_path), "--graph", "stacked"])


def test_gen_random_then_analyze(tmp_path, capsys):
    out = tmp_path / "random.json"
    args = ["gen-random", "--n", "4", "--r", "2", "--m", "2", "--density", "0.5", "--seed", "8", "-o", str(out)]
    assert main(args) == 0
    first = out.read_text(encoding="utf-8")
    assert main(args) == 0
    assert out.read_text(encoding="utf-8") == first
    assert main(["analyze", str(out), "--oracle", "3"]) in (EXIT_CONTROLLABLE, EXIT_NOT_CONTROLLABLE)


def test_gen_random_bad_density(capsys):
    assert main(["gen-random", "--n", "2", "--r", "1", "--m", "1", "--density", "2"]) == EXIT_INPUT_ERROR


@pytest.mark.parametrize("args", [
    ["gen-random", "--n", "2", "--r", "1", "--m", "1", "--density", "0.5", "--seed", "-1"],
    ["analyze", "SYSTEM", "--oracle", "2", "--seed", "-1"],
])
def test_negative_seeds_are_input_errors(two_mode_path, args, capsys):
    args = [str(two_mode_path) if a == "SYSTEM" else a for a in args]
    assert main(args) == EXIT_INPUT_ERROR
    assert "must be >= 0" in capsys.readouterr().err


@pytest.mark.parametrize("command", ["gyrank", "grank"])
def test_gyrank(two_mode_path, capsys, command):
    assert main([command, str(two_mode_path)]) == 0
    assert capsys.readouterr().out == "n: 3\nsum: 2\nstacked: 3\n"


def test_verbosity_flags(two_mode_path, capsys):
    assert main(["-vv", "--profile", "analyze", str(two_mode_path)]) == EXIT_CONTROLLABLE
    assert "PerformanceTimer decide" in capsys.readouterr().err
