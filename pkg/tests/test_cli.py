"""CLI surface tests via click's runner."""

import json
import os

import pytest
from click.testing import CliRunner

from helpers import random_hierarchy
from pcg.cli import main
from pcg.fixtures import TABLE_PCG, chair_hierarchy
from pcg.lang import parse_pcg
from pcg.llm import ReplayStore, build_edit_prompt, build_generation_prompt


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def table_file(tmp_path):
    path = tmp_path / "table.pcg"
    path.write_text(TABLE_PCG)
    return str(path)


def test_parse_ok(runner, table_file):
    result = runner.invoke(main, ["parse", table_file])
    assert result.exit_code == 0
    assert "4 params" in result.output


def test_parse_json(runner, table_file):
    result = runner.invoke(main, ["parse", table_file, "--json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["output"] == "table"


def test_parse_reports_diagnostics_with_exit_code(runner, tmp_path):
    bad = tmp_path / "bad.pcg"
    bad.write_text("c = conjure()\noutput = c\n")
    result = runner.invoke(main, ["parse", str(bad)])
    assert result.exit_code == 1
    assert "UnknownNodeKind" in result.output


def test_fmt_canonicalizes(runner, tmp_path):
    messy = tmp_path / "messy.pcg"
    messy.write_text("c   =  cube( )\noutput=c\n")
    result = runner.invoke(main, ["fmt", str(messy)])
    assert result.exit_code == 0
    assert result.output == "c = cube()\noutput = c\n"


def test_tokens(runner, table_file):
    result = runner.invoke(main, ["tokens", table_file])
    assert result.exit_code == 0
    assert int(result.output.strip()) > 100


def test_eval_with_set_and_out(runner, table_file, tmp_path):
    out = tmp_path / "mesh.obj"
    result = runner.invoke(main, ["eval", table_file, "--set", "leg_height=3",
                                  "--out", str(out)])
    assert result.exit_code == 0
    assert out.exists() and "vertices" in result.output


def test_eval_bench(runner, table_file):
    result = runner.invoke(main, ["eval", table_file, "--bench"])
    assert result.exit_code == 0
    assert "evaluate:" in result.output and "reevaluate:" in result.output


def test_eval_range_error_exit_code(runner, table_file):
    result = runner.invoke(main, ["eval", table_file, "--set", "leg_height=99"])
    assert result.exit_code == 2


def test_extract_directory(runner, tmp_path):
    src = tmp_path / "in"
    src.mkdir()
    (src / "chair.json").write_text(json.dumps(chair_hierarchy()))
    (src / "thing.json").write_text(json.dumps(random_hierarchy(5, True)))
    out = tmp_path / "out"
    result = runner.invoke(main, ["extract", str(src), "--out", str(out)])
    assert result.exit_code == 0
    assert sorted(p.name for p in out.glob("*.pcg")) == ["chair.pcg", "thing.pcg"]
    assert len(list(out.glob("*.meta.json"))) == 2


def test_extract_coord_rot(runner, tmp_path):
    src = tmp_path / "chair.json"
    src.write_text(json.dumps(chair_hierarchy()))
    out = tmp_path / "out"
    result = runner.invoke(main, ["extract", str(src), "--out", str(out),
                                  "--coord-rot", "x-zy"])
    assert result.exit_code == 0


def test_transpile_backends(runner, table_file, tmp_path):
    py_out = tmp_path / "table.py"
    result = runner.invoke(main, ["transpile", table_file, "--backend",
                                  "blender_python", "--out", str(py_out)])
    assert result.exit_code == 0
    assert "nw.new_node" in py_out.read_text()
    result = runner.invoke(main, ["transpile", table_file, "--backend", "json"])
    assert result.exit_code == 0
    assert json.loads(result.output)["output"] == "table"


def test_report_writes_csv_and_figures(runner, tmp_path):
    graphs = tmp_path / "graphs"
    graphs.mkdir()
    (graphs / "table.pcg").write_text(TABLE_PCG)
    (graphs / "cube.pcg").write_text("c = cube()\noutput = c\n")
    result = runner.invoke(main, ["report", str(graphs)])
    assert result.exit_code == 0, result.output
    assert (graphs / "report.csv").exists()
    assert (graphs / "report_tokens.png").exists()
    assert (graphs / "report_ratios.png").exists()
    header = (graphs / "report.csv").read_text().splitlines()[0]
    assert header.startswith("name,pcg_tokens")


def test_generate_replay(runner, tmp_path):
    replay = tmp_path / "llm"
    prompt = build_generation_prompt("a plain cube", [])
    ReplayStore(replay).put(prompt.text, "```\nc = cube()\noutput = c\n```")
    result = runner.invoke(main, ["generate", "a plain cube", "--replay",
                                  "--replay-dir", str(replay)])
    assert result.exit_code == 0, result.output
    assert "c = cube()" in result.output


def test_generate_replay_miss(runner, tmp_path):
    result = runner.invoke(main, ["generate", "anything", "--replay",
                                  "--replay-dir", str(tmp_path)])
    assert result.exit_code == 2


def test_edit_replay(runner, table_file, tmp_path):
    graph = parse_pcg(TABLE_PCG).graph
    prompt = build_edit_prompt(graph, "make the legs taller")
    edited = TABLE_PCG.replace("input leg_height: float = 2.0",
                               "input leg_height: float = 3.0")
    replay = tmp_path / "llm"
    ReplayStore(replay).put(prompt, "```\n" + edited + "```")
    result = runner.invoke(main, ["edit", table_file, "make the legs taller",
                                  "--replay", "--replay-dir", str(replay)])
    assert result.exit_code == 0, result.output
    assert "leg_height: float = 3.0" in result.output


def test_bench_compile(runner):
    responses = os.path.join(os.path.dirname(__file__), "fixtures", "responses")
    result = runner.invoke(main, ["bench-compile", responses])
    assert result.exit_code == 0
    assert "compile rate: 0.700" in result.output


def test_serve_registered(runner):
    result = runner.invoke(main, ["serve", "--help"])
    assert result.exit_code == 0
    assert "--port" in result.output and "--data-dir" in result.output
