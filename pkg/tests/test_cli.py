"""Command-line interface: exit codes, artifact schemas, determinism."""
import json

import pytest

from hetcontour import cli


def run(argv):
    return cli.main(argv)


def test_melnikov_command_writes_manifest(tmp_path, capsys):
    code = run(["melnikov", "--case", "parabola", "--c", "3/2",
                "--out", str(tmp_path), "--format", "json"])
    assert code == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "M(0) = " in out
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert {e["path"] for e in manifest} == {"melnikov.json"}
    assert all(len(e["sha256"]) == 64 for e in manifest)
    doc = json.loads((tmp_path / "melnikov.json").read_text())
    assert abs(float(doc["value"]) + 0.0866532) < 1e-5


def test_identical_runs_are_byte_identical(tmp_path):
    outs = []
    for name in ("one", "two"):
        d = tmp_path / name
        run(["melnikov", "--case", "axis", "--c", "1/2",
             "--out", str(d), "--format", "json"])
        outs.append(((d / "manifest.json").read_bytes(),
                     (d / "melnikov.json").read_bytes()))
    assert outs[0] == outs[1]


def test_modelmap_csv_schema_and_svg(tmp_path, capsys):
    code = run(["modelmap", "--orientation", "monodromic",
                "--lambda", "2", "--mu", "2", "--kmax", "1", "--n", "21",
                "--out", str(tmp_path), "--format", "all"])
    assert code == cli.EXIT_OK
    lines = (tmp_path / "modelmap.csv").read_text().splitlines()
    assert lines[0] == "tag,k,param1,param2,residual"
    assert len(lines) > 10
    svg = (tmp_path / "modelmap.svg").read_text()
    assert svg.startswith("<svg") or "<svg" in svg
    assert cli.HETEROCLINIC_COLOR in svg


def test_synthesize_prints_family(capsys):
    code = run(["synthesize", "--variety", "y*(y-x*(1-x))", "--degree", "2",
                "--free", "a10,a01,a11", "--names", "a,b,c"])
    assert code == cli.EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert {p["name"] for p in doc["parameters"]} == {"a", "b", "c"}


def test_unknown_scenario_is_hard_error(tmp_path, capsys):
    code = run(["diagram", "--scenario", "nope", "--out", str(tmp_path)])
    assert code == cli.EXIT_HARD
    assert "NotFound" in capsys.readouterr().err


def test_degenerate_modelmap_is_hard_error(capsys):
    code = run(["modelmap", "--orientation", "monodromic",
                "--lambda", "1", "--mu", "2"])
    assert code == cli.EXIT_HARD
    assert "Degenerate" in capsys.readouterr().err


def test_portrait_finds_equilibria(tmp_path, capsys):
    code = run(["portrait", "--system", "mono_unperturbed",
                "--region", "-0.5", "1.5", "-0.5", "0.7",
                "--time", "5", "--out", str(tmp_path), "--format", "all"])
    assert code == cli.EXIT_OK
    doc = json.loads((tmp_path / "portrait.json").read_text())
    # saddles at (0,0) and (1,0), focus at (2/3,1/9), node on the parabola
    assert len(doc["equilibria"]) == 4
    types = {e["type"] for e in doc["equilibria"]}
    assert "saddle" in types
