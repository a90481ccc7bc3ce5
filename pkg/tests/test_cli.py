from __future__ import annotations

import json
import subprocess
import sys
from importlib.resources import files
from pathlib import Path

import pytest

from enumreg.cli import main
from enumreg.dnf import brute_force_models, parse_dnf

SAMPLE = str(files("enumreg") / "data" / "sample.dnf")
COUNT_ASM = str(files("enumreg") / "data" / "count.asm")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_demo_queue_example(capsys):
    code, out, _ = run(capsys, "demo", "--fixture", "bursty:8,3", "--regularizer", "queue", "--p", "4")
    assert code == 0
    r = json.loads(out)["runs"]["queue"]
    assert r["solutions"] == 9
    assert r["delay"]["max_gap"] <= 4
    assert r["verdict"] == "pass"


def test_dnf_models_geometric_matches_brute_force(capsys):
    code, out, _ = run(capsys, "dnf", "models", SAMPLE, "--pipeline", "geometric")
    assert code == 0
    f = parse_dnf(Path(SAMPLE).read_text())
    lines = out.split()
    assert len(lines) == len(brute_force_models(f)) == 193
    assert sorted(lines) == sorted(f.format_model(v) for v in brute_force_models(f))


def test_compare_example(capsys):
    code, out, _ = run(capsys, "compare", "--fixture", "bursty:1024,15", "--regularizers", "queue,geometric")
    assert code == 0
    runs = json.loads(out)["runs"]
    assert runs["queue"]["space"]["peak_queue"] >= 900
    assert runs["geometric"]["space"]["peak_live_simulations"] <= 12


@pytest.mark.parametrize("reg", ["queue", "adaptive", "geometric", "usualinc", "dynamic"])
def test_every_regularizer_passes_on_a_fixture(capsys, reg):
    code, out, _ = run(capsys, "demo", "--fixture", "adversary:8,64", "--regularizer", reg)
    assert code == 0, out
    assert json.loads(out)["runs"][reg]["solutions"] == 9


def test_program_source_with_storage(capsys):
    code, out, _ = run(
        capsys, "demo", "--program", COUNT_ASM, "--input", "12", "--storage", "chunks:2",
        "--regularizer", "geometric", "--emit",
    )
    assert code == 0
    r = json.loads(out)["runs"]["geometric"]
    assert r["solutions"] == 12
    assert sorted(r["output"]) == [[i] for i in range(1, 13)]


def test_dnf_source_in_demo(capsys):
    code, out, _ = run(capsys, "demo", "--dnf", SAMPLE, "--regularizer", "geometric")
    assert code == 0
    assert json.loads(out)["runs"]["geometric"]["solutions"] == 193


def test_bound_violation_exit_code(capsys):
    code, out, err = run(capsys, "demo", "--fixture", "bursty:64,7", "--regularizer", "queue", "--p", "2")
    assert code == 2
    r = json.loads(out)["runs"]["queue"]
    assert r["verdict"] == "fail" and r["violated_bound"]
    assert "bound violated" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["demo", "--fixture", "nosuch:3"],
        ["demo"],
        ["demo", "--fixture", "bursty:8,3", "--regularizer", "bogus"],
        ["dnf", "models", "/nonexistent/file.dnf"],
        ["demo", "--fixture", "bursty:8,3", "--program", COUNT_ASM],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as ei:
        sys.exit(main(argv))
    assert ei.value.code == 1


def test_dnf_parse_error_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.dnf"
    bad.write_text("p dnf 2 1\n1 -1 0\n")
    code, _, err = run(capsys, "dnf", "models", str(bad))
    assert code == 1 and "line 2" in err
    with pytest.warns(UserWarning):
        code, out, _ = run(capsys, "dnf", "models", str(bad), "--lenient")
    assert code == 0 and out == ""


def test_reports_are_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["compare", "--fixture", "scripted:3,1,1,7,2", "--report", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_csv_format(capsys):
    code, out, _ = run(capsys, "compare", "--fixture", "uniform:16,2", "--regularizers", "queue,geometric", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("regularizer,verdict")
    assert [l.split(",")[0] for l in lines[1:]] == ["queue", "geometric"]


def test_dnf_binary_output():
    proc = subprocess.run(
        [sys.executable, "-m", "enumreg.cli", "dnf", "models", SAMPLE, "--binary"], capture_output=True, check=True
    )
    f = parse_dnf(Path(SAMPLE).read_text())
    # one byte per model for n=8, little-endian assignment masks
    assert len(proc.stdout) == 193
    assert sorted(proc.stdout) == brute_force_models(f)


def test_dnf_report_file(tmp_path, capsys):
    rep = tmp_path / "r.json"
    code, _, _ = run(capsys, "dnf", "models", SAMPLE, "--pipeline", "queue", "--report", str(rep))
    assert code == 0
    doc = json.loads(rep.read_text())
    assert doc["models"] == 193
    assert doc["calibration"]["models"] == 193
    assert doc["source"] == {"dnf": "sample.dnf", "n": 8, "m": 6}
