import json
import shutil
import subprocess

import pytest

from primstab.cli import main
from primstab.reps import rep_from_json
from primstab.whitehead import whitehead_graph, graph_to_dot
from primstab.words import parse_cyclic_word

CSV_HEADER = "class,length,trace_class,translation_length,slope_lower,axis_margin,degenerate"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------- primitive

def test_primitive_affirmative(capsys):
    code, out, _ = run(capsys, "primitive", "aaab")
    assert code == 0
    assert "verdict: primitive" in out
    assert "minimal length: 1" in out
    assert "minimize trace:" in out


def test_primitive_negative(capsys):
    code, out, _ = run(capsys, "primitive", "abAB")
    assert code == 1
    assert "verdict: not primitive" in out
    assert "separability test: not-separable" in out
    assert "minimize trace: already minimal" in out
    assert "connected=yes cut-vertices=none" in out


def test_primitive_single_letter(capsys):
    code, out, _ = run(capsys, "primitive", "b", "--rank", "3")
    assert code == 0
    assert "connected=no" in out


def test_primitive_bad_input(capsys):
    code, _, err = run(capsys, "primitive", "a1b")
    assert code == 2
    assert err.startswith("primstab: error:")
    code, _, err = run(capsys, "primitive", "abc")  # rank defaults to 2
    assert code == 2


# ---------------------------------------------------------- enumerate

def test_enumerate_frozen_csv(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-length", "2")
    assert code == 0
    assert out == "class,length\na,1\nb,1\nab,2\naB,2\n"


def test_enumerate_no_dedup(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-length", "2", "--no-invert-dedup")
    assert code == 0
    rows = out.strip().split("\n")[1:]
    assert [r.split(",")[0] for r in rows] == ["a", "A", "b", "B", "ab", "aB", "Ab", "AB"]


def test_enumerate_json(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-length", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data[0] == {"class": "a", "length": 1}
    assert len(data) == 4


def test_enumerate_to_file(capsys, tmp_path):
    target = tmp_path / "classes.csv"
    code, out, _ = run(capsys, "enumerate", "--max-length", "2", "--out", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text() == "class,length\na,1\nb,1\nab,2\naB,2\n"


def test_enumerate_bad_bounds(capsys):
    code, _, err = run(capsys, "enumerate", "--max-length", "0")
    assert code == 2
    assert "positive" in err


# ------------------------------------------------------------ whgraph

def test_whgraph_dot_matches_library(capsys):
    code, out, _ = run(capsys, "whgraph", "abAB")
    assert code == 0
    assert out == graph_to_dot(whitehead_graph(parse_cyclic_word("abAB", 2)))
    code2, out2, _ = run(capsys, "whgraph", "abAB")
    assert out2 == out  # byte-stable


def test_whgraph_json(capsys):
    code, out, _ = run(capsys, "whgraph", "aaab", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["word"] == "aaab"
    assert data["rank"] == 2
    assert data["adjacency"]["a"]["A"] == 2


def test_whgraph_bad_word(capsys):
    code, _, err = run(capsys, "whgraph", "aA")
    assert code == 2


# ----------------------------------------------------------- blocking

def test_blocking_witness_found(capsys):
    code, out, _ = run(capsys, "blocking", "abAB", "--n-max", "1", "--l-max", "8")
    assert code == 0
    assert "witness: n = 1" in out
    assert "44 primitive classes" in out


def test_blocking_inconclusive(capsys):
    code, out, _ = run(capsys, "blocking", "a", "--n-max", "3", "--l-max", "6")
    assert code == 1
    assert "inconclusive" in out
    assert "evidence: bounded evidence" in out


def test_blocking_bound_limited(capsys):
    code, out, _ = run(capsys, "blocking", "abABab", "--l-max", "5")
    assert code == 0
    assert "bound-limited" in out


def test_blocking_bad_bounds(capsys):
    code, _, err = run(capsys, "blocking", "ab", "--n-max", "0")
    assert code == 2


# ----------------------------------------------------------- psreport

def test_psreport_csv_shape(capsys):
    code, out, _ = run(capsys, "psreport", "builtin:schottky", "--max-length", "4")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == CSV_HEADER
    rows = [l for l in lines[1:] if not l.startswith("#")]
    assert len(rows) == 12
    assert rows[0].startswith("a,1,loxodromic,")
    footer = [l for l in lines if l.startswith("#")]
    assert any("certificate=certified" in l for l in footer)
    assert any(l.startswith("# length 4:") for l in footer)


def test_psreport_json(capsys):
    code, out, _ = run(
        capsys, "psreport", "builtin:sanov", "--max-length", "2", "--format", "json"
    )
    assert code == 0
    data = json.loads(out)
    assert data["summary"]["certificate"] == "unknown"
    assert data["summary"]["degenerate"] == 3
    byclass = {r["class"]: r for r in data["rows"]}
    assert byclass["a"]["axis_margin"] == "inf"
    assert byclass["ab"]["degenerate"] is False


def test_psreport_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "psreport", str(tmp_path / "nope.json"))
    assert code == 2
    assert err.startswith("primstab: error:")


def test_psreport_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "psreport", str(bad))
    assert code == 2


def test_psreport_unknown_builtin(capsys):
    code, _, err = run(capsys, "psreport", "builtin:whatever")
    assert code == 2
    assert "unknown builtin" in err


def test_psreport_bad_reps(capsys):
    code, _, err = run(capsys, "psreport", "builtin:sanov", "--reps", "1")
    assert code == 2


def test_psreport_bad_base_point():
    with pytest.raises(SystemExit) as exc:
        main(["psreport", "builtin:sanov", "--base-point", "1,2"])
    assert exc.value.code == 2


def test_psreport_figures(capsys, tmp_path):
    figdir = tmp_path / "figs"
    code, out, err = run(
        capsys, "psreport", "builtin:ptorus", "--max-length", "2",
        "--figures", str(figdir),
    )
    assert code == 0
    assert out.startswith(CSV_HEADER)
    for name in ("psreport_trends.png", "psreport_classes.png"):
        f = figdir / name
        assert f.exists() and f.stat().st_size > 0
        assert f"wrote {f}" in err


def test_psreport_thread_count_does_not_change_bytes(capsys, tmp_path, monkeypatch):
    outputs = []
    for threads in ("1", "8"):
        monkeypatch.setenv("PRIMSTAB_THREADS", threads)
        target = tmp_path / f"report_{threads}.csv"
        code, _, _ = run(
            capsys, "psreport", "builtin:schottky", "--max-length", "5",
            "--out", str(target),
        )
        assert code == 0
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]


# ----------------------------------------------------------- examples

def test_examples_round_trip(capsys):
    code, out, _ = run(capsys, "examples", "schottky", "--s", "3")
    assert code == 0
    rho = rep_from_json(json.loads(out))
    assert rho.label == "schottky(s=3)"
    assert rho.rank == 2


def test_examples_to_file_loads_back(capsys, tmp_path):
    from primstab.reps import load_representation, make_punctured_torus

    target = tmp_path / "ptorus.json"
    code, _, _ = run(capsys, "examples", "ptorus", "--out", str(target))
    assert code == 0
    rho = load_representation(str(target))
    assert rho.generator_images == make_punctured_torus().generator_images


def test_examples_s_rejected_elsewhere(capsys):
    code, _, err = run(capsys, "examples", "sanov", "--s", "2.0")
    assert code == 2
    assert "--s only applies to schottky" in err
    code, _, _ = run(capsys, "examples", "schottky", "--s", "-1")
    assert code == 2


# ------------------------------------------------------ console script

def test_console_script_runs():
    exe = shutil.which("primstab")
    assert exe is not None
    proc = subprocess.run(
        [exe, "enumerate", "--max-length", "2"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout == "class,length\na,1\nb,1\nab,2\naB,2\n"
