"""End-to-end runs of the command line interface."""

import json
import shutil
import subprocess
import sys

import pytest

from pmchaos import antichain_pair, cli


def run(argv):
    return cli.main(argv)


def test_check_tent_exits_zero(tent_file, tmp_path, capsys):
    rc = run(["check", tent_file, "--out-dir", str(tmp_path)])
    assert rc == 0
    assert "markov: pass" in capsys.readouterr().out
    report = json.loads((tmp_path / "check_report.json").read_text())
    assert report["markov"]["passed"] is True
    assert report["generator"]["verdict"] == "shrinking"
    for name in ("check_generator.csv", "check_map.png",
                 "check_diameters.png"):
        assert (tmp_path / name).exists()


def test_check_stalled_map_exits_two(rot3_file, tmp_path, capsys):
    rc = run(["check", rot3_file, "--out-dir", str(tmp_path)])
    assert rc == 2
    out = capsys.readouterr().out
    assert "stalled" in out and "markov: pass" in out
    report = json.loads((tmp_path / "check_report.json").read_text())
    assert report["generator"]["first_stall_depth"] == 2
    assert report["generator"]["max_diameters"][-1] == "1/3"


def test_no_figures_flag_skips_pngs(tent_file, tmp_path):
    run(["check", tent_file, "--out-dir", str(tmp_path), "--no-figures"])
    assert not list(tmp_path.glob("*.png"))
    assert (tmp_path / "check_report.json").exists()


def test_graph_outputs(tent_file, tmp_path, capsys):
    rc = run(["graph", tent_file, "--out-dir", str(tmp_path),
              "--depth", "6", "--audit-depth", "3"])
    assert rc == 0
    adjacency = (tmp_path / "graph_adjacency.txt").read_text().split()
    assert adjacency == ["1", "1", "1", "2", "2", "1", "2", "2"]
    counts = (tmp_path / "graph_word_counts.csv").read_text().splitlines()
    assert counts[0] == "depth;word_count"
    assert counts[1] == "1;2" and counts[2] == "2;4"
    for name in ("graph_components.csv", "graph_fstar.csv",
                 "graph_cylinders.csv", "graph_audit.csv",
                 "graph_map.png", "graph_covering.png"):
        assert (tmp_path / name).exists()
    assert "coverage 1.000" in capsys.readouterr().out


def test_spectrum_tent(tent_file, tmp_path, capsys):
    rc = run(["spectrum", tent_file, "--out-dir", str(tmp_path),
              "--pairs", "40", "--horizon", "1500", "--window", "150",
              "--grid", "128"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "minimal elements: 1 -> inf-0" in out
    for name in ("spectrum_report.json", "spectrum_candidates.csv",
                 "spectrum_minimal.csv", "spectrum_curves.png",
                 "spectrum_map.png"):
        assert (tmp_path / name).exists()
    header = (tmp_path / "spectrum_candidates.csv").read_text().splitlines()[0]
    assert header == "id;kind;x;y;component;provenance;probe_verdict"


def test_spectrum_reruns_are_byte_identical(tent_file, tmp_path):
    argv = ["--pairs", "30", "--horizon", "1000", "--window", "100",
            "--grid", "64", "--no-figures"]
    run(["spectrum", tent_file, "--out-dir", str(tmp_path / "a")] + argv)
    run(["spectrum", tent_file, "--out-dir", str(tmp_path / "b")] + argv)
    for name in ("spectrum_report.json", "spectrum_candidates.csv",
                 "spectrum_minimal.csv"):
        assert ((tmp_path / "a" / name).read_bytes()
                == (tmp_path / "b" / name).read_bytes())


def test_spectrum_refuses_stalled_map(rot3_file, tmp_path, capsys):
    rc = run(["spectrum", rot3_file, "--out-dir", str(tmp_path)])
    assert rc == 3
    err = capsys.readouterr().err
    assert "refused" in err and "--force" in err


def test_spectrum_pairs_file(rot3_file, tmp_path, capsys):
    pairs = tmp_path / "pairs.txt"
    lines = ["# one pair per line"]
    for n in (2, 3):
        x, y = antichain_pair(n)
        lines.append(f"{x} {y}")
    pairs.write_text("\n".join(lines) + "\n")
    rc = run(["spectrum", rot3_file, "--out-dir", str(tmp_path),
              "--pairs-file", str(pairs), "--force", "--no-figures"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "explicit mode" in out
    rows = (tmp_path / "spectrum_candidates.csv").read_text().splitlines()
    assert len(rows) == 3
    assert "7/36;17/36" in rows[1]


def test_malformed_pairs_file(rot3_file, tmp_path, capsys):
    bad = tmp_path / "pairs.txt"
    bad.write_text("1/4\n")
    rc = run(["spectrum", rot3_file, "--pairs-file", str(bad), "--force",
              "--out-dir", str(tmp_path)])
    assert rc == 1
    assert "expected two points" in capsys.readouterr().err


def test_missing_map_file(tmp_path, capsys):
    rc = run(["check", str(tmp_path / "nope.json")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_garbage_map_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("this is not a map {")
    rc = run(["check", str(bad), "--out-dir", str(tmp_path)])
    assert rc == 1


def test_unknown_subcommand_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 1
    assert "error:" in capsys.readouterr().err


def test_antichain_command(tmp_path, capsys):
    rc = run(["antichain", "--count", "4", "--out-dir", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "pairwise incomparable" in out
    pairs = (tmp_path / "antichain_pairs.csv").read_text().splitlines()
    assert pairs[0] == "n;x;y;small_step;large_step"
    assert len(pairs) == 5
    x2, y2 = antichain_pair(2)
    assert pairs[2].startswith(f"2;{x2.numerator}/{x2.denominator};"
                               f"{y2.numerator}/{y2.denominator};")
    compares = (tmp_path / "antichain_compare.csv").read_text().splitlines()
    assert len(compares) == 1 + 4 * 3 // 2
    for name in ("antichain_map.json", "antichain_curves.csv",
                 "antichain_report.json", "antichain_curves.png",
                 "antichain_map.png"):
        assert (tmp_path / name).exists()
    report = json.loads((tmp_path / "antichain_report.json").read_text())
    assert len(report["minimal"]) == 4


def test_console_script(tent_file, tmp_path):
    exe = shutil.which("pmchaos")
    argv = ([exe] if exe else [sys.executable, "-m", "pmchaos.cli"])
    proc = subprocess.run(
        argv + ["check", tent_file, "--out-dir", str(tmp_path),
                "--no-figures"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "markov: pass" in proc.stdout
