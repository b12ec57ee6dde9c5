"""CLI harness: subcommands, determinism, exit codes, config files."""
from __future__ import annotations

import io

import pytest

from creditnet.cli import EXIT_INVALID, EXIT_OK, main
from creditnet.sim import read_csv


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_generate_cycle_low_id(tmp_path, capsys):
    out = tmp_path / "net.txt"
    code, _, _ = run_cli(
        ["generate", "--kind", "cycle", "--n", "3", "--c", "1",
         "--init", "low-id", "--out", str(out)], capsys)
    assert code == EXIT_OK
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 3
    assert lines[0].split() == ["0", "1", "0", "1"]


def test_generate_deterministic(tmp_path, capsys):
    files = []
    for name in ("a.txt", "b.txt"):
        out = tmp_path / name
        code, _, _ = run_cli(
            ["generate", "--kind", "erdos-renyi", "--n", "100", "--p", "0.1",
             "--c", "1", "--seed", "7", "--out", str(out)], capsys)
        assert code == EXIT_OK
        files.append(out.read_text())
    assert files[0] == files[1]


def test_generate_ba_edge_count(capsys):
    code, out, _ = run_cli(
        ["generate", "--kind", "barabasi-albert", "--n", "100", "--d", "5",
         "--c", "1", "--seed", "1"], capsys)
    assert code == EXIT_OK
    assert len(out.strip().splitlines()) == 485


def test_generate_requires_seed_for_stochastic(capsys):
    code, _, err = run_cli(
        ["generate", "--kind", "erdos-renyi", "--n", "10", "--p", "0.5", "--c", "1"],
        capsys)
    assert code == EXIT_INVALID
    assert "seed" in err


def test_simulate_writes_parseable_csv(tmp_path, capsys):
    out = tmp_path / "runs.csv"
    code, _, _ = run_cli(
        ["simulate", "--kind", "erdos-renyi", "--n", "20", "--p", "0.3", "--c", "1",
         "--runs", "3", "--seed", "11", "--max-steps", "20000", "--out", str(out)],
        capsys)
    assert code == EXIT_OK
    ensembles = read_csv(io.StringIO(out.read_text()))
    assert len(ensembles) == 1
    assert len(ensembles[0].runs) == 3


def test_simulate_capacity_sweep(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _, _ = run_cli(
        ["simulate", "--kind", "erdos-renyi", "--n", "20", "--p", "0.3", "--c", "1",
         "--runs", "2", "--seed", "3", "--sweep", "capacity", "--grid", "1,2",
         "--max-steps", "20000", "--out", str(out)], capsys)
    assert code == EXIT_OK
    ensembles = read_csv(io.StringIO(out.read_text()))
    assert [e.c for e in ensembles] == [1, 2]


def test_verify_centralized_suite(capsys):
    code, out, _ = run_cli(["verify", "--suite", "centralized"], capsys)
    assert code == EXIT_OK
    assert "PASS" in out
    assert "FAIL" not in out


def test_verify_cycles_suite(capsys):
    code, out, _ = run_cli(["verify", "--suite", "cycles"], capsys)
    assert code == EXIT_OK
    assert "FAIL" not in out


def test_analyze_centralized_failure(capsys):
    code, out, _ = run_cli(["analyze", "centralized-failure", "--n", "2", "--C", "2"], capsys)
    assert code == EXIT_OK
    assert "1/3" in out and "0.3333333333" in out


def test_analyze_cycle_success(capsys):
    code, out, _ = run_cli(["analyze", "cycle-success", "--n", "3", "--c", "1"], capsys)
    assert code == EXIT_OK
    assert "4/7" in out and "0.5714285714" in out
    assert "centralized" in out  # comparison row


def test_analyze_reference_gnp(capsys):
    code, out, _ = run_cli(
        ["analyze", "reference", "--kind", "gnp", "--n", "100", "--p", "0.1", "--c", "5"],
        capsys)
    assert code == EXIT_OK
    assert "0.96" in out


def test_analyze_bankruptcy_bound(capsys):
    code, out, _ = run_cli(
        ["analyze", "bankruptcy-bound", "--kind", "star", "--n", "4", "--c", "1"], capsys)
    assert code == EXIT_OK
    assert "harmonic mean = 6/5" in out


def test_invalid_input_exit_code(capsys):
    code, _, err = run_cli(
        ["generate", "--kind", "cycle", "--n", "2", "--c", "1", "--init", "low-id"],
        capsys)
    assert code == EXIT_INVALID
    assert "error" in err


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_config_file_fills_unset_flags(tmp_path, capsys):
    cfg = tmp_path / "gen.cfg"
    cfg.write_text("# experiment defaults\nseed = 7\nout = {}\n".format(tmp_path / "net.txt"))
    code, _, _ = run_cli(
        ["generate", "--kind", "erdos-renyi", "--n", "30", "--p", "0.2", "--c", "1",
         "--config", str(cfg)], capsys)
    assert code == EXIT_OK
    direct = tmp_path / "direct.txt"
    run_cli(["generate", "--kind", "erdos-renyi", "--n", "30", "--p", "0.2", "--c", "1",
             "--seed", "7", "--out", str(direct)], capsys)
    assert (tmp_path / "net.txt").read_text() == direct.read_text()


def test_io_error_exit_code(tmp_path, capsys):
    code, _, err = run_cli(
        ["generate", "--kind", "cycle", "--n", "3", "--c", "1", "--init", "low-id",
         "--out", str(tmp_path / "missing" / "net.txt")], capsys)
    assert code == 3
    assert "i/o error" in err
