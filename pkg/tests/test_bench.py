"""Benchmark runs, CSV round trips, comparison ratios, and the CLI."""

import math

import pytest

from lexbdd import RunConfig, RunReport, bundled_game_path, compare, read_csv, run, \
    write_csv
from lexbdd.bench import CSV_COLUMNS, format_compare
from lexbdd.cli import main
from lexbdd.search import PartitionStrategy


def _run(name, strategy="none", **kw):
    return run(RunConfig(game_path=str(bundled_game_path(name)),
                         strategy=PartitionStrategy.parse(strategy), **kw))


def test_counter_run_solves_with_eight_forward_layers():
    report = _run("counter3")
    assert report.solved
    forward = [r for r in report.rows if r.direction == "forward"]
    backward = [r for r in report.rows if r.direction == "backward"]
    assert len(forward) == 8
    assert len(backward) == 8
    assert [r.index for r in forward] == list(range(8))
    assert [r.index for r in backward] == list(range(8))
    assert report.initial_value == (100,)


def test_partitioned_run_has_identical_layer_counts():
    base = _run("lightsout3")
    folded = _run("lightsout3", "fold-states-lex:8")
    assert [r.states for r in base.rows] == [r.states for r in folded.rows]
    assert base.solved and folded.solved


def test_tiny_time_budget_flags_incomplete():
    report = _run("lightsout3", time_budget_s=1e-9)
    assert not report.solved
    assert report.layers_completed < len(_run("lightsout3").rows)


def test_node_budget_flags_incomplete():
    report = _run("tictactoe", node_budget=100)
    assert not report.solved


def test_budget_validation():
    with pytest.raises(ValueError):
        RunConfig(game_path="x.game", time_budget_s=0)
    with pytest.raises(ValueError):
        RunConfig(game_path="x.game", node_budget=0)


def test_csv_round_trip(tmp_path):
    report = _run("counter3")
    path = tmp_path / "counter3.csv"
    write_csv(report, path)
    parsed = read_csv(path)
    assert parsed == report  # initial_value is display-only and excluded
    header = path.read_text().splitlines()[0]
    assert header == ",".join(CSV_COLUMNS)


def test_read_csv_rejects_other_headers(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        read_csv(path)


def test_determinism_across_runs():
    a = _run("duel")
    b = _run("duel")
    assert [r.states for r in a.rows] == [r.states for r in b.rows]
    assert [r.max_image_nodes for r in a.rows] == [r.max_image_nodes for r in b.rows]
    assert a.solved == b.solved and a.initial_value == b.initial_value


def test_compare_baseline_against_itself():
    base = _run("counter3")
    rows = compare([base], base)
    assert len(rows) == 1
    assert rows[0].layers_ratio == 1.0
    assert rows[0].time_ratio == 1.0
    assert rows[0].max_nodes_ratio == 1.0


def test_compare_halved_run():
    base = _run("counter3")
    half = RunReport(game=base.game, strategy="crippled",
                     rows=base.rows[:len(base.rows) // 2], solved=False)
    rows = compare([half], base)
    assert math.isclose(rows[0].layers_ratio, 0.5)


def test_compare_rejects_mismatched_games():
    with pytest.raises(ValueError):
        compare([_run("duel")], _run("counter3"))


def test_format_compare_table():
    base = _run("counter3")
    text = format_compare(compare([base], base))
    lines = text.strip().splitlines()
    assert lines[0] == "game,strategy,layers_ratio,time_ratio,max_nodes_ratio"
    assert lines[1].startswith("counter3,none,1.00,1.00,1.00")


def test_dot_dump(tmp_path):
    _run("counter3", dot_dir=str(tmp_path / "dots"))
    dots = sorted((tmp_path / "dots").glob("*.dot"))
    assert len(dots) == 8
    assert dots[0].read_text().startswith("digraph")


# ----------------------------------------------------------------------
# command line

def test_cli_solve_and_compare(tmp_path, capsys):
    base_csv = tmp_path / "none.csv"
    fold_csv = tmp_path / "fold.csv"
    game = str(bundled_game_path("counter3"))
    assert main(["solve", game, "--csv", str(base_csv)]) == 0
    assert main(["solve", game, "--partition", "fold-states-lex:4",
                 "--csv", str(fold_csv)]) == 0
    out = capsys.readouterr().out
    assert "solved=True" in out
    assert "initial_value=100" in out
    assert main(["compare", str(fold_csv), "--baseline", str(base_csv)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "game,strategy,layers_ratio,time_ratio,max_nodes_ratio"
    assert "fold-states-lex:4" in out


def test_cli_budget_exhaustion_exit_code(tmp_path):
    game = str(bundled_game_path("lightsout3"))
    assert main(["solve", game, "--time-budget", "1e-9"]) == 2


def test_cli_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.game"
    bad.write_text("vars: a\nterminal: zz\n")
    assert main(["solve", str(bad)]) == 1
    assert "error:" in capsys.readouterr().err
    assert main(["solve", str(tmp_path / "missing.game")]) == 1
    assert main(["solve", str(bad), "--partition", "bogus"]) == 1
