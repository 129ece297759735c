import csv
import json
from pathlib import Path

import pytest

from tyr import __version__
from tyr.benchmarks import BLOCKSWORLD_DOMAIN, DELIVERY_DOMAIN, blocksworld_problem, delivery_problem
from tyr.cli import BENCH_COLUMNS, main
from tyr.datalog import parse_program

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def stack2(tmp_path):
    d, p = tmp_path / "domain.pddl", tmp_path / "problem.pddl"
    d.write_text(BLOCKSWORLD_DOMAIN)
    p.write_text(blocksworld_problem([["a"], ["b"]], [["b", "a"]], "stack2"))
    return str(d), str(p)


def test_solve_writes_plan_and_stats(stack2, tmp_path, capsys):
    plan, stats = tmp_path / "plan.txt", tmp_path / "stats.json"
    code = main(["solve", "--domain", stack2[0], "--problem", stack2[1], "--plan-out", str(plan), "--stats-json", str(stats)])
    assert code == 0
    assert plan.read_text() == "(pickup a)\n(stack a b)\n"
    data = json.loads(stats.read_text())
    assert sorted(data) == sorted(["total_us", "datalog_us", "phases", "per_rule_us", "expansions", "evaluations", "plan_length"])
    assert sorted(data["phases"]) == ["action", "ff"]
    assert data["plan_length"] == 2
    assert "solved: plan length 2" in capsys.readouterr().out


def test_solve_prints_plan_without_plan_file(stack2, capsys):
    assert main(["solve", "--domain", stack2[0], "--problem", stack2[1], "--workers", "2"]) == 0
    assert capsys.readouterr().out.startswith("(pickup a)\n(stack a b)\n")


def test_unsolvable_exit_code_and_no_plan_file(tmp_path):
    d, p, plan = tmp_path / "d.pddl", tmp_path / "p.pddl", tmp_path / "plan.txt"
    d.write_text(DELIVERY_DOMAIN)
    p.write_text(delivery_problem(2, 1).replace("(:goal (and", "(:goal (and (road p1 p1 t0)"))
    assert main(["solve", "--domain", str(d), "--problem", str(p), "--plan-out", str(plan)]) == 1
    assert not plan.exists()


def test_time_limit_exit_code(tmp_path):
    d, p = tmp_path / "d.pddl", tmp_path / "p.pddl"
    d.write_text(DELIVERY_DOMAIN)
    p.write_text(delivery_problem(4, 2))
    assert main(["solve", "--domain", str(d), "--problem", str(p), "--time-limit", "0.000001"]) == 2


def test_missing_file(tmp_path, capsys):
    assert main(["solve", "--domain", str(tmp_path / "nope.pddl"), "--problem", str(tmp_path / "x.pddl")]) == 3
    assert main(["datalog", str(tmp_path / "missing.dl")]) == 3


def test_usage_errors(capsys):
    assert main([]) == 3
    assert main(["solve", "--domain", "d.pddl"]) == 3
    assert main(["solve", "--domain", "d", "--problem", "p", "--workers", "0"]) == 3
    assert "usage" in capsys.readouterr().err


def test_parse_error_reports_location(tmp_path, capsys):
    d, p = tmp_path / "d.pddl", tmp_path / "p.pddl"
    d.write_text("(define (domain d)\n (:predicates (p ?x))")
    p.write_text("")
    assert main(["solve", "--domain", str(d), "--problem", str(p)]) == 3
    assert capsys.readouterr().err.startswith(f"{d}:")


def test_version(capsys):
    assert main(["--version"]) == 0
    assert capsys.readouterr().out.strip() == f"tyr {__version__}"


def test_datalog_prints_sorted_model(tmp_path, capsys):
    prog = tmp_path / "tc.dl"
    prog.write_text("path(X,Y) :- edge(X,Y).\npath(X,Z) :- path(X,Y), edge(Y,Z).\nedge(c,d). edge(a,b). edge(b,c).\n")
    assert main(["datalog", str(prog), "--workers", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == sorted(lines)
    assert "path(a,d)." in lines and len(lines) == 3 + 6


def test_datalog_syntax_error(tmp_path, capsys):
    prog = tmp_path / "bad.dl"
    prog.write_text("p(X) :- q(X)\n")
    assert main(["datalog", str(prog)]) == 3
    assert capsys.readouterr().err.startswith(f"{prog}:")


def test_compile_matches_golden(stack2, capsys):
    assert main(["compile", "--domain", stack2[0], "--problem", stack2[1], "--emit-datalog"]) == 0
    out = capsys.readouterr().out
    assert out == (GOLDEN / "stack2_emit.dl").read_text()


def test_emitted_program_parses(stack2, capsys):
    main(["compile", "--domain", stack2[0], "--problem", stack2[1], "--emit-datalog"])
    rules = [l for l in capsys.readouterr().out.splitlines() if l and not l.startswith("%")]
    assert len(parse_program("\n".join(rules)).rules) == 13


def test_bench_single_worker_speedup_is_one(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    code = main(["bench", "--synthetic", "--rules", "4", "--nodes", "10", "--workers", "1", "--csv", str(out)])
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert tuple(rows[0]) == BENCH_COLUMNS
    assert [r["speedup"] for r in rows] == ["1.0"]


def test_bench_task_counts_are_deterministic(stack2, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        main(["bench", "--domain", stack2[0], "--problem", stack2[1], "--workers", "1,2", "--backend", "thread", "--csv", str(path)])
    ra, rb = list(csv.DictReader(a.open())), list(csv.DictReader(b.open()))
    assert [(r["expansions"], r["evaluations"]) for r in ra] == [(r["expansions"], r["evaluations"]) for r in rb]
    assert ra[0]["expansions"] == ra[1]["expansions"]


def test_bench_needs_an_input():
    assert main(["bench"]) == 3
