"""``tyr`` command line: solve, datalog, compile, bench."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
import time
from typing import Sequence

from tyr import __version__
from tyr.compile import compile_action_program, compile_rpg_program
from tyr.datalog.program import DatalogError, stratify
from tyr.datalog.seminaive import seminaive_evaluate
from tyr.datalog.text import format_program, parse_program
from tyr.generators import synthetic_triangles
from tyr.model import format_action
from tyr.parallel import DEFAULT_THRESHOLD, Executor, ExecutorConfig, GroundingPolicy
from tyr.pddl import PDDLError, load_task
from tyr.search import SOLVED, ResourceLimitError, SearchConfig, gbfs
from tyr.stats import PhaseBreakdown, PhaseTimings, datalog_fraction, gc_paused, rule_skew

EXIT_SOLVED = 0
EXIT_UNSOLVED = 1
EXIT_LIMIT = 2
EXIT_INPUT = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _non_negative_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _worker_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad worker list {text!r}") from exc
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError(f"bad worker list {text!r}")
    return vals


def _add_executor_flags(p: argparse.ArgumentParser, backend: str = "thread") -> None:
    p.add_argument("--workers", type=_positive_int, default=1, help="rule-level workers N")
    p.add_argument("--grounding-workers", type=_positive_int, default=1,
                   help="slices per rule when its delta-edge count exceeds the threshold")
    p.add_argument("--delta-edge-threshold", type=_non_negative_int, default=DEFAULT_THRESHOLD)
    p.add_argument("--backend", choices=("thread", "process"), default=backend)


def _executor_config(args, workers: int | None = None) -> ExecutorConfig:
    return ExecutorConfig(
        workers if workers is not None else args.workers,
        GroundingPolicy(args.delta_edge_threshold, args.grounding_workers),
        args.backend,
    )


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tyr", description="Lifted planner on a parallel semi-naive Datalog engine.")
    p.add_argument("--version", action="version", version=f"tyr {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="plan with lazy GBFS")
    s.add_argument("--domain", required=True)
    s.add_argument("--problem", required=True)
    _add_executor_flags(s)
    s.add_argument("--heuristic", choices=("ff", "add", "max", "blind"), default="ff")
    s.add_argument("--time-limit", type=_positive_float, metavar="S")
    s.add_argument("--memory-limit", type=_positive_float, metavar="MIB")
    s.add_argument("--plan-out", metavar="FILE")
    s.add_argument("--stats-json", metavar="FILE")

    d = sub.add_parser("datalog", help="evaluate a text Datalog program and print its model")
    d.add_argument("program")
    _add_executor_flags(d)

    c = sub.add_parser("compile", help="dump the compiled Datalog programs")
    c.add_argument("--domain", required=True)
    c.add_argument("--problem", required=True)
    c.add_argument("--emit-datalog", action="store_true", required=True)

    b = sub.add_parser("bench", help="time runs across worker counts")
    b.add_argument("--synthetic", action="store_true", help="independent triangle-rule program")
    b.add_argument("--rules", type=_positive_int, default=64)
    b.add_argument("--nodes", type=_positive_int, default=40)
    b.add_argument("--density", type=float, default=0.5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--domain")
    b.add_argument("--problem")
    b.add_argument("--heuristic", choices=("ff", "add", "max", "blind"), default="ff")
    b.add_argument("--workers", type=_worker_list, default=[1], help="comma-separated, e.g. 1,2,4")
    b.add_argument("--grounding-workers", type=_positive_int, default=1)
    b.add_argument("--delta-edge-threshold", type=_non_negative_int, default=DEFAULT_THRESHOLD)
    b.add_argument("--backend", choices=("thread", "process"), default="process")
    b.add_argument("--repeat", type=_positive_int, default=1, help="keep the fastest of R runs")
    b.add_argument("--csv", metavar="FILE")
    return p


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_solve(args) -> int:
    task = load_task(args.domain, args.problem)
    cfg = SearchConfig(
        heuristic=args.heuristic,
        executor=_executor_config(args),
        time_limit=args.time_limit,
        memory_limit_mib=args.memory_limit,
    )
    try:
        res = gbfs(task, cfg)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    if args.stats_json:
        res.timings.dump(args.stats_json)
    if res.status != SOLVED:
        print(f"{res.status}: expansions={res.expansions} evaluations={res.evaluations}")
        return EXIT_UNSOLVED
    lines = [format_action(task, a) for a in res.plan or []]
    if args.plan_out:
        with open(args.plan_out, "w") as fh:
            fh.write("".join(l + "\n" for l in lines))
    else:
        for l in lines:
            print(l)
    t = res.timings
    print(
        f"solved: plan length {len(lines)}, expansions {res.expansions}, "
        f"evaluations {res.evaluations}, {t.total_us / 1e6:.3f}s total, "
        f"datalog fraction {datalog_fraction(t) if t.total_us > 0 else 0.0:.3f}"
    )
    return EXIT_SOLVED


def cmd_datalog(args) -> int:
    prog = parse_program(_read(args.program), args.program)
    sp = stratify(prog)
    with Executor(_executor_config(args)) as ex:
        res = seminaive_evaluate(sp, ex, keep_instances=False)
    for line in sorted(prog.format_atom(a) for a in res.model()):
        print(line + ".")
    return EXIT_SOLVED


def emit_datalog(task) -> str:
    ap = compile_action_program(task)
    rpg = compile_rpg_program(task)
    out = io.StringIO()
    out.write(f"% applicable-action program for {task.name}: {len(ap.program.rules)} rules\n")
    out.write(format_program(ap.program.program, facts=()))
    out.write(f"% relaxed planning graph program for {task.name}: {len(rpg.program.rules)} rules\n")
    out.write(format_program(rpg.program.program, facts=()))
    goals = " ".join(rpg.program.program.format_atom(g) for g in rpg.goal_atoms)
    out.write(f"% goal atoms: {goals}\n")
    return out.getvalue()


def cmd_compile(args) -> int:
    task = load_task(args.domain, args.problem)
    sys.stdout.write(emit_datalog(task))
    return EXIT_SOLVED


BENCH_COLUMNS = ("workers", "total_s", "datalog_fraction", "rule_skew", "speedup", "expansions", "evaluations")


def _bench_synthetic(args, workers: int) -> dict:
    prog = stratify(synthetic_triangles(args.rules, args.nodes, args.density, args.seed))
    with Executor(_executor_config(args, workers)) as ex:
        t0 = time.perf_counter()
        res = seminaive_evaluate(prog, ex, keep_instances=False)
        total = time.perf_counter() - t0
    per_rule = [res.rule_us.get(i, 0.0) for i in range(len(prog.rules))]
    t = PhaseTimings(total_us=total * 1e6, action=res.breakdown, ff=PhaseBreakdown(), per_rule_us=per_rule)
    return {"total_s": total, "timings": t, "expansions": 0, "evaluations": 1}


def _bench_task(args, workers: int) -> dict:
    task = load_task(args.domain, args.problem)
    res = gbfs(task, SearchConfig(heuristic=args.heuristic, executor=_executor_config(args, workers)))
    return {
        "total_s": res.timings.total_us / 1e6,
        "timings": res.timings,
        "expansions": res.expansions,
        "evaluations": res.evaluations,
    }


def run_bench(args) -> list[dict]:
    rows = []
    base = None
    for w in args.workers:
        best = None
        for _ in range(args.repeat):
            with gc_paused():
                r = _bench_synthetic(args, w) if args.synthetic else _bench_task(args, w)
            if best is None or r["total_s"] < best["total_s"]:
                best = r
        assert best is not None
        if base is None:
            base = best["total_s"]
        t = best["timings"]
        skew = rule_skew(t.per_rule_us)
        rows.append({
            "workers": w,
            "total_s": round(best["total_s"], 6),
            "datalog_fraction": round(datalog_fraction(t), 6) if t.total_us > 0 else 0.0,
            "rule_skew": "" if skew is None else round(skew, 6),
            "speedup": 1.0 if w == args.workers[0] else round(base / best["total_s"], 6),
            "expansions": best["expansions"],
            "evaluations": best["evaluations"],
        })
    return rows


def cmd_bench(args) -> int:
    if not args.synthetic and not (args.domain and args.problem):
        raise _UsageError("tyr bench: error: give --synthetic or both --domain and --problem")
    rows = run_bench(args)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(buf.getvalue())
    for r in rows:
        print(f"workers={r['workers']} total={r['total_s']:.3f}s speedup={r['speedup']} skew={r['rule_skew']}")
    return EXIT_SOLVED


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    handlers = {"solve": cmd_solve, "datalog": cmd_datalog, "compile": cmd_compile, "bench": cmd_bench}
    try:
        return handlers[args.command](args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except (OSError, PDDLError, DatalogError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
