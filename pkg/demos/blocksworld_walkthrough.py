"""Blocksworld, end to end: parse, compile to Datalog, search, validate.

    python demos/blocksworld_walkthrough.py --workers 2
"""

import argparse

from tyr.benchmarks import BLOCKSWORLD_DOMAIN, blocksworld_problem
from tyr.cli import emit_datalog
from tyr.heuristics import FFHeuristic
from tyr.model import brute_force_applicable, format_action, initial_state, validate_plan
from tyr.parallel import ExecutorConfig
from tyr.pddl import parse_task
from tyr.search import SearchConfig, gbfs
from tyr.stats import datalog_fraction


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    # A tower a-b-c (bottom to top) that has to be turned upside down.
    problem = blocksworld_problem([["a", "b", "c"]], [["c", "b", "a"]], "reverse3")
    task = parse_task(BLOCKSWORLD_DOMAIN, problem)
    print(f"task {task.name}: {len(task.objects)} objects, {len(task.schemas)} schemas, {len(task.init)} init atoms")

    # Both Datalog programs the planner evaluates once per state.
    print()
    print(emit_datalog(task))

    # Applicable actions and h_FF in the initial state.
    s0 = initial_state(task)
    app = brute_force_applicable(s0, task)
    h = FFHeuristic(task).evaluate(s0, app)
    print("applicable in s0:", ", ".join(sorted(format_action(task, a) for a in app)))
    print(f"h_FF(s0) = {h.value} over {h.layers} layers")
    print("relaxed plan:", ", ".join(sorted(format_action(task, a) for a in h.relaxed_plan)))
    print("preferred:", ", ".join(sorted(format_action(task, a) for a in h.preferred)))

    res = gbfs(task, SearchConfig(executor=ExecutorConfig(args.workers)))
    print()
    print(f"{res.status}: {len(res.plan)} steps, {res.expansions} expansions, {res.evaluations} evaluations")
    for i, a in enumerate(res.plan, 1):
        print(f"  {i:2d}. {format_action(task, a)}")
    print("h along the search:", res.h_trace)
    print("validator:", "ok" if validate_plan(task, res.plan).valid else "INVALID")

    t = res.timings
    print(f"datalog fraction {datalog_fraction(t):.2f} of {t.total_us / 1e3:.1f} ms")
    for phase, b in (("action", t.action), ("ff", t.ff)):
        f = b.fractions(t.total_us)
        print(f"  {phase:6s} seq {f['seq']:.2f}  inter {f['inter']:.2f}  intra {f['intra']:.2f}")


if __name__ == "__main__":
    main()
