"""Acceptance suite: one PASS/FAIL line per criterion, printed even under capture.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import time
from itertools import product

import psutil
import pytest

from tyr.benchmarks import parity_tasks, smoke_suite, two_block_stack
from tyr.compile import compile_action_program, compile_rpg_program
from tyr.datalog import FactStore, naive_fixpoint, parse_program, seminaive_evaluate, stratify
from tyr.generators import (
    random_grounding_instance,
    random_program,
    random_recheck_program,
    random_task,
    synthetic_triangles,
)
from tyr.graph import ConsistencyGraph
from tyr.grounder import clique_owner
from tyr.heuristics import FFHeuristic
from tyr.model import bfs_plan, brute_force_applicable, is_goal, validate_plan
from tyr.parallel import Executor, ExecutorConfig, GroundingPolicy
from tyr.search import SOLVED, SearchConfig, gbfs
from tyr.stats import PhaseBreakdown, PhaseTimings, amdahl_bound, datalog_fraction, gc_paused, rule_skew

from oracles import body_holds, brute_force_delta, ground_instance, relaxed_dead_end, sample_states

pytestmark = pytest.mark.acceptance


@pytest.fixture
def report(capsys):
    def emit(n: int, name: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nACCEPTANCE {n:>2} {name}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail

    return emit


def test_c01_oracle_equivalence(report):
    start = time.perf_counter()
    total, agree, strata = 300, 0, 0
    for seed in range(total):
        sp = stratify(random_program(seed))
        strata += len(sp.strata) > 1
        agree += seminaive_evaluate(sp).model() == naive_fixpoint(sp)
    took = time.perf_counter() - start
    report(1, "semi-naive = naive fixpoint", agree == total and took < 60,
           f"{agree}/{total} programs equal, {strata} multi-stratum, {took:.1f}s of 60s")


def test_c02_grounder_properties(report):
    total = 600
    sound = complete = unique = witnessed = 0
    emitted = 0
    for seed in range(total):
        inst = random_grounding_instance(seed)
        (out,), queue = ground_instance(inst)
        got = [i.binding for i in out]
        emitted += len(got)
        facts = inst.facts
        sound += all(
            body_holds(inst.rule, b, facts) and any(a.ground(b) in inst.delta for a in inst.rule.body_pos)
            for b in got
        )
        complete += set(got) == brute_force_delta(inst) and not queue
        unique += len(got) == len(set(got))
        if inst.rule.arity >= 2:
            store = FactStore(inst.old)
            g = ConsistencyGraph.build(inst.rule, store, len(inst.program.objects))
            store.advance(inst.delta)
            g.update(store)
            witnessed += all(clique_owner(g, b) is not None for b in got)
        else:
            witnessed += 1
    ok = sound == complete == unique == witnessed == total
    report(2, "grounder soundness/completeness/uniqueness", ok,
           f"{total} instances, {emitted} emissions; sound {sound}, complete {complete}, "
           f"unique {unique}, delta-edge witness {witnessed}")


def test_c03_higher_arity_recheck(report):
    total, agree, queued = 150, 0, 0
    for seed in range(total):
        prog, main = random_recheck_program(seed)
        sp = stratify(prog)
        ev = seminaive_evaluate(sp)
        model = ev.model()
        r = prog.rules[main]
        expect = {b for b in product(range(len(prog.objects)), repeat=r.arity) if r.body_holds(b, model)}
        got = [i.binding for i in ev.instances if i.rule_id == main]
        agree += len(got) == len(set(got)) and set(got) == expect and model == naive_fixpoint(sp)
        queued += ev.rule_stats[main].requeued > 0
    report(3, "3-ary literals via recheck queue", agree == total,
           f"{agree}/{total} programs equal brute force, {queued} used the queue")


def _trace(task, cfg=None):
    states = []
    res = gbfs(task, SearchConfig(executor=cfg or ExecutorConfig()),
               observer=lambda s, app, h: states.append((s, tuple(app), h)))
    return res, states


def test_c04_applicable_parity(report):
    checked, bad, parts = 0, 0, []
    for name, task in parity_tasks():
        res, states = _trace(task)
        for s, app, _ in states:
            checked += 1
            bad += set(app) != brute_force_applicable(s, task)
        parts.append(f"{name} {len(states)} states")
    report(4, "datalog applicable sets = brute force", bad == 0 and checked > 0,
           f"{checked - bad}/{checked} states, " + ", ".join(parts))


def test_c05_parallel_determinism(report):
    configs = [ExecutorConfig(n, p) for n in (1, 2, 4, 8) for p in (GroundingPolicy(), GroundingPolicy(0, 2))]
    mismatches = []
    for name, task in parity_tasks():
        ref = None
        for cfg in configs:
            res, states = _trace(task, cfg)
            models = []
            with Executor(cfg) as ex:
                for s, _, _ in states:
                    for prog in (compile_action_program(task).program, compile_rpg_program(task).program):
                        models.append(frozenset(seminaive_evaluate(prog, ex, s.atoms, keep_instances=False).model()))
            key = (res.plan, res.expansions, res.h_trace, [(app, h) for _, app, h in states], models)
            if ref is None:
                ref = key
            elif key != ref:
                mismatches.append(f"{name} N={cfg.workers} m={cfg.policy.workers_when_above}")
    report(5, "bit-identical results across 8 executor configs", not mismatches,
           f"{len(configs)} configs x {len(parity_tasks())} tasks; mismatches: {mismatches or 'none'}")


def test_c06_plan_validity(report):
    bad, solved = [], 0
    for name, task in smoke_suite():
        res = gbfs(task)
        if res.status != SOLVED or not validate_plan(task, res.plan).valid:
            bad.append(name)
        else:
            solved += 1
    task = two_block_stack()
    length = len(gbfs(task).plan)
    optimal = len(bfs_plan(task))
    ok = not bad and len(smoke_suite()) == 20 and length == 2 == optimal
    report(6, "plan validity on 20-task smoke suite", ok,
           f"{solved}/20 valid plans, invalid {bad or 'none'}; stack2 plan length {length}, BFS optimum {optimal}")


def test_c07_ff_sanity(report):
    tasks = 150
    states = zero_ok = verdict_ok = dead = 0
    for seed in range(tasks):
        task = random_task(seed)
        ff = FFHeuristic(task)
        for s in sample_states(task, 300):
            h = ff.evaluate(s)
            states += 1
            zero_ok += (h.value == 0) == is_goal(s, task.goal)
            oracle = relaxed_dead_end(task, s)
            verdict_ok += h.dead_end == oracle
            dead += oracle
    ok = zero_ok == states and verdict_ok == states
    report(7, "h_FF zero iff goal, dead ends = relaxed reachability", ok,
           f"{tasks} tasks, {states} states ({dead} dead ends); zero-iff-goal {zero_ok}, verdicts {verdict_ok}")


def test_c08_instrumentation(report):
    half = PhaseTimings(total_us=10.0, action=PhaseBreakdown(seq_us=5.0))
    checks = {
        "amdahl(0.9)=10": abs(amdahl_bound(0.9) - 10.0) < 1e-9,
        "amdahl(0.924)~13": round(amdahl_bound(0.924)) == 13,
        "amdahl(0)=1": amdahl_bound(0.0) == 1.0,
        "fraction 1/0/0.5": (
            datalog_fraction(PhaseTimings(total_us=4.0, ff=PhaseBreakdown(inter_us=4.0))) == 1.0
            and datalog_fraction(PhaseTimings(total_us=4.0)) == 0.0
            and datalog_fraction(half) == 0.5
        ),
        "skew [1,1,1]": rule_skew([1, 1, 1]) == 1.0,
        "skew [1,2,9]": rule_skew([1, 2, 9]) == 4.5,
        "skew [7]": rule_skew([7]) == 1.0,
    }
    failed = [k for k, v in checks.items() if not v]
    report(8, "instrumentation arithmetic", not failed,
           f"amdahl(0.924)={amdahl_bound(0.924):.2f}; failed: {failed or 'none'}")


def _synthetic_run(workers: int):
    prog = stratify(synthetic_triangles())
    with gc_paused(), Executor(ExecutorConfig(workers, backend="process")) as ex:
        t0 = time.perf_counter()
        res = seminaive_evaluate(prog, ex, keep_instances=False)
        return time.perf_counter() - t0, res


def test_c09_scaling_smoke(report, capsys):
    cores = psutil.cpu_count(logical=False) or 1
    if cores < 4:
        with capsys.disabled():
            print(f"\nACCEPTANCE  9 scaling smoke: SKIP ({cores} physical core(s), need 4)")
        pytest.skip(f"{cores} physical cores < 4")
    t1, r1 = _synthetic_run(1)
    t4, r4 = _synthetic_run(4)
    per_rule_ms = sum(r1.rule_us.values()) / len(r1.rule_us) / 1e3
    ratio = t4 / t1
    report(9, "4-worker wall clock <= 0.6 x 1-worker", ratio <= 0.6 and r1.model() == r4.model(),
           f"{cores} cores, 64 rules at {per_rule_ms:.0f} ms/rule; 1 worker {t1:.2f}s, 4 workers {t4:.2f}s, "
           f"ratio {ratio:.2f}")


def test_c10_chain_iterations(report):
    got = {}
    for length in (3, 5, 8):
        text = "path(X,Y) :- edge(X,Y).\npath(X,Z) :- path(X,Y), edge(Y,Z).\n"
        text += "\n".join(f"edge(n{i},n{i + 1})." for i in range(length))
        res = seminaive_evaluate(stratify(parse_program(text)))
        got[length] = res.iterations(0)
    report(10, "length-L chain takes L non-empty delta iterations", all(k == v for k, v in got.items()),
           ", ".join(f"L={k}: {v}" for k, v in got.items()))
