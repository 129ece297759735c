import pytest

from tyr.atoms import Atom, GroundAtom, var
from tyr.datalog import FactStore, make_rule, parse_program, seminaive_evaluate, stratify
from tyr.datalog.store import FrozenStoreError
from tyr.generators import random_program, synthetic_triangles
from tyr.graph import ConsistencyGraph
from tyr.grounder import GrounderStats, GroundRuleInstance
from tyr.parallel import (
    Executor,
    ExecutorConfig,
    GroundingPolicy,
    IterationPlan,
    IterationTimings,
    RuleContext,
    WorkerBuffer,
    WorkerError,
    balance,
    ground_unit,
    merge,
)

X, Y = var(0), var(1)
H, P = 0, 1


def buffer(rid, s, entries):
    return WorkerBuffer(rid, s, list(enumerate(entries)), [], None, GrounderStats(), 0.0)


def inst(rid, binding, head):
    return GroundRuleInstance(rid, binding, head)


def test_threshold_is_strict():
    cfg = ExecutorConfig(4, GroundingPolicy(1024, 2))
    assert len(balance({0: 1024}, cfg).tasks[0].slices) == 1
    sizes = [len(s) for s in balance({0: 1025}, cfg).tasks[0].slices]
    assert sizes == [513, 512]


def test_zero_count_still_gets_one_slice():
    plan = balance({3: 0}, ExecutorConfig())
    assert [list(s) for s in plan.tasks[0].slices] == [[]]


def test_round_robin_slices():
    plan = balance({0: 100}, ExecutorConfig(2, GroundingPolicy(10, 2)))
    a, b = plan.tasks[0].slices
    assert (len(a), len(b)) == (50, 50)
    assert list(a)[:3] == [0, 2, 4] and list(b)[:3] == [1, 3, 5]


def test_policy_validation():
    with pytest.raises(ValueError):
        GroundingPolicy(-1)
    with pytest.raises(ValueError):
        ExecutorConfig(0)
    with pytest.raises(ValueError):
        ExecutorConfig(backend="gpu")


def test_empty_plan_and_empty_buffers():
    m = Executor().run_iteration(IterationPlan(0, 0, ()), FactStore(), {})
    assert m.new_facts == [] and m.instance_log == []
    assert merge([], FactStore()).new_facts == []


def test_merge_dedups_heads_and_keeps_first_achiever():
    h = GroundAtom(H, (0,))
    first, second = inst(0, (0, 1), h), inst(1, (0, 2), h)
    m = merge([buffer(1, 0, [second]), buffer(0, 0, [first])], FactStore())
    assert m.new_facts == [h]
    assert m.first_achievers[h] == first
    assert m.instance_log == [first, second]


def test_merge_logs_but_skips_known_heads():
    h = GroundAtom(H, (0,))
    m = merge([buffer(0, 0, [inst(0, (0,), h)])], FactStore([h]))
    assert m.new_facts == [] and len(m.instance_log) == 1 and h not in m.first_achievers


def test_merge_interleaves_slices_by_seed():
    a = inst(0, (0, 1), GroundAtom(H, (0, 1)))
    b = inst(0, (1, 0), GroundAtom(H, (1, 0)))
    c = inst(0, (2, 0), GroundAtom(H, (2, 0)))
    s0 = WorkerBuffer(0, 0, [(0, a), (2, c)], [], None, GrounderStats(), 0.0)
    s1 = WorkerBuffer(0, 1, [(1, b)], [], None, GrounderStats(), 0.0)
    assert merge([s1, s0], FactStore()).instance_log == [a, b, c]


def _edge_context(n_edges: int):
    r = make_rule(Atom(H, (X, Y)), [Atom(P, (X, Y))])
    facts = [GroundAtom(P, (a, b)) for a in range(10) for b in range(10)][:n_edges]
    store = FactStore(facts)
    ctx = RuleContext(0, r, ConsistencyGraph.build(r, store, 10))
    return store, ctx


@pytest.mark.parametrize("backend", ["thread", "process"])
def test_slices_union_equals_single_slice(backend):
    store, ctx = _edge_context(100)
    single = Executor().run_iteration(balance({0: 100}, ExecutorConfig()), store, {0: ctx})
    cfg = ExecutorConfig(2, GroundingPolicy(10, 2), backend)
    with Executor(cfg) as ex:
        m = ex.run_iteration(balance({0: 100}, cfg), store, {0: ctx})
    assert m.instance_log == single.instance_log
    assert m.new_facts == single.new_facts and len(m.new_facts) == 100


def test_store_frozen_during_grounding():
    store, ctx = _edge_context(4)
    store.frozen = True
    with pytest.raises(FrozenStoreError):
        store.advance([])

    seen = []
    orig = ctx.graph.delta_edges

    class Probe(list):
        def __getitem__(self, i):
            seen.append(store.frozen)
            return orig[i]

    store.frozen = False
    ctx.graph.delta_edges = Probe(orig)
    Executor().run_iteration(balance({0: len(orig)}, ExecutorConfig()), store, {0: ctx})
    assert seen and all(seen) and not store.frozen


@pytest.mark.parametrize("backend", ["thread", "process"])
def test_worker_errors_propagate(backend):
    store, ctx = _edge_context(4)
    cfg = ExecutorConfig(2, GroundingPolicy(0, 2), backend)
    bogus = balance({0: 50}, cfg)  # seeds past the end of the Δ-edge list
    with Executor(cfg) as ex:
        with pytest.raises(WorkerError, match="slice"):
            ex.run_iteration(bogus, store, {0: ctx})
    assert not store.frozen


def test_ground_unit_slice_zero_drains_queue():
    store, ctx = _edge_context(2)
    buf = ground_unit(ctx, 1, range(0), store)
    assert buf.surviving is None
    buf = ground_unit(ctx, 0, range(0), store)
    assert buf.surviving == []


def test_timing_split():
    t = IterationTimings(parallel_us=100.0, slice0_us=30.0, extra_slices_us=10.0)
    assert t.split() == (75.0, 25.0)
    assert IterationTimings(parallel_us=5.0).split() == (5.0, 0.0)


@pytest.mark.parametrize("policy", [GroundingPolicy(), GroundingPolicy(0, 2)])
@pytest.mark.parametrize("workers", [2, 8])
def test_models_independent_of_configuration(workers, policy):
    cfg = ExecutorConfig(workers, policy)
    for seed in range(25):
        sp = stratify(random_program(seed))
        base = seminaive_evaluate(sp)
        with Executor(cfg) as ex:
            res = seminaive_evaluate(sp, ex)
        assert res.model() == base.model()
        assert res.delta_sizes == base.delta_sizes
        assert res.instances == base.instances
        assert res.achievers == base.achievers


def test_process_backend_model():
    sp = stratify(synthetic_triangles(rules=4, nodes=12))
    base = seminaive_evaluate(sp, keep_instances=False)
    with Executor(ExecutorConfig(3, GroundingPolicy(8, 2), "process")) as ex:
        res = seminaive_evaluate(sp, ex, keep_instances=False)
    assert res.model() == base.model() and res.achievers == base.achievers


def test_heads_only_keeps_first_achievers():
    sp = stratify(parse_program("t(X) :- e(X,Y), e(Y,Z). e(a,b). e(b,c). e(c,a). e(a,c)."))
    full = seminaive_evaluate(sp)
    lean = seminaive_evaluate(sp, keep_instances=False)
    assert lean.achievers == full.achievers and lean.instances == []
