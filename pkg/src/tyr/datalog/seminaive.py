"""Stratified semi-naive evaluation driven through the parallel executor."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

from tyr.atoms import GroundAtom
from tyr.datalog.program import StratifiedProgram
from tyr.datalog.store import FactStore
from tyr.graph import ConsistencyGraph
from tyr.grounder import GrounderStats, GroundRuleInstance
from tyr.parallel import Executor, RuleContext, balance
from tyr.stats import PhaseBreakdown


@dataclass
class EvaluationResult:
    store: FactStore
    instances: list[GroundRuleInstance] = field(default_factory=list)
    # derived fact -> (first achiever, layer); facts of F have neither
    achievers: dict[GroundAtom, tuple[GroundRuleInstance, int]] = field(default_factory=dict)
    # per stratum: sizes of the non-empty deltas produced after the seed delta
    delta_sizes: list[list[int]] = field(default_factory=list)
    grounding_rounds: list[int] = field(default_factory=list)
    delta_edges: int = 0
    rule_stats: dict[int, GrounderStats] = field(default_factory=dict)
    rule_us: dict[int, float] = field(default_factory=dict)
    breakdown: PhaseBreakdown = field(default_factory=PhaseBreakdown)

    def model(self) -> set[GroundAtom]:
        return self.store.atoms()

    def layer(self, atom: GroundAtom) -> int:
        entry = self.achievers.get(atom)
        return 0 if entry is None else entry[1]

    def iterations(self, stratum: int) -> int:
        return len(self.delta_sizes[stratum])


def seminaive_evaluate(
    program: StratifiedProgram,
    executor: Executor | None = None,
    facts: Iterable[GroundAtom] | None = None,
    owner_pruning: bool = True,
    keep_instances: bool = True,
) -> EvaluationResult:
    """Least model of ``program`` (with ``facts`` replacing its fact set if given)."""
    own = executor is None
    ex = executor if executor is not None else Executor()
    try:
        return _evaluate(program, ex, facts, owner_pruning, keep_instances)
    finally:
        if own:
            ex.close()


def _evaluate(program, ex, facts, owner_pruning, keep_instances) -> EvaluationResult:
    store = FactStore(program.facts if facts is None else facts)
    res = EvaluationResult(store)
    n = len(program.program.objects)
    rules = program.rules
    layer = 0
    for si, rids in enumerate(program.strata):
        t0 = time.perf_counter()
        store.reset_delta_to_all()
        contexts: dict[int, RuleContext] = {}
        for rid in rids:
            r = rules[rid]
            g = ConsistencyGraph.build(r, store, n) if r.arity >= 2 else None
            contexts[rid] = RuleContext(rid, r, g, heads_only=not keep_instances)
        body_preds = {a.predicate for rid in rids for a in rules[rid].body_pos}
        res.breakdown.seq_us += (time.perf_counter() - t0) * 1e6
        sizes: list[int] = []
        rounds = 0
        while True:
            counts = {rid: len(c.graph.delta_edges) if c.graph else 0 for rid, c in contexts.items()}
            res.delta_edges += sum(counts.values())
            plan = balance(counts, ex.config, si, rounds)
            m = ex.run_iteration(plan, store, contexts, owner_pruning)
            rounds += 1
            inter, intra = m.timings.split()
            res.breakdown.inter_us += inter
            res.breakdown.intra_us += intra
            t1 = time.perf_counter()
            for rid, st in m.stats.items():
                res.rule_stats.setdefault(rid, GrounderStats()).add(st)
                res.rule_stats[rid].queue_length = st.queue_length
                res.rule_us[rid] = res.rule_us.get(rid, 0.0) + m.rule_us[rid]
                contexts[rid].queue = m.queues[rid]
            if keep_instances:
                res.instances.extend(m.instance_log)
            if m.new_facts:
                layer += 1
                for h in m.new_facts:
                    res.achievers[h] = (m.first_achievers[h], layer)
                sizes.append(store.advance(m.new_facts))
            done = not m.new_facts or not (store.delta_predicates() & body_preds)
            if not done:
                for c in contexts.values():
                    c.fresh_all = False
                    if c.graph is not None:
                        c.graph.update(store)
            res.breakdown.seq_us += m.timings.sequential_us + (time.perf_counter() - t1) * 1e6
            if done:
                break
        res.delta_sizes.append(sizes)
        res.grounding_rounds.append(rounds)
    return res
