"""The Datalog engine on its own: strata, deltas, consistency graphs, cliques.

    python demos/datalog_engine.py
"""

from tyr.datalog import FactStore, naive_fixpoint, parse_program, seminaive_evaluate, stratify
from tyr.graph import ConsistencyGraph
from tyr.grounder import ground_rule_delta

PROGRAM = """
% reachability over a short chain, then its complement
reach(X) :- src(X).
reach(Y) :- reach(X), edge(X,Y).
unreach(X) :- node(X), not reach(X).

% directed triangles
tri(X,Y,Z) :- edge(X,Y), edge(Y,Z), edge(Z,X).

src(a).
edge(a,b). edge(b,c). edge(c,a). edge(d,e).
node(a). node(b). node(c). node(d). node(e).
"""


def main() -> None:
    prog = parse_program(PROGRAM, "demo.dl")
    sp = stratify(prog)
    for i, rids in enumerate(sp.strata):
        print(f"stratum {i}: " + ", ".join(prog.predicates[prog.rules[r].head.predicate].name for r in rids))

    res = seminaive_evaluate(sp)
    print("delta sizes per stratum:", res.delta_sizes)
    print("grounding rounds per stratum:", res.grounding_rounds)
    assert res.model() == naive_fixpoint(sp)
    derived = sorted(prog.format_atom(a) for a in res.model() - sp.facts)
    print("derived:", " ".join(derived))

    # Each derived fact remembers the first rule instance that produced it.
    for atom in sorted(res.achievers, key=lambda a: (res.layer(a), a))[:6]:
        inst, layer = res.achievers[atom]
        print(f"  layer {layer}: {prog.format_atom(atom)} via {prog.rules[inst.rule_id].name or inst.rule_id}"
              f" {tuple(prog.objects[o] for o in inst.binding)}")

    # The triangle rule's consistency graph: one partition per variable.
    tri = next(r for r in prog.rules if prog.predicates[r.head.predicate].name == "tri")
    store = FactStore(sp.facts)
    g = ConsistencyGraph.build(tri, store, len(prog.objects))
    print()
    print(g.dump(prog.objects), end="")
    out, _ = ground_rule_delta(g, tri, store, g.delta_edges)
    print(f"{len(g.delta_edges)} delta-edges seed {len(out)} triangles, each reported once:")
    for inst in out:
        print("  tri" + str(tuple(prog.objects[o] for o in inst.binding)))


if __name__ == "__main__":
    main()
