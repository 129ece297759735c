import pytest

from tyr.atoms import Atom, GroundAtom, var
from tyr.datalog import (
    NotStratifiableError,
    Predicate,
    Program,
    UnsafeRuleError,
    dependency_graph,
    make_rule,
    naive_fixpoint,
    parse_program,
    seminaive_evaluate,
    stratify,
)
from tyr.datalog.program import NEG, POS, check_stratification
from tyr.datalog.text import DatalogSyntaxError, format_program
from tyr.generators import random_program

X, Y, Z = var(0), var(1), var(2)

REACH = """
reach(X) :- src(X).
reach(Y) :- reach(X), edge(X,Y).
unreach(X) :- node(X), not reach(X).
node(a). node(b). src(a).
"""


def chain(n: int) -> str:
    lines = ["path(X,Y) :- edge(X,Y).", "path(X,Z) :- path(X,Y), edge(Y,Z)."]
    lines += [f"edge(n{i},n{i + 1})." for i in range(n)]
    return "\n".join(lines)


def names(prog: Program, atoms, pred: str) -> set[tuple[str, ...]]:
    p = prog.predicate_id(pred)
    return {tuple(prog.objects[o] for o in a.args) for a in atoms if a.predicate == p}


def test_dependency_graph_empty():
    assert dependency_graph([]).number_of_edges() == 0


def test_dependency_graph_single_positive_edge():
    r = make_rule(Atom(0, (X,)), [Atom(1, (X,))])
    g = dependency_graph([r])
    assert list(g.edges(data="labels")) == [(1, 0, {POS})]


def test_dependency_graph_mixed_labels():
    p, q, r = 0, 1, 2
    rules = [
        make_rule(Atom(p, ()), [Atom(q, ())]),
        make_rule(Atom(p, ()), [], [Atom(r, ())]),
        make_rule(Atom(r, ()), [Atom(p, ())]),
    ]
    g = dependency_graph(rules)
    assert {(u, v, frozenset(l)) for u, v, l in g.edges(data="labels")} == {
        (q, p, frozenset({POS})),
        (r, p, frozenset({NEG})),
        (p, r, frozenset({POS})),
    }


def test_negative_self_loop_not_stratifiable():
    prog = parse_program("p(X) :- q(X), not p(X). q(a).")
    with pytest.raises(NotStratifiableError):
        stratify(prog)


def test_single_stratum():
    sp = stratify(parse_program("p(X) :- q(X). q(a)."))
    assert sp.strata == ((0,),)


def test_reach_unreach_strata():
    sp = stratify(parse_program(REACH))
    assert sp.strata == ((0, 1), (2,))
    check_stratification(sp)


def test_unsafe_rule_rejected():
    with pytest.raises(UnsafeRuleError):
        make_rule(Atom(0, (X, Y)), [Atom(1, (X,))])
    with pytest.raises(UnsafeRuleError):
        make_rule(Atom(0, (X,)), [Atom(1, (X,))], [Atom(2, (Y,))])


def test_naive_empty_rules_returns_facts():
    prog = Program((Predicate("p", 1),), ("a",), (), frozenset({GroundAtom(0, (0,))}))
    assert naive_fixpoint(stratify(prog)) == {GroundAtom(0, (0,))}


def test_naive_transitive_closure():
    prog = parse_program(chain(0) + "\nedge(1,2). edge(2,3).")
    model = naive_fixpoint(stratify(prog))
    assert names(prog, model, "path") == {("1", "2"), ("2", "3"), ("1", "3")}


def test_unreach_with_and_without_edges():
    prog = parse_program(REACH + "edge(a,b).")
    model = naive_fixpoint(stratify(prog))
    assert names(prog, model, "reach") == {("a",), ("b",)}
    assert names(prog, model, "unreach") == set()
    prog = parse_program(REACH)
    model = naive_fixpoint(stratify(prog))
    assert names(prog, model, "reach") == {("a",)}
    assert names(prog, model, "unreach") == {("b",)}


@pytest.mark.parametrize("seed", range(40))
def test_seminaive_matches_naive(seed):
    sp = stratify(random_program(seed))
    assert seminaive_evaluate(sp).model() == naive_fixpoint(sp)


@pytest.mark.parametrize("length", [1, 3, 5])
def test_chain_delta_iterations(length):
    res = seminaive_evaluate(stratify(parse_program(chain(length))))
    assert res.delta_sizes == [list(range(length, 0, -1))]
    assert res.iterations(0) == length


def test_non_recursive_stratum_single_round():
    prog = parse_program("q(X,Y) :- e(X,Y), e(Y,X). r(X) :- e(X,X). e(a,b). e(b,a). e(a,a).")
    res = seminaive_evaluate(stratify(prog))
    assert res.grounding_rounds == [1]


def test_monotone_deltas_are_fresh():
    sp = stratify(random_program(7))
    res = seminaive_evaluate(sp)
    derived = [a for a in res.achievers]
    assert len(derived) == len(set(derived))
    layers = [res.layer(a) for a in derived]
    assert layers == sorted(layers)


def test_instances_have_satisfied_bodies():
    sp = stratify(parse_program(REACH + "edge(a,b)."))
    res = seminaive_evaluate(sp)
    model = res.model()
    for inst in res.instances:
        assert sp.rules[inst.rule_id].body_holds(inst.binding, model)


def test_text_round_trip():
    prog = parse_program(REACH + "edge(a,b).")
    again = parse_program(format_program(prog))
    assert format_program(again) == format_program(prog)
    model = {again.format_atom(a) for a in naive_fixpoint(stratify(again))}
    assert model == {prog.format_atom(a) for a in naive_fixpoint(stratify(prog))}


def test_text_syntax_error_position():
    with pytest.raises(DatalogSyntaxError) as info:
        parse_program("p(X) :- q(X).\nq(a)\n", "t.dl")
    assert str(info.value).startswith("t.dl:2:5:")
    assert (info.value.line, info.value.col) == (2, 5)
