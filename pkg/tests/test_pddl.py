import pytest

from tyr.atoms import GroundAtom
from tyr.benchmarks import BLOCKSWORLD_DOMAIN, DELIVERY_DOMAIN, blocksworld_problem, delivery_problem
from tyr.pddl import (
    PDDLSemanticError,
    PDDLSyntaxError,
    UnsupportedFeatureError,
    format_domain,
    format_problem,
    load_task,
    normalize,
    parse_domain,
    parse_problem,
    parse_sexprs,
    parse_task,
)

MINIMAL = "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) :precondition (p ?x) :effect (not (p ?x))))"
BW3 = blocksworld_problem([["a"], ["b"], ["c"]], [["a", "b", "c"]], "bw3")


def test_minimal_domain():
    dom = parse_domain(MINIMAL)
    assert len(dom.predicates) == 1 and len(dom.actions) == 1


def test_forall_rejected():
    text = MINIMAL.replace(":effect (not (p ?x))", ":effect (forall (?y) (p ?y))")
    with pytest.raises(UnsupportedFeatureError):
        parse_domain(text)


@pytest.mark.parametrize("construct", [
    "(or (p ?x) (p ?x))",
    "(exists (?y) (p ?y))",
    "(imply (p ?x) (p ?x))",
])
def test_other_formulas_rejected(construct):
    text = MINIMAL.replace(":precondition (p ?x)", f":precondition {construct}")
    with pytest.raises(UnsupportedFeatureError):
        parse_domain(text)


def test_conditional_effect_rejected():
    text = MINIMAL.replace(":effect (not (p ?x))", ":effect (when (p ?x) (not (p ?x)))")
    with pytest.raises(UnsupportedFeatureError):
        parse_domain(text)


def test_blocksworld_counts():
    dom = parse_domain(BLOCKSWORLD_DOMAIN)
    assert len(dom.predicates) == 5 and len(dom.actions) == 4


def test_empty_init_and_goal():
    prob = parse_problem("(define (problem e) (:domain d) (:init) (:goal (and)))", parse_domain(MINIMAL))
    assert prob.init == () and prob.goal == ()


def test_duplicate_init_atoms_collapse():
    dom = parse_domain(MINIMAL)
    prob = parse_problem("(define (problem e) (:domain d) (:objects a) (:init (p a) (p a)) (:goal (p a)))", dom)
    assert len(prob.init) == 1


def test_blocksworld_problem_counts():
    prob = parse_problem(BW3, parse_domain(BLOCKSWORLD_DOMAIN))
    assert len(prob.objects) == 3
    # three ontable, three clear, handempty
    assert len(prob.init) == 7


def test_type_compilation():
    task = parse_task(BLOCKSWORLD_DOMAIN, BW3)
    block = task.predicate_id("block")
    pickup = task.schemas[task.schema_id("pickup")]
    assert any(l.positive and l.atom.predicate == block for l in pickup.precondition)
    assert {GroundAtom(block, (task.object_id(b),)) for b in "abc"} <= task.init


def test_static_detection():
    task = parse_task(BLOCKSWORLD_DOMAIN, BW3)
    for name in ("on", "ontable", "clear", "holding", "handempty"):
        assert not task.is_static(task.predicate_id(name))
    assert task.is_static(task.predicate_id("block"))
    road = parse_task(DELIVERY_DOMAIN, delivery_problem(3, 1))
    assert road.is_static(road.predicate_id("road"))
    assert not road.is_static(road.predicate_id("loaded"))


def test_equality_becomes_static_predicate():
    task = parse_task(DELIVERY_DOMAIN, delivery_problem(3, 1))
    eq = task.equality
    assert eq is not None and task.is_static(eq)
    assert {a.args for a in task.init if a.predicate == eq} == {(o, o) for o in range(len(task.objects))}
    assert parse_task(BLOCKSWORLD_DOMAIN, BW3).equality is None


def test_domain_round_trip():
    for text in (MINIMAL, BLOCKSWORLD_DOMAIN, DELIVERY_DOMAIN):
        dom = parse_domain(text)
        assert parse_domain(format_domain(dom)) == dom


def test_problem_round_trip():
    dom = parse_domain(BLOCKSWORLD_DOMAIN)
    prob = parse_problem(BW3, dom)
    assert parse_problem(format_problem(prob), dom) == prob


def test_case_insensitive_and_comments():
    text = "; header\n(DEFINE (DOMAIN D) (:PREDICATES (P ?X)) ; trailing\n (:ACTION A :PARAMETERS (?X) :PRECONDITION (P ?X) :EFFECT (NOT (P ?X))))"
    assert parse_domain(text) == parse_domain(MINIMAL)


def test_error_location_format():
    with pytest.raises(PDDLSyntaxError) as info:
        parse_sexprs("(define (domain d)\n  (:predicates (p ?x))", "dom.pddl")
    assert str(info.value).startswith("dom.pddl:")
    with pytest.raises(PDDLSemanticError) as info:
        parse_domain(MINIMAL.replace(":precondition (p ?x)", ":precondition (q ?x)"), "d.pddl")
    assert str(info.value).startswith("d.pddl:1:")


def test_semantic_errors():
    dom = parse_domain(MINIMAL)
    with pytest.raises(PDDLSemanticError):
        parse_problem("(define (problem e) (:domain d) (:objects a) (:init (p b)) (:goal (and)))", dom)
    with pytest.raises(PDDLSemanticError):
        parse_problem("(define (problem e) (:domain other) (:init) (:goal (and)))", dom)
    with pytest.raises(PDDLSemanticError):
        parse_domain(MINIMAL.replace("(p ?x) :effect", "(p ?x ?x) :effect"))
    with pytest.raises(PDDLSemanticError):
        # negative precondition without the requirement
        parse_domain(MINIMAL.replace(":precondition (p ?x)", ":precondition (not (p ?x))"))


def test_load_task_from_files(tmp_path):
    d, p = tmp_path / "domain.pddl", tmp_path / "problem.pddl"
    d.write_text(BLOCKSWORLD_DOMAIN)
    p.write_text(BW3)
    task = load_task(str(d), str(p))
    assert task.name == "bw3" and len(task.schemas) == 4


def test_normalize_matches_parse_task():
    dom = parse_domain(BLOCKSWORLD_DOMAIN)
    assert normalize(dom, parse_problem(BW3, dom)) == parse_task(BLOCKSWORLD_DOMAIN, BW3)
