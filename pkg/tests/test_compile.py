import random

from tyr.atoms import GroundAtom
from tyr.benchmarks import BLOCKSWORLD_DOMAIN, DELIVERY_DOMAIN, blocksworld, delivery, delivery_problem
from tyr.compile import compile_action_program, compile_rpg_program, decode_applicable, instance_action
from tyr.datalog import seminaive_evaluate
from tyr.generators import random_task
from tyr.grounder import GroundRuleInstance
from tyr.model import GroundAction, brute_force_applicable, initial_state, reachable_states
from tyr.pddl import parse_task


def test_zero_schemas_zero_rules():
    task = parse_task("(define (domain e) (:predicates (p)))", "(define (problem e) (:domain e) (:init) (:goal (p)))")
    assert compile_action_program(task).program.rules == ()
    assert compile_rpg_program(task).program.rules == ()


def test_blocksworld_action_program():
    task = blocksworld([["a"], ["b"], ["c"]], [["a", "b", "c"]])
    ap = compile_action_program(task)
    rules = ap.program.rules
    assert [r.name for r in rules] == ["pickup", "putdown", "stack", "unstack"]
    assert [r.head.arity for r in rules] == [1, 1, 2, 2]
    names = [ap.program.program.predicates[p].name for p in ap.head_predicates]
    assert names == ["pickup-applicable", "putdown-applicable", "stack-applicable", "unstack-applicable"]


def test_negative_precondition_kept_in_action_program():
    task = delivery(3, 1)
    load = task.schema_id("load")
    rule = compile_action_program(task).program.rules[load]
    assert task.predicate_id("loaded") in {a.predicate for a in rule.body_neg}


def test_decode():
    task = blocksworld([["a"], ["b"]], [["b", "a"]])
    ap = compile_action_program(task)
    assert decode_applicable([], ap) == set()
    inst = GroundRuleInstance(0, (0,), GroundAtom(ap.head_predicates[0], (0,)))
    assert decode_applicable([inst], ap) == {GroundAction(task.schema_id("pickup"), (0,))}


def test_decoded_applicable_equals_brute_force():
    for task in (blocksworld([["a"], ["b"], ["c"]], [["a", "b", "c"]]), delivery(3, 2)):
        ap = compile_action_program(task)
        for s in list(reachable_states(task))[:40]:
            ev = seminaive_evaluate(ap.program, facts=s.atoms)
            assert decode_applicable(ev.instances, ap) == brute_force_applicable(s, task)


def test_rpg_one_rule_per_add_effect():
    domain = """(define (domain two) (:predicates (p ?x) (q ?x ?y) (r ?x))
      (:action a :parameters (?x ?y) :precondition (and (r ?x) (r ?y)) :effect (and (p ?x) (q ?x ?y))))"""
    task = parse_task(domain, "(define (problem t) (:domain two) (:objects o) (:init (r o)) (:goal (p o)))")
    rpg = compile_rpg_program(task)
    heads = [r.head for r in rpg.program.rules]
    assert [task.predicates[h.predicate].name for h in heads] == ["p", "q"]
    assert [h.arity for h in heads] == [1, 2]


def test_rpg_drops_fluent_negative_preconditions_only():
    task = parse_task(DELIVERY_DOMAIN, delivery_problem(3, 1))
    rpg = compile_rpg_program(task)
    loaded, eq = task.predicate_id("loaded"), task.equality
    for rid, r in enumerate(rpg.program.rules):
        neg = {a.predicate for a in r.body_neg}
        assert loaded not in neg
        name = task.schemas[rpg.action_of_rule[rid][0]].name
        if name == "drive":
            assert eq in neg
        if name == "load":
            assert [a.predicate for a in rpg.dropped[rid]] == [loaded]


def test_blocksworld_rpg_rule_count():
    task = parse_task(BLOCKSWORLD_DOMAIN, "(define (problem p) (:domain blocksworld) (:objects a - block) (:init (clear a) (ontable a) (handempty)) (:goal (and (holding a))))")
    rpg = compile_rpg_program(task)
    per_schema = [sum(1 for sid, _ in rpg.action_of_rule if sid == s) for s in range(4)]
    assert per_schema == [1, 3, 3, 2] and len(rpg.program.rules) == 9


def test_instance_action_maps_back():
    task = blocksworld([["a"], ["b"]], [["b", "a"]])
    rpg = compile_rpg_program(task)
    ev = seminaive_evaluate(rpg.program, facts=initial_state(task).atoms)
    for inst in ev.instances:
        a = instance_action(rpg, inst)
        assert a.schema == rpg.action_of_rule[inst.rule_id][0]


def test_rpg_model_is_monotone_in_the_state():
    rng = random.Random(0)
    for seed in range(60):
        task = random_task(seed)
        rpg = compile_rpg_program(task)
        s = set(task.init)
        fluent = [p for p in range(len(task.predicates)) if not task.is_static(p)]
        small = seminaive_evaluate(rpg.program, facts=s).model()
        extra = {GroundAtom(p, tuple(rng.randrange(len(task.objects)) for _ in range(task.predicates[p].arity)))
                 for p in fluent for _ in range(2)}
        big = seminaive_evaluate(rpg.program, facts=s | extra).model()
        assert small <= big, seed
