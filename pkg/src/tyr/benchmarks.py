"""Small PDDL benchmark domains and problem generators used by tests and demos."""

from __future__ import annotations

from typing import Sequence

from tyr.pddl import Task, parse_task

BLOCKSWORLD_DOMAIN = """\
; typed 4-operator blocksworld
(define (domain blocksworld)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block)
               (ontable ?x - block)
               (clear ?x - block)
               (handempty)
               (holding ?x - block))
  (:action pickup
    :parameters (?x - block)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (not (ontable ?x)) (not (clear ?x)) (not (handempty)) (holding ?x)))
  (:action putdown
    :parameters (?x - block)
    :precondition (holding ?x)
    :effect (and (not (holding ?x)) (clear ?x) (handempty) (ontable ?x)))
  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (not (holding ?x)) (not (clear ?y)) (clear ?x) (handempty) (on ?x ?y)))
  (:action unstack
    :parameters (?x - block ?y - block)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (clear ?x)) (not (handempty)) (not (on ?x ?y)))))
"""

GRIPPER_DOMAIN = """\
(define (domain gripper)
  (:requirements :strips :typing)
  (:types room ball gripper)
  (:predicates (at-robby ?r - room)
               (at ?b - ball ?r - room)
               (free ?g - gripper)
               (carry ?b - ball ?g - gripper))
  (:action move
    :parameters (?from - room ?to - room)
    :precondition (at-robby ?from)
    :effect (and (at-robby ?to) (not (at-robby ?from))))
  (:action pick
    :parameters (?b - ball ?r - room ?g - gripper)
    :precondition (and (at ?b ?r) (at-robby ?r) (free ?g))
    :effect (and (carry ?b ?g) (not (at ?b ?r)) (not (free ?g))))
  (:action drop
    :parameters (?b - ball ?r - room ?g - gripper)
    :precondition (and (carry ?b ?g) (at-robby ?r))
    :effect (and (at ?b ?r) (free ?g) (not (carry ?b ?g)))))
"""

# Trucks drive along a static 3-ary road relation; a truck may only drive
# when empty, which exercises non-static negative preconditions and equality.
DELIVERY_DOMAIN = """\
(define (domain delivery)
  (:requirements :strips :typing :negative-preconditions :equality)
  (:types place truck package - object)
  (:predicates (road ?from - place ?to - place ?t - truck)
               (at ?t - truck ?p - place)
               (pkg-at ?k - package ?p - place)
               (in ?k - package ?t - truck)
               (loaded ?t - truck))
  (:action drive
    :parameters (?t - truck ?from - place ?to - place)
    :precondition (and (at ?t ?from) (road ?from ?to ?t) (not (= ?from ?to)))
    :effect (and (at ?t ?to) (not (at ?t ?from))))
  (:action load
    :parameters (?k - package ?t - truck ?p - place)
    :precondition (and (at ?t ?p) (pkg-at ?k ?p) (not (loaded ?t)))
    :effect (and (in ?k ?t) (loaded ?t) (not (pkg-at ?k ?p))))
  (:action unload
    :parameters (?k - package ?t - truck ?p - place)
    :precondition (and (at ?t ?p) (in ?k ?t))
    :effect (and (pkg-at ?k ?p) (not (in ?k ?t)) (not (loaded ?t)))))
"""


def _stack_atoms(stacks: Sequence[Sequence[str]]) -> list[str]:
    """Atoms for towers listed bottom to top."""
    atoms = []
    for tower in stacks:
        if not tower:
            continue
        atoms.append(f"(ontable {tower[0]})")
        for below, above in zip(tower, tower[1:]):
            atoms.append(f"(on {above} {below})")
        atoms.append(f"(clear {tower[-1]})")
    return atoms


def blocksworld_problem(
    init: Sequence[Sequence[str]], goal: Sequence[Sequence[str]], name: str = "bw"
) -> str:
    """Problem text; towers are bottom-to-top lists, goal towers list only ``on``/``ontable`` facts."""
    blocks = sorted({b for t in init for b in t})
    goal_atoms = []
    for tower in goal:
        for below, above in zip(tower, tower[1:]):
            goal_atoms.append(f"(on {above} {below})")
    return (
        f"(define (problem {name}) (:domain blocksworld)\n"
        f"  (:objects {' '.join(blocks)} - block)\n"
        f"  (:init {' '.join(_stack_atoms(init))} (handempty))\n"
        f"  (:goal (and {' '.join(goal_atoms)})))\n"
    )


def gripper_problem(balls: int, name: str = "gripper") -> str:
    names = " ".join(f"ball{i}" for i in range(1, balls + 1))
    init = " ".join(f"(at ball{i} rooma)" for i in range(1, balls + 1))
    goal = " ".join(f"(at ball{i} roomb)" for i in range(1, balls + 1))
    return (
        f"(define (problem {name}) (:domain gripper)\n"
        f"  (:objects rooma roomb - room {names} - ball left right - gripper)\n"
        f"  (:init (at-robby rooma) (free left) (free right) {init})\n"
        f"  (:goal (and {goal})))\n"
    )


def delivery_problem(places: int, packages: int, trucks: int = 1, name: str = "delivery") -> str:
    """Line of places; trucks start at p0, packages move from p0 to the far end."""
    ps = [f"p{i}" for i in range(places)]
    ts = [f"t{i}" for i in range(trucks)]
    ks = [f"k{i}" for i in range(packages)]
    init = []
    for t in ts:
        init.append(f"(at {t} p0)")
        for a, b in zip(ps, ps[1:]):
            init.append(f"(road {a} {b} {t})")
            init.append(f"(road {b} {a} {t})")
    init += [f"(pkg-at {k} p0)" for k in ks]
    goal = " ".join(f"(pkg-at {k} {ps[-1]})" for k in ks)
    return (
        f"(define (problem {name}) (:domain delivery)\n"
        f"  (:objects {' '.join(ps)} - place {' '.join(ts)} - truck {' '.join(ks)} - package)\n"
        f"  (:init {' '.join(init)})\n"
        f"  (:goal (and {goal})))\n"
    )


def blocksworld(init, goal, name: str = "bw") -> Task:
    return parse_task(BLOCKSWORLD_DOMAIN, blocksworld_problem(init, goal, name))


def gripper(balls: int) -> Task:
    return parse_task(GRIPPER_DOMAIN, gripper_problem(balls))


def delivery(places: int, packages: int, trucks: int = 1) -> Task:
    return parse_task(DELIVERY_DOMAIN, delivery_problem(places, packages, trucks))


def two_block_stack() -> Task:
    return blocksworld([["a"], ["b"]], [["b", "a"]], "stack2")


def parity_tasks() -> list[tuple[str, Task]]:
    """3- and 4-block Blocksworld plus 2-ball Gripper."""
    return [
        ("bw3", blocksworld([["a", "b", "c"]], [["c", "b", "a"]], "bw3")),
        ("bw4", blocksworld([["a", "b"], ["c", "d"]], [["d", "c", "b", "a"]], "bw4")),
        ("gripper2", gripper(2)),
    ]


def smoke_suite() -> list[tuple[str, Task]]:
    """Twenty small solvable tasks across the three domains."""
    out: list[tuple[str, Task]] = [("stack2", two_block_stack())]
    bw = [
        ([["a"], ["b"], ["c"]], [["a", "b", "c"]]),
        ([["a", "b", "c"]], [["c", "b", "a"]]),
        ([["a", "b", "c"]], [["b", "a"], ["c"]]),
        ([["c", "a"], ["b"]], [["a", "b", "c"]]),
        ([["a", "b"], ["c", "d"]], [["d", "c", "b", "a"]]),
        ([["a"], ["b"], ["c"], ["d"]], [["a", "b"], ["c", "d"]]),
        ([["a", "b", "c", "d"]], [["d", "c", "b", "a"]]),
        ([["b", "a"], ["d", "c"]], [["a", "c"], ["b", "d"]]),
        ([["a", "b", "c", "d", "e"]], [["e", "d", "c", "b", "a"]]),
        ([["a", "c"], ["b", "e"], ["d"]], [["c", "b", "a"], ["d", "e"]]),
    ]
    for i, (init, goal) in enumerate(bw):
        out.append((f"bw-{i}", blocksworld(init, goal, f"bw{i}")))
    for balls in (1, 2, 3, 4):
        out.append((f"gripper-{balls}", gripper(balls)))
    for places, pkgs, trucks in ((2, 1, 1), (3, 1, 1), (3, 2, 1), (4, 1, 2), (4, 2, 1)):
        out.append((f"delivery-{places}-{pkgs}-{trucks}", delivery(places, pkgs, trucks)))
    return out
