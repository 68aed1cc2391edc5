"""Small hand-built arenas used by examples, tests and the CLI."""

from __future__ import annotations

from fractions import Fraction

from .arena import ConcurrentArena, deterministic_arena
from .gameform import I3
from .transform import ColorMonitor, seen_color_monitor

A2 = ("a1", "a2")
B2 = ("b1", "b2")


def avoid_y_turn_based() -> ConcurrentArena:
    """A at q0 loops or moves to q1; B at q1 takes a y-loop or returns to q0.

    B keeps y away forever by always returning to q0.
    """
    moves = {}
    for b in B2:
        moves[("q0", "a1", b)] = "q0"
        moves[("q0", "a2", b)] = "q1"
    for a in A2:
        moves[("q1", a, "b1")] = "q1"
        moves[("q1", a, "b2")] = "q0"
    col = {("q0", "q0"): "x", ("q0", "q1"): "x", ("q1", "q1"): "y", ("q1", "q0"): "x"}
    return deterministic_arena(("q0", "q1"), "q0", A2, B2, moves, ("x", "y"), col)


def retry_with_nature(p: Fraction = Fraction(1, 2)) -> ConcurrentArena:
    """B picks a lottery at q0; A may retry a risky move at q2 until it lands in q1.

    Only the edge q2 -> q1 is colored y. With the seen-y objective the value is 2/3.
    """
    delta = {}
    for a in A2:
        delta[("q0", a, "b1")] = "d1"
        delta[("q0", a, "b2")] = "d2"
        for b in B2:
            delta[("q1", a, b)] = "s1"
    for b in B2:
        delta[("q2", "a1", b)] = "s2"
        delta[("q2", "a2", b)] = "d3"
    dist = {
        "d1": {"q1": Fraction(1, 3), "q2": Fraction(2, 3)},
        "d2": {"q2": Fraction(1)},
        "d3": {"q1": p, "q2": 1 - p},
        "s1": {"q1": Fraction(1)},
        "s2": {"q2": Fraction(1)},
    }
    return ConcurrentArena(
        states=("q0", "q1", "q2"),
        q0="q0",
        actions_a=A2,
        actions_b=B2,
        nature=("d1", "d2", "d3", "s1", "s2"),
        delta=delta,
        dist=dist,
        colors=("x", "y"),
        col={("q2", "q1"): "y"},
    )


def matching_pennies_arena() -> ConcurrentArena:
    """Matching pennies at q0: a match stays at q0, a mismatch moves to a y-loop."""
    moves = {
        ("q0", "a1", "b1"): "q0",
        ("q0", "a2", "b2"): "q0",
        ("q0", "a1", "b2"): "q1",
        ("q0", "a2", "b1"): "q1",
    }
    for a in A2:
        for b in B2:
            moves[("q1", a, b)] = "q1"
    return deterministic_arena(("q0", "q1"), "q0", A2, B2, moves, ("x", "y"), {("q1", "q1"): "y"})


def hide_or_run() -> ConcurrentArena:
    """A hides (a1) or runs (a2); B waits (b1) or throws (b2).

    Hide/wait repeats q0, run/throw loses in q2, any other pair reaches the
    y-loop at q1. Randomizing lets A win with probability close to 1, but no
    positional deterministic choice does.
    """
    moves = {
        ("q0", "a1", "b1"): "q0",
        ("q0", "a1", "b2"): "q1",
        ("q0", "a2", "b1"): "q1",
        ("q0", "a2", "b2"): "q2",
    }
    for q in ("q1", "q2"):
        for a in A2:
            for b in B2:
                moves[(q, a, b)] = q
    return deterministic_arena(
        ("q0", "q1", "q2"), "q0", A2, B2, moves, ("x", "y"), {("q1", "q1"): "y"}
    )


def avoid_z_three_rows() -> ConcurrentArena:
    """A safety game around the named 3x3 form I3.

    Outcome z leads to a sink colored "unsafe". Column b2 keeps the play
    away from it and column b1 forces it.
    """
    rows = ("a1", "a2", "a3")
    cols = ("b1", "b2", "b3")
    table = dict(zip(rows, I3.table))
    delta = {}
    for a in rows:
        for b, d in zip(cols, table[a]):
            delta[("q", a, b)] = d
        for b in cols:
            delta[("X", a, b)] = "back"
            delta[("Y", a, b)] = "back"
            delta[("Z", a, b)] = "stuck"
    dist = {
        "x": {"X": Fraction(1)},
        "y": {"Y": Fraction(1)},
        "z": {"Z": Fraction(1)},
        "back": {"q": Fraction(1)},
        "stuck": {"Z": Fraction(1)},
    }
    return ConcurrentArena(
        states=("q", "X", "Y", "Z"),
        q0="q",
        actions_a=rows,
        actions_b=cols,
        nature=("x", "y", "z", "back", "stuck"),
        delta=delta,
        dist=dist,
        colors=("safe", "unsafe"),
        col={("Z", "Z"): "unsafe"},
    )


def seen_y() -> ColorMonitor:
    return seen_color_monitor(("x", "y"), "y")


def mismatch_loop() -> ConcurrentArena:
    """From s, A may enter q; at q the outcome table over successors is
    (X, Y), (Z, X), which no player controls for the set {X}. X, Y and Z lead
    back to s."""
    moves = {}
    for b in B2:
        moves[("s", "a1", b)] = "q"
        moves[("s", "a2", b)] = "s"
    table = {("a1", "b1"): "X", ("a1", "b2"): "Y", ("a2", "b1"): "Z", ("a2", "b2"): "X"}
    moves.update({("q", a, b): t for (a, b), t in table.items()})
    for r in ("X", "Y", "Z"):
        for a in A2:
            for b in B2:
                moves[(r, a, b)] = "s"
    return deterministic_arena(("s", "q", "X", "Y", "Z"), "s", A2, B2, moves, ("x",), {})
