from itertools import product

import pytest
from hypothesis import given, strategies as st

from conftest import rng_for, seeds
from cgdli import catalog
from cgdli.arena import ArenaError, ConcurrentArena, NotLocallyDetermined
from cgdli.generate import random_det_arena
from cgdli.oracles import naive_attractor, positional_winner
from cgdli.semantics import certify_winning
from cgdli.solve import (
    ParityGraph,
    SolverError,
    attractor,
    remap_threshold,
    solve_concurrent,
    threshold_objective,
    verify_graph_solution,
    zielonka,
    zielonka_graph,
)
from cgdli.transform import ParityObjective, sequentialize


def _random_graph(rng, n):
    succ = [rng.sample(range(n), rng.randint(1, min(2, n))) for _ in range(n)]
    return ParityGraph([rng.randint(0, 1) for _ in range(n)], [rng.randint(0, 4) for _ in range(n)], succ)


def _graph_winner(g, start):
    """Player 0 wins from ``start`` iff some positional choice beats every
    positional reply."""

    def top(choice):
        trail = [start]
        while True:
            nxt = choice[trail[-1]]
            if nxt in trail:
                return max(g.priority[v] for v in trail[trail.index(nxt):])
            trail.append(nxt)

    n = len(g.owner)
    options = [g.succ[v] for v in range(n)]
    mine = [v for v in range(n) if g.owner[v] == 0]
    theirs = [v for v in range(n) if g.owner[v] == 1]
    for c0 in product(*(options[v] for v in mine)):
        ok = True
        for c1 in product(*(options[v] for v in theirs)):
            choice = dict(zip(mine, c0))
            choice.update(zip(theirs, c1))
            if top(choice) % 2:
                ok = False
                break
        if ok:
            return 0
    return 1


def _swap_players(arena: ConcurrentArena) -> ConcurrentArena:
    delta = {(q, b, a): d for (q, a, b), d in arena.delta.items()}
    return ConcurrentArena(
        arena.states, arena.q0, arena.actions_b, arena.actions_a, arena.nature,
        delta, arena.dist, arena.colors, arena.col,
    )


@given(seeds)
def test_zielonka_graph_matches_brute_force(seed):
    rng = rng_for(seed)
    g = _random_graph(rng, rng.randint(1, 6))
    win, strat = zielonka_graph(g)
    verify_graph_solution(g, win, strat)
    for v in range(len(g.owner)):
        assert (0 if v in win[0] else 1) == _graph_winner(g, v)


def test_verifier_rejects_wrong_regions():
    g = ParityGraph([0, 0], [1, 2], [[0], [1]])
    with pytest.raises(SolverError):
        verify_graph_solution(g, [{0, 1}, set()], [{0: 0, 1: 1}, {}])
    with pytest.raises(SolverError):
        verify_graph_solution(g, [{0}, {0, 1}], [{}, {}])


@given(seeds, st.integers(0, 2**16))
def test_attractor_matches_fixpoint(seed, mask):
    rng = rng_for(seed)
    arena, _ = random_det_arena(rng)
    seq = sequentialize(arena).arena
    target = {q for k, q in enumerate(seq.states) if mask >> k & 1}
    for player in "AB":
        states, choice = attractor(seq, player, target)
        assert states == naive_attractor(seq, player, target)
        # following the choice from inside never leaves the attractor
        for q, a in choice.items():
            if player == "A":
                assert all(seq.target(q, a, b) in states for b in seq.actions_b)
            else:
                assert all(seq.target(q, x, a) in states for x in seq.actions_a)


def test_zielonka_needs_turn_based():
    with pytest.raises(ArenaError):
        zielonka(catalog.matching_pennies_arena(), ParityObjective({"x": 1, "y": 2}))


def test_avoid_y():
    obj = ParityObjective({"x": 0, "y": 1})
    sol = solve_concurrent(catalog.avoid_y_turn_based(), obj)
    assert sol.winner == "A"
    sol = solve_concurrent(catalog.avoid_y_turn_based(), ParityObjective({"x": 1, "y": 2}))
    assert sol.winner == "B"
    assert sol.strategy.action("0", "q1") == "b2"


def test_avoid_z_three_rows():
    arena = catalog.avoid_z_three_rows()
    # A wants the sink: b2 keeps it away
    sol = solve_concurrent(arena, ParityObjective({"safe": 1, "unsafe": 2}))
    assert sol.winner == "B" and sol.strategy.action("0", "q") == "b2"
    # A wants to stay safe: b1 forces the sink
    sol = solve_concurrent(arena, ParityObjective({"safe": 0, "unsafe": 1}))
    assert sol.winner == "B" and sol.strategy.action("0", "q") == "b1"


def test_solver_rejects_non_locally_determined():
    with pytest.raises(NotLocallyDetermined):
        solve_concurrent(catalog.matching_pennies_arena(), ParityObjective({"x": 1, "y": 2}))
    with pytest.raises(ArenaError, match="deterministic"):
        solve_concurrent(catalog.retry_with_nature(), ParityObjective({"x": 1, "y": 2}))


@given(seeds)
def test_concurrent_winner_matches_oracle(seed):
    arena, obj = random_det_arena(rng_for(seed))
    sol = solve_concurrent(arena, obj)
    assert sol.winner == positional_winner(arena, obj)
    assert certify_winning(arena, sol.strategy, obj)


@given(seeds)
def test_winner_flips_when_roles_swap(seed):
    arena, obj = random_det_arena(rng_for(seed))
    dual = ParityObjective({c: p + 1 for c, p in obj.priority.items()})
    w1 = solve_concurrent(arena, obj).winner
    w2 = solve_concurrent(_swap_players(arena), dual).winner
    assert {w1, w2} == {"A", "B"}


@given(st.integers(0, 8), st.sets(st.integers(0, 8)))
def test_threshold_remap_is_strictly_increasing(n, h):
    h = {k for k in h if k <= n}
    remap = remap_threshold(h, n)
    assert all(remap[k] < remap[k + 1] for k in range(n))
    assert all((remap[k] % 2 == 0) == (k in h) for k in range(n + 1))


def test_threshold_rejects_out_of_range():
    with pytest.raises(ValueError):
        remap_threshold({5}, 3)


@given(st.sets(st.integers(0, 3)), st.lists(st.integers(0, 3), min_size=1, max_size=5))
def test_threshold_objective_semantics(h, cycle):
    prio = ParityObjective({f"c{k}": k for k in range(4)})
    obj = threshold_objective(prio, h, 3)
    assert obj.wins_a([f"c{k}" for k in cycle]) == (max(cycle) in h)
