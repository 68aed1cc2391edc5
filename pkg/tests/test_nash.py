import json
from itertools import product

import pytest
from hypothesis import given, settings

from conftest import rng_for, seeds
from cgdli import catalog
from cgdli.arena import ArenaError
from cgdli.generate import random_acyclic_edges, random_det_arena
from cgdli.nash import (
    Preference,
    PriorityPartition,
    achievable_classes,
    find_positional_ne,
    is_acyclic,
    outcome_class,
    prefs_from_dict,
    prefs_to_json,
    verify_ne,
)
from cgdli.oracles import deviation_classes
from cgdli.semantics import positional_profiles
from cgdli.solve import solve_concurrent
from cgdli.strategy import positional
from cgdli.transform import ParityObjective


def _antagonistic(n):
    even = [k for k in range(n + 1) if k % 2 == 0]
    odd = [k for k in range(n + 1) if k % 2 == 1]
    return {
        "A": Preference("A", frozenset((j, k) for j in odd for k in even)),
        "B": Preference("B", frozenset((k, j) for j in odd for k in even)),
    }


def test_acyclicity():
    assert is_acyclic([(0, 1), (1, 2), (0, 2)])
    assert not is_acyclic([(0, 1), (1, 0)])
    assert not is_acyclic([(3, 3)])
    with pytest.raises(ArenaError, match="cyclic"):
        Preference("A", frozenset({(0, 1), (1, 2), (2, 0)}))


def test_partition_range():
    with pytest.raises(ArenaError, match="outside"):
        PriorityPartition(1, ParityObjective({"x": 2}))


def test_prefs_json_round_trip():
    prefs = prefs_from_dict({"A": [[0, 1]], "B": [[1, 0], [2, 0]]})
    assert prefs_from_dict(json.loads(prefs_to_json(prefs))) == prefs
    assert prefs["B"].prefers(0, 2)


def test_missing_player_and_bad_arena():
    part = PriorityPartition(1, ParityObjective({"x": 0, "y": 1}))
    with pytest.raises(ArenaError, match="missing preference"):
        find_positional_ne(catalog.avoid_y_turn_based(), part, {"A": Preference("A", frozenset())})
    with pytest.raises(ArenaError, match="deterministic"):
        find_positional_ne(catalog.retry_with_nature(), part, _antagonistic(1))


@settings(max_examples=30)
@given(seeds)
def test_witness_is_an_equilibrium(seed):
    rng = rng_for(seed)
    arena, obj = random_det_arena(rng, 3, 2, 2, 3)
    part = PriorityPartition(obj.max, obj)
    prefs = {p: Preference(p, random_acyclic_edges(rng, obj.max)) for p in "AB"}
    w = find_positional_ne(arena, part, prefs)
    assert w.certified and verify_ne(arena, part, prefs, w.s_a, w.s_b)
    assert w.outcome_class == outcome_class(arena, part, w.s_a, w.s_b)
    prof_a = {q: w.s_a.action("0", q) for q in arena.states}
    prof_b = {q: w.s_b.action("0", q) for q in arena.states}
    for player, fixed_player, fixed in (("A", "B", prof_b), ("B", "A", prof_a)):
        assert not any(prefs[player].prefers(c, w.outcome_class) for c in deviation_classes(arena, obj, fixed_player, fixed))


@settings(max_examples=30)
@given(seeds)
def test_achievable_classes_match_deviations(seed):
    rng = rng_for(seed)
    arena, obj = random_det_arena(rng, 3, 2, 2, 3)
    part = PriorityPartition(obj.max, obj)
    for fixed_player in "AB":
        prof = rng.choice(positional_profiles(arena, fixed_player))
        s = positional(fixed_player, arena, prof)
        full = {q: s.action("0", q) for q in arena.states}
        assert achievable_classes(arena, part, s) == deviation_classes(arena, obj, fixed_player, full)


@settings(max_examples=20)
@given(seeds)
def test_win_lose_equilibria_share_the_winner(seed):
    rng = rng_for(seed)
    arena, obj = random_det_arena(rng, 3, 2, 2, 3)
    part = PriorityPartition(obj.max, obj)
    prefs = _antagonistic(obj.max)
    winner = solve_concurrent(arena, obj).winner
    parities = set()
    for pa, pb in product(positional_profiles(arena, "A"), positional_profiles(arena, "B")):
        s_a, s_b = positional("A", arena, pa), positional("B", arena, pb)
        if verify_ne(arena, part, prefs, s_a, s_b):
            parities.add(outcome_class(arena, part, s_a, s_b) % 2)
    assert parities == {0 if winner == "A" else 1}
    assert find_positional_ne(arena, part, prefs).outcome_class % 2 == (0 if winner == "A" else 1)
