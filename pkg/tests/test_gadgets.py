import pytest
from hypothesis import given, settings

from conftest import rng_for, seeds
from cgdli import catalog
from cgdli.arena import ArenaError, classify, deterministic_arena, local_interaction
from cgdli.gadgets import (
    build_open_counterexample,
    build_two_tail_gadget,
    lasso_letter,
    lassos_differ,
    parse_lasso,
    refute_winning_up_to_memory,
    strong_reach,
    tail_monitor,
)
from cgdli.gameform import I3, I5, MATCHING_PENNIES, is_determined
from cgdli.generate import random_det_arena, random_stochastic_arena
from cgdli.oracles import naive_strong_reach, positional_winner
from cgdli.semantics import CapExceeded
from cgdli.transform import ColorMonitor, path_colors


def test_parse_lasso():
    assert parse_lasso("x y|z") == (("x", "y"), ("z",))
    assert parse_lasso("y") == ((), ("y",))
    assert parse_lasso("a,b|c d") == (("a", "b"), ("c", "d"))
    with pytest.raises(ArenaError):
        parse_lasso("x|")


def test_lassos_differ():
    assert not lassos_differ(parse_lasso("x|x"), parse_lasso("x"))
    assert not lassos_differ(parse_lasso("x y"), parse_lasso("x y x|y x"))
    assert lassos_differ(parse_lasso("x"), parse_lasso("x x x|y"))


def test_tail_monitor_accepts_only_its_word():
    word = parse_lasso("x|y x")
    mon = tail_monitor(word, ("x", "y"))
    good = [lasso_letter(word, i) for i in range(20)]
    bad = good[:8] + ["y"] + good[9:]
    assert mon.priority[mon.run(good)] == 2
    assert mon.run(bad) == "sink"


def test_two_tail_play_follows_the_tail():
    arena, mon = build_two_tail_gadget(MATCHING_PENNIES, parse_lasso("y"), parse_lasso("x"))
    assert classify(arena).deterministic
    assert [q for q in arena.states if not is_determined(local_interaction(arena, q))] == ["q0"]
    q, path = arena.q0, [arena.q0]
    for _ in range(6):
        q = arena.target(q, "a1", "b1")
        path.append(q)
    # a1/b1 gives x, which is in the undetermined valuation {x}: winning tail
    assert path_colors(arena, path) == ["y"] * 6
    assert mon.priority[mon.run(path_colors(arena, path))] == 2


def test_two_tail_rejects_bad_input():
    with pytest.raises(ArenaError, match="determined"):
        build_two_tail_gadget(I3, parse_lasso("y"), parse_lasso("x"))
    with pytest.raises(ArenaError, match="same infinite word"):
        build_two_tail_gadget(MATCHING_PENNIES, parse_lasso("x"), parse_lasso("x|x"))


@pytest.mark.parametrize("form", [MATCHING_PENNIES, I5], ids=["matching-pennies", "i5"])
def test_two_tail_has_no_small_winner(form):
    arena, mon = build_two_tail_gadget(form, parse_lasso("y"), parse_lasso("x"))
    for player in "AB":
        for mem in (1, 2):
            assert refute_winning_up_to_memory(arena, mon, player, mem)


def test_open_counterexample_on_mismatch_loop():
    arena, mon = build_open_counterexample(catalog.mismatch_loop(), "q")
    bad = [q for q in arena.states if not is_determined(local_interaction(arena, q))]
    assert bad == ["q"]
    for player in "AB":
        for mem in (1, 2):
            assert refute_winning_up_to_memory(arena, mon, player, mem)


def test_open_counterexample_needs_undetermined_successors():
    with pytest.raises(ArenaError, match="determined"):
        build_open_counterexample(catalog.avoid_y_turn_based(), "q1")
    with pytest.raises(ArenaError, match="deterministic"):
        build_open_counterexample(catalog.retry_with_nature(), "q0")


def test_strong_reach_labels():
    levels = strong_reach(catalog.mismatch_loop(), "q")
    assert levels.label("q") == "c0"
    assert levels.label("s") == "cA1"
    # X, Y, Z return to s whatever happens
    assert {levels.label(r) for r in "XYZ"} == {"cA2"}
    with pytest.raises(ArenaError):
        strong_reach(catalog.mismatch_loop(), "nowhere")


@given(seeds)
def test_strong_reach_matches_fixpoint(seed):
    rng = rng_for(seed)
    arena, _ = random_stochastic_arena(rng, locally_determined=False)
    for q in arena.states:
        levels = strong_reach(arena, q)
        assert {s: lv for s, (lv, _) in levels.levels.items()} == naive_strong_reach(arena, q)
        assert levels.rounds[0] == {q}
        assert all(a < b for a, b in zip(levels.rounds, levels.rounds[1:]))
        assert levels.depth <= len(arena.states)


@settings(max_examples=40)
@given(seeds)
def test_memoryless_refutation_matches_positional_oracle(seed):
    arena, obj = random_det_arena(rng_for(seed), 3, 2, 2, 3, locally_determined=False)
    winner = positional_winner(arena, obj)
    for player in "AB":
        assert refute_winning_up_to_memory(arena, None, player, 1, obj=obj) == (winner != player)


def _alternation_game():
    # A picks x or y at q0; both lead back; winning needs both infinitely often
    moves = {}
    for b in ("b",):
        moves[("q0", "a1", b)] = "q1"
        moves[("q0", "a2", b)] = "q2"
        moves[("q1", "a1", b)] = moves[("q1", "a2", b)] = "q0"
        moves[("q2", "a1", b)] = moves[("q2", "a2", b)] = "q0"
    col = {("q0", "q1"): "x", ("q0", "q2"): "y"}
    arena = deterministic_arena(("q0", "q1", "q2"), "q0", ("a1", "a2"), ("b",), moves, ("n", "x", "y"), col)
    delta = {}
    for c in ("n", "x", "y"):
        delta[("wx", c)] = "wy" if c == "x" else "wx"
        delta[("wy", c)] = "hit" if c == "y" else "wy"
        delta[("hit", c)] = "wy" if c == "x" else "wx"
    mon = ColorMonitor(("wx", "wy", "hit"), "wx", ("n", "x", "y"), delta, {"wx": 1, "wy": 1, "hit": 2})
    return arena, mon


def test_refutation_is_bounded_by_memory():
    arena, mon = _alternation_game()
    assert refute_winning_up_to_memory(arena, mon, "A", 1)
    assert not refute_winning_up_to_memory(arena, mon, "A", 2)


def test_refutation_errors():
    arena, mon = _alternation_game()
    with pytest.raises(ValueError):
        refute_winning_up_to_memory(arena, None, "A", 1)
    with pytest.raises(ArenaError, match="does not read"):
        refute_winning_up_to_memory(arena, catalog.seen_y(), "A", 1)
    with pytest.raises(CapExceeded):
        refute_winning_up_to_memory(arena, mon, "B", 3, cap=0)
