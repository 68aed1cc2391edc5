import json

import pytest
from hypothesis import given

from conftest import rng_for, seeds
from cgdli import catalog
from cgdli.arena import ArenaError, NotLocallyDetermined
from cgdli.generate import random_color_strategy, random_det_arena, random_skeleton
from cgdli.strategy import (
    FiniteStrategy,
    MemorySkeleton,
    par_skeleton,
    par_strategy,
    positional,
    rech,
    run_skeleton,
    same_color_strategy,
    seq_skeleton,
    seq_strategy,
    strategy_from_dict,
    strategy_to_json,
)
from cgdli.transform import KC, extend_rho_kc, sequentialize


def _doubled(s: FiniteStrategy, rng) -> FiniteStrategy:
    """Another encoding of the same color strategy: every memory state gets
    two copies and updates jump to a random copy."""
    sk = s.skeleton
    mem = tuple(f"{m}.{i}" for m in sk.memory for i in (0, 1))
    mu = {
        (f"{m}.{i}", c): f"{sk.mu[(m, c)]}.{rng.randint(0, 1)}"
        for m in sk.memory
        for i in (0, 1)
        for c in sk.colors
    }
    lam = {(f"{m}.{i}", q): a for (m, q), a in s.lam.items() for i in (0, 1)}
    return FiniteStrategy(s.player, MemorySkeleton(mem, f"{sk.m_init}.0", sk.colors, mu), lam, s.default)


def _play(arena, s_a, s_b, steps):
    q, ma, mb = arena.q0, s_a.skeleton.m_init, s_b.skeleton.m_init
    colors = []
    for _ in range(steps):
        q2 = arena.target(q, s_a.action(ma, q), s_b.action(mb, q))
        c = arena.color(q, q2)
        colors.append(c)
        ma, mb, q = s_a.skeleton.update(ma, c), s_b.skeleton.update(mb, c), q2
    return colors


def test_skeleton_validation():
    with pytest.raises(ArenaError, match="non-empty"):
        MemorySkeleton((), "m", ("x",), {})
    with pytest.raises(ArenaError, match="undefined"):
        MemorySkeleton(("m",), "m", ("x",), {})
    with pytest.raises(ArenaError, match="unknown"):
        MemorySkeleton(("m",), "m", ("x",), {("m", "x"): "n"})


@given(seeds)
def test_par_undoes_seq(seed):
    sk = random_skeleton(rng_for(seed), ("x", "y", "z"))
    back = par_skeleton(seq_skeleton(sk, KC), KC)
    assert back.table() == sk.table()
    assert back.memory == sk.memory and back.m_init == sk.m_init


@given(seeds)
def test_seq_skeleton_ignores_kc(seed):
    rng = rng_for(seed)
    sk = random_skeleton(rng, ("x", "y"))
    word = [rng.choice("xy") for _ in range(rng.randint(0, 8))]
    assert run_skeleton(seq_skeleton(sk, KC), extend_rho_kc(word)) == run_skeleton(sk, word)


@given(seeds)
def test_transfer_keeps_memory_size(seed):
    rng = rng_for(seed)
    arena, _ = random_det_arena(rng)
    seq = sequentialize(arena)
    for player in "AB":
        s = random_color_strategy(rng, arena, player)
        t = seq_strategy(s, seq)
        assert len(t.skeleton.memory) == len(s.skeleton.memory)
        sigma = random_color_strategy(rng, seq.arena, player)
        assert len(par_strategy(sigma, seq).skeleton.memory) == len(sigma.skeleton.memory)


@given(seeds)
def test_seq_strategies_replay_the_concurrent_play(seed):
    rng = rng_for(seed)
    arena, _ = random_det_arena(rng, locally_determined=False)
    seq = sequentialize(arena)
    s_a = random_color_strategy(rng, arena, "A")
    s_b = random_color_strategy(rng, arena, "B")
    in_c = _play(arena, s_a, s_b, 10)
    in_seq = _play(seq.arena, seq_strategy(s_a, seq), seq_strategy(s_b, seq), 20)
    assert in_seq == extend_rho_kc(in_c)


@given(seeds)
def test_par_b_stays_inside_reachable_set(seed):
    rng = rng_for(seed)
    arena, _ = random_det_arena(rng)
    seq = sequentialize(arena)
    sigma = random_color_strategy(rng, seq.arena, "B")
    s = par_strategy(sigma, seq)
    for m in s.skeleton.memory:
        for q in arena.states:
            allowed = set(rech(sigma, seq, m, q).values())
            reached = {arena.delta[(q, a, s.action(m, q))] for a in arena.actions_a}
            assert reached <= allowed


@given(seeds)
def test_transfer_does_not_depend_on_encoding(seed):
    rng = rng_for(seed)
    arena, _ = random_det_arena(rng)
    seq = sequentialize(arena)
    for player in "AB":
        s = random_color_strategy(rng, arena, player)
        assert same_color_strategy(s, _doubled(s, rng), arena.states)
        assert same_color_strategy(seq_strategy(s, seq), seq_strategy(_doubled(s, rng), seq), seq.arena.states)
        sigma = random_color_strategy(rng, seq.arena, player)
        assert same_color_strategy(
            par_strategy(sigma, seq), par_strategy(_doubled(sigma, rng), seq), arena.states
        )


def test_same_color_strategy_detects_difference():
    arena = catalog.avoid_y_turn_based()
    s1 = positional("A", arena, {"q0": "a1"})
    s2 = positional("A", arena, {"q0": "a2"})
    assert not same_color_strategy(s1, s2, arena.states)
    assert same_color_strategy(s1, s1, arena.states)


def test_par_b_needs_local_determinacy():
    seq = sequentialize(catalog.matching_pennies_arena())
    sigma = positional("B", seq.arena, {})
    with pytest.raises(NotLocallyDetermined):
        par_strategy(sigma, seq)


def test_json_round_trip():
    arena = catalog.avoid_y_turn_based()
    s = positional("B", arena, {"q1": "b2"})
    doc = json.loads(strategy_to_json(s))
    assert doc["lambda"] == {"0,q1": "b2"}
    t = strategy_from_dict(doc, arena)
    assert same_color_strategy(s, t, arena.states)


@pytest.mark.parametrize(
    "patch, message",
    [
        ({"player": "C"}, "unknown player"),
        ({"lambda": {"0,q1": "zz"}}, "unknown to player"),
        ({"mu": {}}, "undefined"),
    ],
)
def test_json_rejects(patch, message):
    arena = catalog.avoid_y_turn_based()
    doc = json.loads(strategy_to_json(positional("B", arena, {"q1": "b2"})))
    doc.update(patch)
    with pytest.raises(ArenaError, match=message):
        strategy_from_dict(doc, arena)
