import json
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import rng_for, seeds
from cgdli import catalog
from cgdli.arena import (
    ArenaError,
    ConcurrentArena,
    NotLocallyDetermined,
    arena_from_dict,
    arena_from_json,
    arena_to_dict,
    arena_to_json,
    classify,
    local_interaction,
    owner,
    require_locally_determined,
    undetermined_witness,
    validate,
)
from cgdli.gameform import is_determined
from cgdli.generate import random_det_arena, random_stochastic_arena


def test_catalog_arenas_are_valid():
    for build in (
        catalog.avoid_y_turn_based,
        catalog.retry_with_nature,
        catalog.matching_pennies_arena,
        catalog.hide_or_run,
        catalog.avoid_z_three_rows,
        catalog.mismatch_loop,
    ):
        assert validate(build()) == []


def test_classification():
    tb = classify(catalog.avoid_y_turn_based())
    assert tb.deterministic and tb.turn_based and tb.locally_determined
    retry = classify(catalog.retry_with_nature())
    assert not retry.deterministic and retry.turn_based
    mp = classify(catalog.matching_pennies_arena())
    assert mp.deterministic and not mp.turn_based and not mp.locally_determined
    three = classify(catalog.avoid_z_three_rows())
    assert three.locally_determined and not three.turn_based


def test_owner():
    a = catalog.avoid_y_turn_based()
    assert owner(a, "q0") == "A"
    assert owner(a, "q1") == "B"
    assert owner(catalog.matching_pennies_arena(), "q0") is None


def test_not_locally_determined_names_state():
    with pytest.raises(NotLocallyDetermined, match="state q0"):
        require_locally_determined(catalog.matching_pennies_arena())
    assert undetermined_witness(catalog.matching_pennies_arena(), "q0") is not None


def test_local_interaction_outcomes_are_nature_states():
    f = local_interaction(catalog.retry_with_nature(), "q0")
    assert f.table == (("d1", "d2"), ("d1", "d2"))
    with pytest.raises(ArenaError):
        local_interaction(catalog.retry_with_nature(), "nowhere")


def _broken():
    return ConcurrentArena(
        states=("q",),
        q0="p",
        actions_a=("a",),
        actions_b=("b", "b"),
        nature=("d",),
        delta={},
        dist={"d": {"q": Fraction(1, 2)}},
        colors=("c",),
        col={("q", "r"): "k"},
    )


def test_validate_reports_each_problem():
    problems = validate(_broken())
    text = "\n".join(problems)
    assert "initial state 'p' unknown" in text
    assert "duplicate B action names" in text
    assert "delta undefined at (q,a,b)" in text
    assert "nature state d: distribution" in text
    assert "col(q,r) references unknown states" in text
    assert "'k' is not a color" in text


def test_from_dict_rejects_missing_field():
    with pytest.raises(ArenaError, match="missing field"):
        arena_from_dict({"states": ["q"]})


def test_from_dict_rejects_bad_key():
    doc = arena_to_dict(catalog.avoid_y_turn_based())
    doc["delta"]["q0,a1"] = doc["delta"].pop("q0,a1,b1")
    with pytest.raises(ArenaError, match="comma-separated"):
        arena_from_dict(doc)


def test_deterministic_shorthand():
    doc = {
        "states": ["q0", "q1"],
        "q0": "q0",
        "actions_A": ["a"],
        "actions_B": ["b"],
        "colors": ["x", "y"],
        "delta": {"q0,a,b": "q1", "q1,a,b": "q1"},
        "col": {"q1,q1": "y"},
    }
    a = arena_from_dict(doc)
    assert a.target("q0", "a", "b") == "q1"
    assert a.color("q1", "q1") == "y"
    assert a.color("q0", "q1") == "x"


def test_probabilities_round_trip_exactly():
    a = catalog.retry_with_nature(Fraction(1, 7))
    doc = json.loads(arena_to_json(a))
    assert doc["dist"]["d3"] == {"q1": "1/7", "q2": "6/7"}
    b = arena_from_json(json.dumps(doc))
    assert b.dist["d3"] == {"q1": Fraction(1, 7), "q2": Fraction(6, 7)}


@given(seeds)
def test_json_round_trip(seed):
    a, _ = random_stochastic_arena(rng_for(seed), locally_determined=False)
    b = arena_from_json(arena_to_json(a))
    assert arena_to_dict(b, dense_col=True) == arena_to_dict(a, dense_col=True)


@given(seeds)
def test_generated_arenas_are_locally_determined(seed):
    a, _ = random_det_arena(rng_for(seed))
    assert validate(a) == []
    c = classify(a)
    assert c.deterministic and c.locally_determined
    assert all(is_determined(local_interaction(a, q)) for q in a.states)


@given(seeds)
def test_turn_based_implies_locally_determined(seed):
    a, _ = random_det_arena(rng_for(seed), locally_determined=False)
    c = classify(a)
    assert not c.turn_based or c.locally_determined
