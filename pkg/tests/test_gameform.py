import json
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from conftest import rng_for, seeds
from cgdli.gameform import (
    I3,
    I4,
    I5,
    MATCHING_PENNIES,
    GameForm,
    Internal,
    Leaf,
    ValidationError,
    deduplicate,
    find_similar_tree,
    form_from_json,
    form_to_json,
    is_determined,
    is_determined_for,
    sim_check,
    sim_w_replay,
    tree_from_obj,
    tree_strategies,
    tree_to_gameform,
    tree_to_obj,
    two_step_tree,
    undetermined_valuation,
    winning_strategies,
)
from cgdli.generate import _shuffle_dup, random_form, random_form_pair, random_tree
from cgdli.oracles import determined_by_quantifiers


def test_matching_pennies_witness():
    assert not is_determined(MATCHING_PENNIES)
    assert undetermined_valuation(MATCHING_PENNIES) == frozenset({"x"})
    assert winning_strategies(MATCHING_PENNIES, {"x"}, "A") == ()
    assert winning_strategies(MATCHING_PENNIES, {"x"}, "B") == ()


def test_named_forms():
    assert is_determined(I3)
    assert is_determined(I4)
    assert not is_determined(I5)
    # A wins I5 only when every outcome is winning; never against a single z
    assert is_determined_for(I5, {"z"}) is None
    # in I3, b2 keeps z away
    assert winning_strategies(I3, {"z"}, "B") == ("b2",)


def test_i4_better_response_never_reaches_equilibrium():
    # x = 1, y = 0, z = 1/2; A maximizes, B minimizes
    pay = {"x": 2, "y": 0, "z": 1}
    t = I4.table
    n = len(t)
    profiles = list(product(range(n), range(n)))

    def improvements(p):
        i, j = p
        out = [(k, j) for k in range(n) if pay[t[k][j]] > pay[t[i][j]]]
        return out + [(i, k) for k in range(n) if pay[t[i][k]] < pay[t[i][j]]]

    equilibria = [p for p in profiles if not improvements(p)]
    assert equilibria == [(0, 0)]
    for start in profiles:
        if start == (0, 0):
            continue
        seen, todo = {start}, [start]
        while todo:
            for nxt in improvements(todo.pop()):
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        assert (0, 0) not in seen


def test_i4_and_i3_tree_search():
    # bounded search only: evidence of non-similarity, not a proof
    assert find_similar_tree(I4, "offer", max_depth=3, max_leaves=6) is None
    assert find_similar_tree(I3, "d", max_depth=3, max_leaves=6) is None
    tree = find_similar_tree(I3, "offer", max_depth=3, max_leaves=6)
    assert tree is not None
    assert sim_check(I3, tree_to_gameform(tree), "offer")


def test_single_outcome_tree():
    f = GameForm.from_table([["x", "x"]])
    assert find_similar_tree(f, "d") == Internal("A", (Leaf("x"),))


@pytest.mark.parametrize(
    "table, message",
    [
        ([], "at least one row"),
        ([["x"], ["x", "y"]], "has 2 entries"),
    ],
)
def test_invalid_forms(table, message):
    with pytest.raises(ValidationError, match=message):
        GameForm.from_table(table)


def test_declared_outcomes_must_match():
    with pytest.raises(ValidationError, match="never used"):
        GameForm(("a",), ("b",), ("x", "y"), (("x",),))
    with pytest.raises(ValidationError, match="undeclared"):
        GameForm(("a",), ("b",), ("x",), (("y",),))


def test_unknown_valuation_outcome():
    with pytest.raises(ValidationError):
        is_determined_for(MATCHING_PENNIES, {"w"})


def test_json_round_trip_keeps_outcome_order():
    f = GameForm(("r", "s"), ("c",), ("y", "x"), (("x",), ("y",)))
    g = form_from_json(form_to_json(f))
    assert g == f
    assert form_from_json(json.dumps({"table": [["x"], ["y"]], "outcomes": ["y", "x"]})).outcomes == ("y", "x")


def test_tree_json_round_trip():
    t = Internal("A", (Leaf("x"), Internal("B", (Leaf("y"), Leaf("z")))))
    assert tree_from_obj(json.loads(json.dumps(tree_to_obj(t)))) == t
    with pytest.raises(ValidationError):
        tree_from_obj({"owner": "A"})


def test_tree_modes_differ_in_size():
    # A chooses, then B chooses in either subtree
    t = Internal("A", (Internal("B", (Leaf("x"), Leaf("y"))), Internal("B", (Leaf("y"), Leaf("z")))))
    assert len(tree_strategies(t, "A", "minimalist")) == 2
    assert len(tree_strategies(t, "B", "complete")) == 4
    # B's minimalist strategies fix a choice at every reachable B node
    assert len(tree_strategies(t, "B", "minimalist")) == 4
    t2 = Internal("A", (Leaf("x"), Internal("A", (Leaf("y"), Leaf("z")))))
    assert len(tree_strategies(t2, "A", "minimalist")) == 3
    assert len(tree_strategies(t2, "A", "complete")) == 4


def test_dedup_removes_copies():
    f = GameForm.from_table([["x", "x", "y"], ["x", "x", "y"]])
    assert deduplicate(f) == [("x", "y")]


@given(seeds)
def test_determinacy_matches_quantifier_oracle(seed):
    f = random_form(rng_for(seed))
    assert is_determined(f) == determined_by_quantifiers(f)


@given(seeds, st.sampled_from(["minimalist", "complete"]))
def test_trees_are_determined(seed, mode):
    rng = rng_for(seed)
    tree = random_tree(rng, rng.randint(1, 3), ["x", "y", "z"], max_branch=2)
    assert is_determined(tree_to_gameform(tree, mode))


@given(seeds)
def test_similarity_chain(seed):
    f, g = random_form_pair(rng_for(seed))
    d, offer, w = (sim_check(f, g, r) for r in ("d", "offer", "w"))
    assert not d or offer
    assert not offer or w
    assert w == sim_w_replay(f, g)


@given(seeds)
def test_similarity_is_symmetric(seed):
    f, g = random_form_pair(rng_for(seed))
    for rel in ("d", "offer", "w"):
        assert sim_check(f, g, rel) == sim_check(g, f, rel)


@given(seeds)
def test_duplication_preserves_d(seed):
    rng = rng_for(seed)
    f = random_form(rng, 3, 3, 3)
    assert sim_check(f, _shuffle_dup(rng, f), "d")


@given(seeds)
def test_minimalist_d_similar_to_complete(seed):
    rng = rng_for(seed)
    tree = random_tree(rng, rng.randint(1, 3), ["x", "y"], max_branch=2)
    assert sim_check(tree_to_gameform(tree, "minimalist"), tree_to_gameform(tree, "complete"), "d")


@given(seeds, st.sampled_from("AB"))
def test_determined_iff_w_similar_to_two_step_tree(seed, first):
    f = random_form(rng_for(seed))
    t = tree_to_gameform(two_step_tree(f, first))
    assert sim_check(f, t, "w") == is_determined(f)


@settings(max_examples=25)
@given(seeds)
def test_found_tree_is_similar(seed):
    rng = rng_for(seed)
    tree = random_tree(rng, 2, ["x", "y", "z"], max_branch=2)
    f = tree_to_gameform(tree)
    found = find_similar_tree(f, "offer", max_depth=2, max_leaves=4)
    assert found is not None
    assert sim_check(f, tree_to_gameform(found), "offer")


def test_tree_search_cap():
    with pytest.raises(OverflowError):
        find_similar_tree(I5, "offer", max_depth=3, max_leaves=8, cap=50)


@given(seeds, st.integers(0, 15))
def test_players_never_both_win(seed, mask):
    f = random_form(rng_for(seed))
    val = {o for k, o in enumerate(f.outcomes) if mask >> k & 1}
    assert not (winning_strategies(f, val, "A") and winning_strategies(f, val, "B"))


@given(seeds, st.integers(0, 15))
def test_winner_matches_zero_one_scan(seed, mask):
    f = random_form(rng_for(seed))
    val = {o for k, o in enumerate(f.outcomes) if mask >> k & 1}
    bits = [[int(o in val) for o in row] for row in f.table]
    a_row = any(all(row) for row in bits)
    b_col = any(not any(row[j] for row in bits) for j in range(len(f.cols)))
    expected = "A" if a_row else "B" if b_col else None
    assert is_determined_for(f, val) == expected


@given(seeds)
def test_determinacy_invariant_under_permutation_and_duplication(seed):
    rng = rng_for(seed)
    f = random_form(rng)
    assert is_determined(_shuffle_dup(rng, f)) == is_determined(f)
