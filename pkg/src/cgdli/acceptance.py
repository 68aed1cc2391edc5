"""The ten acceptance checks, shared by the test suite and ``cgdli repro``.

Every check is seeded and returns a :class:`CriterionResult`; none of them
raises on a failed comparison.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

from .catalog import mismatch_loop, retry_with_nature, seen_y
from .gadgets import (
    build_open_counterexample,
    build_two_tail_gadget,
    parse_lasso,
    refute_winning_up_to_memory,
)
from .gameform import (
    I5,
    MATCHING_PENNIES,
    is_determined,
    sim_check,
    tree_to_gameform,
)
from .generate import (
    random_acyclic_edges,
    random_color_strategy,
    random_det_arena,
    random_form,
    random_form_pair,
    random_nfa,
    random_skeleton,
    random_stochastic_arena,
    random_tree,
)
from .nash import PriorityPartition, Preference, find_positional_ne, verify_ne
from .oracles import deviation_classes, determined_by_quantifiers, nfa_member, positional_winner, projection_member
from .semantics import (
    bruteforce_value,
    certify_winning,
    matched_pair_a,
    matched_pair_b,
    random_state_strategy,
    seq_prob_equal,
)
from .solve import solve_concurrent, zielonka
from .strategy import par_skeleton, run_skeleton, seq_skeleton
from .transform import (
    KC,
    extend_rho_kc,
    monitor_product,
    nfa_lift,
    nfa_project,
    project_colors,
    seq_objective,
    sequentialize,
)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    @property
    def in_time(self) -> bool:
        return self.seconds < self.limit

    @property
    def ok(self) -> bool:
        return self.passed and self.in_time

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return (
            f"[{verdict}] {self.number:>2} {self.title}: {self.detail} "
            f"({self.seconds:.2f}s, limit {self.limit:g}s)"
        )


def _timed(number: int, title: str, limit: float, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    start = time.perf_counter()
    passed, detail = body()
    return CriterionResult(number, title, passed, detail, time.perf_counter() - start, limit)


def _words(alphabet: tuple[str, ...], max_len: int):
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)


# ---------------------------------------------------------------------------


def criterion_1(seed: int = 0) -> CriterionResult:
    def body() -> tuple[bool, str]:
        rng = random.Random(seed)
        if is_determined(MATCHING_PENNIES) or is_determined(I5):
            return False, "a named non-determined form was classified as determined"
        for k in range(200):
            tree = random_tree(rng, rng.randint(1, 3), ("x", "y", "z", "w"), max_branch=2)
            for mode in ("minimalist", "complete"):
                form = tree_to_gameform(tree, mode)
                if not is_determined(form):
                    return False, f"tree #{k} ({mode}) translated to a non-determined form"
        determined = 0
        for k in range(1000):
            form = random_form(rng, 4, 4, 4)
            fast = is_determined(form)
            if fast != determined_by_quantifiers(form):
                return False, f"random form #{k} disagrees with the quantifier oracle"
            determined += fast
        return True, f"named forms ok, 400 tree translations determined, 1000/1000 agree ({determined} determined)"

    return _timed(1, "game-form classification", 10, body)


def criterion_2(seed: int = 0) -> CriterionResult:
    def body() -> tuple[bool, str]:
        rng = random.Random(seed)
        counts = [0, 0, 0]
        for k in range(500):
            f, g = random_form_pair(rng, 3)
            d, o, w = (sim_check(f, g, r) for r in ("d", "offer", "w"))
            if (d and not o) or (o and not w):
                return False, f"pair #{k}: d={d} offer={o} w={w}"
            counts[0] += d
            counts[1] += o
            counts[2] += w
        for k in range(100):
            tree = random_tree(rng, rng.randint(1, 3), ("x", "y", "z"), max_branch=2)
            if not sim_check(tree_to_gameform(tree, "minimalist"), tree_to_gameform(tree, "complete"), "d"):
                return False, f"tree #{k}: translations not d-similar"
        return True, f"500 pairs (d={counts[0]}, offer={counts[1]}, w={counts[2]}), 100 trees d-similar"

    return _timed(2, "similarity chain", 10, body)


def criterion_3(seed: int = 0) -> CriterionResult:
    def body() -> tuple[bool, str]:
        game, obj = monitor_product(retry_with_nature(Fraction(1, 2)), seen_y())
        report = bruteforce_value(game, obj)
        ok = report.equal and report.maximin == Fraction(2, 3)
        return ok, f"maximin={report.maximin} minimax={report.minimax}"

    return _timed(3, "retry arena value", 5, body)


def criterion_4(seed: int = 0, count: int = 200) -> CriterionResult:
    def body() -> tuple[bool, str]:
        wins = {"A": 0, "B": 0}
        for k in range(count):
            rng = random.Random(f"{seed}/det/{k}")
            arena, obj = random_det_arena(rng, 4, 3, 3, 3)
            sol = solve_concurrent(arena, obj)
            brute = positional_winner(arena, obj)
            if sol.winner != brute:
                return False, f"instance {k}: pipeline says {sol.winner}, brute force {brute}"
            if not certify_winning(arena, sol.strategy, obj):
                return False, f"instance {k}: transferred strategy not certified"
            wins[sol.winner] += 1
        return True, f"{count}/{count} agree and certify (A wins {wins['A']}, B wins {wins['B']})"

    return _timed(4, "determinacy transfer", 120, body)


def criterion_5(seed: int = 0, count: int = 50) -> CriterionResult:
    def body() -> tuple[bool, str]:
        values = set()
        for k in range(count):
            rng = random.Random(f"{seed}/stoch/{k}")
            arena, obj = random_stochastic_arena(rng, 3, 2, 2, 3)
            direct = bruteforce_value(arena, obj)
            if not direct.equal:
                return False, f"instance {k}: maximin {direct.maximin} != minimax {direct.minimax}"
            seq = sequentialize(arena)
            via = bruteforce_value(seq.arena, seq_objective(obj, seq.kc))
            if not via.equal or via.value != direct.value:
                return False, f"instance {k}: C gives {direct.value}, Seq(C) gives {via.maximin}/{via.minimax}"
            values.add(direct.value)
        shown = ", ".join(sorted(str(v) for v in values))
        return True, f"{count}/{count} equal on C and Seq(C); values seen: {shown}"

    return _timed(5, "stochastic positional determinacy", 300, body)


def criterion_6(seed: int = 0) -> CriterionResult:
    def body() -> tuple[bool, str]:
        rng = random.Random(seed)
        palette = ("c0", "c1", "c2", "c3")
        for k in range(1000):
            colors = palette[: rng.randint(1, 4)]
            sk = random_skeleton(rng, colors, 4)
            if par_skeleton(seq_skeleton(sk, KC), KC).table() != sk.table():
                return False, f"skeleton #{k}: Par(Seq(mu)) differs from mu"
        for k in range(10000):
            colors = palette[: rng.randint(1, 4)]
            if k % 2 == 0:
                sk = random_skeleton(rng, colors, 4)
                word = [rng.choice(colors + (KC,)) for _ in range(rng.randint(0, 12))]
                if run_skeleton(seq_skeleton(sk, KC), word) != run_skeleton(sk, project_colors(word)):
                    return False, f"word #{k}: Seq run differs from run on the projection"
            else:
                sk = random_skeleton(rng, (KC,) + colors, 4)
                word = [rng.choice(colors) for _ in range(rng.randint(0, 12))]
                if run_skeleton(par_skeleton(sk, KC), word) != run_skeleton(sk, extend_rho_kc(word)):
                    return False, f"word #{k}: Par run differs from run on the kC-interleaved word"
        return True, "1000 skeletons and 10000 words agree"

    return _timed(6, "strategy-operator algebra", 10, body)


def criterion_7(seed: int = 0) -> CriterionResult:
    def body() -> tuple[bool, str]:
        rng = random.Random(seed)
        base = ("x", "y")
        ext = base + (KC,)
        short = list(_words(base, 6))
        long = list(_words(ext, 6))
        for k in range(200):
            n = random_nfa(rng, ext, 5)
            proj = nfa_project(n)
            for w in short:
                if proj.accepts(w) != projection_member(n, w):
                    return False, f"nfa #{k}: projection differs on {' '.join(w) or 'empty word'}"
            m = random_nfa(rng, base, 5)
            lifted = nfa_lift(m)
            for w in long:
                if lifted.accepts(w) != nfa_member(m, project_colors(w)):
                    return False, f"nfa #{k}: lift differs on {' '.join(w) or 'empty word'}"
            round_trip = nfa_project(lifted)
            for w in short:
                if round_trip.accepts(w) != nfa_member(m, w):
                    return False, f"nfa #{k}: proj of lift differs on {' '.join(w) or 'empty word'}"
        return True, f"200 automata, {len(short)} and {len(long)} words each"

    return _timed(7, "projection languages", 30, body)


def criterion_8(seed: int = 0, count: int = 20, horizon: int = 6) -> CriterionResult:
    def body() -> tuple[bool, str]:
        checked = 0
        for k in range(count):
            rng = random.Random(f"{seed}/cyl/{k}")
            arena, _ = random_stochastic_arena(rng, 3, 2, 2, 2, locally_determined=False)
            seq = sequentialize(arena)
            s_a = random_color_strategy(rng, arena, "A", 2)
            s_b = random_color_strategy(rng, arena, "B", 2)
            pairs = (
                ("A", matched_pair_a(seq, s_a, random_state_strategy(arena.actions_b, rng.randrange(10**6)))),
                ("B", matched_pair_b(seq, s_b, random_state_strategy(arena.actions_a, rng.randrange(10**6)))),
            )
            for who, pair in pairs:
                res = seq_prob_equal(seq, horizon, pair)
                checked += res.paths_checked
                if not res.equal:
                    path, p_c, p_seq = res.mismatch  # type: ignore[misc]
                    return False, f"arena {k}, color strategy of {who}: path {path} has {p_c} vs {p_seq}"
        return True, f"{count} arenas, both constructions, {checked} cylinders equal"

    return _timed(8, "cylinder-probability transfer", 120, body)


def criterion_9(seed: int = 0, count: int = 50) -> CriterionResult:
    def body() -> tuple[bool, str]:
        sources: dict[str, int] = {}
        for k in range(count):
            rng = random.Random(f"{seed}/nash/{k}")
            arena, obj = random_det_arena(rng, 4, 3, 3, 3)
            n = obj.max
            part = PriorityPartition(n, obj)
            prefs = {
                "A": Preference("A", random_acyclic_edges(rng, n)),
                "B": Preference("B", random_acyclic_edges(rng, n)),
            }
            w = find_positional_ne(arena, part, prefs)
            if not verify_ne(arena, part, prefs, w.s_a, w.s_b):
                return False, f"instance {k}: witness not certified"
            # independent deviation check over positional strategies
            prof_a = {q: w.s_a.action(w.s_a.skeleton.m_init, q) for q in arena.states}
            prof_b = {q: w.s_b.action(w.s_b.skeleton.m_init, q) for q in arena.states}
            for player, fixed_player, fixed in (("A", "B", prof_b), ("B", "A", prof_a)):
                reach = deviation_classes(arena, obj, fixed_player, fixed)
                if any(prefs[player].prefers(c, w.outcome_class) for c in reach):  # type: ignore[index]
                    return False, f"instance {k}: {player} has a profitable deviation"
            sources[w.source] = sources.get(w.source, 0) + 1
        shown = ", ".join(f"{s}={c}" for s, c in sorted(sources.items()))
        return True, f"{count}/{count} witnesses certified ({shown})"

    return _timed(9, "positional Nash equilibria", 300, body)


def _seq_determined(arena, monitor) -> str:
    game, obj = monitor_product(arena, monitor)
    seq = sequentialize(game)
    seq_obj = seq_objective(obj, seq.kc)
    result = zielonka(seq.arena, seq_obj)
    winner = result.winner[seq.arena.q0]
    if not certify_winning(seq.arena, result.strategies[winner], seq_obj):
        raise AssertionError("Zielonka strategy on the sequentialized gadget not certified")
    return winner


def criterion_10(seed: int = 0, max_mem: int = 3) -> CriterionResult:
    def body() -> tuple[bool, str]:
        instances = {
            "two-tail matching pennies": build_two_tail_gadget(
                MATCHING_PENNIES, parse_lasso("y"), parse_lasso("x")
            ),
            "open counterexample": build_open_counterexample(mismatch_loop(), "q"),
        }
        notes = []
        for name, (arena, monitor) in instances.items():
            for player in ("A", "B"):
                for k in range(1, max_mem + 1):
                    if not refute_winning_up_to_memory(arena, monitor, player, k):
                        return False, f"{name}: {player} wins with {k} memory states"
            notes.append(f"{name}: Seq winner {_seq_determined(arena, monitor)}")
        return True, f"no winner up to memory {max_mem}; " + "; ".join(notes)

    return _timed(10, "gadget non-determinacy", 120, body)


CRITERIA: tuple[Callable[..., CriterionResult], ...] = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
)


def run_all(seed: int = 0) -> list[CriterionResult]:
    return [c(seed) for c in CRITERIA]
