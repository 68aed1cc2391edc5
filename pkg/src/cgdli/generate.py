"""Seeded random instances. Each generator takes a ``random.Random`` so a
(seed, generator, parameters) triple always yields the same instance."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .arena import ConcurrentArena, deterministic_arena
from .gameform import GameForm, Internal, Leaf, Node, is_determined
from .strategy import FiniteStrategy, MemorySkeleton
from .transform import ColorNFA, ParityObjective


def random_form(
    rng: random.Random, max_rows: int = 4, max_cols: int = 4, max_outcomes: int = 4
) -> GameForm:
    rows = rng.randint(1, max_rows)
    cols = rng.randint(1, max_cols)
    k = rng.randint(1, max_outcomes)
    symbols = [chr(ord("u") + i) for i in range(k)]
    return GameForm.from_table([[rng.choice(symbols) for _ in range(cols)] for _ in range(rows)])


def random_tree(
    rng: random.Random, depth: int, outcomes: Sequence[str], max_branch: int = 3
) -> Node:
    """A tree of depth between 1 and ``depth`` with a random owner per node."""

    def grow(d: int, root: bool) -> Node:
        if d == 0 or (not root and rng.random() < 0.3):
            return Leaf(rng.choice(outcomes))
        kids = tuple(grow(d - 1, False) for _ in range(rng.randint(1, max_branch)))
        return Internal(rng.choice("AB"), kids)

    return grow(depth, True)


def _shuffle_dup(rng: random.Random, form: GameForm) -> GameForm:
    rows = list(range(len(form.rows)))
    rows += [rng.choice(rows) for _ in range(rng.randint(0, 1))]
    rng.shuffle(rows)
    cols = list(range(len(form.cols)))
    cols += [rng.choice(cols) for _ in range(rng.randint(0, 1))]
    rng.shuffle(cols)
    return GameForm.from_table([[form.table[i][j] for j in cols] for i in rows])


def random_form_pair(rng: random.Random, max_size: int = 3) -> tuple[GameForm, GameForm]:
    """Two forms over the same outcomes; often related by permutation and
    duplication so that the similarity relations are exercised both ways."""
    f = random_form(rng, max_size, max_size, 3)
    mode = rng.random()
    if mode < 0.35:
        g = _shuffle_dup(rng, f)
        if len(g.rows) > max_size or len(g.cols) > max_size:
            g = GameForm.from_table([list(r) for r in reversed(f.table)])
        return f, g
    outcomes = list(f.outcomes)
    while True:
        rows, cols = rng.randint(1, max_size), rng.randint(1, max_size)
        if rows * cols < len(outcomes):
            continue
        table = [[rng.choice(outcomes) for _ in range(cols)] for _ in range(rows)]
        if {o for r in table for o in r} == set(outcomes):
            return f, GameForm.from_table(table)


def random_determined_table(
    rng: random.Random, n_rows: int, n_cols: int, symbols: Sequence[str], tries: int = 40
) -> list[list[str]]:
    """Determined outcome table: a concurrent one by rejection sampling when
    possible, otherwise one where a single player's choice matters."""
    style = rng.random()
    if style < 0.25:
        return [[rng.choice(symbols)] * n_cols for _ in range(n_rows)]
    if style < 0.5:
        col = [rng.choice(symbols) for _ in range(n_cols)]
        return [list(col) for _ in range(n_rows)]
    for _ in range(tries):
        table = [[rng.choice(symbols) for _ in range(n_cols)] for _ in range(n_rows)]
        if is_determined(GameForm.from_table(table)):
            return table
    return [[rng.choice(symbols)] * n_cols for _ in range(n_rows)]


def _names(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i + 1}" for i in range(n))


def random_det_arena(
    rng: random.Random,
    max_states: int = 4,
    max_a: int = 3,
    max_b: int = 3,
    max_priority: int = 3,
    locally_determined: bool = True,
) -> tuple[ConcurrentArena, ParityObjective]:
    n = rng.randint(1, max_states)
    states = tuple(f"q{i}" for i in range(n))
    acts_a, acts_b = _names("a", rng.randint(1, max_a)), _names("b", rng.randint(1, max_b))
    moves = {}
    for q in states:
        symbols = rng.sample(states, rng.randint(1, n))
        if locally_determined:
            table = random_determined_table(rng, len(acts_a), len(acts_b), symbols)
        else:
            table = [[rng.choice(symbols) for _ in acts_b] for _ in acts_a]
        for i, a in enumerate(acts_a):
            for j, b in enumerate(acts_b):
                moves[(q, a, b)] = table[i][j]
    top = rng.randint(0, max_priority)
    colors = tuple(f"c{k}" for k in range(top + 1))
    col = {(q, q2): rng.choice(colors) for q in states for q2 in states}
    arena = deterministic_arena(states, "q0", acts_a, acts_b, moves, colors, col)
    return arena, ParityObjective({c: k for k, c in enumerate(colors)})


def random_dist(rng: random.Random, states: Sequence[str], denominator: int = 4) -> dict[str, Fraction]:
    support = rng.sample(list(states), min(rng.choice((1, 2, 2, 3)), len(states), denominator))
    cuts = sorted(rng.sample(range(1, denominator), len(support) - 1))
    bounds = [0] + cuts + [denominator]
    return {q: Fraction(bounds[i + 1] - bounds[i], denominator) for i, q in enumerate(support)}


def random_stochastic_arena(
    rng: random.Random,
    max_states: int = 3,
    max_a: int = 2,
    max_b: int = 2,
    max_priority: int = 3,
    locally_determined: bool = True,
) -> tuple[ConcurrentArena, ParityObjective]:
    n = rng.randint(min(2, max_states), max_states)
    states = tuple(f"q{i}" for i in range(n))
    acts_a, acts_b = _names("a", rng.randint(1, max_a)), _names("b", rng.randint(1, max_b))
    delta: dict[tuple[str, str, str], str] = {}
    dist: dict[str, dict[str, Fraction]] = {}
    nature: list[str] = []
    sinks: list[str] = []
    for q in states:
        if q != "q0" and rng.random() < 0.5:
            sinks.append(q)
            # absorbing state, so that values other than 0 and 1 occur
            sink = f"{q}.stay"
            nature.append(sink)
            dist[sink] = {q: Fraction(1)}
            for a in acts_a:
                for b in acts_b:
                    delta[(q, a, b)] = sink
            continue
        symbols = [f"{q}.d{k}" for k in range(rng.randint(1, 3))]
        if locally_determined:
            table = random_determined_table(rng, len(acts_a), len(acts_b), symbols)
        else:
            table = [[rng.choice(symbols) for _ in acts_b] for _ in acts_a]
        used = [s for s in symbols if any(s in r for r in table)]
        for s in used:
            nature.append(s)
            dist[s] = random_dist(rng, states)
        for i, a in enumerate(acts_a):
            for j, b in enumerate(acts_b):
                delta[(q, a, b)] = table[i][j]
    top = rng.randint(min(1, max_priority), max_priority)
    colors = tuple(f"c{k}" for k in range(top + 1))
    col = {(q, q2): rng.choice(colors) for q in states for q2 in states}
    flip = rng.randint(0, 1)
    for i, q in enumerate(sinks):
        # sinks alternate between won and lost for A
        col[(q, q)] = colors[(i + flip) % 2]
    arena = ConcurrentArena(states, "q0", acts_a, acts_b, tuple(nature), delta, dist, colors, col)
    return arena, ParityObjective({c: k for k, c in enumerate(colors)})


def random_skeleton(rng: random.Random, colors: Sequence[str], max_mem: int = 4) -> MemorySkeleton:
    memory = tuple(f"m{i}" for i in range(rng.randint(1, max_mem)))
    mu = {(m, c): rng.choice(memory) for m in memory for c in colors}
    return MemorySkeleton(memory, memory[0], tuple(colors), mu)


def random_color_strategy(
    rng: random.Random, arena: ConcurrentArena, player: str, max_mem: int = 2
) -> FiniteStrategy:
    sk = random_skeleton(rng, arena.colors, max_mem)
    actions = arena.actions(player)  # type: ignore[arg-type]
    lam = {(m, q): rng.choice(actions) for m in sk.memory for q in arena.states}
    return FiniteStrategy(player, sk, lam, actions[0])  # type: ignore[arg-type]


def random_nfa(
    rng: random.Random, alphabet: Sequence[str], max_states: int = 5, eps: bool = True
) -> ColorNFA:
    n = rng.randint(1, max_states)
    states = tuple(f"s{i}" for i in range(n))
    labels: list[str | None] = list(alphabet) + ([None] if eps else [])
    transitions = []
    for _ in range(rng.randint(0, 2 * n + 2)):
        transitions.append((rng.choice(states), rng.choice(labels), rng.choice(states)))
    initial = frozenset(rng.sample(states, rng.randint(1, min(2, n))))
    accepting = frozenset(rng.sample(states, rng.randint(0, n)))
    return ColorNFA(states, initial, accepting, tuple(transitions), tuple(alphabet))


def random_acyclic_edges(rng: random.Random, n: int, density: float = 0.4) -> frozenset[tuple[int, int]]:
    order = list(range(n + 1))
    rng.shuffle(order)
    edges = set()
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if rng.random() < density:
                edges.add((order[i], order[j]))
    return frozenset(edges)
