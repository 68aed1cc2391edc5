"""Brute-force reference implementations.

Each function follows a textbook definition directly and shares no
algorithmic code with the main modules, so agreement between the two is
evidence rather than tautology. All of them are exponential and meant for
small instances.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .arena import ConcurrentArena
from .gameform import GameForm
from .transform import KC, ColorNFA, ParityObjective


# ---------------------------------------------------------------------------
# Game forms


def determined_by_quantifiers(form: GameForm) -> bool:
    """For every subset V of outcomes: exists a row inside V, or exists a
    column avoiding V."""
    outs = list(form.outcomes)
    table = form.table
    for mask in range(1 << len(outs)):
        inside = {outs[k] for k in range(len(outs)) if mask >> k & 1}
        a_wins = any(all(table[i][j] in inside for j in range(len(form.cols))) for i in range(len(form.rows)))
        b_wins = any(all(table[i][j] not in inside for i in range(len(form.rows))) for j in range(len(form.cols)))
        if not (a_wins or b_wins):
            return False
    return True


# ---------------------------------------------------------------------------
# Deterministic concurrent arenas


def _succ(arena: ConcurrentArena, q: str, a: str, b: str) -> str:
    (q2,) = [s for s, p in arena.dist[arena.delta[(q, a, b)]].items() if p]
    return q2


def _reachable(arena: ConcurrentArena) -> list[str]:
    seen = [arena.q0]
    i = 0
    while i < len(seen):
        q = seen[i]
        i += 1
        for a in arena.actions_a:
            for b in arena.actions_b:
                q2 = _succ(arena, q, a, b)
                if q2 not in seen:
                    seen.append(q2)
    return seen


def _options(arena: ConcurrentArena, states: Sequence[str], player: str) -> list[list[str]]:
    out = []
    for q in states:
        by_effect: dict[tuple[str, ...], str] = {}
        if player == "A":
            for a in arena.actions_a:
                by_effect.setdefault(tuple(_succ(arena, q, a, b) for b in arena.actions_b), a)
        else:
            for b in arena.actions_b:
                by_effect.setdefault(tuple(_succ(arena, q, a, b) for a in arena.actions_a), b)
        out.append(list(by_effect.values()))
    return out


def lasso_max_priority(
    arena: ConcurrentArena, obj: ParityObjective, prof_a: Mapping[str, str], prof_b: Mapping[str, str]
) -> int:
    """Simulate the play step by step and return the top priority of its cycle."""
    trail = [arena.q0]
    while True:
        q = trail[-1]
        q2 = _succ(arena, q, prof_a[q], prof_b[q])
        if q2 in trail:
            k = trail.index(q2)
            loop = trail[k:] + [q2]
            return max(obj(arena.color(loop[i], loop[i + 1])) for i in range(len(loop) - 1))
        trail.append(q2)


def positional_winner(arena: ConcurrentArena, obj: ParityObjective) -> str | None:
    """"A" if some positional A profile beats every positional B profile,
    "B" in the symmetric case, None if neither (no positional determinacy)."""
    states = _reachable(arena)
    profs_a = [dict(zip(states, c)) for c in product(*_options(arena, states, "A"))]
    profs_b = [dict(zip(states, c)) for c in product(*_options(arena, states, "B"))]
    a_wins = any(
        all(lasso_max_priority(arena, obj, pa, pb) % 2 == 0 for pb in profs_b) for pa in profs_a
    )
    b_wins = any(
        all(lasso_max_priority(arena, obj, pa, pb) % 2 == 1 for pa in profs_a) for pb in profs_b
    )
    if a_wins and b_wins:
        raise AssertionError("both players cannot win")
    return "A" if a_wins else "B" if b_wins else None


def naive_attractor(arena: ConcurrentArena, player: str, target: set[str]) -> set[str]:
    """Least fixpoint of X = target | {q : the player has a one-step move into X}."""
    region = set(target)
    while True:
        grow = set()
        for q in arena.states:
            if q in region:
                continue
            if player == "A":
                ok = any(all(_succ(arena, q, a, b) in region for b in arena.actions_b) for a in arena.actions_a)
            else:
                ok = any(all(_succ(arena, q, a, b) in region for a in arena.actions_a) for b in arena.actions_b)
            if ok:
                grow.add(q)
        if not grow:
            return region
        region |= grow


def deviation_classes(
    arena: ConcurrentArena, obj: ParityObjective, fixed_player: str, fixed: Mapping[str, str]
) -> set[int]:
    """Outcome classes the other player reaches with some positional strategy
    while ``fixed_player`` plays the positional profile ``fixed``."""
    states = _reachable(arena)
    free = "B" if fixed_player == "A" else "A"
    full = {q: fixed.get(q, arena.actions(fixed_player)[0]) for q in arena.states}  # type: ignore[arg-type]
    classes = set()
    for combo in product(*_options(arena, states, free)):
        dev = {q: arena.actions(free)[0] for q in arena.states}  # type: ignore[arg-type]
        dev.update(zip(states, combo))
        pa, pb = (full, dev) if fixed_player == "A" else (dev, full)
        classes.add(lasso_max_priority(arena, obj, pa, pb))
    return classes


# ---------------------------------------------------------------------------
# Automata


def _eps_close(n: ColorNFA, current: set[str]) -> set[str]:
    out = set(current)
    changed = True
    while changed:
        changed = False
        for s, label, d in n.transitions:
            if label is None and s in out and d not in out:
                out.add(d)
                changed = True
    return out


def _read(n: ColorNFA, current: set[str], letter: str) -> set[str]:
    return _eps_close(n, {d for s, label, d in n.transitions if s in current and label == letter})


def nfa_member(n: ColorNFA, word: Sequence[str]) -> bool:
    current = _eps_close(n, set(n.initial))
    for letter in word:
        current = _read(n, current, letter)
    return bool(current & n.accepting)


def projection_member(n: ColorNFA, word: Sequence[str], kc: str = KC) -> bool:
    """Whether some word of L(n) becomes ``word`` once every kc is erased.

    Runs of kc longer than the number of states repeat a state and can be
    shortened, so gaps of at most |states| insertions suffice.
    """
    bound = len(n.states)

    def saturate(current: set[str]) -> set[str]:
        total = set(current)
        frontier = set(current)
        for _ in range(bound):
            frontier = _read(n, frontier, kc)
            total |= frontier
        return total

    current = saturate(_eps_close(n, set(n.initial)))
    for letter in word:
        current = saturate(_read(n, current, letter))
    return bool(current & n.accepting)


def _extendable(n: ColorNFA, current: set[str]) -> bool:
    reach = set(current)
    frontier = list(current)
    while frontier:
        s = frontier.pop()
        for src, _, dst in n.transitions:
            if src == s and dst not in reach:
                reach.add(dst)
                frontier.append(dst)
    return bool(reach & n.accepting)


def limit_contains_unrolled(n: ColorNFA, prefix: Sequence[str], cycle: Sequence[str]) -> bool:
    """Check every finite prefix of prefix.cycle^omega up to a length after
    which the reached state sets must repeat."""
    horizon = len(prefix) + len(cycle) * (2 ** len(n.states) + 1)
    current = _eps_close(n, set(n.initial))
    if not _extendable(n, current):
        return False
    for i in range(horizon):
        letter = prefix[i] if i < len(prefix) else cycle[(i - len(prefix)) % len(cycle)]
        current = _read(n, current, letter)
        if not _extendable(n, current):
            return False
    return True


# ---------------------------------------------------------------------------
# Strong reachability


def naive_strong_reach(arena: ConcurrentArena, q: str) -> dict[str, int]:
    """Round at which each state joins the strongly reachable set of q."""
    level = {q: 0}
    i = 0
    while True:
        i += 1
        region = set(level)
        joined = []
        for s in arena.states:
            if s in region:
                continue
            lands = {
                (a, b): all(t in region for t, p in arena.dist[arena.delta[(s, a, b)]].items() if p)
                for a in arena.actions_a
                for b in arena.actions_b
            }
            a_forces = any(all(lands[(a, b)] for b in arena.actions_b) for a in arena.actions_a)
            b_forces = any(all(lands[(a, b)] for a in arena.actions_a) for b in arena.actions_b)
            if a_forces or b_forces:
                joined.append(s)
        if not joined:
            return level
        for s in joined:
            level[s] = i


# ---------------------------------------------------------------------------
# Linear algebra


def gauss_jordan(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(r)] for row, r in zip(matrix, rhs)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        lead = aug[col][col]
        aug[col] = [x / lead for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]
