"""Counterexample constructions around non-determined local interactions and
a bounded-memory refutation of winning strategies."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arena import ArenaError, ConcurrentArena, classify, local_interaction, require_valid
from .exact import support
from .gameform import GameForm, Player, undetermined_valuation, winning_strategies
from .graphs import cycle_maxima, has_cycle_with_max_parity
from .semantics import CapExceeded, relevant_choices
from .transform import ColorMonitor, ParityObjective

LassoWord = tuple[tuple[str, ...], tuple[str, ...]]


def parse_lasso(text: str) -> LassoWord:
    """``"x y|z"`` is x y (z)^omega; without a bar the whole word repeats."""
    head, _, tail = text.partition("|")
    if not _:
        head, tail = "", head
    prefix = tuple(t for t in head.replace(",", " ").split() if t)
    cycle = tuple(t for t in tail.replace(",", " ").split() if t)
    if not cycle:
        raise ArenaError(f"lasso {text!r} has an empty cycle")
    return prefix, cycle


def lasso_letter(word: LassoWord, i: int) -> str:
    prefix, cycle = word
    if i < len(prefix):
        return prefix[i]
    return cycle[(i - len(prefix)) % len(cycle)]


def lassos_differ(w1: LassoWord, w2: LassoWord) -> bool:
    horizon = max(len(w1[0]), len(w2[0])) + len(w1[1]) * len(w2[1])
    return any(lasso_letter(w1, i) != lasso_letter(w2, i) for i in range(horizon))


# ---------------------------------------------------------------------------
# Two-tail gadget


def _tail_states(tag: str, word: LassoWord) -> list[str]:
    return [f"{tag}{i}" for i in range(len(word[0]) + len(word[1]))]


def build_two_tail_gadget(
    form: GameForm, tail_win: LassoWord, tail_lose: LassoWord
) -> tuple[ConcurrentArena, ColorMonitor]:
    """Put ``form`` at q0 and send the outcomes of a valuation with no winner
    to a winning or a losing tail.

    The play's color word is exactly the chosen tail.
    """
    val = undetermined_valuation(form)
    if val is None:
        raise ArenaError("game form is determined; the gadget needs a non-determined one")
    if not lassos_differ(tail_win, tail_lose):
        raise ArenaError("the two tails describe the same infinite word")
    win_states = _tail_states("w", tail_win)
    lose_states = _tail_states("l", tail_lose)
    states = ("q0", *win_states, *lose_states)
    colors: list[str] = []
    for word in (tail_win, tail_lose):
        for c in word[0] + word[1]:
            if c not in colors:
                colors.append(c)
    delta: dict[tuple[str, str, str], str] = {}
    dist: dict[str, dict[str, Fraction]] = {}
    col: dict[tuple[str, str], str] = {}
    nature: list[str] = []
    for o in form.outcomes:
        d = f"o:{o}"
        nature.append(d)
        dist[d] = {(win_states if o in val else lose_states)[0]: Fraction(1)}
    for i, a in enumerate(form.rows):
        for j, b in enumerate(form.cols):
            delta[("q0", a, b)] = f"o:{form.table[i][j]}"
    col[("q0", win_states[0])] = lasso_letter(tail_win, 0)
    col[("q0", lose_states[0])] = lasso_letter(tail_lose, 0)
    for word, tail in ((tail_win, win_states), (tail_lose, lose_states)):
        for k, s in enumerate(tail):
            nxt_index = k + 1 if k + 1 < len(tail) else len(word[0])
            nxt = tail[nxt_index]
            d = f"to:{nxt}"
            if d not in dist:
                nature.append(d)
                dist[d] = {nxt: Fraction(1)}
            for a in form.rows:
                for b in form.cols:
                    delta[(s, a, b)] = d
            col[(s, nxt)] = lasso_letter(word, k + 1)
    arena = require_valid(
        ConcurrentArena(states, "q0", form.rows, form.cols, tuple(nature), delta, dist, tuple(colors), col)
    )
    return arena, tail_monitor(tail_win, tuple(colors))


def tail_monitor(word: LassoWord, alphabet: Sequence[str]) -> ColorMonitor:
    """Accepts exactly the ultimately periodic word ``word``."""
    n = len(word[0]) + len(word[1])
    positions = [f"p{i}" for i in range(n)]
    states = ("start", *positions, "sink")
    delta: dict[tuple[str, str], str] = {}
    for c in alphabet:
        delta[("start", c)] = positions[0] if c == lasso_letter(word, 0) else "sink"
        delta[("sink", c)] = "sink"
        for i in range(n):
            nxt = i + 1 if i + 1 < n else len(word[0])
            delta[(positions[i], c)] = positions[nxt] if c == lasso_letter(word, i + 1) else "sink"
    priority = {"start": 1, "sink": 1}
    for i, p in enumerate(positions):
        priority[p] = 2 if i >= len(word[0]) else 1
    return ColorMonitor(states, "start", tuple(alphabet), delta, priority)


# ---------------------------------------------------------------------------
# Strong reachability


@dataclass(frozen=True)
class StrongReachLevels:
    """For each state: (level, player) when it enters R_level because that
    player can force R_{level-1}; the target has level 0 and no player."""

    target: str
    levels: dict[str, tuple[int, Player | None]]
    rounds: tuple[frozenset[str], ...]

    def label(self, q: str) -> str:
        if q not in self.levels:
            return "cn"
        i, player = self.levels[q]
        return f"c{player}{i}" if player is not None else "c0"

    @property
    def depth(self) -> int:
        return len(self.rounds) - 1


def forcing_players(arena: ConcurrentArena, q: str, region: set[str]) -> list[Player]:
    """Players with a one-step strategy at ``q`` that surely lands in ``region``."""
    form = local_interaction(arena, q)
    into = {d for d in form.outcomes if set(support(arena.dist[d])) <= region}
    players: list[Player] = []
    if winning_strategies(form, into, "A"):
        players.append("A")
    if winning_strategies(form, set(form.outcomes) - into, "B"):
        players.append("B")
    return players


def strong_reach(arena: ConcurrentArena, q: str) -> StrongReachLevels:
    if q not in arena.states:
        raise ArenaError(f"unknown state {q!r}")
    levels: dict[str, tuple[int, Player | None]] = {q: (0, None)}
    rounds = [frozenset({q})]
    while True:
        region = set(rounds[-1])
        i = len(rounds)
        added = {}
        for s in arena.states:
            if s in region:
                continue
            players = forcing_players(arena, s, region)
            if players:
                added[s] = (i, players[0])
        if not added:
            break
        levels.update(added)
        rounds.append(frozenset(region | set(added)))
    return StrongReachLevels(q, levels, tuple(rounds))


# ---------------------------------------------------------------------------
# Open counterexample


def bad_prefix_monitor(colors: Sequence[str]) -> ColorMonitor:
    """Tracks the last color and whether cwB has occurred.

    A color c after c{p}{i} with c not in {cwA, cwB} and not of level below i
    is a bad prefix for p: for A it loses, for B it wins. Before any bad
    prefix for A and any cwB, reading cwA wins.
    """
    def level(c: str) -> int | None:
        return int(c[2:]) if c[:2] in ("cA", "cB") else None

    states: list[str] = ["win", "lose"]
    for flag in ("open", "afterB"):
        for last in ("-",) + tuple(colors):
            states.append(f"{flag}/{last}")
    delta: dict[tuple[str, str], str] = {}
    for c in colors:
        delta[("win", c)] = "win"
        delta[("lose", c)] = "lose"
    for flag in ("open", "afterB"):
        for last in ("-",) + tuple(colors):
            here = f"{flag}/{last}"
            for c in colors:
                lv = level(last) if last != "-" else None
                if lv is not None and c not in ("cwA", "cwB") and not (
                    level(c) is not None and level(c) < lv  # type: ignore[operator]
                ):
                    delta[(here, c)] = "lose" if last[1] == "A" else "win"
                elif c == "cwA" and flag == "open":
                    delta[(here, c)] = "win"
                else:
                    delta[(here, c)] = f"{'afterB' if c == 'cwB' else flag}/{c}"
    priority = {s: 1 for s in states}
    priority["win"] = 2
    return ColorMonitor(tuple(states), "open/-", tuple(colors), delta, priority)


def build_open_counterexample(
    arena: ConcurrentArena, q: str
) -> tuple[ConcurrentArena, ColorMonitor]:
    """Recolor a deterministic arena around a non-determined interaction at q
    so that the resulting open objective has no winner."""
    if not classify(arena).deterministic:
        raise ArenaError("expected a deterministic arena")
    levels = strong_reach(arena, q)
    if arena.q0 not in levels.levels:
        raise ArenaError(f"{q} is not strongly reachable from {arena.q0}")
    succ_form = _successor_form(arena, q)
    val = undetermined_valuation(succ_form)
    if val is None:
        raise ArenaError(f"state {q}: interaction over successor states is determined")
    depth = levels.depth
    colors = ["cwA", "cwB", "cn"] + [f"c{p}{i}" for p in "AB" for i in range(1, depth + 1)]
    col: dict[tuple[str, str], str] = {}
    for s in arena.states:
        for s2 in arena.states:
            if s == q:
                col[(s, s2)] = "cwA" if s2 in val else "cwB"
            else:
                col[(s, s2)] = levels.label(s)
    recolored = ConcurrentArena(
        arena.states, arena.q0, arena.actions_a, arena.actions_b, arena.nature,
        arena.delta, arena.dist, tuple(colors), col,
    )
    return require_valid(recolored), bad_prefix_monitor(colors)


def _successor_form(arena: ConcurrentArena, q: str) -> GameForm:
    table = [[arena.target(q, a, b) for b in arena.actions_b] for a in arena.actions_a]
    return GameForm.from_table(table, arena.actions_a, arena.actions_b)


# ---------------------------------------------------------------------------
# Bounded-memory refutation


def refute_winning_up_to_memory(
    arena: ConcurrentArena,
    monitor: ColorMonitor | None,
    player: Player,
    max_mem: int,
    obj: ParityObjective | None = None,
    cap: int = 2_000_000,
) -> bool:
    """True iff no strategy of ``player`` whose memory skeleton has at most
    ``max_mem`` states and reads the colors of ``arena`` wins.

    The winning condition is given by ``monitor`` (or by ``obj`` when no
    monitor is given). Strategies are enumerated lazily: only the memory
    updates and actions met on plays the strategy allows are branched on,
    memory states are numbered in order of first use, and a partial strategy
    is dropped as soon as the part already fixed contains a losing cycle.
    """
    if monitor is None and obj is None:
        raise ValueError("need a monitor or an objective")
    if not classify(arena).deterministic:
        raise ArenaError("expected a deterministic arena")
    if monitor is not None:
        missing = [c for c in arena.colors if c not in monitor.alphabet]
        if missing:
            raise ArenaError(f"monitor does not read colors {missing}")
    else:
        obj.check(arena)  # type: ignore[union-attr]

    def advance(ms: str, c: str) -> tuple[str, int]:
        if monitor is None:
            return ms, obj(c)  # type: ignore[misc]
        nxt = monitor.delta[(ms, c)]
        return nxt, monitor.priority[nxt]

    options = relevant_choices(arena, player)
    opp = arena.actions_b if player == "A" else arena.actions_a
    bad_parity = 1 if player == "A" else 0

    # positions whose winner no longer depends on the players
    start_ms = monitor.init if monitor is not None else ""
    full_edges = []
    seen_pos, todo = {(arena.q0, start_ms)}, [(arena.q0, start_ms)]
    while todo:
        q, ms = todo.pop()
        for q2 in arena.successors(q):
            ms2, p = advance(ms, arena.color(q, q2))
            full_edges.append(((q, ms), (q2, ms2), p))
            if (q2, ms2) not in seen_pos:
                seen_pos.add((q2, ms2))
                todo.append((q2, ms2))
    settled: dict[tuple[str, str], bool] = {}
    for pos in seen_pos:
        parities = {p % 2 for p in cycle_maxima([pos], full_edges)}
        if parities == {bad_parity}:
            settled[pos] = False
        elif bad_parity not in parities:
            settled[pos] = True
    budget = [cap]

    def explore(mu: dict, lam: dict) -> tuple[list, tuple | None] | None:
        """Edges fixed by the partial strategy and the first undefined entry
        in breadth-first order, or None when a settled losing position is reached."""
        start = (arena.q0, start_ms, "0")
        seen, queue, edges = {start}, [start], []
        gap = None
        for q, ms, m in queue:
            verdict = settled.get((q, ms))
            if verdict is False:
                return None
            if verdict is True:
                continue
            if (m, q) not in lam:
                gap = gap or ("lam", m, q)
                continue
            mine = lam[(m, q)]
            for o in opp:
                a, b = (mine, o) if player == "A" else (o, mine)
                q2 = arena.target(q, a, b)
                c = arena.color(q, q2)
                if (m, c) not in mu:
                    gap = gap or ("mu", m, c)
                    continue
                ms2, p = advance(ms, c)
                nxt = (q2, ms2, mu[(m, c)])
                edges.append(((q, ms, m), nxt, p))
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return edges, gap

    def wins(mu: dict, lam: dict, used: int) -> bool:
        budget[0] -= 1
        if budget[0] < 0:
            raise CapExceeded("strategy enumeration cap exceeded")
        found = explore(mu, lam)
        if found is None:
            return False
        edges, gap = found
        # a losing cycle already fixed survives every completion
        if has_cycle_with_max_parity([(arena.q0, start_ms, "0")], edges, bad_parity):
            return False
        if gap is None:
            return True
        kind, m, key = gap
        if kind == "lam":
            for act in options.get(key, list(arena.actions(player))):
                lam[(m, key)] = act
                if wins(mu, lam, used):
                    return True
                del lam[(m, key)]
            return False
        for target in range(min(used + 1, max_mem)):
            mu[(m, key)] = str(target)
            if wins(mu, lam, max(used, target + 1)):
                return True
            del mu[(m, key)]
        return False

    return not wins({}, {}, 1)
