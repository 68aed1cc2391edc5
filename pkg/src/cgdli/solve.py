"""Turn-based parity solving and the concurrent pipeline Seq -> Zielonka -> Par."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .arena import ArenaError, ConcurrentArena, classify, owner, require_locally_determined
from .gameform import Player
from .graphs import has_cycle_with_max_parity
from .semantics import certify_winning
from .strategy import FiniteStrategy, par_strategy, positional
from .transform import ParityObjective, TurnBasedArena, seq_objective, sequentialize


class SolverError(RuntimeError):
    """A computed solution failed its own certificate."""


# ---------------------------------------------------------------------------
# Parity graphs with vertex priorities


@dataclass
class ParityGraph:
    """Vertices 0..n-1; owner 0 is Player A, 1 is Player B."""

    owner: list[int]
    priority: list[int]
    succ: list[list[int]]
    pred: list[list[int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.pred:
            self.pred = [[] for _ in self.owner]
            for u, vs in enumerate(self.succ):
                for v in vs:
                    self.pred[v].append(u)


def graph_attractor(
    g: ParityGraph, region: set[int], player: int, target: set[int]
) -> tuple[set[int], dict[int, int]]:
    """Vertices of ``region`` from which ``player`` forces a visit to ``target``."""
    attr = set(target) & region
    strategy: dict[int, int] = {}
    remaining = {
        u: sum(1 for v in g.succ[u] if v in region) for u in region if g.owner[u] != player
    }
    queue = list(attr)
    while queue:
        v = queue.pop()
        for u in g.pred[v]:
            if u not in region or u in attr:
                continue
            if g.owner[u] == player:
                attr.add(u)
                strategy[u] = v
                queue.append(u)
            else:
                remaining[u] -= 1
                if remaining[u] == 0:
                    attr.add(u)
                    queue.append(u)
    return attr, strategy


def _stay(g: ParityGraph, u: int, region: set[int]) -> int:
    return next(v for v in g.succ[u] if v in region)


def zielonka_graph(
    g: ParityGraph, region: set[int] | None = None
) -> tuple[list[set[int]], list[dict[int, int]]]:
    """Winning regions and positional strategies for both players."""
    if region is None:
        region = set(range(len(g.owner)))
    win: list[set[int]] = [set(), set()]
    strat: list[dict[int, int]] = [{}, {}]
    if not region:
        return win, strat
    top = max(g.priority[u] for u in region)
    p = top % 2
    q = 1 - p
    tops = {u for u in region if g.priority[u] == top}
    attr, attr_strat = graph_attractor(g, region, p, tops)
    sub_win, sub_strat = zielonka_graph(g, region - attr)
    if not sub_win[q]:
        win[p] = set(region)
        strat[p].update(sub_strat[p])
        strat[p].update(attr_strat)
        for u in tops:
            if g.owner[u] == p:
                strat[p][u] = _stay(g, u, region)
        return win, strat
    b_attr, b_strat = graph_attractor(g, region, q, sub_win[q])
    rest_win, rest_strat = zielonka_graph(g, region - b_attr)
    win[p] = rest_win[p]
    strat[p] = rest_strat[p]
    win[q] = rest_win[q] | b_attr
    strat[q].update(rest_strat[q])
    strat[q].update(sub_strat[q])
    strat[q].update(b_strat)
    return win, strat


def verify_graph_solution(g: ParityGraph, win: list[set[int]], strat: list[dict[int, int]]) -> None:
    """Every cycle left after fixing a player's strategy inside their region
    must have a maximum priority of that player's parity."""
    if win[0] & win[1] or len(win[0] | win[1]) != len(g.owner):
        raise SolverError("winning regions do not partition the vertices")
    for player in (0, 1):
        region = win[player]
        edges = []
        for u in region:
            if g.owner[u] == player:
                v = strat[player].get(u)
                if v is None or v not in g.succ[u] or v not in region:
                    raise SolverError(f"strategy of player {player} leaves its region at {u}")
                targets = [v]
            else:
                targets = g.succ[u]
                if any(v not in region for v in targets):
                    raise SolverError(f"opponent escapes region of player {player} at {u}")
            for v in targets:
                edges.append((u, v, g.priority[u]))
        if has_cycle_with_max_parity(list(region), edges, 1 - player):
            raise SolverError(f"player {player} region contains a losing cycle")


# ---------------------------------------------------------------------------
# Turn-based arenas


@dataclass
class ArenaGraph:
    """Parity graph of a deterministic turn-based arena. Each edge (q, q')
    becomes a vertex carrying the priority of col(q, q')."""

    graph: ParityGraph
    state_index: dict[str, int]
    edge_index: dict[tuple[str, str], int]
    owners: dict[str, Player]
    moves: dict[str, dict[str, str]]


def arena_graph(arena: ConcurrentArena, obj: ParityObjective) -> ArenaGraph:
    cls = classify(arena)
    if not (cls.deterministic and cls.turn_based):
        raise ArenaError("expected a deterministic turn-based arena")
    obj.check(arena)
    base = min(obj.priority[c] for c in arena.colors)
    owners: dict[str, Player] = {}
    moves: dict[str, dict[str, str]] = {}
    state_index = {q: i for i, q in enumerate(arena.states)}
    own: list[int] = [0] * len(arena.states)
    prio: list[int] = [base] * len(arena.states)
    succ: list[list[int]] = [[] for _ in arena.states]
    edge_index: dict[tuple[str, str], int] = {}
    for q in arena.states:
        who = owner(arena, q)
        assert who is not None
        owners[q] = who
        own[state_index[q]] = 0 if who == "A" else 1
        choice: dict[str, str] = {}
        if who == "A":
            for a in arena.actions_a:
                choice.setdefault(arena.target(q, a, arena.actions_b[0]), a)
        else:
            for b in arena.actions_b:
                choice.setdefault(arena.target(q, arena.actions_a[0], b), b)
        moves[q] = choice
        for q2 in choice:
            e = len(own)
            edge_index[(q, q2)] = e
            own.append(0)
            prio.append(obj(arena.color(q, q2)))
            succ.append([state_index[q2]])
            succ[state_index[q]].append(e)
    return ArenaGraph(ParityGraph(own, prio, succ), state_index, edge_index, owners, moves)


@dataclass
class SolveResult:
    winner: dict[str, Player]
    strategies: dict[Player, FiniteStrategy]

    def region(self, player: Player) -> list[str]:
        return [q for q, w in self.winner.items() if w == player]


def _strategy_from_graph(
    arena: ConcurrentArena, ag: ArenaGraph, player: Player, succ_choice: Mapping[int, int]
) -> FiniteStrategy:
    state_of_edge = {e: k for k, e in ag.edge_index.items()}
    choice: dict[str, str] = {}
    for q in arena.states:
        if ag.owners[q] != player:
            continue
        e = succ_choice.get(ag.state_index[q])
        if e is None:
            continue
        _, q2 = state_of_edge[e]
        choice[q] = ag.moves[q][q2]
    return positional(player, arena, choice)


def zielonka(arena: ConcurrentArena, obj: ParityObjective) -> SolveResult:
    ag = arena_graph(arena, obj)
    win, strat = zielonka_graph(ag.graph)
    verify_graph_solution(ag.graph, win, strat)
    winner: dict[str, Player] = {
        q: ("A" if ag.state_index[q] in win[0] else "B") for q in arena.states
    }
    strategies = {
        "A": _strategy_from_graph(arena, ag, "A", strat[0]),
        "B": _strategy_from_graph(arena, ag, "B", strat[1]),
    }
    return SolveResult(winner, strategies)


def attractor(
    arena: ConcurrentArena,
    player: Player,
    target: Iterable[str],
    target_edges: Iterable[tuple[str, str]] = (),
) -> tuple[set[str], dict[str, str]]:
    """States from which ``player`` forces a visit to ``target`` (or the
    traversal of one of ``target_edges``), with a positional strategy on the
    attractor outside the target."""
    trivial = ParityObjective({c: 0 for c in arena.colors})
    ag = arena_graph(arena, trivial)
    goal = {ag.state_index[q] for q in target}
    goal |= {ag.edge_index[e] for e in target_edges if e in ag.edge_index}
    p = 0 if player == "A" else 1
    attr, strat = graph_attractor(ag.graph, set(range(len(ag.graph.owner))), p, goal)
    # edge vertices are owned by A but have one successor, so they are forced
    edge_owner = {e: k for k, e in ag.edge_index.items()}
    states = {q for q, i in ag.state_index.items() if i in attr}
    choice = {}
    for q in states:
        i = ag.state_index[q]
        if i in goal or ag.owners[q] != player:
            continue
        e = strat.get(i)
        if e is not None:
            choice[q] = ag.moves[q][edge_owner[e][1]]
    return states, choice


# ---------------------------------------------------------------------------
# Threshold objectives


def remap_threshold(h: Iterable[int], n: int) -> dict[int, int]:
    """Priority map k -> 2k if k in h else 2k+1, over 0..n."""
    h = set(h)
    if any(k < 0 or k > n for k in h):
        raise ValueError(f"threshold set {sorted(h)} outside [0,{n}]")
    return {k: 2 * k if k in h else 2 * k + 1 for k in range(n + 1)}


def threshold_objective(prio: ParityObjective, h: Iterable[int], n: int) -> ParityObjective:
    """Parity objective equivalent to "the maximal priority seen infinitely often lies in h"."""
    remap = remap_threshold(h, n)
    return ParityObjective({c: remap[p] for c, p in prio.priority.items()})


# ---------------------------------------------------------------------------
# Concurrent games


@dataclass
class ConcurrentSolution:
    winner: Player
    strategy: FiniteStrategy
    seq: TurnBasedArena
    seq_result: SolveResult
    seq_strategy: FiniteStrategy


def solve_concurrent(arena: ConcurrentArena, obj: ParityObjective) -> ConcurrentSolution:
    """Winner at q0 and a winning positional strategy, obtained on Seq(C) and
    transferred back."""
    cls = classify(arena)
    if not cls.deterministic:
        raise ArenaError("solve_concurrent needs a deterministic arena")
    require_locally_determined(arena)
    obj.check(arena)
    seq = sequentialize(arena)
    seq_obj = seq_objective(obj, seq.kc)
    result = zielonka(seq.arena, seq_obj)
    winner = result.winner[arena.q0]
    sigma = result.strategies[winner]
    strategy = par_strategy(sigma, seq)
    if not certify_winning(arena, strategy, obj):
        raise SolverError("transferred strategy failed certification")
    return ConcurrentSolution(winner, strategy, seq, result, sigma)

