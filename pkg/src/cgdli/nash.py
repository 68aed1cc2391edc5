"""Positional Nash equilibria in priority games with acyclic preferences."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

from .arena import ArenaError, ConcurrentArena, classify, require_locally_determined
from .gameform import Player, other
from .semantics import CapExceeded, DEFAULT_CAP, outcome_lasso, positional_profiles
from .solve import solve_concurrent, threshold_objective, zielonka
from .strategy import FiniteStrategy, positional
from .transform import ParityObjective


@dataclass(frozen=True)
class PriorityPartition:
    """Outcome classes D_0..D_n: class k holds plays whose largest priority
    seen infinitely often is k."""

    n: int
    prio: ParityObjective

    def __post_init__(self) -> None:
        bad = [c for c, p in self.prio.priority.items() if not 0 <= p <= self.n]
        if bad:
            raise ArenaError(f"colors {bad} have priorities outside [0,{self.n}]")

    @property
    def classes(self) -> range:
        return range(self.n + 1)


@dataclass(frozen=True)
class Preference:
    """Strict preference ``j < k`` (the player prefers class k) for each edge (j, k)."""

    player: Player
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        if not is_acyclic(self.edges):
            raise ArenaError(f"preference of player {self.player} is cyclic")

    def prefers(self, k: int, than: int) -> bool:
        return (than, k) in self.edges


def is_acyclic(edges: Iterable[tuple[int, int]]) -> bool:
    succ: dict[int, set[int]] = {}
    for j, k in edges:
        succ.setdefault(j, set()).add(k)
    state: dict[int, int] = {}

    def visit(u: int) -> bool:
        state[u] = 1
        for v in succ.get(u, ()):
            if state.get(v) == 1:
                return False
            if v not in state and not visit(v):
                return False
        state[u] = 2
        return True

    return all(visit(u) for u in list(succ) if u not in state)


@dataclass(frozen=True)
class NEWitness:
    s_a: FiniteStrategy
    s_b: FiniteStrategy
    outcome_class: int
    certified: bool
    source: str

    def to_dict(self) -> dict:
        return {
            "certified": self.certified,
            "outcome_class": self.outcome_class,
            "source": self.source,
            "strategy_A": self.s_a.to_dict(),
            "strategy_B": self.s_b.to_dict(),
        }


def _one_player_arena(arena: ConcurrentArena, fixed: FiniteStrategy) -> ConcurrentArena:
    """Arena where the fixed player's action is forced everywhere."""
    delta = {}
    for q in arena.states:
        act = fixed.action(fixed.skeleton.m_init, q)
        for a in arena.actions_a:
            for b in arena.actions_b:
                pair = (act, b) if fixed.player == "A" else (a, act)
                delta[(q, a, b)] = arena.delta[(q, *pair)]
    return ConcurrentArena(
        arena.states, arena.q0, arena.actions_a, arena.actions_b, arena.nature,
        delta, arena.dist, arena.colors, arena.col,
    )


def achievable_classes(
    arena: ConcurrentArena, part: PriorityPartition, fixed: FiniteStrategy
) -> set[int]:
    """Classes the free player can bring about against a fixed positional strategy."""
    if not fixed.positional:
        raise ArenaError("fixed strategy must be positional")
    free = other(fixed.player)
    forced = _one_player_arena(arena, fixed)
    result = set()
    for k in part.classes:
        if free == "A":
            obj = threshold_objective(part.prio, {k}, part.n)
            wins = zielonka(forced, obj).winner[arena.q0] == "A"
        else:
            rest = set(part.classes) - {k}
            obj = threshold_objective(part.prio, rest, part.n)
            wins = zielonka(forced, obj).winner[arena.q0] == "B"
        if wins:
            result.add(k)
    return result


def outcome_class(
    arena: ConcurrentArena, part: PriorityPartition, s_a: FiniteStrategy, s_b: FiniteStrategy
) -> int:
    top = outcome_lasso(arena, s_a, s_b, part.prio).max_priority
    assert top is not None
    return top


def verify_ne(
    arena: ConcurrentArena,
    part: PriorityPartition,
    prefs: Mapping[Player, Preference],
    s_a: FiniteStrategy,
    s_b: FiniteStrategy,
) -> bool:
    k_star = outcome_class(arena, part, s_a, s_b)
    for player, fixed in (("A", s_b), ("B", s_a)):
        pref = prefs[player]
        if any(pref.prefers(k, k_star) for k in achievable_classes(arena, part, fixed)):
            return False
    return True


def _check_inputs(arena: ConcurrentArena, prefs: Mapping[Player, Preference]) -> None:
    for player in ("A", "B"):
        if player not in prefs:
            raise ArenaError(f"missing preference for player {player}")
    if not classify(arena).deterministic:
        raise ArenaError("priority games here need a deterministic arena")
    require_locally_determined(arena)


def threshold_candidates(
    arena: ConcurrentArena, part: PriorityPartition
) -> tuple[list[FiniteStrategy], list[FiniteStrategy]]:
    """Winning strategies of every threshold game "max(inf) in H", grouped by winner."""
    wins: dict[Player, list[FiniteStrategy]] = {"A": [], "B": []}
    seen: dict[Player, set] = {"A": set(), "B": set()}
    n = part.n
    for mask in range(1 << (n + 1)):
        h = {k for k in range(n + 1) if mask >> k & 1}
        sol = solve_concurrent(arena, threshold_objective(part.prio, h, n))
        s = sol.strategy
        key = tuple(s.action("0", q) for q in arena.states)
        if key not in seen[sol.winner]:
            seen[sol.winner].add(key)
            wins[sol.winner].append(s)
    return wins["A"], wins["B"]


def find_positional_ne(
    arena: ConcurrentArena,
    part: PriorityPartition,
    prefs: Mapping[Player, Preference],
    cap: int = DEFAULT_CAP,
) -> NEWitness:
    """A certified positional Nash equilibrium.

    Profiles assembled from threshold-game winning strategies are tried
    first; otherwise all positional profiles are searched.
    """
    _check_inputs(arena, prefs)
    cand_a, cand_b = threshold_candidates(arena, part)
    for s_a, s_b in product(cand_a, cand_b):
        if verify_ne(arena, part, prefs, s_a, s_b):
            return NEWitness(s_a, s_b, outcome_class(arena, part, s_a, s_b), True, "threshold")
    for s_a in cand_a:
        for prof_b in positional_profiles(arena, "B"):
            s_b = positional("B", arena, prof_b)
            if verify_ne(arena, part, prefs, s_a, s_b):
                return NEWitness(s_a, s_b, outcome_class(arena, part, s_a, s_b), True, "threshold-A")
    for s_b in cand_b:
        for prof_a in positional_profiles(arena, "A"):
            s_a = positional("A", arena, prof_a)
            if verify_ne(arena, part, prefs, s_a, s_b):
                return NEWitness(s_a, s_b, outcome_class(arena, part, s_a, s_b), True, "threshold-B")
    profs_a = positional_profiles(arena, "A")
    profs_b = positional_profiles(arena, "B")
    if len(profs_a) * len(profs_b) > cap:
        raise CapExceeded(f"{len(profs_a) * len(profs_b)} profiles exceed the cap {cap}")
    for prof_a, prof_b in product(profs_a, profs_b):
        s_a, s_b = positional("A", arena, prof_a), positional("B", arena, prof_b)
        if verify_ne(arena, part, prefs, s_a, s_b):
            return NEWitness(s_a, s_b, outcome_class(arena, part, s_a, s_b), True, "exhaustive")
    raise ArenaError("no positional Nash equilibrium found")


def prefs_from_dict(doc: Mapping) -> dict[Player, Preference]:
    out: dict[Player, Preference] = {}
    for player in ("A", "B"):
        edges = doc.get(player, [])
        out[player] = Preference(player, frozenset((int(j), int(k)) for j, k in edges))
    return out


def prefs_to_json(prefs: Mapping[Player, Preference]) -> str:
    return json.dumps({p: sorted(map(list, pr.edges)) for p, pr in prefs.items()}, sort_keys=True)
