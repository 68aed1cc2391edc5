"""Finite-memory color strategies and their transfer between an arena and
its sequential version."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .arena import ArenaError, ConcurrentArena, local_interaction, require_locally_determined
from .gameform import Player, winning_strategies
from .transform import TurnBasedArena


@dataclass(frozen=True, eq=False)
class MemorySkeleton:
    memory: tuple[str, ...]
    m_init: str
    colors: tuple[str, ...]
    mu: Mapping[tuple[str, str], str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "memory", tuple(self.memory))
        object.__setattr__(self, "colors", tuple(self.colors))
        if not self.memory:
            raise ArenaError("memory must be non-empty")
        if self.m_init not in self.memory:
            raise ArenaError(f"initial memory {self.m_init!r} unknown")
        mem = set(self.memory)
        for m in self.memory:
            for c in self.colors:
                nxt = self.mu.get((m, c))
                if nxt is None:
                    raise ArenaError(f"memory update undefined at ({m},{c})")
                if nxt not in mem:
                    raise ArenaError(f"memory update ({m},{c}) -> unknown {nxt!r}")

    def update(self, m: str, color: str) -> str:
        return self.mu[(m, color)]

    def table(self) -> dict[tuple[str, str], str]:
        return {(m, c): self.mu[(m, c)] for m in self.memory for c in self.colors}


def run_skeleton(sk: MemorySkeleton, word: Iterable[str]) -> str:
    m = sk.m_init
    for c in word:
        m = sk.mu[(m, c)]
    return m


def trivial_skeleton(colors: Sequence[str]) -> MemorySkeleton:
    return MemorySkeleton(("0",), "0", tuple(colors), {("0", c): "0" for c in colors})


@dataclass(frozen=True, eq=False)
class FiniteStrategy:
    """A color strategy given by a memory skeleton and an action map.

    ``lam`` may be partial; missing entries play ``default``, the least
    action of the player.
    """

    player: Player
    skeleton: MemorySkeleton
    lam: Mapping[tuple[str, str], str]
    default: str

    @property
    def positional(self) -> bool:
        return len(self.skeleton.memory) == 1

    def action(self, m: str, q: str) -> str:
        return self.lam.get((m, q), self.default)

    def play(self, colors: Iterable[str], q: str) -> str:
        return self.action(run_skeleton(self.skeleton, colors), q)

    def check(self, arena: ConcurrentArena) -> None:
        missing = [c for c in arena.colors if c not in self.skeleton.colors]
        if missing:
            raise ArenaError(f"strategy skeleton does not read colors {missing}")
        allowed = set(arena.actions(self.player))
        bad = [k for k, a in self.lam.items() if a not in allowed]
        if bad or self.default not in allowed:
            raise ArenaError(f"strategy uses actions unknown to player {self.player}")

    def to_dict(self) -> dict:
        sk = self.skeleton
        return {
            "lambda": {f"{m},{q}": a for (m, q), a in sorted(self.lam.items())},
            "m_init": sk.m_init,
            "memory": list(sk.memory),
            "mu": {f"{m},{c}": sk.mu[(m, c)] for m in sk.memory for c in sk.colors},
            "player": self.player,
        }


def positional(
    player: Player, arena: ConcurrentArena, choice: Mapping[str, str]
) -> FiniteStrategy:
    return FiniteStrategy(
        player,
        trivial_skeleton(arena.colors),
        {("0", q): a for q, a in choice.items()},
        arena.actions(player)[0],
    )


def strategy_from_dict(doc: Mapping, arena: ConcurrentArena) -> FiniteStrategy:
    try:
        player = doc["player"]
        mu = {}
        for key, v in doc["mu"].items():
            m, c = (p.strip() for p in key.split(","))
            mu[(m, c)] = v
        lam = {}
        for key, v in doc["lambda"].items():
            m, q = (p.strip() for p in key.split(","))
            lam[(m, q)] = v
        sk = MemorySkeleton(tuple(doc["memory"]), doc["m_init"], arena.colors, mu)
    except (KeyError, ValueError, AttributeError) as exc:
        raise ArenaError(f"malformed strategy: {exc}") from exc
    if player not in ("A", "B"):
        raise ArenaError(f"unknown player {player!r}")
    s = FiniteStrategy(player, sk, lam, arena.actions(player)[0])
    s.check(arena)
    return s


def strategy_to_json(s: FiniteStrategy) -> str:
    return json.dumps(s.to_dict(), sort_keys=True)


# ---------------------------------------------------------------------------
# Skeleton operators


def seq_skeleton(sk: MemorySkeleton, kc: str) -> MemorySkeleton:
    """Ignore the fresh color, otherwise update as before."""
    if kc in sk.colors:
        raise ArenaError(f"skeleton already reads {kc!r}")
    mu = dict(sk.table())
    for m in sk.memory:
        mu[(m, kc)] = m
    return MemorySkeleton(sk.memory, sk.m_init, (kc,) + sk.colors, mu)


def par_skeleton(sk: MemorySkeleton, kc: str) -> MemorySkeleton:
    """Read the fresh color before every genuine color."""
    if kc not in sk.colors:
        raise ArenaError(f"skeleton does not read {kc!r}")
    colors = tuple(c for c in sk.colors if c != kc)
    mu = {(m, c): sk.mu[(sk.mu[(m, kc)], c)] for m in sk.memory for c in colors}
    return MemorySkeleton(sk.memory, sk.m_init, colors, mu)


# ---------------------------------------------------------------------------
# Strategy transfer


def seq_strategy(s: FiniteStrategy, seq: TurnBasedArena) -> FiniteStrategy:
    """The strategy on Seq(C) that replays ``s``.

    Player A acts at original states; Player B acts at (q, a) as ``s`` would at q.
    """
    s.check(seq.source)
    sk = seq_skeleton(s.skeleton, seq.kc)
    lam: dict[tuple[str, str], str] = {}
    for m in sk.memory:
        if s.player == "A":
            for q in seq.v_a:
                lam[(m, q)] = s.action(m, q)
        else:
            for (q, _a), vb in seq.v_b.items():
                lam[(m, vb)] = s.action(m, q)
    return FiniteStrategy(s.player, sk, lam, s.default)


def par_strategy_a(sigma: FiniteStrategy, seq: TurnBasedArena) -> FiniteStrategy:
    if sigma.player != "A":
        raise ArenaError("expected a Player A strategy")
    sk = par_skeleton(sigma.skeleton, seq.kc)
    lam = {(m, q): sigma.action(m, q) for m in sk.memory for q in seq.v_a}
    return FiniteStrategy("A", sk, lam, sigma.default)


def rech(sigma: FiniteStrategy, seq: TurnBasedArena, m: str, q: str) -> dict[str, str]:
    """Nature state reached from q for each A action when B follows ``sigma``."""
    arena = seq.source
    m_b = sigma.skeleton.update(m, seq.kc)
    return {
        a: arena.delta[(q, a, sigma.action(m_b, seq.v_b[(q, a)]))] for a in arena.actions_a
    }


def par_strategy_b(sigma: FiniteStrategy, seq: TurnBasedArena) -> FiniteStrategy:
    """Transfer a Player B strategy by picking, at each (m, q), the least column
    whose outcomes all lie in the set ``sigma`` lets B reach."""
    if sigma.player != "B":
        raise ArenaError("expected a Player B strategy")
    arena = seq.source
    require_locally_determined(arena)
    sk = par_skeleton(sigma.skeleton, seq.kc)
    lam: dict[tuple[str, str], str] = {}
    for q in arena.states:
        form = local_interaction(arena, q)
        for m in sk.memory:
            reach = set(rech(sigma, seq, m, q).values())
            cols = winning_strategies(form, set(form.outcomes) - reach, "B")
            lam[(m, q)] = cols[0]
    return FiniteStrategy("B", sk, lam, sigma.default)


def par_strategy(sigma: FiniteStrategy, seq: TurnBasedArena) -> FiniteStrategy:
    return par_strategy_a(sigma, seq) if sigma.player == "A" else par_strategy_b(sigma, seq)


def same_color_strategy(s1: FiniteStrategy, s2: FiniteStrategy, states: Sequence[str]) -> bool:
    """Whether two Mealy machines implement the same color strategy on ``states``."""
    if s1.player != s2.player or set(s1.skeleton.colors) != set(s2.skeleton.colors):
        return False
    start = (s1.skeleton.m_init, s2.skeleton.m_init)
    seen, stack = {start}, [start]
    while stack:
        m1, m2 = stack.pop()
        if any(s1.action(m1, q) != s2.action(m2, q) for q in states):
            return False
        for c in s1.skeleton.colors:
            nxt = (s1.skeleton.mu[(m1, c)], s2.skeleton.mu[(m2, c)])
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return True
