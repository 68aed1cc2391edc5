"""Colored stochastic concurrent arenas, local interactions and classification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exact import dist_violations, format_fraction, is_dirac, parse_fraction, support
from .gameform import GameForm, Player, ValidationError, is_determined, undetermined_valuation


class ArenaError(ValidationError):
    """An arena fails validation or a precondition."""


class NotLocallyDetermined(ArenaError):
    def __init__(self, state: str):
        super().__init__(f"state {state}: local interaction not determined")
        self.state = state


@dataclass(frozen=True, eq=False)
class ConcurrentArena:
    """A finite arena. ``col`` may be sparse; missing pairs use ``colors[0]``."""

    states: tuple[str, ...]
    q0: str
    actions_a: tuple[str, ...]
    actions_b: tuple[str, ...]
    nature: tuple[str, ...]
    delta: Mapping[tuple[str, str, str], str]
    dist: Mapping[str, Mapping[str, Fraction]]
    colors: tuple[str, ...]
    col: Mapping[tuple[str, str], str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name in ("states", "actions_a", "actions_b", "nature", "colors"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    def color(self, q: str, q2: str) -> str:
        return self.col.get((q, q2), self.colors[0])

    def actions(self, player: Player) -> tuple[str, ...]:
        return self.actions_a if player == "A" else self.actions_b

    def step(self, q: str, a: str, b: str) -> Mapping[str, Fraction]:
        """Distribution over next states, i.e. dist(delta(q, a, b))."""
        return self.dist[self.delta[(q, a, b)]]

    def target(self, q: str, a: str, b: str) -> str:
        """The successor of a Dirac transition."""
        (q2,) = support(self.step(q, a, b))
        return q2

    def successors(self, q: str) -> list[str]:
        seen: dict[str, None] = {}
        for a in self.actions_a:
            for b in self.actions_b:
                for q2 in support(self.step(q, a, b)):
                    seen.setdefault(q2, None)
        return list(seen)

    def reachable(self) -> list[str]:
        order, stack, seen = [], [self.q0], {self.q0}
        while stack:
            q = stack.pop()
            order.append(q)
            for q2 in self.successors(q):
                if q2 not in seen:
                    seen.add(q2)
                    stack.append(q2)
        return [q for q in self.states if q in seen]


@dataclass(frozen=True)
class ArenaClass:
    deterministic: bool
    turn_based: bool
    locally_determined: bool


def validate(arena: ConcurrentArena) -> list[str]:
    """Every invariant violation, each naming its location. Empty means ok."""
    problems: list[str] = []
    for label, items in (
        ("state", arena.states),
        ("A action", arena.actions_a),
        ("B action", arena.actions_b),
        ("nature state", arena.nature),
        ("color", arena.colors),
    ):
        if not items:
            problems.append(f"no {label}s declared")
        if len(set(items)) != len(items):
            problems.append(f"duplicate {label} names")
    states, nature, colors = set(arena.states), set(arena.nature), set(arena.colors)
    if arena.q0 not in states:
        problems.append(f"initial state {arena.q0!r} unknown")
    for q in arena.states:
        for a in arena.actions_a:
            for b in arena.actions_b:
                d = arena.delta.get((q, a, b))
                if d is None:
                    problems.append(f"delta undefined at ({q},{a},{b})")
                elif d not in nature:
                    problems.append(f"delta({q},{a},{b}) = {d!r} is not a nature state")
    for key in arena.delta:
        q, a, b = key
        if q not in states or a not in arena.actions_a or b not in arena.actions_b:
            problems.append(f"delta key {key} references unknown ids")
    for d in arena.nature:
        if d not in arena.dist:
            problems.append(f"nature state {d}: no distribution")
            continue
        for issue in dist_violations(arena.dist[d]):
            problems.append(f"nature state {d}: distribution {issue}")
        for q in arena.dist[d]:
            if q not in states:
                problems.append(f"nature state {d}: unknown state {q!r}")
    for (q, q2), c in arena.col.items():
        if q not in states or q2 not in states:
            problems.append(f"col({q},{q2}) references unknown states")
        if c not in colors:
            problems.append(f"col({q},{q2}) = {c!r} is not a color")
    return problems


def require_valid(arena: ConcurrentArena) -> ConcurrentArena:
    problems = validate(arena)
    if problems:
        raise ArenaError("; ".join(problems))
    return arena


def local_interaction(arena: ConcurrentArena, q: str) -> GameForm:
    if q not in arena.states:
        raise ArenaError(f"unknown state {q!r}")
    table = [[arena.delta[(q, a, b)] for b in arena.actions_b] for a in arena.actions_a]
    used = {d for row in table for d in row}
    outcomes = tuple(d for d in arena.nature if d in used)
    return GameForm(arena.actions_a, arena.actions_b, outcomes, tuple(map(tuple, table)))


def owner(arena: ConcurrentArena, q: str) -> Player | None:
    """Who controls ``q``: A when B's choice never matters, B when A's never does.

    A state where neither choice matters is assigned to A.
    """
    rows = [[arena.delta[(q, a, b)] for b in arena.actions_b] for a in arena.actions_a]
    if all(len(set(r)) == 1 for r in rows):
        return "A"
    if all(len({r[j] for r in rows}) == 1 for j in range(len(arena.actions_b))):
        return "B"
    return None


def is_deterministic(arena: ConcurrentArena) -> bool:
    return all(is_dirac(arena.dist[d]) for d in arena.nature)


def non_determined_states(arena: ConcurrentArena) -> list[str]:
    return [q for q in arena.states if not is_determined(local_interaction(arena, q))]


def classify(arena: ConcurrentArena) -> ArenaClass:
    return ArenaClass(
        deterministic=is_deterministic(arena),
        turn_based=all(owner(arena, q) is not None for q in arena.states),
        locally_determined=not non_determined_states(arena),
    )


def require_locally_determined(arena: ConcurrentArena) -> None:
    bad = non_determined_states(arena)
    if bad:
        raise NotLocallyDetermined(bad[0])


def undetermined_witness(arena: ConcurrentArena, q: str) -> frozenset[str] | None:
    return undetermined_valuation(local_interaction(arena, q))


def deterministic_arena(
    states: Sequence[str],
    q0: str,
    actions_a: Sequence[str],
    actions_b: Sequence[str],
    moves: Mapping[tuple[str, str, str], str],
    colors: Sequence[str],
    col: Mapping[tuple[str, str], str] | None = None,
) -> ConcurrentArena:
    """Build an arena whose transitions go straight to states.

    One Dirac nature state ``~q`` is inserted per target state ``q``.
    """
    targets = []
    for q2 in moves.values():
        if q2 not in targets:
            targets.append(q2)
    name = {q2: f"~{q2}" for q2 in targets}
    nature = tuple(name[q2] for q2 in states if q2 in name)
    return ConcurrentArena(
        states=tuple(states),
        q0=q0,
        actions_a=tuple(actions_a),
        actions_b=tuple(actions_b),
        nature=nature,
        delta={k: name[v] for k, v in moves.items()},
        dist={name[q2]: {q2: Fraction(1)} for q2 in targets},
        colors=tuple(colors),
        col=dict(col or {}),
    )


# ---------------------------------------------------------------------------
# JSON


def _split_key(key: str, parts: int, where: str) -> tuple[str, ...]:
    pieces = tuple(p.strip() for p in key.split(","))
    if len(pieces) != parts:
        raise ArenaError(f"{where}: key {key!r} must have {parts} comma-separated parts")
    return pieces


def arena_from_dict(doc: Mapping) -> ConcurrentArena:
    try:
        states = list(doc["states"])
        q0 = doc["q0"]
        actions_a = list(doc["actions_A"])
        actions_b = list(doc["actions_B"])
        colors = list(doc["colors"])
        raw_delta = doc["delta"]
    except (KeyError, TypeError) as exc:
        raise ArenaError(f"arena document missing field: {exc}") from exc
    delta = {_split_key(k, 3, "delta"): v for k, v in raw_delta.items()}
    col = {_split_key(k, 2, "col"): v for k, v in doc.get("col", {}).items()}
    if "dist" not in doc:
        return require_valid(deterministic_arena(states, q0, actions_a, actions_b, delta, colors, col))
    dist = {
        d: {q: parse_fraction(p) for q, p in entries.items()} for d, entries in doc["dist"].items()
    }
    nature = list(doc.get("nature", list(dist)))
    return require_valid(
        ConcurrentArena(tuple(states), q0, tuple(actions_a), tuple(actions_b), tuple(nature), delta, dist, tuple(colors), col)
    )


def arena_to_dict(arena: ConcurrentArena, dense_col: bool = False) -> dict:
    delta = {
        f"{q},{a},{b}": arena.delta[(q, a, b)]
        for q in arena.states
        for a in arena.actions_a
        for b in arena.actions_b
    }
    if dense_col:
        col = {f"{q},{q2}": arena.color(q, q2) for q in arena.states for q2 in arena.states}
    else:
        col = {f"{q},{q2}": c for (q, q2), c in arena.col.items()}
    return {
        "actions_A": list(arena.actions_a),
        "actions_B": list(arena.actions_b),
        "col": col,
        "colors": list(arena.colors),
        "delta": delta,
        "dist": {
            d: {q: format_fraction(p) for q, p in arena.dist[d].items()} for d in arena.nature
        },
        "nature": list(arena.nature),
        "q0": arena.q0,
        "states": list(arena.states),
    }


def arena_to_json(arena: ConcurrentArena) -> str:
    return json.dumps(arena_to_dict(arena), sort_keys=True)


def arena_from_json(text: str) -> ConcurrentArena:
    return arena_from_dict(json.loads(text))
