"""Sequentialization of arenas and objectives, color projections, monitor
products and projection/lifting of color automata."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .arena import ArenaError, ConcurrentArena, require_valid
from .exact import support

KC = "kC"


def fresh(name: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    while name in taken:
        name += "'"
    return name


# ---------------------------------------------------------------------------
# Objectives


@dataclass(frozen=True, eq=False)
class ParityObjective:
    """Max-parity condition: Player A wins iff the largest priority seen
    infinitely often is even."""

    priority: Mapping[str, int]

    def __call__(self, color: str) -> int:
        return self.priority[color]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ParityObjective) and dict(self.priority) == dict(other.priority)

    @property
    def min(self) -> int:
        return min(self.priority.values())

    @property
    def max(self) -> int:
        return max(self.priority.values())

    def check(self, arena: ConcurrentArena) -> None:
        missing = [c for c in arena.colors if c not in self.priority]
        if missing:
            raise ArenaError(f"objective has no priority for colors {missing}")
        negative = [c for c, p in self.priority.items() if p < 0]
        if negative:
            raise ArenaError(f"negative priorities for colors {negative}")

    def wins_a(self, colors: Iterable[str]) -> bool:
        """Whether a cycle over ``colors`` satisfies the condition."""
        return max(self.priority[c] for c in colors) % 2 == 0

    def to_dict(self) -> dict:
        return {"priority": dict(self.priority)}


def objective_from_dict(doc: Mapping) -> ParityObjective:
    raw = doc.get("priority", doc)
    try:
        return ParityObjective({str(c): int(p) for c, p in raw.items()})
    except (TypeError, ValueError, AttributeError) as exc:
        raise ArenaError(f"malformed parity objective: {exc}") from exc


@dataclass(frozen=True, eq=False)
class ColorMonitor:
    """Deterministic complete automaton over colors with a priority per state."""

    states: tuple[str, ...]
    init: str
    alphabet: tuple[str, ...]
    delta: Mapping[tuple[str, str], str]
    priority: Mapping[str, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        missing = [(m, c) for m in self.states for c in self.alphabet if (m, c) not in self.delta]
        if missing:
            raise ArenaError(f"monitor transition missing for {missing[0]}")
        if self.init not in self.states:
            raise ArenaError(f"monitor initial state {self.init!r} unknown")
        if any(m not in self.priority for m in self.states):
            raise ArenaError("monitor priority missing for some state")

    def run(self, word: Iterable[str]) -> str:
        m = self.init
        for c in word:
            m = self.delta[(m, c)]
        return m

    def to_dict(self) -> dict:
        return {
            "alphabet": list(self.alphabet),
            "delta": {f"{m},{c}": v for (m, c), v in self.delta.items()},
            "init": self.init,
            "priority": dict(self.priority),
            "states": list(self.states),
        }


def monitor_from_dict(doc: Mapping) -> ColorMonitor:
    try:
        delta = {}
        for key, v in doc["delta"].items():
            m, c = (p.strip() for p in key.split(","))
            delta[(m, c)] = v
        return ColorMonitor(
            tuple(doc["states"]), doc["init"], tuple(doc["alphabet"]), delta,
            {m: int(p) for m, p in doc["priority"].items()},
        )
    except (KeyError, ValueError, AttributeError) as exc:
        raise ArenaError(f"malformed monitor: {exc}") from exc


def seen_color_monitor(alphabet: Sequence[str], target: str) -> ColorMonitor:
    """Accepts plays in which ``target`` occurs at least once."""
    delta = {}
    for c in alphabet:
        delta[("unseen", c)] = "seen" if c == target else "unseen"
        delta[("seen", c)] = "seen"
    return ColorMonitor(("unseen", "seen"), "unseen", tuple(alphabet), delta, {"unseen": 1, "seen": 2})


def monitor_product(
    arena: ConcurrentArena, monitor: ColorMonitor
) -> tuple[ConcurrentArena, ParityObjective]:
    """Product over the part of Q x monitor-states reachable from the start.

    Colors of the product are monitor states: the edge into (q', m') carries
    m'. Nature states are tagged with their source so that every local
    interaction keeps the shape of the original one.
    """
    missing = [c for c in arena.colors if c not in monitor.alphabet]
    if missing:
        raise ArenaError(f"monitor does not read colors {missing}")
    names: dict[tuple[str, str], str] = {}
    taken: set[str] = set()

    def state_name(q: str, m: str) -> str:
        if (q, m) not in names:
            names[(q, m)] = fresh(f"{q}|{m}", taken)
            taken.add(names[(q, m)])
        return names[(q, m)]

    start = (arena.q0, monitor.init)
    state_name(*start)
    order = [start]
    delta: dict[tuple[str, str, str], str] = {}
    dist: dict[str, dict[str, Fraction]] = {}
    col: dict[tuple[str, str], str] = {}
    nature: list[str] = []
    nature_taken: set[str] = set()
    i = 0
    while i < len(order):
        q, m = order[i]
        i += 1
        src = names[(q, m)]
        local: dict[str, str] = {}
        for a in arena.actions_a:
            for b in arena.actions_b:
                d = arena.delta[(q, a, b)]
                if d not in local:
                    pd = fresh(f"{src}#{d}", nature_taken)
                    nature_taken.add(pd)
                    nature.append(pd)
                    local[d] = pd
                    entries: dict[str, Fraction] = {}
                    for q2 in support(arena.dist[d]):
                        m2 = monitor.delta[(m, arena.color(q, q2))]
                        known = (q2, m2) in names
                        dst = state_name(q2, m2)
                        if not known:
                            order.append((q2, m2))
                        entries[dst] = entries.get(dst, Fraction(0)) + arena.dist[d][q2]
                        col[(src, dst)] = m2
                    dist[pd] = entries
                delta[(src, a, b)] = local[d]
    product_arena = ConcurrentArena(
        states=tuple(names[p] for p in order),
        q0=names[start],
        actions_a=arena.actions_a,
        actions_b=arena.actions_b,
        nature=tuple(nature),
        delta=delta,
        dist=dist,
        colors=monitor.states,
        col=col,
    )
    return require_valid(product_arena), ParityObjective(dict(monitor.priority))


# ---------------------------------------------------------------------------
# Sequentialization


@dataclass(frozen=True, eq=False)
class TurnBasedArena:
    """Seq(C): A moves at original states, B at the intermediate states (q, a)."""

    arena: ConcurrentArena
    source: ConcurrentArena
    v_a: tuple[str, ...]
    v_b: Mapping[tuple[str, str], str]
    kc: str
    origin: Mapping[str, tuple[str, str]] = field(default_factory=dict)

    def is_b_state(self, v: str) -> bool:
        return v in self.origin


def sequentialize(arena: ConcurrentArena) -> TurnBasedArena:
    require_valid(arena)
    state_taken = set(arena.states)
    nature_taken = set(arena.nature)
    kc = fresh(KC, arena.colors)
    v_b: dict[tuple[str, str], str] = {}
    seq_nature: dict[tuple[str, str], str] = {}
    for q in arena.states:
        for a in arena.actions_a:
            v_b[(q, a)] = fresh(f"({q};{a})", state_taken)
            state_taken.add(v_b[(q, a)])
            seq_nature[(q, a)] = fresh(f"({q};{a})", nature_taken)
            nature_taken.add(seq_nature[(q, a)])
    delta: dict[tuple[str, str, str], str] = {}
    dist: dict[str, Mapping[str, Fraction]] = dict(arena.dist)
    col: dict[tuple[str, str], str] = {}
    for q in arena.states:
        for a in arena.actions_a:
            vb = v_b[(q, a)]
            for b in arena.actions_b:
                delta[(q, a, b)] = seq_nature[(q, a)]
            dist[seq_nature[(q, a)]] = {vb: Fraction(1)}
            col[(q, vb)] = kc
            for a2 in arena.actions_a:
                for b in arena.actions_b:
                    delta[(vb, a2, b)] = arena.delta[(q, a, b)]
            for q2 in arena.states:
                col[(vb, q2)] = arena.color(q, q2)
    seq_arena = ConcurrentArena(
        states=arena.states + tuple(v_b.values()),
        q0=arena.q0,
        actions_a=arena.actions_a,
        actions_b=arena.actions_b,
        nature=arena.nature + tuple(seq_nature.values()),
        delta=delta,
        dist=dist,
        colors=(kc,) + arena.colors,
        col=col,
    )
    return TurnBasedArena(
        arena=seq_arena,
        source=arena,
        v_a=arena.states,
        v_b=v_b,
        kc=kc,
        origin={v: k for k, v in v_b.items()},
    )


def seq_objective(obj: ParityObjective, kc: str = KC, m: int | None = None) -> ParityObjective:
    """Extend ``obj`` to the fresh color with priority m-1.

    When m is 0 every priority is first raised by 2, which keeps the parity of
    each priority and the order between them.
    """
    low = obj.min
    if m is None:
        m = low
    if low < m:
        raise ArenaError(f"objective uses priority {low} below m={m}")
    prio = dict(obj.priority)
    if kc in prio:
        raise ArenaError(f"color {kc!r} already has a priority")
    if m == 0:
        prio = {c: p + 2 for c, p in prio.items()}
        m = 2
    prio[kc] = m - 1
    return ParityObjective(prio)


def project_colors(word: Iterable[str], kc: str = KC) -> list[str]:
    return [c for c in word if c != kc]


def extend_rho_kc(word: Iterable[str], kc: str = KC) -> list[str]:
    out: list[str] = []
    for c in word:
        out.extend((kc, c))
    return out


def project_path(path: Iterable[str], seq: TurnBasedArena) -> list[str]:
    return [v for v in path if not seq.is_b_state(v)]


def path_colors(arena: ConcurrentArena, path: Sequence[str]) -> list[str]:
    return [arena.color(path[i], path[i + 1]) for i in range(len(path) - 1)]


# ---------------------------------------------------------------------------
# Color automata


@dataclass(frozen=True, eq=False)
class ColorNFA:
    """Finite automaton over colors; a ``None`` label is an epsilon move."""

    states: tuple[str, ...]
    initial: frozenset[str]
    accepting: frozenset[str]
    transitions: tuple[tuple[str, str | None, str], ...]
    alphabet: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", tuple(tuple(t) for t in self.transitions))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        known = set(self.states)
        for src, label, dst in self.transitions:
            if src not in known or dst not in known:
                raise ArenaError(f"transition {src}->{dst} uses unknown states")
            if label is not None and label not in self.alphabet:
                raise ArenaError(f"transition label {label!r} outside the alphabet")

    def closure(self, current: Iterable[str]) -> frozenset[str]:
        result = set(current)
        stack = list(result)
        while stack:
            s = stack.pop()
            for src, label, dst in self.transitions:
                if src == s and label is None and dst not in result:
                    result.add(dst)
                    stack.append(dst)
        return frozenset(result)

    def step(self, current: Iterable[str], letter: str) -> frozenset[str]:
        current = set(current)
        moved = {dst for src, label, dst in self.transitions if src in current and label == letter}
        return self.closure(moved)

    def accepts(self, word: Iterable[str]) -> bool:
        current = self.closure(self.initial)
        for letter in word:
            current = self.step(current, letter)
            if not current:
                return False
        return bool(current & self.accepting)

    def to_dict(self) -> dict:
        return {
            "accepting": sorted(self.accepting),
            "alphabet": list(self.alphabet),
            "initial": sorted(self.initial),
            "states": list(self.states),
            "transitions": [list(t) for t in self.transitions],
        }


def nfa_from_dict(doc: Mapping) -> ColorNFA:
    return ColorNFA(
        tuple(doc["states"]), frozenset(doc["initial"]), frozenset(doc["accepting"]),
        tuple(tuple(t) for t in doc["transitions"]), tuple(doc["alphabet"]),
    )


def nfa_project(n: ColorNFA, kc: str = KC) -> ColorNFA:
    transitions = tuple((s, None if label == kc else label, d) for s, label, d in n.transitions)
    alphabet = tuple(c for c in n.alphabet if c != kc)
    return ColorNFA(n.states, n.initial, n.accepting, transitions, alphabet)


def nfa_lift(n: ColorNFA, kc: str = KC) -> ColorNFA:
    if kc in n.alphabet:
        raise ArenaError(f"alphabet already contains {kc!r}")
    loops = tuple((s, kc, s) for s in n.states)
    return ColorNFA(n.states, n.initial, n.accepting, n.transitions + loops, n.alphabet + (kc,))


def live_states(n: ColorNFA) -> frozenset[str]:
    """States from which some accepting state is reachable."""
    live = set(n.accepting)
    changed = True
    while changed:
        changed = False
        for src, _, dst in n.transitions:
            if dst in live and src not in live:
                live.add(src)
                changed = True
    return frozenset(live)


def limit_contains(n: ColorNFA, prefix: Sequence[str], cycle: Sequence[str]) -> bool:
    """Whether prefix.cycle^omega has all its finite prefixes among prefixes of L(n)."""
    if not cycle:
        raise ValueError("cycle must be non-empty")
    live = live_states(n)
    current = n.closure(n.initial) & live
    if not current:
        return False
    for letter in prefix:
        current = n.step(current, letter) & live
        if not current:
            return False
    seen: set[frozenset[str]] = set()
    while current not in seen:
        seen.add(current)
        for letter in cycle:
            current = n.step(current, letter) & live
            if not current:
                return False
    return True


def nfa_to_json(n: ColorNFA) -> str:
    return json.dumps(n.to_dict(), sort_keys=True)
