"""Play semantics: lassos of finite-memory profiles, cylinder probabilities,
exact Markov-chain values, brute-force game values and winning certificates."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Mapping, Sequence

from .arena import ArenaError, ConcurrentArena
from .exact import solve_linear, support
from .gameform import Player
from .graphs import has_cycle_with_max_parity, reachable_from, sccs
from .strategy import FiniteStrategy, seq_strategy
from .transform import ParityObjective, TurnBasedArena, path_colors

Path = tuple[str, ...]
StateStrategy = Callable[[Path], Mapping[str, Fraction]]
Profile = Mapping[str, str]

DEFAULT_CAP = 2**20


class CapExceeded(OverflowError):
    pass


# ---------------------------------------------------------------------------
# Deterministic outcomes


@dataclass(frozen=True)
class Lasso:
    prefix: tuple[str, ...]
    cycle: tuple[str, ...]


@dataclass(frozen=True)
class LassoOutcome:
    lasso: Lasso
    prefix_colors: tuple[str, ...]
    cycle_colors: tuple[str, ...]
    max_priority: int | None


def outcome_lasso(
    arena: ConcurrentArena,
    s_a: FiniteStrategy,
    s_b: FiniteStrategy,
    obj: ParityObjective | None = None,
) -> LassoOutcome:
    """The unique play of a deterministic arena under two finite-memory strategies."""
    node = (arena.q0, s_a.skeleton.m_init, s_b.skeleton.m_init)
    position: dict[tuple[str, str, str], int] = {}
    nodes: list[tuple[str, str, str]] = []
    colors: list[str] = []
    while node not in position:
        position[node] = len(nodes)
        nodes.append(node)
        q, ma, mb = node
        q2 = arena.target(q, s_a.action(ma, q), s_b.action(mb, q))
        c = arena.color(q, q2)
        colors.append(c)
        node = (q2, s_a.skeleton.update(ma, c), s_b.skeleton.update(mb, c))
    j = position[node]
    lasso = Lasso(tuple(n[0] for n in nodes[:j]), tuple(n[0] for n in nodes[j:]))
    cycle_colors = tuple(colors[j:])
    top = max(obj(c) for c in cycle_colors) if obj is not None else None
    return LassoOutcome(lasso, tuple(colors[:j]), cycle_colors, top)


# ---------------------------------------------------------------------------
# State strategies and cylinder probabilities


def state_strategy(s: FiniteStrategy, arena: ConcurrentArena) -> StateStrategy:
    """View a color strategy as a (Dirac) state strategy."""

    @lru_cache(maxsize=None)
    def play(path: Path) -> Mapping[str, Fraction]:
        return {s.play(path_colors(arena, path), path[-1]): Fraction(1)}

    return play


def positional_state_strategy(profile: Profile, default: str) -> StateStrategy:
    def play(path: Path) -> Mapping[str, Fraction]:
        return {profile.get(path[-1], default): Fraction(1)}

    return play


def random_state_strategy(actions: Sequence[str], seed: int, denominator: int = 6) -> StateStrategy:
    """A history-dependent randomized strategy, reproducible from ``seed``.

    Each path gets its own distribution with probabilities in 1/denominator.
    """

    @lru_cache(maxsize=None)
    def play(path: Path) -> Mapping[str, Fraction]:
        rng = random.Random(f"{seed}|{'/'.join(path)}")
        weights = [rng.randint(0, denominator) for _ in actions]
        if sum(weights) == 0:
            weights[rng.randrange(len(actions))] = 1
        total = sum(weights)
        return {a: Fraction(w, total) for a, w in zip(actions, weights) if w}

    return play


def nabla(
    arena: ConcurrentArena, s_a: StateStrategy, s_b: StateStrategy, path: Path
) -> dict[str, Fraction]:
    """Distribution over nature states chosen after ``path``."""
    q = path[-1]
    out: dict[str, Fraction] = {}
    da, db = s_a(path), s_b(path)
    for a, pa in da.items():
        if pa == 0:
            continue
        for b, pb in db.items():
            if pb == 0:
                continue
            d = arena.delta[(q, a, b)]
            out[d] = out.get(d, Fraction(0)) + pa * pb
    return out


def delta_dist(
    arena: ConcurrentArena, s_a: StateStrategy, s_b: StateStrategy, path: Path
) -> dict[str, Fraction]:
    """Distribution over the next state after ``path``."""
    out: dict[str, Fraction] = {}
    for d, pd in nabla(arena, s_a, s_b, path).items():
        for q, pq in arena.dist[d].items():
            if pq:
                out[q] = out.get(q, Fraction(0)) + pd * pq
    return out


@dataclass(frozen=True)
class CylinderProb:
    path: tuple[str, ...]
    probability: Fraction


def cylinder_prob(
    arena: ConcurrentArena, s_a: StateStrategy, s_b: StateStrategy, path: Sequence[str]
) -> CylinderProb:
    path = tuple(path)
    if not path or path[0] != arena.q0:
        return CylinderProb(path, Fraction(0))
    p = Fraction(1)
    for i in range(1, len(path)):
        p *= delta_dist(arena, s_a, s_b, path[:i]).get(path[i], Fraction(0))
        if p == 0:
            break
    return CylinderProb(path, p)


# ---------------------------------------------------------------------------
# Markov-chain values of positional profiles


def _chain(arena: ConcurrentArena, prof_a: Profile, prof_b: Profile) -> dict[str, dict[str, Fraction]]:
    da, db = arena.actions_a[0], arena.actions_b[0]
    chain: dict[str, dict[str, Fraction]] = {}
    stack = [arena.q0]
    while stack:
        q = stack.pop()
        if q in chain:
            continue
        step = arena.step(q, prof_a.get(q, da), prof_b.get(q, db))
        chain[q] = {q2: p for q2, p in step.items() if p}
        stack.extend(q2 for q2 in chain[q] if q2 not in chain)
    return chain


def mc_value(
    arena: ConcurrentArena, prof_a: Profile, prof_b: Profile, obj: ParityObjective
) -> Fraction:
    """Probability that Player A wins from q0 when both play positionally."""
    chain = _chain(arena, prof_a, prof_b)
    if all(len(nxt) == 1 for nxt in chain.values()):
        q, seen, colors = arena.q0, {}, []
        while q not in seen:
            seen[q] = len(colors)
            (q2,) = chain[q]
            colors.append(arena.color(q, q2))
            q = q2
        return Fraction(1) if obj.wins_a(colors[seen[q]:]) else Fraction(0)

    nodes = list(chain)
    good: set[str] = set()
    for comp in sccs(nodes, chain):
        members = set(comp)
        if any(q2 not in members for q in comp for q2 in chain[q]):
            continue
        inner = [arena.color(q, q2) for q in comp for q2 in chain[q]]
        if obj.wins_a(inner):
            good |= members
    if not good:
        return Fraction(0)
    pred: dict[str, list[str]] = {}
    for q, nxt in chain.items():
        for q2 in nxt:
            pred.setdefault(q2, []).append(q)
    can_reach = reachable_from(good, pred)
    if arena.q0 in good:
        return Fraction(1)
    if arena.q0 not in can_reach:
        return Fraction(0)
    unknown = [q for q in nodes if q in can_reach and q not in good]
    index = {q: i for i, q in enumerate(unknown)}
    n = len(unknown)
    matrix = [[Fraction(0)] * n for _ in range(n)]
    rhs = [Fraction(0)] * n
    for q in unknown:
        i = index[q]
        matrix[i][i] += 1
        for q2, p in chain[q].items():
            if q2 in good:
                rhs[i] += p
            elif q2 in index:
                matrix[i][index[q2]] -= p
    return solve_linear(matrix, rhs)[index[arena.q0]]


# ---------------------------------------------------------------------------
# Brute-force values over positional profiles


def relevant_choices(arena: ConcurrentArena, player: Player) -> dict[str, list[str]]:
    """Per reachable state, one representative action per distinct behaviour."""
    out: dict[str, list[str]] = {}
    for q in arena.reachable():
        groups: dict[tuple[str, ...], str] = {}
        if player == "A":
            for a in arena.actions_a:
                groups.setdefault(tuple(arena.delta[(q, a, b)] for b in arena.actions_b), a)
        else:
            for b in arena.actions_b:
                groups.setdefault(tuple(arena.delta[(q, a, b)] for a in arena.actions_a), b)
        out[q] = list(groups.values())
    return out


def positional_profiles(arena: ConcurrentArena, player: Player) -> list[dict[str, str]]:
    choices = relevant_choices(arena, player)
    states = list(choices)
    return [dict(zip(states, combo)) for combo in product(*(choices[q] for q in states))]


def profile_count(arena: ConcurrentArena) -> int:
    total = 1
    for player in ("A", "B"):
        for options in relevant_choices(arena, player).values():
            total *= len(options)
    return total


@dataclass(frozen=True)
class ValueReport:
    maximin: Fraction
    minimax: Fraction
    maximin_profile: tuple[dict[str, str], dict[str, str]]
    minimax_profile: tuple[dict[str, str], dict[str, str]]

    @property
    def equal(self) -> bool:
        return self.maximin == self.minimax

    @property
    def value(self) -> Fraction | None:
        return self.maximin if self.equal else None

    def to_dict(self) -> dict:
        return {
            "equal": self.equal,
            "maximin": str(self.maximin),
            "maximin_profile": {"A": self.maximin_profile[0], "B": self.maximin_profile[1]},
            "minimax": str(self.minimax),
            "minimax_profile": {"A": self.minimax_profile[0], "B": self.minimax_profile[1]},
            "value": None if self.value is None else str(self.value),
        }


def bruteforce_value(
    arena: ConcurrentArena, obj: ParityObjective, cap: int = DEFAULT_CAP
) -> ValueReport:
    """Maximin and minimax over positional deterministic profiles.

    Loops are cut short once a candidate can no longer beat the best value
    found so far; the reported values are exact.
    """
    obj.check(arena)
    count = profile_count(arena)
    if count > cap:
        raise CapExceeded(f"{count} positional profiles exceed the cap {cap}")
    pa_list = positional_profiles(arena, "A")
    pb_list = positional_profiles(arena, "B")
    cache: dict[tuple[int, int], Fraction] = {}

    def val(i: int, j: int) -> Fraction:
        key = (i, j)
        if key not in cache:
            cache[key] = mc_value(arena, pa_list[i], pb_list[j], obj)
        return cache[key]

    best_low, low_prof = Fraction(-1), (0, 0)
    for i in range(len(pa_list)):
        cur, arg = Fraction(2), 0
        for j in range(len(pb_list)):
            v = val(i, j)
            if v < cur:
                cur, arg = v, j
            if cur <= best_low:
                break
        if cur > best_low:
            best_low, low_prof = cur, (i, arg)
            if best_low == 1:
                break

    best_high, high_prof = Fraction(2), (0, 0)
    for j in range(len(pb_list)):
        cur, arg = Fraction(-1), 0
        for i in range(len(pa_list)):
            v = val(i, j)
            if v > cur:
                cur, arg = v, i
            if cur >= best_high:
                break
        if cur < best_high:
            best_high, high_prof = cur, (arg, j)
            if best_high == 0:
                break

    return ValueReport(
        best_low,
        best_high,
        (pa_list[low_prof[0]], pb_list[low_prof[1]]),
        (pa_list[high_prof[0]], pb_list[high_prof[1]]),
    )


# ---------------------------------------------------------------------------
# Winning certificates


def strategy_product_edges(
    arena: ConcurrentArena, s: FiniteStrategy, obj: ParityObjective
) -> tuple[tuple[str, str], list[tuple[tuple[str, str], tuple[str, str], int]]]:
    """Graph of (state, memory) pairs reachable when ``s`` is fixed and the
    opponent (and Nature) choose freely."""
    start = (arena.q0, s.skeleton.m_init)
    opp = arena.actions_b if s.player == "A" else arena.actions_a
    edges = []
    seen, stack = {start}, [start]
    while stack:
        q, m = stack.pop()
        mine = s.action(m, q)
        targets: set[str] = set()
        for o in opp:
            a, b = (mine, o) if s.player == "A" else (o, mine)
            targets.update(support(arena.step(q, a, b)))
        for q2 in sorted(targets):
            c = arena.color(q, q2)
            nxt = (q2, s.skeleton.update(m, c))
            edges.append(((q, m), nxt, obj(c)))
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return start, edges


def certify_winning(arena: ConcurrentArena, s: FiniteStrategy, obj: ParityObjective) -> bool:
    """Whether every play consistent with ``s`` satisfies the player's side of ``obj``."""
    s.check(arena)
    obj.check(arena)
    start, edges = strategy_product_edges(arena, s, obj)
    bad_parity = 1 if s.player == "A" else 0
    return not has_cycle_with_max_parity([start], edges, bad_parity)


def is_compatible(arena: ConcurrentArena, s: FiniteStrategy, path: Sequence[str]) -> bool:
    """Whether ``path`` can occur when ``s`` is followed."""
    if not path or path[0] != arena.q0:
        return False
    opp = arena.actions_b if s.player == "A" else arena.actions_a
    m = s.skeleton.m_init
    for i in range(len(path) - 1):
        q, q2 = path[i], path[i + 1]
        mine = s.action(m, q)
        pairs = [(mine, o) if s.player == "A" else (o, mine) for o in opp]
        if not any(arena.step(q, a, b).get(q2, 0) > 0 for a, b in pairs):
            return False
        m = s.skeleton.update(m, arena.color(q, q2))
    return True


# ---------------------------------------------------------------------------
# Cylinder probabilities through sequentialization


class Preimages:
    """Positive-probability paths of Seq(C) projecting onto a path of C and
    ending in an original state, with their cylinder probabilities."""

    def __init__(self, seq: TurnBasedArena, sigma_a: StateStrategy, sigma_b: StateStrategy):
        self.seq = seq
        self.sigma_a = sigma_a
        self.sigma_b = sigma_b
        self._cache: dict[Path, dict[Path, Fraction]] = {}

    def of(self, path: Path) -> dict[Path, Fraction]:
        if path in self._cache:
            return self._cache[path]
        arena = self.seq.arena
        if len(path) == 1:
            result = {path: Fraction(1)} if path[0] == arena.q0 else {}
        else:
            result = {}
            for rho, p in self.of(path[:-1]).items():
                for vb, pb in delta_dist(arena, self.sigma_a, self.sigma_b, rho).items():
                    if not self.seq.is_b_state(vb):
                        raise ArenaError(f"path leaves the alternation at {vb}")
                    rho_b = rho + (vb,)
                    pq = delta_dist(arena, self.sigma_a, self.sigma_b, rho_b).get(path[-1], Fraction(0))
                    if pb * pq:
                        result[rho_b + (path[-1],)] = p * pb * pq
        self._cache[path] = result
        return result

    def probability(self, path: Path) -> Fraction:
        return sum(self.of(path).values(), Fraction(0))


@dataclass
class MatchedPair:
    """Strategies on C together with strategies on Seq(C) meant to induce the
    same cylinder probabilities."""

    s_a: StateStrategy
    s_b: StateStrategy
    sigma_a: StateStrategy
    sigma_b: StateStrategy


def matched_pair_a(
    seq: TurnBasedArena, s_a: FiniteStrategy, sigma_b: StateStrategy
) -> MatchedPair:
    """A plays a color strategy; B's concurrent move replays ``sigma_b``
    after the unique Seq(C) history matching A's choices."""
    arena = seq.source
    sigma_a = state_strategy(seq_strategy(s_a, seq), seq.arena)
    a_play = state_strategy(s_a, arena)

    def lift(path: Path) -> Path:
        rho: list[str] = []
        for i, q in enumerate(path):
            rho.append(q)
            if i < len(path) - 1:
                (a,) = a_play(path[: i + 1])
                rho.append(seq.v_b[(q, a)])
        return tuple(rho)

    @lru_cache(maxsize=None)
    def s_b(path: Path) -> Mapping[str, Fraction]:
        (a,) = a_play(path)
        return sigma_b(lift(path) + (seq.v_b[(path[-1], a)],))

    return MatchedPair(a_play, s_b, sigma_a, sigma_b)


def matched_pair_b(
    seq: TurnBasedArena, s_b: FiniteStrategy, sigma_a: StateStrategy
) -> MatchedPair:
    """B plays a color strategy; A's concurrent move is the average of
    ``sigma_a`` over all Seq(C) histories projecting onto the current path."""
    arena = seq.source
    sigma_b = state_strategy(seq_strategy(s_b, seq), seq.arena)
    b_play = state_strategy(s_b, arena)
    pre = Preimages(seq, sigma_a, sigma_b)

    @lru_cache(maxsize=None)
    def s_a(path: Path) -> Mapping[str, Fraction]:
        weights = pre.of(path)
        total = sum(weights.values(), Fraction(0))
        if total == 0:
            return {arena.actions_a[0]: Fraction(1)}
        mixed: dict[str, Fraction] = {}
        for rho, p in weights.items():
            for a, pa in sigma_a(rho).items():
                mixed[a] = mixed.get(a, Fraction(0)) + p * pa
        return {a: v / total for a, v in mixed.items() if v}

    return MatchedPair(s_a, b_play, sigma_a, sigma_b)


@dataclass(frozen=True)
class SeqProbCheck:
    equal: bool
    paths_checked: int
    mismatch: tuple[Path, Fraction, Fraction] | None = None


def seq_prob_equal(seq: TurnBasedArena, horizon: int, pair: MatchedPair) -> SeqProbCheck:
    """Compare cylinder probabilities in C and of their preimages in Seq(C)
    for every path with at most ``horizon`` transitions."""
    arena = seq.source
    pre = Preimages(seq, pair.sigma_a, pair.sigma_b)
    checked = 0
    stack: list[tuple[Path, Fraction]] = []
    for q in arena.states:
        stack.append(((q,), Fraction(1) if q == arena.q0 else Fraction(0)))
    while stack:
        path, p_c = stack.pop()
        checked += 1
        p_seq = pre.probability(path)
        if p_c != p_seq:
            return SeqProbCheck(False, checked, (path, p_c, p_seq))
        if p_c == 0 or len(path) > horizon:
            continue
        step = delta_dist(arena, pair.s_a, pair.s_b, path)
        for q in arena.states:
            stack.append((path + (q,), p_c * step.get(q, Fraction(0))))
    return SeqProbCheck(True, checked)

