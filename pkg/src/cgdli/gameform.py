"""Game forms, win/lose determinacy, tree game forms and similarity relations."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Literal, Sequence, Union

Player = Literal["A", "B"]
PLAYERS: tuple[Player, Player] = ("A", "B")
MAX_OUTCOMES = 16


class ValidationError(ValueError):
    """Raised when an input violates a structural invariant."""


def other(player: Player) -> Player:
    return "B" if player == "A" else "A"


@dataclass(frozen=True)
class GameForm:
    """Outcome table indexed by Player A's rows and Player B's columns.

    Outcomes are listed in order of first appearance unless given explicitly;
    the outcome list must be exactly the set of entries used in the table.
    """

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    outcomes: tuple[str, ...]
    table: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cols", tuple(self.cols))
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "table", tuple(tuple(r) for r in self.table))
        if not self.rows or not self.cols:
            raise ValidationError("game form needs at least one row and one column")
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise ValidationError("duplicate action names")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise ValidationError("duplicate outcome names")
        if len(self.table) != len(self.rows):
            raise ValidationError(f"table has {len(self.table)} rows, expected {len(self.rows)}")
        used = set()
        for i, row in enumerate(self.table):
            if len(row) != len(self.cols):
                raise ValidationError(f"table row {i} has {len(row)} entries, expected {len(self.cols)}")
            used.update(row)
        declared = set(self.outcomes)
        if used - declared:
            raise ValidationError(f"table uses undeclared outcomes {sorted(used - declared)}")
        if declared - used:
            raise ValidationError(f"declared outcomes never used: {sorted(declared - used)}")

    @classmethod
    def from_table(
        cls,
        table: Sequence[Sequence[str]],
        rows: Sequence[str] | None = None,
        cols: Sequence[str] | None = None,
    ) -> "GameForm":
        table = [list(r) for r in table]
        if rows is None:
            rows = [f"a{i + 1}" for i in range(len(table))]
        if cols is None:
            cols = [f"b{j + 1}" for j in range(len(table[0]) if table else 0)]
        seen: dict[str, None] = {}
        for r in table:
            for o in r:
                seen.setdefault(o, None)
        return cls(tuple(rows), tuple(cols), tuple(seen), tuple(tuple(r) for r in table))

    def row_entries(self, i: int) -> frozenset[str]:
        return frozenset(self.table[i])

    def col_entries(self, j: int) -> frozenset[str]:
        return frozenset(row[j] for row in self.table)

    def column(self, j: int) -> tuple[str, ...]:
        return tuple(row[j] for row in self.table)

    def transpose_view(self) -> list[tuple[str, ...]]:
        return [self.column(j) for j in range(len(self.cols))]


def check_valuation(form: GameForm, val: Iterable[str]) -> frozenset[str]:
    val = frozenset(val)
    unknown = val - set(form.outcomes)
    if unknown:
        raise ValidationError(f"valuation references unknown outcomes {sorted(unknown)}")
    return val


def winning_strategies(form: GameForm, val: Iterable[str], player: Player) -> tuple[str, ...]:
    """Actions of ``player`` that win whatever the opponent does.

    ``val`` is the set of outcomes winning for Player A. Results follow the
    declared action order.
    """
    val = check_valuation(form, val)
    if player == "A":
        return tuple(a for a, row in zip(form.rows, form.table) if all(o in val for o in row))
    if player == "B":
        return tuple(
            b for j, b in enumerate(form.cols) if all(row[j] not in val for row in form.table)
        )
    raise ValueError(f"unknown player {player!r}")


def is_determined_for(form: GameForm, val: Iterable[str]) -> Player | None:
    val = check_valuation(form, val)
    if winning_strategies(form, val, "A"):
        return "A"
    if winning_strategies(form, val, "B"):
        return "B"
    return None


def valuations(outcomes: Sequence[str]) -> Iterator[frozenset[str]]:
    """All subsets of ``outcomes`` in bitmask order."""
    n = len(outcomes)
    for mask in range(1 << n):
        yield frozenset(outcomes[i] for i in range(n) if mask >> i & 1)


def undetermined_valuation(form: GameForm) -> frozenset[str] | None:
    """First valuation (bitmask order) for which neither player wins, if any."""
    if len(form.outcomes) > MAX_OUTCOMES:
        raise ValidationError(f"more than {MAX_OUTCOMES} outcomes")
    for val in valuations(form.outcomes):
        if is_determined_for(form, val) is None:
            return val
    return None


def is_determined(form: GameForm) -> bool:
    return undetermined_valuation(form) is None


# ---------------------------------------------------------------------------
# Tree game forms


@dataclass(frozen=True)
class Leaf:
    outcome: str


@dataclass(frozen=True)
class Internal:
    owner: Player
    children: tuple["Node", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValidationError("internal tree node needs children")
        if self.owner not in PLAYERS:
            raise ValidationError(f"unknown owner {self.owner!r}")


Node = Union[Leaf, Internal]
# A tree strategy maps node positions (child-index paths) to a child index.
TreeStrategy = tuple[tuple[tuple[int, ...], int], ...]


def tree_depth(node: Node) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(tree_depth(c) for c in node.children)


def tree_outcomes(node: Node) -> list[str]:
    if isinstance(node, Leaf):
        return [node.outcome]
    out: list[str] = []
    for child in node.children:
        for o in tree_outcomes(child):
            if o not in out:
                out.append(o)
    return out


def _complete_strategies(root: Node, player: Player) -> list[TreeStrategy]:
    owned: list[tuple[tuple[int, ...], int]] = []

    def visit(node: Node, pos: tuple[int, ...]) -> None:
        if isinstance(node, Internal):
            if node.owner == player:
                owned.append((pos, len(node.children)))
            for i, child in enumerate(node.children):
                visit(child, pos + (i,))

    visit(root, ())
    return [
        tuple(zip((p for p, _ in owned), choice))
        for choice in product(*(range(k) for _, k in owned))
    ]


def _minimalist_strategies(node: Node, player: Player, pos: tuple[int, ...] = ()) -> list[TreeStrategy]:
    if isinstance(node, Leaf):
        return [()]
    if node.owner == player:
        result: list[TreeStrategy] = []
        for i, child in enumerate(node.children):
            for sub in _minimalist_strategies(child, player, pos + (i,)):
                result.append(((pos, i),) + sub)
        return result
    parts = [_minimalist_strategies(c, player, pos + (i,)) for i, c in enumerate(node.children)]
    return [tuple(x for part in combo for x in part) for combo in product(*parts)]


def play_tree(root: Node, s_a: TreeStrategy, s_b: TreeStrategy) -> str:
    choice = dict(s_a)
    choice.update(s_b)
    node, pos = root, ()
    while isinstance(node, Internal):
        i = choice[pos]
        node, pos = node.children[i], pos + (i,)
    return node.outcome


def tree_strategies(root: Node, player: Player, mode: str) -> list[TreeStrategy]:
    if mode == "complete":
        return _complete_strategies(root, player)
    if mode == "minimalist":
        return _minimalist_strategies(root, player)
    raise ValueError(f"unknown mode {mode!r}")


def tree_to_gameform(root: Node, mode: str = "minimalist") -> GameForm:
    if tree_depth(root) < 1:
        raise ValidationError("tree must have depth at least 1")
    rows = tree_strategies(root, "A", mode)
    cols = tree_strategies(root, "B", mode)
    table = [[play_tree(root, sa, sb) for sb in cols] for sa in rows]
    return GameForm.from_table(
        table,
        rows=[f"a{i + 1}" for i in range(len(rows))],
        cols=[f"b{j + 1}" for j in range(len(cols))],
    )


def two_step_tree(form: GameForm, first: Player) -> Node:
    """``first`` picks one of its actions, then the opponent answers."""
    if first == "A":
        lines = [form.table[i] for i in range(len(form.rows))]
    else:
        lines = form.transpose_view()
    return Internal(first, tuple(Internal(other(first), tuple(Leaf(o) for o in line)) for line in lines))


# ---------------------------------------------------------------------------
# Similarity relations


def _same_outcomes(f: GameForm, g: GameForm) -> None:
    if set(f.outcomes) != set(g.outcomes):
        raise ValidationError("game forms have different outcome sets")


def deduplicate(form: GameForm) -> list[tuple[str, ...]]:
    """Distinct rows, then distinct columns, in first-occurrence order."""
    rows = list(dict.fromkeys(form.table))
    cols = list(dict.fromkeys(tuple(r[j] for r in rows) for j in range(len(form.cols))))
    return [tuple(c[i] for c in cols) for i in range(len(rows))]


def _permutation_equal(m1: list[tuple[str, ...]], m2: list[tuple[str, ...]]) -> bool:
    if len(m1) != len(m2) or len(m1[0]) != len(m2[0]):
        return False
    ncols = len(m1[0])
    cols1 = [tuple(r[j] for r in m1) for j in range(ncols)]
    cols2 = [tuple(r[j] for r in m2) for j in range(ncols)]
    sig1 = [tuple(sorted(c)) for c in cols1]
    sig2 = [tuple(sorted(c)) for c in cols2]
    if sorted(sig1) != sorted(sig2):
        return False
    if sorted(tuple(sorted(r)) for r in m1) != sorted(tuple(sorted(r)) for r in m2):
        return False
    used = [False] * ncols
    assigned: list[int] = []

    def prefix_ok() -> bool:
        k = len(assigned)
        left = sorted(tuple(r[j] for j in range(k)) for r in m1)
        right = sorted(tuple(r[assigned[j]] for j in range(k)) for r in m2)
        return left == right

    def search(j: int) -> bool:
        if j == ncols:
            return sorted(tuple(r[assigned[k]] for k in range(ncols)) for r in m2) == sorted(m1)
        for c in range(ncols):
            if not used[c] and sig2[c] == sig1[j]:
                used[c] = True
                assigned.append(c)
                if prefix_ok() and search(j + 1):
                    return True
                assigned.pop()
                used[c] = False
        return False

    return search(0)


def row_offers(form: GameForm) -> frozenset[frozenset[str]]:
    return frozenset(form.row_entries(i) for i in range(len(form.rows)))


def col_offers(form: GameForm) -> frozenset[frozenset[str]]:
    return frozenset(form.col_entries(j) for j in range(len(form.cols)))


def sim_w_replay(f: GameForm, g: GameForm) -> bool:
    """~_w by replaying every valuation and comparing who has a winning strategy."""
    _same_outcomes(f, g)
    for val in valuations(f.outcomes):
        for player in PLAYERS:
            if bool(winning_strategies(f, val, player)) != bool(winning_strategies(g, val, player)):
                return False
    return True


def _sim_w_subsets(f: GameForm, g: GameForm) -> bool:
    rf, rg, cf, cg = row_offers(f), row_offers(g), col_offers(f), col_offers(g)
    for subset in valuations(f.outcomes):
        if any(r <= subset for r in rf) != any(r <= subset for r in rg):
            return False
        if any(c <= subset for c in cf) != any(c <= subset for c in cg):
            return False
    return True


def sim_check(f: GameForm, g: GameForm, relation: str) -> bool:
    _same_outcomes(f, g)
    if len(f.outcomes) > MAX_OUTCOMES:
        raise ValidationError(f"more than {MAX_OUTCOMES} outcomes")
    if relation == "d":
        return _permutation_equal(deduplicate(f), deduplicate(g))
    if relation == "offer":
        return row_offers(f) == row_offers(g) and col_offers(f) == col_offers(g)
    if relation == "w":
        return _sim_w_subsets(f, g)
    raise ValueError(f"unknown relation {relation!r}")


def _partitions(n: int, most: int) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples of positive integers summing to n, parts <= most."""
    if n == 0:
        yield ()
        return
    for first in range(min(n, most), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def _tree_pool(outcomes: Sequence[str], leaves: int, depth: int, cache: dict) -> list[Node]:
    key = (leaves, depth)
    if key not in cache:
        cache[key] = list(_trees(outcomes, leaves, depth, cache))
    return cache[key]


def _trees(outcomes: Sequence[str], leaves: int, depth: int, cache: dict) -> Iterator[Node]:
    """Trees with exactly ``leaves`` leaves and depth at most ``depth``, one per
    children multiset; inner nodes have at least two children."""
    if leaves == 1:
        yield from (Leaf(o) for o in outcomes)
        return
    if depth == 0:
        return
    for parts in _partitions(leaves, leaves - 1):
        pools = [_tree_pool(outcomes, k, depth - 1, cache) for k in parts]

        def pick(i: int, low: int) -> Iterator[tuple[Node, ...]]:
            if i == len(parts):
                yield ()
                return
            begin = low if i > 0 and parts[i] == parts[i - 1] else 0
            for j in range(begin, len(pools[i])):
                for rest in pick(i + 1, j):
                    yield (pools[i][j],) + rest

        for kids in pick(0, 0):
            for owner in PLAYERS:
                yield Internal(owner, kids)


def find_similar_tree(
    form: GameForm,
    relation: str = "offer",
    max_depth: int = 3,
    max_leaves: int = 8,
    cap: int = 200_000,
) -> Node | None:
    """Bounded search for a tree game form similar to ``form``.

    Trees are tried by increasing number of leaves, up to ``max_leaves``, with
    depth at most ``max_depth``. Child order is not varied since it does not
    affect any of the relations. Returns ``None`` when nothing is found within
    the bound, which is evidence of non-similarity but not a proof.
    """
    outcomes = list(form.outcomes)
    if len(outcomes) == 1:
        return Internal("A", (Leaf(outcomes[0]),))
    cache: dict = {}
    count = 0
    for leaves in range(len(outcomes), max_leaves + 1):
        for tree in _trees(outcomes, leaves, max_depth, cache):
            count += 1
            if count > cap:
                raise OverflowError("tree search cap exceeded")
            if set(tree_outcomes(tree)) != set(outcomes):
                continue
            if sim_check(form, tree_to_gameform(tree, "minimalist"), relation):
                return tree
    return None


# ---------------------------------------------------------------------------
# JSON


def form_to_json(form: GameForm) -> str:
    doc = {
        "cols": list(form.cols),
        "outcomes": list(form.outcomes),
        "rows": list(form.rows),
        "table": [list(r) for r in form.table],
    }
    return json.dumps(doc, sort_keys=True)


def form_from_dict(doc: dict) -> GameForm:
    try:
        table = doc["table"]
        rows = doc.get("rows")
        cols = doc.get("cols")
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"game form document missing field: {exc}") from exc
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise ValidationError("game form table must be a list of lists")
    form = GameForm.from_table(table, rows, cols)
    if "outcomes" in doc:
        return GameForm(form.rows, form.cols, tuple(doc["outcomes"]), form.table)
    return form


def form_from_json(text: str) -> GameForm:
    return form_from_dict(json.loads(text))


def tree_from_obj(obj: object) -> Node:
    """Trees in JSON: a string is a leaf, ``{"owner": "A", "children": [...]}`` a node."""
    if isinstance(obj, str):
        return Leaf(obj)
    if isinstance(obj, dict) and "owner" in obj and "children" in obj:
        return Internal(obj["owner"], tuple(tree_from_obj(c) for c in obj["children"]))
    raise ValidationError(f"malformed tree node: {obj!r}")


def tree_to_obj(node: Node) -> object:
    if isinstance(node, Leaf):
        return node.outcome
    return {"owner": node.owner, "children": [tree_to_obj(c) for c in node.children]}


# Named forms used in examples and tests.
MATCHING_PENNIES = GameForm.from_table([["x", "y"], ["y", "x"]])
# Determined 3x3 form. Column b2 offers exactly {x, y}, column b1 only z.
# Offer-similar to a tree but, within the tree search bounds, not
# duplication-similar to any.
I3 = GameForm.from_table([["z", "x", "z"], ["z", "y", "x"], ["z", "y", "y"]])
# Each player can offer exactly {z} or {x, y, z}; determined, yet no tree
# (within the search bounds) offers the same sets.
I4 = GameForm.from_table([["z", "z", "z"], ["z", "x", "y"], ["z", "y", "x"]])
# Cyclic 3x3 form: with z winning for A no row is all-z and every column meets z.
I5 = GameForm.from_table([["x", "y", "z"], ["y", "z", "x"], ["z", "x", "y"]])
