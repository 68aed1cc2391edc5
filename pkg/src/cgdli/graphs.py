"""Small directed-graph helpers shared by the solvers."""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence, TypeVar

N = TypeVar("N", bound=Hashable)


def reachable_from(start: Iterable[N], succ: Mapping[N, Iterable[N]]) -> set[N]:
    seen = set(start)
    stack = list(seen)
    while stack:
        u = stack.pop()
        for v in succ.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def sccs(nodes: Sequence[N], succ: Mapping[N, Iterable[N]]) -> list[list[N]]:
    """Strongly connected components (iterative Tarjan)."""
    index: dict[N, int] = {}
    low: dict[N, int] = {}
    on_stack: set[N] = set()
    stack: list[N] = []
    result: list[list[N]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            u, it = work[-1]
            advanced = False
            for v in it:
                if v not in index:
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack.add(v)
                    work.append((v, iter(succ.get(v, ()))))
                    advanced = True
                    break
                if v in on_stack:
                    low[u] = min(low[u], index[v])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[u])
            if low[u] == index[u]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == u:
                        break
                result.append(comp)
    return result


def cycle_maxima(
    start: Iterable[N], edges: Sequence[tuple[N, N, int]]
) -> set[int]:
    """Priorities p such that a cycle reachable from ``start`` has maximum p."""
    succ: dict[N, list[N]] = {}
    for u, v, _ in edges:
        succ.setdefault(u, []).append(v)
    live = reachable_from(start, succ)
    edges = [e for e in edges if e[0] in live]
    found: set[int] = set()
    for p in sorted({e[2] for e in edges}):
        sub: dict[N, list[N]] = {}
        for u, v, q in edges:
            if q <= p:
                sub.setdefault(u, []).append(v)
        comp_of: dict[N, int] = {}
        for i, comp in enumerate(sccs(list(sub), sub)):
            for u in comp:
                comp_of[u] = i
        if any(
            q == p and comp_of.get(u) is not None and comp_of.get(u) == comp_of.get(v)
            for u, v, q in edges
        ):
            found.add(p)
    return found


def has_cycle_with_max_parity(
    start: Iterable[N], edges: Sequence[tuple[N, N, int]], parity: int
) -> bool:
    return any(p % 2 == parity for p in cycle_maxima(start, edges))
