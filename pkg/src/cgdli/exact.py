"""Exact rational helpers: parsing, formatting, distributions and a
fraction-free linear solver."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

RationalDist = Mapping[str, Fraction]


def parse_fraction(value: object) -> Fraction:
    """Parse ``"p/q"``, an integer, or a Fraction. Floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise ValueError(f"not a rational: {value!r}")


def format_fraction(value: Fraction) -> str:
    return str(Fraction(value))


def support(dist: RationalDist) -> list[str]:
    return [k for k, p in dist.items() if p != 0]


def is_dirac(dist: RationalDist) -> bool:
    return len(support(dist)) == 1


def dirac(key: str) -> dict[str, Fraction]:
    return {key: Fraction(1)}


def dist_violations(dist: RationalDist) -> list[str]:
    problems = []
    for key, p in dist.items():
        if not isinstance(p, Fraction) and not isinstance(p, int):
            problems.append(f"entry {key!r} is not rational")
        elif p < 0:
            problems.append(f"entry {key!r} is negative")
    total = sum((Fraction(p) for p in dist.values()), Fraction(0))
    if total != 1:
        problems.append(f"sums to {total}")
    return problems


def solve_linear(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve a square non-singular system exactly.

    Rows are scaled to integers, then Bareiss elimination keeps every
    intermediate value integral. Back substitution is done in Fractions.
    """
    n = len(matrix)
    if n == 0:
        return []
    rows: list[list[int]] = []
    for row, b in zip(matrix, rhs):
        entries = [Fraction(x) for x in row] + [Fraction(b)]
        scale = lcm(*(e.denominator for e in entries))
        rows.append([int(e * scale) for e in entries])

    prev = 1
    for k in range(n):
        pivot = next((i for i in range(k, n) if rows[i][k] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular system")
        if pivot != k:
            rows[k], rows[pivot] = rows[pivot], rows[k]
        pk = rows[k][k]
        for i in range(k + 1, n):
            rik = rows[i][k]
            row_i = rows[i]
            row_k = rows[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * pk - rik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk

    solution = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(rows[i][n])
        for j in range(i + 1, n):
            acc -= rows[i][j] * solution[j]
        solution[i] = acc / rows[i][i]
    return solution
