from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cgdli.exact import dist_violations, format_fraction, is_dirac, parse_fraction, solve_linear, support
from cgdli.oracles import gauss_jordan


def test_parse_fraction_forms():
    assert parse_fraction("2/3") == Fraction(2, 3)
    assert parse_fraction(" 1 ") == Fraction(1)
    assert parse_fraction(4) == Fraction(4)
    assert parse_fraction(Fraction(1, 7)) == Fraction(1, 7)


@pytest.mark.parametrize("bad", [0.5, True, "1/0", "abc", None, [1]])
def test_parse_fraction_rejects(bad):
    with pytest.raises(ValueError):
        parse_fraction(bad)


def test_format_round_trip():
    assert format_fraction(Fraction(6, 9)) == "2/3"
    assert parse_fraction(format_fraction(Fraction(-5, 4))) == Fraction(-5, 4)


def test_distribution_checks():
    assert dist_violations({"a": Fraction(1, 2), "b": Fraction(1, 2)}) == []
    assert any("sums to" in p for p in dist_violations({"a": Fraction(1, 3)}))
    assert any("negative" in p for p in dist_violations({"a": Fraction(-1), "b": Fraction(2)}))
    assert support({"a": Fraction(0), "b": Fraction(1)}) == ["b"]
    assert is_dirac({"a": Fraction(0), "b": Fraction(1)})


def test_solve_small_system():
    # x - y/2 = 1/4, x + y = 1
    x, y = solve_linear([[Fraction(1), Fraction(-1, 2)], [Fraction(1), Fraction(1)]], [Fraction(1, 4), Fraction(1)])
    assert (x, y) == (Fraction(1, 2), Fraction(1, 2))


def test_singular_raises():
    with pytest.raises(ZeroDivisionError):
        solve_linear([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], [Fraction(1), Fraction(2)])


entries = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(entries, min_size=n, max_size=n),
)))
def test_solver_matches_gauss_jordan(system):
    matrix, rhs = system
    # make the matrix diagonally dominant so it is non-singular
    n = len(matrix)
    for i in range(n):
        matrix[i][i] = sum(abs(x) for x in matrix[i]) + 1
    assert solve_linear(matrix, rhs) == gauss_jordan(matrix, rhs)
