import pytest

from cgdli.acceptance import CRITERIA

REPORT: list[str] = []


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{k}" for k in range(1, len(CRITERIA) + 1)])
def test_criterion(check):
    result = check(0)
    line = result.line()
    REPORT.append(line)
    print(line)
    assert result.passed, result.detail
    assert result.in_time, f"took {result.seconds:.2f}s, limit {result.limit:g}s"
