import time
from contextlib import contextmanager

import pytest

_LINES: list[str] = []


@contextmanager
def _record(number: int, title: str, limit: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        elapsed = time.perf_counter() - start
        _LINES.append(f"criterion {number:2d} FAIL  {title} ({elapsed:.2f} s)")
        print(_LINES[-1])
        raise
    elapsed = time.perf_counter() - start
    status = "PASS" if elapsed < limit else "FAIL"
    _LINES.append(f"criterion {number:2d} {status}  {title} ({elapsed:.2f} s, limit {limit:g} s)")
    print(_LINES[-1])
    assert elapsed < limit, f"runtime {elapsed:.2f} s exceeds {limit:g} s"


@pytest.fixture
def criterion():
    """Context manager that times a criterion and logs a PASS/FAIL line."""
    return _record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES):
            terminalreporter.write_line(line)
