import time
from contextlib import contextmanager

import pytest

_RESULTS: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Context manager timing one acceptance criterion and recording its outcome."""

    @contextmanager
    def run(number: int, title: str, limit: float):
        t0 = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - t0
            within = elapsed < limit
            status = "PASS" if ok and within else "FAIL"
            note = "" if within else " (time limit exceeded)"
            line = f"criterion {number:2d} {status}  {title}  {elapsed:.2f}s / {limit:g}s{note}"
            _RESULTS[number] = line
            print(line)
        assert within, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"

    return run


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_RESULTS):
            terminalreporter.write_line(_RESULTS[number])
