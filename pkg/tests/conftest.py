import time

import pytest

_LINES: dict[int, str] = {}


class Criterion:
    def run(self, num, title, limit, body):
        """Run ``body`` (returns a list of problems); record one pass/fail line."""
        t0 = time.perf_counter()
        try:
            problems = list(body())
        except Exception as exc:
            problems = [f"raised {type(exc).__name__}: {exc}"]
            self._record(num, title, False, time.perf_counter() - t0, problems)
            raise
        elapsed = time.perf_counter() - t0
        if elapsed > limit:
            problems.append(f"took {elapsed:.1f}s, limit {limit}s")
        self._record(num, title, not problems, elapsed, problems)
        assert not problems, problems

    @staticmethod
    def _record(num, title, ok, elapsed, problems):
        line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f}s)"
        if problems:
            line += "\n    " + "\n    ".join(str(p) for p in problems[:8])
        _LINES[num] = line
        print(line)


@pytest.fixture
def criterion():
    return Criterion()


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for num in sorted(_LINES):
            terminalreporter.write_line(_LINES[num])
