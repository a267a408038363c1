from __future__ import annotations

import time
from contextlib import contextmanager

import pytest

# (criterion, part) -> (status, title, detail, seconds)
_RESULTS: dict[tuple[int, str], tuple[str, str, str, float]] = {}


class CriterionLog:
    """Records one PASS/FAIL outcome per acceptance criterion (or criterion part)."""

    @contextmanager
    def check(self, number: int, title: str, budget_s: float, part: str = "", known: str = ""):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            dt = time.perf_counter() - t0
            detail = known or f"{type(exc).__name__}: {exc}".splitlines()[0]
            self._store(number, part, "FAIL", title, detail, dt)
            raise
        dt = time.perf_counter() - t0
        if dt > budget_s:
            self._store(number, part, "FAIL", title, f"took {dt:.1f} s, budget {budget_s:g} s", dt)
            raise AssertionError(f"criterion {number} exceeded its {budget_s:g} s budget ({dt:.1f} s)")
        self._store(number, part, "PASS", title, "", dt)

    @staticmethod
    def _store(number, part, status, title, detail, dt):
        _RESULTS[(number, part)] = (status, title, detail, dt)
        label = f"{number}{'/' + part if part else ''}"
        print(f"criterion {label}: {status} {title} ({dt:.2f} s){' - ' + detail if detail else ''}")


@pytest.fixture
def criterion() -> CriterionLog:
    return CriterionLog()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted({k[0] for k in _RESULTS}):
        parts = sorted((p, v) for (n, p), v in _RESULTS.items() if n == number)
        status = "PASS" if all(v[0] == "PASS" for _, v in parts) else "FAIL"
        secs = sum(v[3] for _, v in parts)
        title = parts[0][1][1]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title} ({secs:.1f} s)")
        if len(parts) > 1 or status == "FAIL":
            for p, (st, t, detail, dt) in parts:
                name = p or t
                terminalreporter.write_line(f"      {name}: {st}{' - ' + detail if detail else ''}")
