"""Shared fixtures; collects the acceptance verdicts for the terminal summary."""
from __future__ import annotations

import pytest

VERDICTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def report():
    """``report(n, ok, detail)`` records and prints one line, then returns ``ok``."""

    def _report(n: int, ok: bool, detail: str) -> bool:
        ok = bool(ok)
        VERDICTS[n] = (ok, detail)
        print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(VERDICTS):
        ok, detail = VERDICTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
