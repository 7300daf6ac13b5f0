from __future__ import annotations

from collections import defaultdict

import pytest

_RESULTS: dict[int, list[tuple[bool, str]]] = defaultdict(list)


@pytest.fixture
def criterion():
    """``criterion(number, ok, detail)`` records one check and prints it."""

    def record(number: int, ok: bool, detail: str) -> bool:
        _RESULTS[number].append((bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        checks = _RESULTS[number]
        ok = all(c for c, _ in checks)
        detail = "; ".join(d for _, d in checks)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
