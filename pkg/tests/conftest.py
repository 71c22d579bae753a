"""Shared fixtures and the per-criterion summary for the acceptance suite."""

from __future__ import annotations

import pytest

from critideals.treegraph import Tree, enumerate_labeled_trees

# criterion number -> list of (label, ok, detail); filled by test_acceptance
CRITERIA: dict[int, list[tuple[str, bool, str]]] = {}


def record_criterion(number: int, label: str, ok: bool, detail: str = "") -> None:
    CRITERIA.setdefault(number, []).append((label, ok, detail))
    print(f"criterion {number} [{label}]: {'PASS' if ok else 'FAIL'} {detail}".rstrip())


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        parts = CRITERIA[number]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{label}: {'pass' if good else 'fail'}{' (' + d + ')' if d else ''}"
                           for label, good, d in parts)
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture(scope="session")
def caterpillar() -> Tree:
    return Tree(9, [(1, 2), (2, 3), (2, 4), (2, 5), (5, 6), (6, 7), (6, 8), (6, 9)])


def small_trees(max_n: int, min_n: int = 2):
    for n in range(min_n, max_n + 1):
        yield from enumerate_labeled_trees(n)
