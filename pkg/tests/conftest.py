from __future__ import annotations

import pytest

from stratsimp.poset import Poset


@pytest.fixture
def P2() -> Poset:
    return Poset.chain("p0", "p1")


@pytest.fixture
def P3() -> Poset:
    return Poset.chain("p0", "p1", "p2")


def pytest_terminal_summary(terminalreporter):
    from checks import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
