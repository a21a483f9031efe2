"""Collects the acceptance-criterion outcomes and prints them after the run."""

import pytest

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def acceptance():
    """``record(number, passed, text)`` stores one criterion line."""

    def record(number: int, passed: bool, text: str) -> None:
        _ACCEPTANCE[number] = (bool(passed), text)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, text = _ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  [{number:2d}] {text}")
    n_pass = sum(p for p, _ in _ACCEPTANCE.values())
    terminalreporter.write_line(f"{n_pass}/{len(_ACCEPTANCE)} acceptance criteria passed")
