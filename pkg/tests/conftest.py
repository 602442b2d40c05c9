import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA: list[str] = []


def record(line: str) -> None:
    _CRITERIA.append(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
