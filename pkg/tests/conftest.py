import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# one PASS/FAIL line per acceptance criterion, filled by test_acceptance.py
acceptance_verdicts: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_verdicts:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_verdicts:
            terminalreporter.write_line(line)
