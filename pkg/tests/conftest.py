import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# (criterion number, summary line), reported at the end of the session
ACCEPTANCE_LINES = []


def record(number, name, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] C{number} {name}: {detail}"
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
