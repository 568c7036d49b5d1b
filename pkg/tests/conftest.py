"""Shared pytest wiring.

The acceptance tests register one line per criterion; the terminal-summary
hook prints them after the run, outside stdout capture, so every `pytest`
invocation ends with the full pass/fail scoreboard.
"""

ACCEPTANCE_LINES = []


def record_criterion(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
