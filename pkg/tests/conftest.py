"""Shared pytest hooks: echo acceptance verdict lines after the run."""

ACCEPTANCE_LINES = []


def record_acceptance_line(line):
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
