"""Keeps this directory importable so tests can share oracle helpers."""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # repeat the acceptance verdict lines where they cannot be missed
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", []) if module else []
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
