"""Shared test configuration: acceptance criterion reporting."""

_CRITERION_LINES: list[str] = []


def record_criterion(name: str, ok: bool, detail: str) -> None:
    """Collect one pass/fail line per acceptance criterion."""
    _CRITERION_LINES.append(f"[{name}] {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _CRITERION_LINES:
        terminalreporter.write_line(line)
