from __future__ import annotations

RESULTS: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        status, text = RESULTS[num]
        terminalreporter.write_line(f"{status} criterion {num:2d}: {text}")
