import pytest

_LINES: list[tuple[int, str]] = []


@pytest.fixture
def acceptance_log():
    """Record one ``PASS``/``FAIL`` line per acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str) -> bool:
        _LINES.append((number, f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} -- {detail}"))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_LINES):
        terminalreporter.write_line(line)
