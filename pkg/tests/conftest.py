import pytest

CRITERIA = pytest.StashKey[dict]()


@pytest.fixture
def record_criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion, shown in the terminal summary."""
    def record(number: int, ok: bool, text: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {text}"
        request.config.stash.setdefault(CRITERIA, {})[number] = line
        print(line)
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(CRITERIA, {})
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
