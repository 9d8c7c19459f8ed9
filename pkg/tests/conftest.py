import pytest

_criterion_lines = []


@pytest.fixture
def criterion_report():
    """Collects one pass/fail line per acceptance criterion; the lines
    are printed in the terminal summary whether or not the test passed."""

    def record(line: str):
        _criterion_lines.append(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)
