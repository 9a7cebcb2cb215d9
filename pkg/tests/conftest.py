import pytest

_LINES = {}


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion."""

    def record(name, ok, detail=""):
        _LINES[name] = f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip()
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(_LINES, key=lambda k: int(k.split()[0][1:]) if k[0] == "C" else 99):
            terminalreporter.write_line(_LINES[key])
