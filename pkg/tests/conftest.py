import pytest

acceptance_key = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Collects ``(criterion, passed, detail)`` for the end-of-run summary."""
    return request.config.stash.setdefault(acceptance_key, [])


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(acceptance_key, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in sorted(results, key=lambda r: int(r[0].split()[1])):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
