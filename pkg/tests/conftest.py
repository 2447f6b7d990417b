import pytest

RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[RESULTS] = {}


@pytest.fixture
def record(request):
    """Store (passed, total, failing labels) for a criterion."""
    store = request.config.stash[RESULTS]

    def _record(criterion: int, passed: int, total: int, failing: list[str]):
        store[criterion] = (passed, total, failing)

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(RESULTS, {})
    if not store:
        return
    tr = terminalreporter
    tr.section("acceptance criteria (tolerance: exact equality)")
    for n in sorted(store):
        passed, total, failing = store[n]
        status = "PASS" if passed == total else "FAIL"
        tr.write_line(f"criterion {n:>2}: {status}  {passed}/{total} checks")
        for label in failing:
            tr.write_line(f"              differs: {label}")
