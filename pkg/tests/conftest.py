import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.fixture
def criterion(request):
    """Record the pass/fail line of the acceptance criterion under test."""
    mark = request.node.get_closest_marker("criterion")
    n, title = mark.args

    def record(ok, detail=""):
        _RESULTS[n] = (title, bool(ok), detail)
        print(f"criterion {n} ({title}): {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        return ok

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark and rep.when == "call":
        n, title = mark.args
        if rep.failed and (n not in _RESULTS or _RESULTS[n][1]):
            _RESULTS[n] = (title, False, "raised: " + str(call.excinfo.value).splitlines()[0] if call.excinfo else "")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(_RESULTS):
        title, ok, detail = _RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
