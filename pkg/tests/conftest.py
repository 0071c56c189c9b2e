import pytest


def pytest_addoption(parser):
    parser.addoption("--run-long", action="store_true", default=False,
                     help="run long enumeration checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-long"):
        return
    skip = pytest.mark.skip(reason="long-running; pass --run-long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


# -- acceptance reporting ------------------------------------------------------------

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    k, text = mark.args
    status = _CRITERIA.get(k, (text, None))[1]
    if rep.skipped:
        status = status or "SKIP"
    elif rep.failed:
        status = "FAIL"
    elif rep.when == "call" and status != "FAIL":
        status = "PASS"
    _CRITERIA[k] = (text, status)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        text, status = _CRITERIA[k]
        terminalreporter.write_line(f"{status or 'SKIP'} criterion {k}: {text}")
