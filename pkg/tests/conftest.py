import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, label): acceptance criterion number k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    k, label = mark.args
    if rep.when == "call" or rep.failed:
        verdict = "PASS" if rep.passed else "FAIL"
        _CRITERIA[k] = (label, verdict, rep.duration)
        line = f"criterion {k}: {verdict} {label} ({rep.duration:.1f}s)"
        reporter = item.config.pluginmanager.get_plugin("terminalreporter")
        if reporter is not None:
            reporter.write_line("")
            reporter.write_line(line)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        label, verdict, seconds = _CRITERIA[k]
        terminalreporter.write_line(f"criterion {k}: {verdict} {label} ({seconds:.1f}s)")
