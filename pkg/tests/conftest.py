import time

import pytest

_results: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    mark = item.get_closest_marker("criterion")
    start = time.perf_counter()
    yield
    if mark is not None:
        n, title = mark.args
        entry = _results.setdefault(n, {"title": title, "seconds": 0.0, "outcomes": []})
        entry["seconds"] += time.perf_counter() - start


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for n, entry in _results.items():
        if report.nodeid.split("::")[-1].startswith(f"test_criterion_{n}_"):
            entry["outcomes"].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        e = _results[n]
        verdict = "PASS" if e["outcomes"] and all(e["outcomes"]) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict}  {e['title']}  ({e['seconds']:.2f}s)")
