from collections import OrderedDict

import pytest

from rigdesign.catalog import load_config, parse_catalog

_criteria: "OrderedDict[int, dict]" = OrderedDict()


@pytest.fixture(scope="session")
def catalog():
    return parse_catalog("paper_catalog")


@pytest.fixture(scope="session")
def config():
    return load_config("paper_config")


@pytest.fixture
def cam2(catalog):
    return catalog.camera("acA1920-40uc")


@pytest.fixture
def lens6(catalog):
    return catalog.lens("LM6HC")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "passed": 0, "failed": []})
    if rep.failed:
        entry["failed"].append(item.name)
    elif rep.when == "call" and rep.passed:
        entry["passed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        status = "FAIL" if e["failed"] else "PASS"
        line = f"[{status}] criterion {number}: {e['title']} ({e['passed']} checks passed"
        line += f", {len(e['failed'])} failed: {', '.join(e['failed'])})" if e["failed"] else ")"
        terminalreporter.write_line(line)
