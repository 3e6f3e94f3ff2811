"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

import pytest

_results: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.fixture
def note(request):
    """Attach a measurement to the criterion line of the running test."""
    marker = request.node.get_closest_marker("criterion")

    def add(text: str) -> None:
        if marker is not None:
            _results.setdefault(marker.args[0], {"title": marker.args[1], "notes": []})["notes"].append(text)

    return add


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call" and not rep.failed:
        return
    entry = _results.setdefault(marker.args[0], {"title": marker.args[1], "notes": []})
    if rep.failed:
        entry["passed"] = False
    elif rep.when == "call":
        entry.setdefault("passed", True)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        entry = _results[number]
        status = "PASS" if entry.get("passed") else "FAIL"
        line = f"{status} criterion {number}: {entry['title']}"
        if entry["notes"]:
            line += " | " + "; ".join(entry["notes"])
        terminalreporter.write_line(line)
