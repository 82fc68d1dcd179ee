"""Collects outcomes of tests marked ``criterion`` and prints one line per criterion."""
import pytest

_OUTCOMES: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (rep.when != "call" and rep.passed):
        return
    number, title = marker.args
    entry = _OUTCOMES.setdefault(number, {"title": title, "passed": 0, "failed": 0, "details": []})
    if rep.passed:
        entry["passed"] += 1
    elif rep.skipped:
        return
    else:
        entry["failed"] += 1
    if rep.when == "call":
        entry["details"] += [v for k, v in item.user_properties if k == "detail"]


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_OUTCOMES):
        e = _OUTCOMES[number]
        status = "PASS" if e["failed"] == 0 and e["passed"] > 0 else "FAIL"
        runs = e["passed"] + e["failed"]
        detail = "; ".join(e["details"]) if e["details"] else f"{e['passed']}/{runs} cases passed"
        terminalreporter.write_line(f"{status} criterion {number} ({e['title']}): {detail}")
