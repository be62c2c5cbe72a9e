"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

import pytest

ACCEPTANCE_RESULTS: dict[str, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    label = marker.args[0] if marker.args else item.name
    entry = ACCEPTANCE_RESULTS.setdefault(label, {"passed": True, "duration": 0.0, "detail": ""})
    if report.when == "call" or report.failed:
        entry["duration"] += report.duration
        entry["passed"] = entry["passed"] and not report.failed
        details = [v for k, v in item.user_properties if k == "detail"]
        if details:
            entry["detail"] = "; ".join(details)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, entry in sorted(ACCEPTANCE_RESULTS.items(), key=lambda kv: int(kv[0][2:].split()[0])):
        status = "PASS" if entry["passed"] else "FAIL"
        line = f"{status}  {label}  ({entry['duration']:.2f}s)"
        if entry["detail"]:
            line += f"  {entry['detail']}"
        terminalreporter.write_line(line)
