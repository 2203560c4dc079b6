import re

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    match = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not match:
        return
    key = (int(match.group(1)), match.group(2).replace("_", " "))
    if report.when == "call" or report.outcome != "passed":
        previous = _ACCEPTANCE.get(key, "PASS")
        _ACCEPTANCE[key] = "FAIL" if report.outcome == "failed" or previous == "FAIL" else (
            "SKIP" if report.outcome == "skipped" else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), verdict in sorted(_ACCEPTANCE.items()):
        terminalreporter.write_line(f"criterion {number:2d}  {verdict}  {title}")
