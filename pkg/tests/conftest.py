import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA = {}


def pytest_runtest_logreport(report):
    label = getattr(report, "criterion", None)
    if label is None:
        for key, value in report.user_properties:
            if key == "criterion":
                label = value
    if label is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _CRITERIA.setdefault(label, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcomes in _CRITERIA.items():
        status = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"{status}  {label}")
