import re

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if m:
        _ACCEPTANCE[int(m.group(1))] = (report.outcome, report.duration, m.group(2))


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion at the end of the run."""
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        outcome, duration, slug = _ACCEPTANCE[n]
        status = "PASS" if outcome == "passed" else outcome.upper()
        label = slug.replace("_", " ")
        terminalreporter.write_line(
            f"criterion {n}: {status} — {label} ({duration:.2f}s)"
        )
