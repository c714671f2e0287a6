from collections import defaultdict

_results = defaultdict(list)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if not marker:
        return
    if hasattr(report, "wasxfail"):
        state = "fail"
    else:
        state = {"passed": "pass", "failed": "fail"}.get(report.outcome, "skip")
    _results[marker].append((state, report.nodeid.split("::")[-1]))


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            item.user_properties.append(("criterion", m.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        checks = _results[n]
        failed = [name for state, name in checks if state == "fail"]
        skipped = [name for state, name in checks if state == "skip"]
        if failed:
            line = f"criterion {n}: FAIL ({len(failed)} of {len(checks)} checks: {', '.join(failed)})"
        elif skipped and len(skipped) == len(checks):
            line = f"criterion {n}: SKIPPED"
        else:
            line = f"criterion {n}: PASS ({len(checks)} checks)"
        terminalreporter.write_line(line)
