"""Shared pytest config: acceptance-criteria result lines.

Every test in test_acceptance.py maps to one acceptance criterion; the
terminal summary prints an explicit PASS/FAIL line per criterion so the
outcome is visible without scrolling the full report.
"""


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = {}
    for reports in terminalreporter.stats.values():
        for rep in reports:
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            when = getattr(rep, "when", None)
            if when not in ("setup", "call"):
                continue
            name = nodeid.split("::")[-1]
            if getattr(rep, "failed", False):
                results[name] = "FAIL"
            elif getattr(rep, "passed", False) and when == "call":
                results.setdefault(name, "PASS")
            elif getattr(rep, "skipped", False):
                results.setdefault(name, "SKIP")
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(results):
        terminalreporter.write_line(f"[acceptance] {name}: {results[name]}")
