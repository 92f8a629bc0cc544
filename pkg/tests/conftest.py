import re
import sys

ACCEPTANCE_PATTERN = re.compile(r"test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    match = ACCEPTANCE_PATTERN.search(report.nodeid)
    if not match:
        return
    verdict = "PASSED" if report.passed else "FAILED"
    sys.stderr.write(f"\n[acceptance] criterion {int(match.group(1))}: {verdict}\n")
