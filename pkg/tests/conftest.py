import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# filled by tests/test_acceptance.py: number -> (passed, title, seconds, detail)
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str, float, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, title, seconds, detail = ACCEPTANCE_RESULTS[number]
        status = "PASS" if passed else "FAIL"
        line = f"{status} criterion {number:2d}: {title} ({seconds:.2f} s)"
        if detail:
            line += f": {detail}"
        terminalreporter.write_line(line)
