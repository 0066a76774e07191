"""Prints a one-line verdict per acceptance check after the run."""

import re

CRITERIA = {
    "01": "analytic gradients match central differences on every bundled problem",
    "02": "limited-memory solver recovers the least-squares solution to 1e-4",
    "03": "plain evaluate/gradient objects run everywhere; missing methods are named",
    "04": "bench command runs the timing protocol and emits the CSV schema",
    "05": "full evaluation inferred from parts matches the direct value bitwise",
    "06": "full-batch SGD retraces gradient descent bit for bit",
    "07": "seeded stochastic runs repeat exactly and different seeds differ",
    "08": "Rosenbrock valley solved below 1e-8 within 200 iterations",
    "09": "callbacks stop a run immediately with no further objective calls",
    "10": "first Adam step moves each coordinate by about the step size",
    "11": "float32 starting points keep float32 math and still converge",
}

_PATTERN = re.compile(r"test_(\d{2})_")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for key in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(key, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            match = _PATTERN.search(nodeid.rsplit("::", 1)[-1])
            if not match:
                continue
            number = match.group(1)
            passed = key == "passed"
            # A single failing phase marks the criterion failed.
            outcomes[number] = outcomes.get(number, True) and passed
    if not outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number, description in CRITERIA.items():
        if number in outcomes:
            verdict = "PASS" if outcomes[number] else "FAIL"
        else:
            verdict = "NOT RUN"
        terminalreporter.write_line(f"[criterion {number}] {verdict} - {description}")
