"""Shared test configuration: prints one line per acceptance criterion."""

_CRITERIA = {
    "test_criterion_01": "reference-table reproduction (t, c, f, E, T, P direction)",
    "test_criterion_02": "case-1 scalar chain (t' = 3.57, T = 51.69, P = +3.39)",
    "test_criterion_03": "case-2 single server (T = 75, P = +50)",
    "test_criterion_04": "rating/certainty unit behavior (exact)",
    "test_criterion_05": "behavior band sweep at f = 0.5",
    "test_criterion_06": "FAM grid fidelity (people20, people100)",
    "test_criterion_07": "operator algebra over 10,000 random pairs",
    "test_criterion_08": "fuzzy pipeline class and lattice monotonicity",
    "test_criterion_09": "formula parser round-trips",
    "test_criterion_10": "documented certainty-formula inconsistency guard",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            for prefix in _CRITERIA:
                if name.startswith(prefix):
                    ok = status == "passed" and outcomes.get(prefix, True)
                    outcomes[prefix] = ok if status == "passed" else False
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for prefix in sorted(outcomes):
        label = "PASS" if outcomes[prefix] else "FAIL"
        terminalreporter.write_line(f"{label}  {prefix[-2:].lstrip('0').rjust(2)}. {_CRITERIA[prefix]}")
