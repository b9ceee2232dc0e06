"""Shared fixtures plus the acceptance-gate terminal summary.

Every test in test_acceptance.py gets one PASS/FAIL line in the terminal
summary so the release criteria can be read off a run at a glance.
"""

import pytest

from cogrelay import NetworkParams, Policy

_ACCEPTANCE: list[tuple[str, str]] = []


@pytest.fixture
def preset_params() -> NetworkParams:
    # The canned-experiment operating point: moderately loaded PU, relay
    # link over twice as good as the direct link.
    return NetworkParams(lambda_p=0.2, lambda_s=0.2, h_pd=0.3, h_ps=0.4, h_sd=0.8)


@pytest.fixture
def reference_policy() -> Policy:
    return Policy(admit=0.6, pick_own=0.5)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _ACCEPTANCE.append((name, "PASS" if report.passed else "FAIL"))
    elif report.when == "setup" and (report.failed or report.skipped):
        _ACCEPTANCE.append((name, "FAIL" if report.failed else "SKIP"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance summary")
    for name, word in _ACCEPTANCE:
        terminalreporter.write_line(f"[ACCEPTANCE] {word} {name}")
