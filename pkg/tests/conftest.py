from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

# seeded harness: derandomized, 1000 cases per randomized property
settings.register_profile(
    "artifact",
    max_examples=1000,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("artifact")

# outcomes of hypothesis-driven tests in this session, read by the acceptance suite
PROPERTY_OUTCOMES: dict[str, bool] = {}
ACCEPTANCE_LINES: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "property: hypothesis-driven invariant test")


@pytest.hookimpl(tryfirst=True)
def pytest_collection_modifyitems(session, config, items):
    for item in items:
        if getattr(getattr(item, "obj", None), "is_hypothesis_test", False):
            item.add_marker(pytest.mark.property)
    # acceptance criteria summarise the rest of the session, so they run last
    items.sort(key=lambda it: it.nodeid.startswith("tests/test_acceptance.py") or "test_acceptance.py" in it.nodeid)


def pytest_runtest_logreport(report):
    if "property" not in report.keywords:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        PROPERTY_OUTCOMES[report.nodeid] = report.passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
