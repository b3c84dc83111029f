import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from ltlfrag import _kernels

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

KERNEL_FUNCTIONS = ("tableau_delta", "loop_product_search", "ef_tables")


@pytest.fixture(params=sorted(_kernels.backends()))
def backend(request, monkeypatch):
    """Run the test once per available kernel implementation."""
    impl = _kernels.backends()[request.param]
    for name in KERNEL_FUNCTIONS:
        monkeypatch.setattr(_kernels, name, getattr(impl, name))
    return request.param


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "SUMMARY", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
