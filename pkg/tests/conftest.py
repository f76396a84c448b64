import re

import numpy as np
import pytest
from hypothesis import settings

from strengthlab.field import GF

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def pytest_addoption(parser):
    parser.addoption("--long", action="store_true", default=False,
                     help="run exhaustive searches that take minutes")


def pytest_configure(config):
    config.addinivalue_line("markers", "long: exhaustive search, needs --long")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="needs --long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def F5():
    return GF(5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_acceptance: dict[str, tuple[bool, str]] = {}
_recorded_by: dict[str, str] = {}


@pytest.fixture
def criterion(request):
    """record(key, ok, detail) stores one acceptance verdict for the summary."""
    def record(key: str, ok: bool, detail: str) -> bool:
        _acceptance[key] = (bool(ok), detail)
        _recorded_by[request.node.nodeid] = key
        return ok
    return record


def pytest_runtest_logreport(report):
    # a criterion test that crashed before recording still gets a FAIL line
    if report.when == "call" and report.failed and "test_acceptance" in report.nodeid \
            and report.nodeid not in _recorded_by:
        name = report.nodeid.split("::")[-1]
        num = re.match(r"test_c(\d+)", name)
        _acceptance[f"C{num.group(1) if num else 0}?{name}"] = (False, "raised before reporting")


def _order(key: str):
    m = re.match(r"C(\d+)", key)
    return (int(m.group(1)) if m else 0, key)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_acceptance, key=_order):
        ok, detail = _acceptance[key]
        terminalreporter.write_line(f"{key:<5} {'PASS' if ok else 'FAIL'}  {detail}")
