import os
import sys

import pytest

from grskit.catalog import bundled_certificates, bundled_fixtures, fixture_dir

LONG = os.environ.get("GRS_KIT_LONG") == "1"


def pytest_collection_modifyitems(config, items):
    if LONG:
        return
    skip = pytest.mark.skip(reason="long run; set GRS_KIT_LONG=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def fixtures():
    return bundled_fixtures()


@pytest.fixture(scope="session")
def certificates():
    return {c.label: c for c in bundled_certificates()}


@pytest.fixture(scope="session")
def fixture_path():
    return fixture_dir()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
