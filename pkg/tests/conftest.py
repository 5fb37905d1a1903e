import os
from pathlib import Path

import pytest

from cylcasimir.specfun import build_zero_table

FULL = 500


@pytest.fixture(scope="session")
def cache_dir(request):
    env = os.environ.get("CYLCASIMIR_CACHE_DIR")
    if env:
        path = Path(env)
        path.mkdir(parents=True, exist_ok=True)
        return path
    return Path(request.config.cache.mkdir("cylcasimir"))


@pytest.fixture(scope="session")
def zeros_full(cache_dir):
    """500 x 500 zero table, persisted between sessions."""
    return build_zero_table(FULL, FULL, cache_dir / "bessel_zeros.bin")


@pytest.fixture(scope="session")
def zeros_small(zeros_full):
    return zeros_full.sliced(60, 60)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "LEDGER", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
