import functools
import sys

import pytest

from insdel_ldc.encoder import build_code, desk_config


@functools.lru_cache(maxsize=None)
def cached_code(k: int, tau=None, **extra):
    return build_code(desk_config(k, tau=tau, **extra))


@pytest.fixture(scope="session")
def code4():
    return cached_code(4)


@pytest.fixture(scope="session")
def code6():
    # tau capped at 2 and a small base case, so the search recurses
    return cached_code(6, tau=2, C_mult=6)


def pytest_configure(config):
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10_000))


_RESULTS_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one acceptance line: ``acceptance(number, ok, detail)``."""
    lines = request.config.stash.setdefault(_RESULTS_KEY, [])

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_RESULTS_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
