import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_START = time.monotonic()
_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_collection_modifyitems(session, config, items):
    # acceptance checks run last so the timing criterion sees the whole suite
    items.sort(key=lambda it: it.nodeid.startswith("tests/test_acceptance.py"))


@pytest.fixture
def elapsed():
    return lambda: time.monotonic() - _START


@pytest.fixture
def acceptance():
    """Record one pass/fail line for an acceptance criterion."""

    def record(key: str, ok: bool, detail: str):
        _ACCEPTANCE[key] = (bool(ok), detail)
        print(f"{key} {'PASS' if ok else 'FAIL'}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k[2:])):
        ok, detail = _ACCEPTANCE[key]
        tr.write_line(f"{key:<5} {'PASS' if ok else 'FAIL'}  {detail}")
    tr.write_line(f"suite wall time {time.monotonic() - _START:.1f} s")
