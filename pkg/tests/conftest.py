import os

import pytest

# one (criterion, passed, detail) entry per acceptance check, filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[cid]
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {cid:>2}: {detail}")


@pytest.fixture(autouse=True)
def _single_thread(monkeypatch):
    # tests that care about threading set it explicitly
    if "RADSOL_THREADS" not in os.environ:
        monkeypatch.setenv("RADSOL_THREADS", "1")
