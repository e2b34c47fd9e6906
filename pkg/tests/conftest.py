import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

RESULTS = pytest.StashKey[list]()
STARTED = pytest.StashKey[float]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config.stash[RESULTS] = []
    config.stash[STARTED] = time.perf_counter()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        detail = dict(item.user_properties).get("detail", "")
        item.config.stash[RESULTS].append(
            (mark.args[0], mark.args[1], rep.passed, detail, rep.duration)
        )


def pytest_terminal_summary(terminalreporter, config):
    rows = sorted(config.stash[RESULTS])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail, seconds in rows:
        status = "PASS" if ok else "FAIL"
        extra = f"{detail}; " if detail else ""
        terminalreporter.write_line(
            f"[{status}] criterion {number:2d}: {title} ({extra}{seconds:.2f}s)"
        )
    total = time.perf_counter() - config.stash[STARTED]
    terminalreporter.write_line(f"session wall time: {total:.1f}s")
