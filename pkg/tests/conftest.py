from datetime import datetime, timedelta
from pathlib import Path

import pytest

from pds.events import SensorEvent, SensorLog

DATA = Path(__file__).parent / "data"
ORIGIN = datetime(2020, 1, 6)


def make_log(points, origin=ORIGIN):
    """``points`` is a list of ``(seconds since origin, sensor id)``."""
    events = [SensorEvent(origin + timedelta(seconds=t), s) for t, s in points]
    return SensorLog.from_events(events)


def read_transactions(name):
    text = (DATA / f"{name}.txt").read_text()
    return [frozenset(line.split()) for line in text.splitlines() if line.strip()]


@pytest.fixture
def demo():
    from pds.simulate import load_plan
    return load_plan("demo")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
