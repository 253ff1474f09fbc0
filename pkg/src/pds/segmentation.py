"""Splitting a trigger stream into indoor activities and leave-back activities."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from datetime import time, timedelta

from .events import SensorLog


@dataclass(frozen=True)
class SegmentationParams:
    """Thresholds in seconds.

    ``x_min_duration``: shortest span of an indoor activity.
    ``y_max_gap``: longest silence allowed between two events of one activity.
    ``z_min_absence``: shortest silence read as leaving the home and coming back.
    """

    x_min_duration: float = 40
    y_max_gap: float = 10
    z_min_absence: float = 3600

    def __post_init__(self):
        if not self.y_max_gap > 0:
            raise ValueError("y_max_gap must be positive")
        if not self.x_min_duration > self.y_max_gap:
            raise ValueError("x_min_duration must exceed y_max_gap")
        if not self.z_min_absence > 0:
            raise ValueError("z_min_absence must be positive")


@dataclass(frozen=True)
class IndoorActivity:
    events: tuple

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if not self.events:
            raise ValueError("an activity needs at least one event")

    @property
    def start_ts(self):
        return self.events[0].timestamp

    @property
    def end_ts(self):
        return self.events[-1].timestamp

    @property
    def duration(self) -> float:
        return (self.end_ts - self.start_ts).total_seconds()

    @cached_property
    def distinct_sensors(self) -> tuple:
        return sensor_id_list(self)

    def to_dict(self):
        return {
            "start": _iso(self.start_ts),
            "end": _iso(self.end_ts),
            "sensors": list(self.distinct_sensors),
            "event_count": len(self.events),
        }


@dataclass(frozen=True)
class LeaveBackActivity:
    sensor_id: str
    depart_ts: object
    return_ts: object

    @property
    def seconds(self) -> float:
        return (self.return_ts - self.depart_ts).total_seconds()

    def to_dict(self):
        return {
            "sensor": self.sensor_id,
            "depart": _iso(self.depart_ts),
            "return": _iso(self.return_ts),
            "seconds": _num(self.seconds),
        }


@dataclass(frozen=True)
class ClockWindow:
    """Half-open time-of-day window ``[start_clock, end_clock)`` that does not wrap midnight."""

    start_clock: time
    end_clock: time

    def __post_init__(self):
        if not self.start_clock < self.end_clock:
            raise ValueError("clock window must not be empty or wrap midnight")

    @classmethod
    def parse(cls, text: str):
        """Parse ``HH:MM-HH:MM``."""
        try:
            a, b = text.split("-")
            return cls(time.fromisoformat(a.strip()), time.fromisoformat(b.strip()))
        except ValueError as exc:
            raise ValueError(f"bad clock window {text!r}, expected HH:MM-HH:MM") from exc

    def __contains__(self, ts):
        t = ts.time() if hasattr(ts, "time") else ts
        return self.start_clock <= t < self.end_clock

    def __str__(self):
        return f"{self.start_clock:%H:%M}-{self.end_clock:%H:%M}"


def _iso(ts):
    return ts.isoformat(sep=" ", timespec="milliseconds")


def _num(x):
    return int(x) if float(x).is_integer() else round(x, 3)


def gap_runs(events, y_max_gap) -> list[tuple[int, int]]:
    """Maximal runs ``[i, j)`` in which every adjacent gap is at most ``y_max_gap`` seconds."""
    runs = []
    if not events:
        return runs
    limit = timedelta(seconds=y_max_gap)
    start = 0
    for k in range(1, len(events)):
        if events[k].timestamp - events[k - 1].timestamp > limit:
            runs.append((start, k))
            start = k
    runs.append((start, len(events)))
    return runs


def segment_indoor(log, params: SegmentationParams | None = None) -> list[IndoorActivity]:
    params = params or SegmentationParams()
    events = log.events if isinstance(log, SensorLog) else tuple(log)
    min_span = timedelta(seconds=params.x_min_duration)
    return [
        IndoorActivity(events[i:j])
        for i, j in gap_runs(events, params.y_max_gap)
        if events[j - 1].timestamp - events[i].timestamp >= min_span
    ]


def detect_leaveback(log, params: SegmentationParams | None = None) -> list[LeaveBackActivity]:
    params = params or SegmentationParams()
    events = log.events if isinstance(log, SensorLog) else tuple(log)
    min_absence = timedelta(seconds=params.z_min_absence)
    out = []
    for a, b in zip(events, events[1:]):
        if a.sensor_id == b.sensor_id and b.timestamp - a.timestamp >= min_absence:
            out.append(LeaveBackActivity(a.sensor_id, a.timestamp, b.timestamp))
    return out


def sensor_id_list(activity) -> tuple:
    """Distinct sensor ids of an activity in first-occurrence order."""
    events = activity.events if isinstance(activity, IndoorActivity) else activity
    return tuple(dict.fromkeys(e.sensor_id for e in events))


def filter_by_clock(activities, window: ClockWindow) -> list[IndoorActivity]:
    # membership is decided by start time only
    return [a for a in activities if a.start_ts in window]
