"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

from .events import SensorEvent, SensorLog
from .segmentation import ClockWindow, IndoorActivity, SegmentationParams


def check_log(X) -> SensorLog:
    """Accept a :class:`SensorLog` or any iterable of :class:`SensorEvent`; return a sorted log."""
    if isinstance(X, SensorLog):
        return X if X.is_sorted() else SensorLog.from_events(X.events, X.source_name)
    try:
        events = list(X)
    except TypeError:
        raise TypeError(f"expected a SensorLog or iterable of SensorEvent, got {type(X).__name__}")
    for e in events:
        if not isinstance(e, SensorEvent):
            raise TypeError(f"expected SensorEvent items, got {type(e).__name__}")
    return SensorLog.from_events(events)


def check_activities(X) -> list:
    acts = list(X)
    for a in acts:
        if not isinstance(a, IndoorActivity):
            raise TypeError(f"expected IndoorActivity items, got {type(a).__name__}")
    return acts


def check_window(w) -> ClockWindow:
    if isinstance(w, ClockWindow):
        return w
    if isinstance(w, str):
        return ClockWindow.parse(w)
    raise TypeError(f"expected 'HH:MM-HH:MM' or ClockWindow, got {type(w).__name__}")


def check_ratio(value, name="min_support"):
    value = float(value)
    if not 0 < value < 1:
        raise ValueError(f"{name} must lie strictly between 0 and 1, got {value}")
    return value


def seg_params(x, y, z) -> SegmentationParams:
    return SegmentationParams(float(x), float(y), float(z))
