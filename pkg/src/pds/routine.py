"""Hourly routine profiles for deduced locations, plus the leave-back listing."""

from __future__ import annotations

from dataclasses import dataclass, field

CROSSING = "crossing"
NON_CROSSING = "non_crossing"


def classify_activity(activity, multi_sensor_is_crossing=True) -> str:
    """``crossing`` for activities over two or more sensors, ``non_crossing`` for a single one.

    ``multi_sensor_is_crossing=False`` flips the labels.
    """
    multi = len(activity.distinct_sensors) > 1
    return CROSSING if multi == multi_sensor_is_crossing else NON_CROSSING


def attribute_to_location(activity, locmap):
    sensors = set(activity.distinct_sensors)
    for loc, members in locmap.locations():
        if members and sensors <= members:
            return loc
    return None


@dataclass
class RoutineHistogram:
    bins: dict = field(default_factory=dict)  # location -> 24 x [crossing, non_crossing]
    leaveback_entries: list = field(default_factory=list)
    unattributed: int = 0
    partial_overlap: int = 0

    def total(self, location=None):
        locs = [location] if location else list(self.bins)
        return sum(c + n for loc in locs for c, n in self.bins[loc])

    def rows(self):
        for loc, hours in self.bins.items():
            for h, (c, n) in enumerate(hours):
                yield loc, h, c, n

    def to_dict(self):
        return {
            "locations": {loc: [{"hour": h, CROSSING: c, NON_CROSSING: n}
                                for h, (c, n) in enumerate(hours)]
                          for loc, hours in self.bins.items()},
            "leavebacks": [_lb_row(lb) for lb in self.leaveback_entries],
            "unattributed": self.unattributed,
            "partial_overlap": self.partial_overlap,
        }


def _lb_row(lb):
    return {
        "date": lb.depart_ts.date().isoformat(),
        "depart": lb.depart_ts.strftime("%H:%M:%S"),
        "return": lb.return_ts.strftime("%H:%M:%S"),
        "sensor": lb.sensor_id,
        "seconds": int(lb.seconds) if lb.seconds.is_integer() else round(lb.seconds, 3),
    }


def leaveback_rows(leavebacks):
    return [_lb_row(lb) for lb in sorted(leavebacks, key=lambda lb: lb.depart_ts)]


def hourly_histograms(activities, leavebacks, locmap, multi_sensor_is_crossing=True):
    hist = RoutineHistogram()
    for loc, members in locmap.locations():
        hist.bins[loc] = [[0, 0] for _ in range(24)]
    located = set().union(*(m for _, m in locmap.locations()))
    for act in activities:
        loc = attribute_to_location(act, locmap)
        if loc is None:
            hist.unattributed += 1
            if set(act.distinct_sensors) & located:
                hist.partial_overlap += 1
            continue
        col = 0 if classify_activity(act, multi_sensor_is_crossing) == CROSSING else 1
        hist.bins[loc][act.start_ts.hour][col] += 1
    hist.leaveback_entries = sorted(leavebacks, key=lambda lb: lb.depart_ts)
    return hist
