import random
from datetime import datetime, timedelta

from hypothesis import given, settings
from hypothesis import strategies as st

from pds.events import SensorEvent
from pds.locations import LocationMap
from pds.routine import (
    CROSSING,
    NON_CROSSING,
    attribute_to_location,
    classify_activity,
    hourly_histograms,
    leaveback_rows,
)
from pds.segmentation import IndoorActivity, LeaveBackActivity

LOCS = LocationMap([{"B1", "B2", "B3"}], {"K1", "K2"}, [{"D1"}])


def act(sensors, start=datetime(2009, 10, 16, 8, 30)):
    return IndoorActivity([SensorEvent(start + timedelta(seconds=5 * i), s)
                           for i, s in enumerate(sensors)])


def test_classification_polarity():
    assert classify_activity(act(["B1", "B2", "B1"])) == CROSSING
    assert classify_activity(act(["B1", "B1", "B1"])) == NON_CROSSING
    assert classify_activity(act(["B1", "B2"]), multi_sensor_is_crossing=False) == NON_CROSSING
    assert classify_activity(act(["B1"]), multi_sensor_is_crossing=False) == CROSSING


def test_attribution_is_strict_containment():
    assert attribute_to_location(act(["B1", "B3"]), LOCS) == "bedroom-1"
    assert attribute_to_location(act(["K2"]), LOCS) == "kitchen_dining"
    assert attribute_to_location(act(["B1", "K1"]), LOCS) is None
    assert attribute_to_location(act(["X9"]), LOCS) is None


def test_histogram_bins_by_start_hour():
    acts = [act(["B1", "B2"], datetime(2009, 10, 16, 23, 59, 50)),
            act(["B1"], datetime(2009, 10, 17, 23, 10)),
            act(["K1", "K2"], datetime(2009, 10, 16, 18, 5)),
            act(["B1", "K1"], datetime(2009, 10, 16, 18, 5)),
            act(["X9"], datetime(2009, 10, 16, 18, 5))]
    hist = hourly_histograms(acts, [], LOCS)
    assert hist.bins["bedroom-1"][23] == [1, 1]
    assert hist.bins["kitchen_dining"][18] == [1, 0]
    assert hist.unattributed == 2 and hist.partial_overlap == 1
    assert hist.total() == 3
    rows = list(hist.rows())
    assert len(rows) == 48 and rows[0] == ("bedroom-1", 0, 0, 0)


def test_leaveback_table_rows():
    # three absences in the shape of a two-resident home's listing
    lbs = [LeaveBackActivity("M001", datetime(2009, 10, 1, 17, 13), datetime(2009, 10, 1, 18, 39)),
           LeaveBackActivity("M008", datetime(2009, 9, 30, 8, 38), datetime(2009, 9, 30, 11, 9)),
           LeaveBackActivity("M008", datetime(2009, 10, 1, 8, 35), datetime(2009, 10, 1, 11, 4))]
    rows = leaveback_rows(lbs)
    assert [(r["date"], r["depart"][:5], r["return"][:5], r["sensor"]) for r in rows] == [
        ("2009-09-30", "08:38", "11:09", "M008"),
        ("2009-10-01", "08:35", "11:04", "M008"),
        ("2009-10-01", "17:13", "18:39", "M001"),
    ]
    assert rows[0]["seconds"] == 9060
    hist = hourly_histograms([], lbs, LOCS)
    assert [lb.sensor_id for lb in hist.leaveback_entries] == ["M008", "M008", "M001"]


sensors_st = st.lists(st.sampled_from(["B1", "B2", "B3", "K1", "K2", "D1", "X9"]),
                      min_size=1, max_size=6)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(sensors_st, st.integers(0, 23)), max_size=25), st.randoms())
def test_histogram_invariant_under_reordering(specs, rnd):
    acts = [act(s, datetime(2009, 10, 16, h)) for s, h in specs]
    shuffled = list(acts)
    rnd.shuffle(shuffled)
    a = hourly_histograms(acts, [], LOCS)
    b = hourly_histograms(shuffled, [], LOCS)
    assert a.to_dict() == b.to_dict()
    assert a.total() + a.unattributed == len(acts)


@settings(max_examples=100)
@given(sensors_st)
def test_classification_consistent_with_distinct_sensors(sensors):
    a = act(sensors)
    assert (classify_activity(a) == CROSSING) == (len(set(sensors)) > 1)
