import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pds.evaluation import (
    BOTH,
    MISSED,
    NEITHER,
    SPURIOUS,
    GroundTruthLayout,
    UnknownSensor,
    jaccard,
    location_scores,
    match_sets,
    relationship_accuracy,
    score_relations,
)
from pds.locations import LocationMap
from pds.topology import SOLID, Topology

TRUTH_TEXT = """\
# small layout
sensors: A B C D
adjacent: A B
adjacent: B C overlap
room: bedroom-1 A B
room: kitchen_dining C
room: entrance D
"""


def test_parse_and_dump_roundtrip():
    t = GroundTruthLayout.parse(TRUTH_TEXT)
    assert t.adjacent("B", "A") and t.adjacent("C", "B") and not t.adjacent("A", "C")
    assert t.overlap == {frozenset("BC")}
    assert t.rooms("bedroom") == [frozenset("AB")]
    assert GroundTruthLayout.parse(t.dumps()) == t


@pytest.mark.parametrize("text", ["sensors: A\nadjacent: A\n", "sensors: A\nroom: bedroom\n",
                                  "sensors: A\nwall: A B\n"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        GroundTruthLayout.parse(text)


def test_unknown_sensor_in_truth():
    with pytest.raises(UnknownSensor):
        GroundTruthLayout.parse("sensors: A\nadjacent: A B\n")


def test_labels_and_accuracy():
    truth = GroundTruthLayout.parse(TRUTH_TEXT)
    topo = Topology({("A", "B"): SOLID, ("C", "D"): SOLID}, 1)
    score = relationship_accuracy(topo, truth)
    assert score.pair_labels[("A", "B")] == BOTH
    assert score.pair_labels[("C", "B")] == MISSED
    assert score.pair_labels[("D", "C")] == SPURIOUS
    assert score.pair_labels[("A", "D")] == NEITHER
    assert score.false_count == 4
    assert score.accuracy_percent == pytest.approx((1 - 4 / 12) * 100)
    rows = list(score.matrix_rows())
    assert rows[0] == ["A/B", "A", "B", "C", "D"]
    assert rows[1][1] == "--"


def test_topology_sensor_missing_from_truth():
    truth = GroundTruthLayout.parse(TRUTH_TEXT)
    with pytest.raises(UnknownSensor):
        relationship_accuracy(Topology({("A", "Z"): SOLID}, 1), truth)


@pytest.mark.parametrize("n,false,expected", [(31, 23, 97.5), (31, 31, 96.7)])
def test_accuracy_arithmetic(n, false, expected):
    sensors = [f"M{k:03d}" for k in range(n)]
    wrong = set(itertools.islice(itertools.permutations(sensors, 2), false))
    score = score_relations(sensors, lambda a, b: False, lambda a, b: (a, b) in wrong)
    assert score.false_count == false
    assert round(score.accuracy_percent, 1) == expected


@settings(max_examples=100)
@given(st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5))),
       st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5))))
def test_accuracy_matches_brute_count(truth_pairs, deduced_pairs):
    sensors = range(6)
    score = score_relations(sensors, lambda a, b: (a, b) in truth_pairs,
                            lambda a, b: (a, b) in deduced_pairs)
    false = sum(1 for a in sensors for b in sensors
                if a != b and ((a, b) in truth_pairs) != ((a, b) in deduced_pairs))
    assert score.false_count == false
    assert sum(score.label_counts().values()) == 30


def test_match_sets_is_optimal():
    deduced = [frozenset("ab"), frozenset("cde")]
    actual = [frozenset("cd"), frozenset("abx")]
    assert sorted(match_sets(deduced, actual)) == [(0, 1), (1, 0)]
    assert match_sets([], actual) == []


@settings(max_examples=50)
@given(st.lists(st.sets(st.integers(0, 8), min_size=1), min_size=1, max_size=4),
       st.lists(st.sets(st.integers(0, 8), min_size=1), min_size=1, max_size=4))
def test_match_sets_beats_every_permutation(deduced, actual):
    pairs = match_sets(deduced, actual)
    best = sum(len(deduced[i] & actual[j]) for i, j in pairs)
    k = min(len(deduced), len(actual))
    for perm in itertools.permutations(range(len(actual)), k):
        for rows in itertools.combinations(range(len(deduced)), k):
            assert sum(len(deduced[r] & actual[c]) for r, c in zip(rows, perm)) <= best


def test_location_scores():
    truth = GroundTruthLayout.parse(TRUTH_TEXT)
    lm = LocationMap([{"A"}], {"C", "B"}, [{"D"}])
    scores = location_scores(lm, truth)
    assert (scores["bedrooms"].precision, scores["bedrooms"].recall) == (1.0, 0.5)
    assert (scores["kitchen_dining"].precision, scores["kitchen_dining"].recall) == (0.5, 1.0)
    assert scores["entrances"].f1 == 1.0
    assert scores["bedroom_pairs"][0]["jaccard"] == 0.5
    assert jaccard(set(), set()) == 1.0
    assert np.isclose(scores["bedrooms"].f1, 2 / 3)
