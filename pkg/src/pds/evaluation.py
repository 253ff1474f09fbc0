"""Scoring a deduced topology and location map against a ground-truth layout."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

BOTH = "1/1"
MISSED = "1/0"
NEITHER = "0/0"
SPURIOUS = "0/1"


class UnknownSensor(KeyError):
    pass


@dataclass
class GroundTruthLayout:
    sensors: frozenset = frozenset()
    adjacency: frozenset = frozenset()  # frozenset({a, b}) pairs
    room_labels: dict = field(default_factory=dict)
    overlap: frozenset = frozenset()

    def __post_init__(self):
        self.sensors = frozenset(self.sensors)
        self.adjacency = frozenset(frozenset(p) for p in self.adjacency)
        self.overlap = frozenset(frozenset(p) for p in self.overlap)
        for p in self.adjacency:
            if len(p) != 2:
                raise ValueError(f"adjacency needs two distinct sensors, got {sorted(p)}")
            missing = p - self.sensors
            if missing:
                raise UnknownSensor(f"adjacency references unknown sensors {sorted(missing)}")
        missing = set(self.room_labels) - self.sensors
        if missing:
            raise UnknownSensor(f"room labels reference unknown sensors {sorted(missing)}")

    def adjacent(self, a, b) -> bool:
        return frozenset((a, b)) in self.adjacency

    def rooms(self, prefix):
        """Sensor sets per room label starting with ``prefix``, ordered by label."""
        out = {}
        for s, label in self.room_labels.items():
            if label == prefix or label.startswith(prefix + "-"):
                out.setdefault(label, set()).add(s)
        return [frozenset(out[k]) for k in sorted(out)]

    @classmethod
    def parse(cls, text: str):
        """Read the ``sensors:`` / ``adjacent:`` / ``room:`` text format."""
        sensors, adjacency, labels, overlap = set(), set(), {}, set()
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, rest = line.partition(":")
            parts = rest.split()
            key = key.strip().lower()
            if key == "sensors":
                sensors.update(parts)
            elif key == "adjacent":
                if len(parts) == 3 and parts[2] == "overlap":
                    overlap.add(frozenset(parts[:2]))
                elif len(parts) != 2:
                    raise ValueError(f"line {lineno}: expected 'adjacent: A B [overlap]'")
                adjacency.add(frozenset(parts[:2]))
            elif key == "room":
                if len(parts) < 2:
                    raise ValueError(f"line {lineno}: expected 'room: <category> <id...>'")
                for s in parts[1:]:
                    labels[s] = parts[0]
            else:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
        return cls(frozenset(sensors), frozenset(adjacency), labels, frozenset(overlap))

    @classmethod
    def load(cls, path):
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    def dumps(self):
        lines = ["sensors: " + " ".join(sorted(self.sensors))]
        for p in sorted(tuple(sorted(p)) for p in self.adjacency):
            tag = " overlap" if frozenset(p) in self.overlap else ""
            lines.append(f"adjacent: {p[0]} {p[1]}{tag}")
        by_label = {}
        for s, label in self.room_labels.items():
            by_label.setdefault(label, []).append(s)
        for label in sorted(by_label):
            lines.append(f"room: {label} " + " ".join(sorted(by_label[label])))
        return "\n".join(lines) + "\n"


@dataclass
class RelationshipScore:
    n: int
    pair_labels: dict
    false_count: int
    accuracy_percent: float

    def label_counts(self):
        counts = {BOTH: 0, MISSED: 0, NEITHER: 0, SPURIOUS: 0}
        for v in self.pair_labels.values():
            counts[v] += 1
        return counts

    def to_dict(self):
        return {"n": self.n, "pairs": self.n * self.n - self.n,
                "false_count": self.false_count,
                "accuracy_percent": self.accuracy_percent,
                "labels": self.label_counts()}

    def matrix_rows(self, order=None):
        order = order or sorted({a for a, _ in self.pair_labels})
        yield ["A/B"] + list(order)
        for a in order:
            yield [a] + ["--" if a == b else self.pair_labels[(a, b)] for b in order]


def score_relations(sensors, truth_rel, deduced_rel) -> RelationshipScore:
    """Label every ordered pair of ``sensors`` by (layout, deduced) reachability."""
    sensors = sorted(sensors)
    labels = {}
    for a in sensors:
        for b in sensors:
            if a != b:
                labels[(a, b)] = f"{int(truth_rel(a, b))}/{int(deduced_rel(a, b))}"
    n = len(sensors)
    false = sum(1 for v in labels.values() if v in (MISSED, SPURIOUS))
    total = n * n - n
    acc = (1 - false / total) * 100 if total else 100.0
    return RelationshipScore(n, labels, false, acc)


def relationship_accuracy(topology, truth: GroundTruthLayout) -> RelationshipScore:
    unknown = set(topology.nodes) - truth.sensors
    if unknown:
        raise UnknownSensor(f"topology sensors missing from ground truth: {sorted(unknown)}")
    return score_relations(truth.sensors, truth.adjacent, topology.has_edge)


@dataclass
class SetScore:
    precision: float
    recall: float
    true_positives: int
    deduced: int
    actual: int

    @property
    def f1(self):
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    def to_dict(self):
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1,
                "true_positives": self.true_positives, "deduced": self.deduced,
                "actual": self.actual}


def _set_score(tp, deduced, actual):
    return SetScore(tp / deduced if deduced else 0.0, tp / actual if actual else 0.0,
                    tp, deduced, actual)


def match_sets(deduced, actual):
    """Best one-to-one pairing of deduced to actual sets by overlap size."""
    deduced, actual = list(deduced), list(actual)
    if not deduced or not actual:
        return []
    overlap = np.array([[len(d & t) for t in actual] for d in deduced])
    rows, cols = linear_sum_assignment(-overlap)
    return [(int(r), int(c)) for r, c in zip(rows, cols)]


def matched_score(deduced, actual):
    pairs = match_sets(deduced, actual)
    tp = sum(len(deduced[i] & actual[j]) for i, j in pairs)
    return _set_score(tp, sum(map(len, deduced)), sum(map(len, actual))), pairs


def jaccard(a, b):
    a, b = set(a), set(b)
    return len(a & b) / len(a | b) if a | b else 1.0


def location_scores(locmap, truth: GroundTruthLayout) -> dict:
    true_beds = truth.rooms("bedroom")
    true_kitchen = truth.rooms("kitchen_dining")
    true_kitchen = true_kitchen[0] if true_kitchen else frozenset()
    true_entr = truth.rooms("entrance")
    bed, bed_pairs = matched_score(locmap.bedrooms, true_beds)
    kit = _set_score(len(locmap.kitchen_dining & true_kitchen), len(locmap.kitchen_dining),
                     len(true_kitchen))
    ent, _ = matched_score(locmap.entrances, true_entr)
    return {
        "bedrooms": bed,
        "bedroom_pairs": [{"deduced": sorted(locmap.bedrooms[i]), "actual": sorted(true_beds[j]),
                           "jaccard": jaccard(locmap.bedrooms[i], true_beds[j]),
                           **_set_score(len(locmap.bedrooms[i] & true_beds[j]),
                                        len(locmap.bedrooms[i]), len(true_beds[j])).to_dict()}
                          for i, j in bed_pairs],
        "kitchen_dining": kit,
        "entrances": ent,
    }
