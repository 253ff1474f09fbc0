"""Directed-edge confidence counting, the average-confidence threshold and the two edge rules."""

from __future__ import annotations

import bisect
from collections import Counter
from dataclasses import dataclass, field

import networkx as nx

from .events import SensorLog
from .segmentation import IndoorActivity, SegmentationParams, gap_runs

SOLID = "solid"
DASHED = "dashed"


class EmptyGraph(ValueError):
    """Raised when a threshold or rule is requested on a graph with no directed edges."""


def _pair(a, b):
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class ConfidenceGraph:
    counts: dict = field(default_factory=dict)
    node_set: frozenset = frozenset()

    def __post_init__(self):
        counts = {k: int(v) for k, v in self.counts.items()}
        for (a, b), v in counts.items():
            if a == b:
                raise ValueError(f"self-edge {a}->{a}")
            if v < 1:
                raise ValueError(f"non-positive count on {a}->{b}")
        nodes = set(self.node_set)
        for a, b in counts:
            nodes.update((a, b))
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "node_set", frozenset(nodes))

    @property
    def beta(self) -> int:
        return sum(self.counts.values())

    @property
    def gamma(self) -> int:
        return len(self.counts)

    def count(self, a, b) -> int:
        return self.counts.get((a, b), 0)

    def neighbors(self, node):
        """Sensors linked to ``node`` in either direction."""
        return {b for a, b in self.counts if a == node} | {a for a, b in self.counts if b == node}


@dataclass(frozen=True)
class Topology:
    edges: dict = field(default_factory=dict)  # sorted pair -> kind
    alpha_used: int = 0
    nodes: frozenset = frozenset()
    counts: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        edges = {}
        for (a, b), kind in self.edges.items():
            if kind not in (SOLID, DASHED):
                raise ValueError(f"unknown edge kind {kind!r}")
            key = _pair(a, b)
            if key in edges:
                raise ValueError(f"duplicate edge {key}")
            edges[key] = kind
        nodes = set(self.nodes)
        for a, b in edges:
            nodes.update((a, b))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "nodes", frozenset(nodes))
        adj = {}
        for a, b in edges:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        object.__setattr__(self, "_adj", adj)

    def neighbors(self, node) -> set:
        return self._adj.get(node, set())

    def has_edge(self, a, b) -> bool:
        return _pair(a, b) in self.edges

    def kind(self, a, b):
        return self.edges.get(_pair(a, b))

    def solid_edges(self):
        return sorted(k for k, v in self.edges.items() if v == SOLID)

    def dashed_edges(self):
        return sorted(k for k, v in self.edges.items() if v == DASHED)


@dataclass(frozen=True)
class GroupSeries:
    entries: tuple = ()  # (day index, date, group count, node count)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        days = [e[0] for e in self.entries]
        if any(a >= b for a, b in zip(days, days[1:])):
            raise ValueError("day indices must strictly increase")

    @property
    def counts(self):
        return [e[2] for e in self.entries]

    def convergence_day(self):
        """First day from which the group count never changes again."""
        if not self.entries:
            return None
        counts = self.counts
        k = len(counts) - 1
        while k > 0 and counts[k - 1] == counts[-1]:
            k -= 1
        return self.entries[k][0]


def activity_edges(activity) -> list[tuple]:
    """Directed moves of one activity, with repeated firings of a sensor collapsed."""
    events = activity.events if isinstance(activity, IndoorActivity) else activity
    seq = []
    for e in events:
        if not seq or seq[-1] != e.sensor_id:
            seq.append(e.sensor_id)
    return list(zip(seq, seq[1:]))


def build_confidence_graph(activities, nodes=()) -> ConfidenceGraph:
    counts = Counter()
    seen = set(nodes)
    for act in activities:
        counts.update(activity_edges(act))
        seen.update(e.sensor_id for e in act.events)
    return ConfidenceGraph(dict(counts), frozenset(seen))


def alpha(graph: ConfidenceGraph) -> int:
    if graph.gamma == 0:
        raise EmptyGraph("no directed edges to average")
    return graph.beta // graph.gamma


def apply_rules(graph: ConfidenceGraph, threshold=None) -> Topology:
    """Solid edge when both directions beat the threshold, dashed when exactly one does."""
    a_ = alpha(graph) if threshold is None else threshold
    edges = {}
    for a, b in {_pair(a, b) for a, b in graph.counts}:
        hits = (graph.count(a, b) > a_) + (graph.count(b, a) > a_)
        if hits == 2:
            edges[(a, b)] = SOLID
        elif hits == 1:
            edges[(a, b)] = DASHED
    return Topology(edges, a_, graph.node_set, dict(graph.counts))


def sensor_groups(graph: ConfidenceGraph) -> list[frozenset]:
    """Weakly connected components of the raw count graph, sorted by smallest member."""
    g = nx.DiGraph()
    g.add_nodes_from(graph.node_set)
    g.add_edges_from(graph.counts)
    groups = [frozenset(c) for c in nx.weakly_connected_components(g)]
    return sorted(groups, key=min)


def prefix_activities(events, cut, params: SegmentationParams, runs=None):
    """Activities of ``events[:cut]``; ``runs`` are the gap runs of the full sequence."""
    runs = gap_runs(events, params.y_max_gap) if runs is None else runs
    x = params.x_min_duration
    out = []
    for i, j in runs:
        if i >= cut:
            break
        j = min(j, cut)
        if (events[j - 1].timestamp - events[i].timestamp).total_seconds() >= x:
            out.append(IndoorActivity(events[i:j]))
    return out


def groups_over_days(log: SensorLog, params: SegmentationParams | None = None) -> GroupSeries:
    """Sensor-group count after each day of eavesdropping (prefix of the log up to that day)."""
    params = params or SegmentationParams()
    events = log.events
    if not events:
        return GroupSeries()
    runs = gap_runs(events, params.y_max_gap)
    dates = [e.timestamp.date() for e in events]
    entries = []
    for day_index, day in enumerate(sorted(set(dates)), start=1):
        cut = bisect.bisect_right(dates, day)
        graph = build_confidence_graph(prefix_activities(events, cut, params, runs))
        entries.append((day_index, day, len(sensor_groups(graph)), len(graph.node_set)))
    return GroupSeries(entries)
