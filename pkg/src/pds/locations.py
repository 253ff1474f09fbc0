"""Deducing bedroom, kitchen/dining and entrance sensors from activities and the topology."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .events import SensorLog
from .itemsets import frequent_itemsets, select_target_set
from .segmentation import (
    ClockWindow,
    SegmentationParams,
    detect_leaveback,
    filter_by_clock,
    segment_indoor,
    sensor_id_list,
)
from .topology import EmptyGraph, alpha, apply_rules, build_confidence_graph

logger = logging.getLogger(__name__)

KITCHEN = "kitchen_dining"


@dataclass(frozen=True)
class DeductionConfig:
    bedroom_window: ClockWindow = ClockWindow.parse("02:00-06:00")
    kitchen_window: ClockWindow = ClockWindow.parse("18:00-19:00")
    min_support: float = 0.5

    def __post_init__(self):
        if isinstance(self.bedroom_window, str):
            object.__setattr__(self, "bedroom_window", ClockWindow.parse(self.bedroom_window))
        if isinstance(self.kitchen_window, str):
            object.__setattr__(self, "kitchen_window", ClockWindow.parse(self.kitchen_window))
        if not 0 < self.min_support < 1:
            raise ValueError("min_support must lie strictly between 0 and 1")


@dataclass
class LocationMap:
    bedrooms: list = field(default_factory=list)
    kitchen_dining: frozenset = frozenset()
    entrances: list = field(default_factory=list)

    def __post_init__(self):
        self.bedrooms = [frozenset(b) for b in self.bedrooms]
        self.kitchen_dining = frozenset(self.kitchen_dining)
        self.entrances = [frozenset(e) for e in self.entrances]
        seen = set()
        for b in self.bedrooms:
            if seen & b:
                raise ValueError(f"sensors {sorted(seen & b)} assigned to two bedrooms")
            seen |= b
        located = seen | self.kitchen_dining
        for e in self.entrances:
            if e & located:
                raise ValueError(f"entrance sensors {sorted(e & located)} already located")

    def locations(self):
        """``(location id, sensor set)`` pairs, bedrooms first."""
        out = [(f"bedroom-{i}", b) for i, b in enumerate(self.bedrooms, start=1)]
        out.append((KITCHEN, self.kitchen_dining))
        return out

    def to_dict(self):
        return {
            "bedrooms": [sorted(b) for b in self.bedrooms],
            "kitchen_dining": sorted(self.kitchen_dining),
            "entrances": [sorted(e) for e in self.entrances],
        }


def _half(n):
    return math.ceil(n / 2)


def expand_by_topology(seed, topology, exclude=(), trace=None):
    """Grow ``seed`` with every sensor linked to at least half of the current set.

    One sensor is added at a time (lexicographically first qualifier) and the
    condition is re-checked against the enlarged set until nothing qualifies.
    ``trace`` collects ``(sensor, linked members)`` for each addition.
    """
    current = set(seed)
    if not current:
        raise ValueError("seed must not be empty")
    blocked = set(exclude)
    while True:
        need = _half(len(current))
        for cand in sorted(topology.nodes - current - blocked):
            linked = topology.neighbors(cand) & current
            if len(linked) >= need:
                current.add(cand)
                if trace is not None:
                    trace.append((cand, sorted(linked)))
                break
        else:
            return frozenset(current)


def _transactions(activities):
    return [frozenset(sensor_id_list(a)) for a in activities]


def deduce_bedrooms(activities, topology, config: DeductionConfig | None = None, report=None):
    """Repeated mine / select / expand / discard rounds over night-time activities."""
    config = config or DeductionConfig()
    pool = _transactions(activities)
    bedrooms = []
    if not pool:
        return bedrooms
    target = select_target_set(frequent_itemsets(pool, config.min_support))
    while target is not None:
        trace = []
        taken = set().union(*bedrooms)
        room = expand_by_topology(target.items, topology, exclude=taken, trace=trace)
        bedrooms.append(room)
        if report is not None:
            report.append({"target": target, "added": trace, "transactions": len(pool)})
        pool = [t for t in pool if not t & room]
        if not pool:
            break
        target = select_target_set(frequent_itemsets(pool, config.min_support))
        if target is None or target.size <= 1:
            break
    return bedrooms


def deduce_kitchen(activities, topology, config: DeductionConfig | None = None, exclude=(),
                   report=None):
    config = config or DeductionConfig()
    pool = _transactions(activities)
    if not pool:
        return frozenset()
    target = select_target_set(frequent_itemsets(pool, config.min_support))
    if target is None:
        return frozenset()
    trace = []
    room = expand_by_topology(target.items, topology, exclude=exclude, trace=trace)
    if report is not None:
        report.append({"target": target, "added": trace, "transactions": len(pool)})
    return room


def deduce_entrances(leavebacks, bedrooms, kitchen, topology):
    located = set().union(*bedrooms) | set(kitchen)
    entrances = []
    for sensor in dict.fromkeys(lb.sensor_id for lb in leavebacks):
        if sensor in located or any(sensor in e for e in entrances):
            continue
        near = topology.neighbors(sensor)
        for k, group in enumerate(entrances):
            if len(near & group) >= _half(len(group)):
                entrances[k] = group | {sensor}
                break
        else:
            entrances.append(frozenset({sensor}))
    return entrances


@dataclass
class DeductionResult:
    location_map: LocationMap
    provenance: dict
    activities: list
    leavebacks: list
    graph: object
    topology: object
    alpha: int
    report: dict

    def to_dict(self):
        out = self.location_map.to_dict()
        out["provenance"] = self.provenance
        return out


def _provenance(kind, target, trace, topology, prov):
    for s in sorted(target.items):
        prov[s] = {"location": kind, "source": "mined",
                   "detail": {"support_count": target.support_count,
                              "support_ratio": target.support_ratio}}
    for s, linked in trace:
        prov[s] = {"location": kind, "source": "expanded",
                   "detail": {"linked": linked,
                              "edges": {m: {"kind": topology.kind(s, m),
                                            "count_out": topology.counts.get((s, m), 0),
                                            "count_in": topology.counts.get((m, s), 0)}
                                        for m in linked}}}


def run_full_deduction(log: SensorLog, seg_params: SegmentationParams | None = None,
                       config: DeductionConfig | None = None) -> DeductionResult:
    """Segmentation, topology, bedrooms, kitchen/dining and entrances in one pass."""
    seg_params = seg_params or SegmentationParams()
    config = config or DeductionConfig()
    if not len(log):
        raise EmptyGraph("empty log")
    activities = segment_indoor(log, seg_params)
    leavebacks = detect_leaveback(log, seg_params)
    graph = build_confidence_graph(activities)
    a = alpha(graph)
    topology = apply_rules(graph, a)

    night = filter_by_clock(activities, config.bedroom_window)
    evening = filter_by_clock(activities, config.kitchen_window)
    bed_report, kit_report = [], []
    bedrooms = deduce_bedrooms(night, topology, config, report=bed_report)
    taken = set().union(*bedrooms)
    kitchen = deduce_kitchen(evening, topology, config, exclude=taken, report=kit_report)
    if kitchen & taken:
        logger.warning("kitchen/dining set overlaps bedrooms: %s", sorted(kitchen & taken))
        kitchen = kitchen - taken
    entrances = deduce_entrances(leavebacks, bedrooms, kitchen, topology)

    prov = {}
    for i, r in enumerate(bed_report, start=1):
        _provenance(f"bedroom-{i}", r["target"], r["added"], topology, prov)
    for r in kit_report:
        _provenance(KITCHEN, r["target"], r["added"], topology, prov)
    lb_sensors = {}
    for lb in leavebacks:
        lb_sensors[lb.sensor_id] = lb_sensors.get(lb.sensor_id, 0) + 1
    for j, group in enumerate(entrances, start=1):
        for s in sorted(group):
            prov[s] = {"location": f"entrance-{j}", "source": "leave-back",
                       "detail": {"leavebacks": lb_sensors[s]}}

    report = {
        "activities": len(activities),
        "night_transactions": len(night),
        "evening_transactions": len(evening),
        "leaveback_activities": len(leavebacks),
        "leaveback_sensors": dict(sorted(lb_sensors.items())),
        "eliminated_leaveback_sensors": sorted(set(lb_sensors) - set().union(*entrances)),
        "bedroom_rounds": [{"target": r["target"].sorted_items(),
                            "support_count": r["target"].support_count,
                            "transactions": r["transactions"]} for r in bed_report],
        "alpha": a,
        "beta": graph.beta,
        "gamma": graph.gamma,
    }
    locmap = LocationMap(bedrooms, kitchen, entrances)
    return DeductionResult(locmap, dict(sorted(prov.items())), activities, leavebacks, graph,
                           topology, a, report)
