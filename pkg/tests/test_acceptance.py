"""Acceptance criteria, one test each. A PASS/FAIL/SKIP line per criterion is printed in
the terminal summary (see ``conftest.pytest_terminal_summary``).

Criteria 10 and 11 need the public CASAS Milan and Tulum datasets. Point ``PDS_CASAS_DIR``
at a directory holding ``milan.txt`` / ``tulum.txt`` (or ``milan/data`` / ``tulum/data``)
and, for relationship accuracy, ground-truth layouts ``milan.truth`` / ``tulum.truth``.
"""

import os
import statistics
import time
from datetime import date
from itertools import combinations
from pathlib import Path

import numpy as np
import pytest

from conftest import make_log, read_transactions
from pds.evaluation import GroundTruthLayout, jaccard, relationship_accuracy
from pds.events import SensorLog, load_log
from pds.itemsets import frequent_itemsets, select_target_set
from pds.locations import run_full_deduction
from pds.routine import hourly_histograms
from pds.segmentation import detect_leaveback, segment_indoor
from pds.simulate import DecoyConfig, inject_decoy, load_plan, simulate, with_residents
from pds.topology import ConfidenceGraph, alpha, apply_rules, build_confidence_graph, groups_over_days

RESULTS = []


def record(num, ok, detail):
    line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    assert ok, line


def record_skip(num, reason):
    RESULTS.append(f"criterion {num:>2}: SKIP  {reason}")
    pytest.skip(reason)


def target_of(name):
    return select_target_set(frequent_itemsets(read_transactions(name), 0.5))


def test_criterion_01_one_floor_bedroom_lists():
    start = time.perf_counter()
    t = target_of("milan_night")
    took = time.perf_counter() - start
    expected = {"M013", "M020", "M021", "M025", "M028"}
    record(1, t.items == expected and took < 1,
           f"target {t.sorted_items()} support {t.support_count}/4 in {took * 1000:.1f} ms")


def test_criterion_02_two_floor_bedroom_lists():
    t = target_of("tulum_night")
    record(2, t.items == {"M018", "M020", "M022", "M026"} and t.support_count == 4,
           f"target {t.sorted_items()} support {t.support_count}/7")


def test_criterion_03_kitchen_lists():
    a, b = target_of("milan_evening"), target_of("tulum_evening")
    ok = (a.items == {"M014", "M015", "M022", "M023"}
          and b.items == {"M003", "M014", "M015", "M016"})
    record(3, ok, f"targets {a.sorted_items()} and {b.sorted_items()}")


def graph_with(beta, gamma):
    counts = {(f"S{k}", f"T{k}"): beta // gamma for k in range(gamma)}
    for k in range(beta % gamma):
        counts[(f"S{k}", f"T{k}")] += 1
    return ConfidenceGraph(counts)


def test_criterion_04_alpha_arithmetic():
    got = [alpha(graph_with(5597, 415)), alpha(graph_with(13645, 728))]
    record(4, got == [13, 18], f"alpha values {got}")


def test_criterion_05_leaveback_fixture():
    hit = detect_leaveback(make_log([(31086, "S008"), (40188, "S008")]))
    miss = detect_leaveback(make_log([(0, "S008"), (3599, "S008")]))
    record(5, len(hit) == 1 and miss == [],
           f"{len(hit)} leave-back for 08:38:06/11:09:48, {len(miss)} at gap 3599 s")


def brute_itemsets(baskets, s):
    items = sorted(set().union(*baskets))
    out = {}
    for r in range(1, len(items) + 1):
        for combo in combinations(items, r):
            c = sum(1 for b in baskets if set(combo) <= b)
            if c / len(baskets) >= s:
                out[frozenset(combo)] = c
    return out


def test_criterion_06_apriori_oracle():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    bad = 0
    for _ in range(200):
        universe = [f"M{k:03d}" for k in range(int(rng.integers(1, 13)))]
        baskets = [set(rng.choice(universe, size=int(rng.integers(0, len(universe) + 1)),
                                  replace=False))
                   for _ in range(int(rng.integers(1, 21)))]
        s = float(rng.choice([0.1, 0.3, 0.5, 0.7]))
        got = {f.items: f.support_count for f in frequent_itemsets(baskets, s)}
        bad += got != brute_itemsets(baskets, s)
    took = time.perf_counter() - start
    record(6, bad == 0 and took < 30, f"{bad} discrepancies over 200 sets in {took:.1f} s")


def oracle_runs(times, x, y):
    # a maximal run is bounded by gaps > y on both sides; scan every (start, end) pair
    n = len(times)
    out = []
    i = 0
    while i < n:
        j = i
        while j + 1 < n and times[j + 1] - times[j] <= y:
            j += 1
        assert all(times[k + 1] - times[k] <= y for k in range(i, j))
        assert i == 0 or times[i] - times[i - 1] > y
        assert j == n - 1 or times[j + 1] - times[j] > y
        if times[j] - times[i] >= x:
            out.append((i, j + 1))
        i = j + 1
    return out


def test_criterion_07_segmentation_oracle():
    rng = np.random.default_rng(77)
    bad = 0
    for _ in range(200):
        times = np.cumsum(rng.choice([0.25, 1, 4, 9.5, 10, 10.5, 30, 4000], size=1000))
        log = make_log([(float(t), f"M{rng.integers(1, 20):03d}") for t in times])
        acts = segment_indoor(log)
        pos = {id(e): k for k, e in enumerate(log.events)}
        got = [(pos[id(a.events[0])], pos[id(a.events[-1])] + 1) for a in acts]
        secs = [(e.timestamp - log.events[0].timestamp).total_seconds() for e in log.events]
        bad += got != oracle_runs(secs, 40, 10)
    record(7, bad == 0, f"{bad} discrepancies over 200 logs of 1000 events")


def test_criterion_08_single_resident_soundness():
    plan, residents = load_plan("demo")
    adj = plan.sensor_adjacency()
    start = time.perf_counter()
    false_solid, finals = 0, []
    for seed in range(20):
        log = simulate(plan, residents, 14, seed)
        g = build_confidence_graph(segment_indoor(log))
        topo = apply_rules(g)
        false_solid += sum(1 for e in topo.solid_edges() if frozenset(e) not in adj)
        finals.append(groups_over_days(log).counts[-1])
    took = time.perf_counter() - start
    ok = false_solid == 0 and set(finals) == {1} and took < 60
    record(8, ok, f"{false_solid} false solid edges, final group counts {sorted(set(finals))}, "
                  f"{took:.1f} s for 20 seeds")


def decoy_fractions(period):
    plan, residents = load_plan("demo")
    n = len(plan.sensors)
    raw, post = [], []
    for seed in range(20):
        log = inject_decoy(simulate(plan, residents, 14, seed),
                           DecoyConfig("X001", period, room="living"), plan)
        g = build_confidence_graph(segment_indoor(log))
        raw.append(len(g.neighbors("X001")) / n)
        post.append(len(apply_rules(g).neighbors("X001")) / n)
    return statistics.median(raw), statistics.median(post)


def test_criterion_09_decoy_properties():
    _, slow_post = decoy_fractions(1800)
    fast_raw, _ = decoy_fractions(15)
    ok = slow_post < 0.10 and fast_raw >= 0.50
    record(9, ok, f"1800 s decoy keeps {slow_post:.0%} post-rule edges; "
                  f"15 s decoy reaches {fast_raw:.0%} raw (medians over 20 seeds)")


# -- public datasets ------------------------------------------------------------

HOMES = {
    "milan": {
        "window": (date(2009, 10, 16), date(2009, 10, 21)),
        "accuracy": 97.5,
        "bedrooms": [{"M013", "M019", "M020", "M021", "M025", "M028"}],
        "kitchen": {"M014", "M015", "M022", "M023", "D003", "M012", "M016"},
        "entrances": [{"D001"}],
    },
    "tulum": {
        "window": (date(2009, 9, 27), date(2009, 10, 3)),
        "accuracy": 96.7,
        "bedrooms": [{"M018", "M020", "M021", "M022", "M026"},
                     {"M017", "M028", "M029", "M030", "M031"}],
        "kitchen": {"M003", "M014", "M015", "M016", "M002", "M009", "M010", "M011", "M012",
                    "M013"},
        "entrances": [{"M001"}, {"M008"}],
    },
}


def casas_log(home):
    root = os.environ.get("PDS_CASAS_DIR")
    if not root:
        return None, None
    for cand in (Path(root) / f"{home}.txt", Path(root) / home / "data"):
        if cand.is_file():
            log, _ = load_log(cand)
            lo, hi = HOMES[home]["window"]
            events = [e for e in log if lo <= e.timestamp.date() <= hi]
            truth = Path(root) / f"{home}.truth"
            return SensorLog.from_events(events, home), (truth if truth.is_file() else None)
    return None, None


def best_jaccard(deduced, named):
    return min((max((jaccard(d, n) for d in deduced), default=0.0) for n in named), default=1.0)


def test_criterion_10_casas_reproduction():
    logs = {h: casas_log(h) for h in HOMES}
    if any(log is None for log, _ in logs.values()):
        record_skip(10, "CASAS Milan/Tulum logs not available (set PDS_CASAS_DIR)")
    notes, ok, unmeasured = [], True, []
    for home, (log, truth_path) in logs.items():
        ref = HOMES[home]
        start = time.perf_counter()
        res = run_full_deduction(log)
        series = groups_over_days(log)
        took = time.perf_counter() - start
        lm = res.location_map
        jac = min(best_jaccard(lm.bedrooms, ref["bedrooms"]),
                  jaccard(lm.kitchen_dining, ref["kitchen"]),
                  best_jaccard(lm.entrances, ref["entrances"]))
        good = jac >= 0.8 and took < 120
        note = f"{home}: min Jaccard {jac:.2f}, {took:.0f} s, groups {series.counts}"
        if home == "milan":
            good &= abs(series.counts[0] - 21) <= 3 and series.counts[-1] <= 4
        if truth_path is None:
            unmeasured.append(home)
        else:
            acc = relationship_accuracy(res.topology, GroundTruthLayout.load(truth_path))
            good &= abs(acc.accuracy_percent - ref["accuracy"]) <= 1.5
            note += f", accuracy {acc.accuracy_percent:.1f}%"
        notes.append(note + (
            "" if good else f"; deduced {lm.to_dict()}, report {res.report}"))
        ok &= good
    if ok and unmeasured:
        record_skip(10, "; ".join(notes) + f"; no ground-truth layout for {unmeasured}")
    record(10, ok, "; ".join(notes))


def test_criterion_11_routine_zero_bins():
    log, _ = casas_log("milan")
    if log is None:
        record_skip(11, "CASAS Milan log not available (set PDS_CASAS_DIR)")
    res = run_full_deduction(log)
    hist = hourly_histograms(res.activities, res.leavebacks, res.location_map)
    if "bedroom-1" not in hist.bins or not res.location_map.kitchen_dining:
        record(11, False, f"bedroom or kitchen not deduced: {res.location_map.to_dict()}")
    bed = sum(sum(hist.bins["bedroom-1"][h]) for h in range(3))
    kit = sum(sum(hist.bins["kitchen_dining"][h]) for h in range(8))
    record(11, bed == 0 and kit == 0,
           f"{bed} bedroom activities 00-03h, {kit} kitchen activities before 08h")


def test_rule1_two_residents():
    # supporting check for the synthetic interference claim (not a numbered criterion)
    plan, residents = with_residents(load_plan("demo"), 2)
    adj = plan.sensor_adjacency()
    raw = solid = 0
    for seed in range(20):
        g = build_confidence_graph(segment_indoor(simulate(plan, residents, 14, seed)))
        raw += len({frozenset(e) for e in g.counts} - adj)
        solid += sum(1 for e in apply_rules(g).solid_edges() if frozenset(e) not in adj)
    assert 1 - solid / raw >= 0.9
