"""Serialisers for every artifact the command line writes.

Each function returns text (LF line endings, sorted collections) so that equal inputs
give byte-equal files.
"""

from __future__ import annotations

import csv
import io
import json

from .routine import CROSSING, NON_CROSSING, leaveback_rows


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def activities_json(activities):
    return to_json([a.to_dict() for a in sorted(activities, key=lambda a: a.start_ts)])


def activities_csv(activities):
    rows = [(d["start"], d["end"], d["event_count"], " ".join(d["sensors"]))
            for d in (a.to_dict() for a in sorted(activities, key=lambda a: a.start_ts))]
    return to_csv(["start", "end", "event_count", "sensors"], rows)


def leavebacks_json(leavebacks):
    return to_json([lb.to_dict() for lb in sorted(leavebacks, key=lambda lb: lb.depart_ts)])


def leavebacks_csv(leavebacks):
    cols = ["date", "depart", "return", "sensor", "seconds"]
    return to_csv(cols, [[r[c] for c in cols] for r in leaveback_rows(leavebacks)])


def topology_dict(graph, topology):
    edges = []
    for a, b in sorted(topology.edges):
        edges.append({"a": a, "b": b, "kind": topology.edges[(a, b)],
                      "count_ab": graph.count(a, b), "count_ba": graph.count(b, a)})
    return {"nodes": sorted(graph.node_set), "edges": edges,
            "alpha": topology.alpha_used, "beta": graph.beta, "gamma": graph.gamma}


def topology_json(graph, topology):
    return to_json(topology_dict(graph, topology))


def topology_dot(topology, name="topology"):
    lines = [f"graph {json.dumps(name)} {{"]
    for n in sorted(topology.nodes):
        lines.append(f"  {json.dumps(n)};")
    for a, b in sorted(topology.edges):
        lines.append(f"  {json.dumps(a)} -- {json.dumps(b)} [style={topology.edges[(a, b)]}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def groups_csv(series):
    return to_csv(["day", "groups", "nodes"], [(d, g, n) for d, _, g, n in series.entries])


def groups_json(series):
    return to_json([{"day": d, "date": day.isoformat(), "groups": g, "nodes": n}
                    for d, day, g, n in series.entries])


def mining_json(report):
    return to_json(report)


def locations_json(result):
    return to_json(result.to_dict())


def routine_csv(hist):
    return to_csv(["location", "hour", CROSSING, NON_CROSSING], hist.rows())


def routine_json(hist):
    return to_json(hist.to_dict())


def routine_plot_data(hist):
    """Whitespace-separated columns, one row per hour: crossing then non-crossing per location."""
    locs = list(hist.bins)
    header = ["hour"] + [f"{loc}:{c}" for loc in locs for c in (CROSSING, NON_CROSSING)]
    lines = ["# " + " ".join(header)]
    for h in range(24):
        cells = [str(h)] + [str(v) for loc in locs for v in hist.bins[loc][h]]
        lines.append(" ".join(cells))
    return "\n".join(lines) + "\n"


def eval_json(rel_score, loc_scores):
    out = {"relationship": rel_score.to_dict()}
    for key in ("bedrooms", "kitchen_dining", "entrances"):
        out[key] = loc_scores[key].to_dict()
    out["bedroom_pairs"] = loc_scores["bedroom_pairs"]
    return to_json(out)


def relations_csv(rel_score):
    rows = list(rel_score.matrix_rows())
    return to_csv(rows[0], rows[1:])

