"""Command-line front end: ``pds <subcommand> [flags]``.

Every subcommand produces a set of named artifacts. With ``--out DIR`` all of them are
written into DIR; otherwise the one matching ``--format`` goes to standard output.
``report`` writes the union of the analysis artifacts, so its directory is the same as
running ``ingest``, ``segment``, ``topology``, ``groups``, ``locate``, ``routine`` and
(with ``--truth``) ``eval`` into one directory.

Exit codes: 0 success, 1 usage error, 2 input or parse failure, 3 nothing to analyse.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from functools import cached_property
from pathlib import Path

from . import export
from .evaluation import GroundTruthLayout, UnknownSensor, location_scores, relationship_accuracy
from .events import MalformedLine, dump_log, load_log, loads_log
from .locations import DeductionConfig, run_full_deduction
from .routine import hourly_histograms
from .segmentation import ClockWindow, SegmentationParams, detect_leaveback, segment_indoor
from .simulate import DecoyConfig, inject_decoy, load_plan, simulate, with_residents
from .topology import EmptyGraph, alpha, apply_rules, build_confidence_graph, groups_over_days

USAGE, INPUT, EMPTY = 1, 2, 3


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(USAGE, f"{self.prog}: {message}")


def _window(text):
    try:
        return ClockWindow.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _ratio(text):
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"must lie strictly between 0 and 1, got {text}")
    return v


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


class Run:
    """Lazily computed pipeline stages for one input log."""

    def __init__(self, args, stdin):
        self.args = args
        self._stdin = stdin

    @cached_property
    def loaded(self):
        src = self.args.input
        try:
            if src == "-":
                log, stats = loads_log(self._stdin.read(), source_name="stdin",
                                       strict=self.args.strict)
            else:
                log, stats = load_log(src, strict=self.args.strict)
        except FileNotFoundError:
            raise CliError(INPUT, f"input not found: {src}")
        except MalformedLine as exc:
            raise CliError(INPUT, f"malformed line ({exc.reason}): {exc.line[:80]}")
        except (OSError, UnicodeError) as exc:
            raise CliError(INPUT, f"cannot read {src}: {exc}")
        if not len(log):
            raise CliError(EMPTY, f"no sensor trigger events in {src}")
        return log, stats

    @property
    def log(self):
        return self.loaded[0]

    @cached_property
    def params(self):
        a = self.args
        try:
            return SegmentationParams(a.x, a.y, a.z)
        except ValueError as exc:
            raise CliError(USAGE, str(exc))

    @cached_property
    def config(self):
        a = self.args
        return DeductionConfig(a.bedroom_window, a.kitchen_window, a.min_support)

    @cached_property
    def activities(self):
        acts = segment_indoor(self.log, self.params)
        if not acts:
            raise CliError(EMPTY, "no indoor activities found; check --x/--y")
        return acts

    @cached_property
    def leavebacks(self):
        return detect_leaveback(self.log, self.params)

    @cached_property
    def topology(self):
        graph = build_confidence_graph(self.activities)
        try:
            return graph, apply_rules(graph, alpha(graph))
        except EmptyGraph:
            raise CliError(EMPTY, "activities contain no sensor-to-sensor moves")

    @cached_property
    def deduction(self):
        self.topology  # surfaces the empty-graph diagnostic first
        return run_full_deduction(self.log, self.params, self.config)

    @cached_property
    def truth(self):
        path = self.args.truth
        if path is None:
            raise CliError(USAGE, "--truth is required for eval")
        try:
            return GroundTruthLayout.load(path)
        except FileNotFoundError:
            raise CliError(INPUT, f"truth file not found: {path}")
        except (ValueError, UnknownSensor) as exc:
            raise CliError(INPUT, f"bad truth file {path}: {exc}")


def _ingest(run):
    log, stats = run.loaded
    return {"ingest.json": export.to_json(stats.to_dict()), "log.txt": dump_log(log)}


def _segment(run):
    return {"activities.json": export.activities_json(run.activities),
            "activities.csv": export.activities_csv(run.activities),
            "leavebacks.json": export.leavebacks_json(run.leavebacks)}


def _topology(run):
    graph, topo = run.topology
    return {"topology.json": export.topology_json(graph, topo),
            "topology.dot": export.topology_dot(topo)}


def _groups(run):
    series = groups_over_days(run.log, run.params)
    return {"groups.csv": export.groups_csv(series), "groups.json": export.groups_json(series)}


def _locate(run):
    res = run.deduction
    return {"locations.json": export.locations_json(res),
            "deduction.json": export.to_json(res.report)}


def _routine(run):
    res = run.deduction
    hist = hourly_histograms(res.activities, res.leavebacks, res.location_map)
    out = {"routine.csv": export.routine_csv(hist), "routine.json": export.routine_json(hist),
           "leavebacks.csv": export.leavebacks_csv(res.leavebacks)}
    if run.args.plot_data:
        out["routine.dat"] = export.routine_plot_data(hist)
    return out


def _eval(run):
    truth = run.truth
    _, topo = run.topology
    try:
        rel = relationship_accuracy(topo, truth)
    except UnknownSensor as exc:
        raise CliError(INPUT, f"truth file does not cover the log: {exc.args[0]}")
    scores = location_scores(run.deduction.location_map, truth)
    return {"eval.json": export.eval_json(rel, scores), "relations.csv": export.relations_csv(rel)}


def _report(run):
    if run.args.out is None:
        raise CliError(USAGE, "report needs --out DIR")
    out = {}
    stages = [_ingest, _segment, _topology, _groups, _locate, _routine]
    if run.args.truth is not None:
        stages.append(_eval)
    for stage in stages:
        out.update(stage(run))
    return out


def _simulate(run):
    a = run.args
    try:
        plan, residents = load_plan(a.plan)
    except FileNotFoundError:
        raise CliError(INPUT, f"plan not found: {a.plan}")
    except (ValueError, KeyError, configparser.Error) as exc:
        raise CliError(INPUT, f"bad plan file {a.plan}: {exc}")
    if a.clone_residents is not None:
        if a.clone_residents < 1:
            raise CliError(USAGE, "--clone-residents must be at least 1")
        plan, residents = with_residents((plan, residents), a.clone_residents)
    try:
        log = simulate(plan, residents, a.days, a.seed)
        if a.decoy_period is not None:
            decoy = DecoyConfig(a.decoy_id, a.decoy_period, a.decoy_mode, a.decoy_room)
            log = inject_decoy(log, decoy, plan)
    except (ValueError, KeyError) as exc:
        raise CliError(USAGE, f"cannot simulate: {exc}")
    return {"log.txt": dump_log(log), "truth.txt": plan.ground_truth().dumps()}


# name -> (handler, default format, {format: artifact})
COMMANDS = {
    "ingest": (_ingest, "json", {"json": "ingest.json"}),
    "segment": (_segment, "json", {"json": "activities.json", "csv": "activities.csv"}),
    "topology": (_topology, "json", {"json": "topology.json", "dot": "topology.dot"}),
    "groups": (_groups, "csv", {"csv": "groups.csv", "json": "groups.json"}),
    "locate": (_locate, "json", {"json": "locations.json"}),
    "routine": (_routine, "csv", {"csv": "routine.csv", "json": "routine.json"}),
    "eval": (_eval, "json", {"json": "eval.json", "csv": "relations.csv"}),
    "simulate": (_simulate, None, {}),
    "report": (_report, None, {}),
}


def build_parser():
    parser = _Parser(prog="pds", description="Sensor-log location and routine deduction.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--out", metavar="DIR", help="write every artifact into DIR")
    common.add_argument("--format", choices=("json", "csv", "dot"),
                        help="artifact to print when --out is not given")

    analysis = _Parser(add_help=False)
    analysis.add_argument("--input", required=True, metavar="PATH|-")
    analysis.add_argument("--truth", metavar="PATH", help="ground-truth layout file")
    analysis.add_argument("--x", type=_positive, default=40.0, metavar="SECS",
                          help="minimum activity span (default 40)")
    analysis.add_argument("--y", type=_positive, default=10.0, metavar="SECS",
                          help="maximum gap inside an activity (default 10)")
    analysis.add_argument("--z", type=_positive, default=3600.0, metavar="SECS",
                          help="minimum leave-back absence (default 3600)")
    analysis.add_argument("--min-support", type=_ratio, default=0.5, metavar="RATIO")
    analysis.add_argument("--bedroom-window", type=_window, default=_window("02:00-06:00"),
                          metavar="HH:MM-HH:MM")
    analysis.add_argument("--kitchen-window", type=_window, default=_window("18:00-19:00"),
                          metavar="HH:MM-HH:MM")
    analysis.add_argument("--strict", action="store_true",
                          help="fail on the first malformed line instead of skipping it")
    analysis.add_argument("--plot-data", action="store_true",
                          help="also emit gnuplot-ready routine columns (routine.dat)")

    for name in ("ingest", "segment", "topology", "groups", "locate", "routine", "eval", "report"):
        sub.add_parser(name, parents=[analysis, common])

    sim = sub.add_parser("simulate", parents=[common])
    sim.add_argument("--plan", required=True, help="plan file or bundled name (demo, demo2)")
    sim.add_argument("--days", type=int, required=True)
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--clone-residents", type=int, metavar="N",
                     help="replace the residents with N copies of the first one")
    sim.add_argument("--decoy-id", default="X001")
    sim.add_argument("--decoy-period", type=_positive, metavar="SECS")
    sim.add_argument("--decoy-mode", choices=("stationary", "roaming"), default="stationary")
    sim.add_argument("--decoy-room")
    return parser


def _write(files, out_dir):
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name in sorted(files):
            (out / name).write_text(files[name], encoding="utf-8", newline="\n")
    except OSError as exc:
        raise CliError(INPUT, f"cannot write to {out}: {exc}")


def main(argv=None, stdin=None, stdout=None, stderr=None):
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        handler, default_fmt, formats = COMMANDS[args.command]
        fmt = args.format or default_fmt
        if formats and fmt not in formats:
            raise CliError(USAGE, f"{args.command} does not support --format {fmt}")
        files = handler(Run(args, stdin))
        if args.out is not None:
            _write(files, args.out)
        elif args.command == "simulate":
            stdout.write(files["log.txt"])
        else:
            stdout.write(files[formats[fmt]])
    except CliError as exc:
        print(str(exc).splitlines()[0], file=stderr)
        return exc.code
    except SystemExit as exc:  # --help
        return exc.code or 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
