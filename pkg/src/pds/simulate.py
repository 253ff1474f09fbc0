"""Seeded synthetic smart home: planted floorplans, resident schedules and decoy injection.

A floorplan is a set of rooms, each with an ordered chain of motion sensors. The
first sensor of a chain sits at the room's doorway and doorways of adjacent rooms
are directly reachable from each other, so the planted sensor adjacency is the
chain links plus doorway-to-doorway links. Residents only ever walk along that
adjacency, which makes a single-resident log free of false moves by construction.
"""

from __future__ import annotations

import configparser
import io
from collections import deque
from dataclasses import dataclass, field, replace
from datetime import date, datetime, timedelta
from importlib import resources

import numpy as np

from .evaluation import GroundTruthLayout
from .events import SensorEvent, SensorLog
from .segmentation import ClockWindow

CATEGORIES = ("bedroom", "kitchen_dining", "entrance", "other")
DAY = 86400


class DisconnectedFloorplan(ValueError):
    pass


@dataclass(frozen=True)
class Room:
    name: str
    category: str
    sensors: tuple

    def __post_init__(self):
        object.__setattr__(self, "sensors", tuple(self.sensors))
        if self.category not in CATEGORIES:
            raise ValueError(f"room {self.name}: unknown category {self.category!r}")
        if not self.sensors:
            raise ValueError(f"room {self.name} has no sensors")

    @property
    def doorway(self):
        return self.sensors[0]


@dataclass(frozen=True)
class FloorplanSpec:
    rooms: tuple
    room_adjacency: frozenset
    name: str = "plan"
    start_date: date = date(2020, 1, 6)

    def __post_init__(self):
        object.__setattr__(self, "rooms", tuple(self.rooms))
        object.__setattr__(self, "room_adjacency",
                           frozenset(frozenset(p) for p in self.room_adjacency))
        names = [r.name for r in self.rooms]
        if len(set(names)) != len(names):
            raise ValueError("duplicate room names")
        ids = [s for r in self.rooms for s in r.sensors]
        if len(set(ids)) != len(ids):
            raise ValueError("sensor ids must be unique across rooms")
        for p in self.room_adjacency:
            if len(p) != 2 or not p <= set(names):
                raise ValueError(f"bad room adjacency {sorted(p)}")
        if self.rooms and len(self._reachable(names[0])) != len(names):
            raise DisconnectedFloorplan(f"floorplan {self.name!r} is not connected")

    def room(self, name) -> Room:
        for r in self.rooms:
            if r.name == name:
                return r
        raise KeyError(name)

    def room_neighbors(self, name):
        return sorted(next(iter(p - {name})) for p in self.room_adjacency if name in p)

    def _reachable(self, start):
        seen, todo = {start}, [start]
        while todo:
            for nb in self.room_neighbors(todo.pop()):
                if nb not in seen:
                    seen.add(nb)
                    todo.append(nb)
        return seen

    def room_path(self, a, b):
        """Shortest room path from ``a`` to ``b`` (BFS, neighbours in name order)."""
        prev = {a: None}
        queue = deque([a])
        while queue:
            cur = queue.popleft()
            if cur == b:
                break
            for nb in self.room_neighbors(cur):
                if nb not in prev:
                    prev[nb] = cur
                    queue.append(nb)
        path = [b]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        return path[::-1]

    @property
    def sensors(self):
        return [s for r in self.rooms for s in r.sensors]

    def sensor_room(self):
        return {s: r.name for r in self.rooms for s in r.sensors}

    def sensor_adjacency(self) -> frozenset:
        pairs = set()
        for r in self.rooms:
            pairs.update(frozenset(p) for p in zip(r.sensors, r.sensors[1:]))
        for p in self.room_adjacency:
            a, b = sorted(p)
            pairs.add(frozenset((self.room(a).doorway, self.room(b).doorway)))
        return frozenset(pairs)

    def ground_truth(self) -> GroundTruthLayout:
        labels = {}
        beds = [r for r in self.rooms if r.category == "bedroom"]
        for r in self.rooms:
            if r.category == "bedroom":
                label = f"bedroom-{beds.index(r) + 1}"
            elif r.category == "entrance":
                # only the outer door counts as an entrance sensor
                for s in r.sensors[:-1]:
                    labels[s] = "other"
                labels[r.sensors[-1]] = "entrance"
                continue
            else:
                label = r.category
            for s in r.sensors:
                labels[s] = label
        return GroundTruthLayout(frozenset(self.sensors), self.sensor_adjacency(), labels)


def _hhmm(text):
    return datetime.strptime(text.strip(), "%H:%M").time()


def _secs(t):
    return t.hour * 3600 + t.minute * 60 + t.second


@dataclass(frozen=True)
class ResidentProfile:
    name: str
    home_room: str
    wake: str = "07:00"
    bedtime: str = "22:30"
    night_window: str = "02:00-06:00"
    night_wakeups: float = 2.0
    kitchen_window: str = "18:00-19:00"
    kitchen_visits: float = 4.0
    wander_rate: float = 1.5  # trips per waking hour
    leave_probability: float = 0.3
    min_absence: float = 3600
    max_absence: float = 3 * 3600
    trigger_dwell: tuple = (2, 6)
    still_seconds: tuple = (30, 180)
    contrarian: bool = False

    def __post_init__(self):
        for w in (self.night_window, self.kitchen_window):
            ClockWindow.parse(w)
        _hhmm(self.wake), _hhmm(self.bedtime)
        if min(self.night_wakeups, self.kitchen_visits, self.wander_rate) < 0:
            raise ValueError("rates must be non-negative")
        if not 0 <= self.leave_probability <= 1:
            raise ValueError("leave_probability must be a probability")
        lo, hi = self.trigger_dwell
        if not 1 <= lo <= hi:
            raise ValueError("trigger_dwell must satisfy 1 <= min <= max")
        if not 0 < self.min_absence <= self.max_absence:
            raise ValueError("absence bounds must satisfy 0 < min <= max")


@dataclass(frozen=True)
class DecoyConfig:
    """Periodic fake triggers.

    ``stationary`` fires ``decoy_sensor_id`` every ``period`` seconds; ``room`` places a
    device that is not part of the plan. ``roaming`` walks a tour of the plan's sensors
    starting at ``decoy_sensor_id``, one trigger per ``period``, resting ``rest`` seconds
    between tours.
    """

    decoy_sensor_id: str
    period: float
    mode: str = "stationary"
    room: str | None = None
    phase: float = 0
    rest: float = 3600

    def __post_init__(self):
        if not self.period > 0:
            raise ValueError("period must be positive")
        if self.mode not in ("stationary", "roaming"):
            raise ValueError(f"unknown decoy mode {self.mode!r}")


class _Walker:
    """One resident's clock, position and emitted events."""

    def __init__(self, plan, profile, rng):
        self.plan = plan
        self.p = profile
        self.rng = rng
        self.room = profile.home_room
        self.idx = 0
        self.t = 0
        self.events = []

    @property
    def here(self):
        return self.plan.room(self.room).sensors[self.idx]

    def _dwell(self):
        lo, hi = self.p.trigger_dwell
        return int(self.rng.integers(lo, hi + 1))

    def fire(self, sensor):
        self.t += self._dwell()
        self.events.append((self.t, sensor))

    def path_to(self, room, idx):
        """Sensors fired walking from the current spot to ``room[idx]``."""
        if room == self.room:
            step = 1 if idx >= self.idx else -1
            return [(room, i) for i in range(self.idx + step, idx + step, step)]
        steps = [(self.room, i) for i in range(self.idx - 1, -1, -1)]
        for r in self.plan.room_path(self.room, room)[1:]:
            steps.append((r, 0))
        steps.extend((room, i) for i in range(1, idx + 1))
        return steps

    def walk(self, room, idx, pause_before_last=0):
        steps = self.path_to(room, idx)
        for k, (r, i) in enumerate(steps):
            if k == len(steps) - 1 and pause_before_last:
                self.still(pause_before_last)
            self.room, self.idx = r, i
            self.fire(self.here)

    def still(self, seconds):
        end = self.t + seconds
        while self.t < end:
            self.fire(self.here)

    def start_at(self, when, gap=30):
        """Idle until ``when`` (or a short gap from now, whichever is later)."""
        self.t = max(when, self.t + gap)

    def still_time(self):
        lo, hi = self.p.still_seconds
        return int(self.rng.integers(lo, hi + 1))

    def episode(self, room, idx=None, spots=1):
        """Walk to ``room``, then linger at ``spots`` positions inside it."""
        n = len(self.plan.room(room).sensors)
        if idx is None:
            idx = int(self.rng.integers(0, n))
            if room == self.room and idx == self.idx and n > 1:
                idx = (idx + 1) % n
        self.walk(room, idx)
        for _ in range(spots - 1):
            self.still(int(self.rng.integers(10, 40)))
            self.walk(room, int(self.rng.integers(0, n)))
        self.still(self.still_time())


def _poisson_times(rng, rate_per_hour, start, end):
    if rate_per_hour <= 0 or end <= start:
        return []
    n = rng.poisson(rate_per_hour * (end - start) / 3600)
    return sorted(int(x) for x in rng.uniform(start, end, n))


def _simulate_resident(plan, profile, days, rng):
    w = _Walker(plan, profile, rng)
    bedrooms = [r.name for r in plan.rooms if r.category == "bedroom"]
    kitchens = [r.name for r in plan.rooms if r.category == "kitchen_dining"]
    entrances = [r.name for r in plan.rooms if r.category == "entrance"]
    others = [r.name for r in plan.rooms if r.category not in ("entrance",)]
    home = profile.home_room
    kitchen = kitchens[0] if kitchens else home
    night_w = ClockWindow.parse(profile.night_window)
    kitchen_w = ClockWindow.parse(profile.kitchen_window)
    non_bed = [r for r in others if r not in bedrooms] or others
    wake, bedtime = _secs(_hhmm(profile.wake)), _secs(_hhmm(profile.bedtime))
    n_home = len(plan.room(home).sensors)
    w.idx = n_home - 1

    for d in range(days):
        base = d * DAY
        # night: short bursts of movement inside the bedroom
        night_start, night_end = _secs(night_w.start_clock), _secs(night_w.end_clock)
        n_night = rng.poisson(profile.night_wakeups)
        for t in sorted(int(x) for x in rng.uniform(night_start, night_end - 600, n_night)):
            if base + t < w.t + 60:
                continue
            w.start_at(base + t)
            if profile.contrarian:
                w.episode(str(rng.choice(non_bed)))
            else:
                w.walk(home, n_home - 1)
                w.still(int(rng.integers(20, 60)))
                w.walk(home, int(rng.integers(0, n_home)))

        w.start_at(base + wake + int(rng.integers(-1800, 1801)))
        if not profile.contrarian:
            w.episode(home)
        w.start_at(w.t + 120)
        w.episode(kitchen)

        k_start, k_end = _secs(kitchen_w.start_clock), _secs(kitchen_w.end_clock)
        day_end = k_start - 1200
        plan_day = [(t, "trip") for t in
                    _poisson_times(rng, profile.wander_rate, w.t - base + 300, day_end)]
        if entrances and rng.random() < profile.leave_probability:
            plan_day.append((int(rng.uniform(9 * 3600, k_start - 5 * 3600)), "leave"))
        for t, kind in sorted(plan_day):
            when = base + t
            if kind == "leave":
                w.start_at(when)
                door = plan.room(str(rng.choice(entrances)))
                w.walk(door.name, len(door.sensors) - 1,
                       pause_before_last=int(rng.integers(30, 90)))
                w.t += int(rng.uniform(profile.min_absence * 1.05, profile.max_absence))
                w.events.append((w.t, w.here))
                w.episode(str(rng.choice(others)))
            elif w.t + 60 <= when < base + day_end:
                w.start_at(when)
                w.episode(str(rng.choice(others)), spots=int(rng.integers(1, 4)))

        # kitchen window: arrive shortly before, then stay and move around inside
        dinner = home if profile.contrarian else kitchen
        w.start_at(base + k_start - 900)
        w.walk(dinner, 0)
        n_dinner = len(plan.room(dinner).sensors)
        visits = max(1, rng.poisson(profile.kitchen_visits))
        for t in sorted(int(x) for x in rng.uniform(k_start, k_end - 300, visits)):
            if base + t < w.t + 30:
                continue
            w.start_at(base + t)
            w.episode(dinner, spots=int(rng.integers(2, 5)))

        for t in _poisson_times(rng, profile.wander_rate, k_end + 300, bedtime - 900):
            if base + t < w.t + 60:
                continue
            w.start_at(base + t)
            w.episode(str(rng.choice(others)))

        w.start_at(base + bedtime + int(rng.integers(-1200, 1201)))
        w.walk(home, n_home - 1)
        w.still(w.still_time())
    return w.events


def _state_for(sensor):
    return "OPEN" if sensor.startswith("D") else "ON"


def _to_log(plan, timed, name):
    origin = datetime.combine(plan.start_date, datetime.min.time())
    events = [SensorEvent(origin + timedelta(seconds=t), s, _state_for(s)) for t, s in timed]
    return SensorLog(tuple(events), name)


def simulate(plan: FloorplanSpec, residents, days: int, seed: int) -> SensorLog:
    """Deterministic log for ``days`` days; each resident draws from its own seed stream."""
    if days < 1:
        raise ValueError("days must be at least 1")
    residents = list(residents)
    for r in residents:
        if plan.room(r.home_room).category != "bedroom":
            raise ValueError(f"resident {r.name}: home room must be a bedroom")
    timed = []
    for i, profile in enumerate(residents):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        timed.extend((t, i, s) for t, s in _simulate_resident(plan, profile, days, rng))
    timed.sort(key=lambda e: (e[0], e[1]))
    return _to_log(plan, [(t, s) for t, _, s in timed], f"{plan.name}-seed{seed}")


def sensor_tour(plan, start):
    """Closed walk over the planted sensor adjacency visiting every sensor (DFS with backtracking)."""
    adj = {}
    for p in plan.sensor_adjacency():
        a, b = sorted(p)
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    tour, seen = [start], {start}

    def visit(node):
        for nb in sorted(adj.get(node, ())):
            if nb not in seen:
                seen.add(nb)
                tour.append(nb)
                visit(nb)
                tour.append(node)

    visit(start)
    return tour


def inject_decoy(log: SensorLog, decoy: DecoyConfig, plan: FloorplanSpec, span=None) -> SensorLog:
    """Merge periodic decoy triggers into ``log``.

    ``span`` is ``(start, end)``; it defaults to whole calendar days covering the log.
    """
    if span is None:
        if not len(log):
            raise ValueError("an empty log needs an explicit span")
        dates = log.dates()
        start = datetime.combine(dates[0], datetime.min.time())
        end = datetime.combine(dates[-1], datetime.min.time()) + timedelta(days=1)
    else:
        start, end = span
    step = timedelta(seconds=decoy.period)
    t = start + timedelta(seconds=decoy.phase)
    extra = []
    if decoy.mode == "stationary":
        if decoy.decoy_sensor_id not in plan.sensors:
            if decoy.room is None:
                raise ValueError("stationary decoy needs a plan sensor or a room")
            plan.room(decoy.room)
        while t < end:
            extra.append(SensorEvent(t, decoy.decoy_sensor_id, _state_for(decoy.decoy_sensor_id)))
            t += step
    else:
        if decoy.decoy_sensor_id not in plan.sensors:
            raise ValueError("roaming decoy must start at a plan sensor")
        tour = sensor_tour(plan, decoy.decoy_sensor_id)
        rest = timedelta(seconds=decoy.rest)
        while t < end:
            for s in tour:
                if t >= end:
                    break
                extra.append(SensorEvent(t, s, _state_for(s)))
                t += step
            t += rest
    return SensorLog.from_events(list(log.events) + extra, log.source_name)


# -- plan files ------------------------------------------------------------------

_PROFILE_FLOATS = ("night_wakeups", "kitchen_visits", "wander_rate", "leave_probability",
                   "min_absence", "max_absence")
_PROFILE_STRS = ("wake", "bedtime", "night_window", "kitchen_window")
_PROFILE_RANGES = ("trigger_dwell", "still_seconds")


def _range(text):
    lo, _, hi = text.partition("-")
    return (int(lo), int(hi or lo))


def parse_plan(text: str):
    """Read a plan file; returns ``(FloorplanSpec, [ResidentProfile, ...])``.

    Sections: ``[plan]`` (name, start_date), ``[room NAME]`` (category, sensors,
    adjacent) and ``[resident NAME]`` (home plus optional schedule keys).
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.read_string(text)
    name, start = "plan", date(2020, 1, 6)
    if cp.has_section("plan"):
        name = cp.get("plan", "name", fallback=name)
        start = date.fromisoformat(cp.get("plan", "start_date", fallback=start.isoformat()))
    rooms, adjacency, residents = [], set(), []
    for section in cp.sections():
        kind, _, label = section.partition(" ")
        label = label.strip()
        sec = cp[section]
        if kind == "room":
            rooms.append(Room(label, sec.get("category", "other"), sec.get("sensors", "").split()))
            for nb in sec.get("adjacent", "").split():
                adjacency.add(frozenset((label, nb)))
        elif kind == "resident":
            kw = {"name": label, "home_room": sec["home"]}
            for key in _PROFILE_FLOATS:
                if key in sec:
                    kw[key] = sec.getfloat(key)
            for key in _PROFILE_STRS:
                if key in sec:
                    kw[key] = sec[key]
            for key in _PROFILE_RANGES:
                if key in sec:
                    kw[key] = _range(sec[key])
            if "contrarian" in sec:
                kw["contrarian"] = sec.getboolean("contrarian")
            residents.append(ResidentProfile(**kw))
        elif kind != "plan":
            raise ValueError(f"unknown section [{section}]")
    return FloorplanSpec(tuple(rooms), frozenset(adjacency), name, start), residents


def load_plan(path_or_name):
    """Load a plan file, or a bundled plan by name (``demo``, ``demo2``)."""
    bundled = resources.files("pds") / "data" / f"{path_or_name}.plan"
    if bundled.is_file():
        return parse_plan(bundled.read_text(encoding="utf-8"))
    with open(path_or_name, encoding="utf-8") as fh:
        return parse_plan(fh.read())


def dumps_plan(plan: FloorplanSpec, residents=()):
    cp = configparser.ConfigParser()
    cp["plan"] = {"name": plan.name, "start_date": plan.start_date.isoformat()}
    for r in plan.rooms:
        nbs = [n for n in plan.room_neighbors(r.name) if n > r.name]
        cp[f"room {r.name}"] = {"category": r.category, "sensors": " ".join(r.sensors),
                                "adjacent": " ".join(nbs)}
    for p in residents:
        sec = {"home": p.home_room}
        for key in _PROFILE_STRS:
            sec[key] = getattr(p, key)
        for key in _PROFILE_FLOATS:
            sec[key] = repr(getattr(p, key))
        for key in _PROFILE_RANGES:
            lo, hi = getattr(p, key)
            sec[key] = f"{lo}-{hi}"
        sec["contrarian"] = str(p.contrarian).lower()
        cp[f"resident {p.name}"] = sec
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def with_residents(plan_and_residents, n):
    """Clone the first resident profile ``n`` times (sharing the same home) for interference runs."""
    plan, residents = plan_and_residents
    base = residents[0]
    return plan, [replace(base, name=f"{base.name}{i + 1}") for i in range(n)]
