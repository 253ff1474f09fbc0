"""Reading CASAS-style sensor logs into a time-ordered stream of trigger events."""

from __future__ import annotations

import io
import logging
from collections import Counter
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path
from typing import Iterable

logger = logging.getLogger(__name__)

TIME_FORMAT = "%Y-%m-%d %H:%M:%S"


class MalformedLine(ValueError):
    """A record that cannot be parsed (bad date/time or too few fields)."""

    def __init__(self, line, reason):
        super().__init__(f"{reason}: {line!r}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class SensorEvent:
    timestamp: datetime
    sensor_id: str
    raw_state: str = "ON"

    def __post_init__(self):
        if not self.sensor_id or any(c.isspace() for c in self.sensor_id):
            raise ValueError(f"invalid sensor id {self.sensor_id!r}")

    def to_line(self):
        ms = self.timestamp.microsecond // 1000
        return f"{self.timestamp.strftime(TIME_FORMAT)}.{ms:03d} {self.sensor_id} {self.raw_state}"


@dataclass(frozen=True)
class Skipped:
    reason: str
    line: str = ""


@dataclass(frozen=True)
class IngestConfig:
    trigger_states: frozenset = frozenset({"ON", "OPEN"})
    ignored_sensor_prefixes: frozenset = frozenset({"T"})
    tolerate_trailing_fields: bool = True

    def __post_init__(self):
        if not self.trigger_states:
            raise ValueError("trigger_states must not be empty")
        object.__setattr__(self, "trigger_states", frozenset(self.trigger_states))
        object.__setattr__(self, "ignored_sensor_prefixes", frozenset(self.ignored_sensor_prefixes))


@dataclass(frozen=True)
class SensorLog:
    events: tuple = ()
    source_name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    @property
    def day_span(self):
        return len(self.dates())

    def dates(self) -> list[date]:
        """Distinct calendar dates in chronological order."""
        return sorted({e.timestamp.date() for e in self.events})

    def sensors(self):
        return sorted({e.sensor_id for e in self.events})

    def is_sorted(self):
        ev = self.events
        return all(ev[i].timestamp <= ev[i + 1].timestamp for i in range(len(ev) - 1))

    @classmethod
    def from_events(cls, events: Iterable[SensorEvent], source_name=""):
        # sorted() is stable, so simultaneous events keep their input order
        return cls(tuple(sorted(events, key=lambda e: e.timestamp)), source_name)


@dataclass
class IngestStats:
    total: int = 0
    kept: int = 0
    skipped: Counter = field(default_factory=Counter)
    malformed: int = 0
    per_sensor: Counter = field(default_factory=Counter)

    @property
    def skipped_total(self):
        return sum(self.skipped.values())

    def to_dict(self):
        return {
            "total_lines": self.total,
            "kept": self.kept,
            "skipped": self.skipped_total,
            "skipped_by_reason": dict(sorted(self.skipped.items())),
            "malformed": self.malformed,
            "per_sensor": dict(sorted(self.per_sensor.items())),
        }


def parse_timestamp(day: str, clock: str) -> datetime:
    """Parse ``YYYY-MM-DD`` and ``HH:MM:SS[.f...]``, truncating to milliseconds."""
    whole, _, frac = clock.partition(".")
    if frac and not frac.isdigit():
        raise ValueError(f"bad fractional seconds {clock!r}")
    base = datetime.strptime(f"{day} {whole}", TIME_FORMAT)
    micros = int((frac + "000000")[:6]) if frac else 0
    return base.replace(microsecond=micros // 1000 * 1000)


def parse_event_line(line: str, config: IngestConfig | None = None):
    """Parse one log record into a :class:`SensorEvent` or a :class:`Skipped` marker.

    Raises :class:`MalformedLine` when the record has fewer than four fields or an
    unreadable date/time.
    """
    config = config or IngestConfig()
    text = line.strip()
    if not text or text.startswith("#"):
        return Skipped("annotation-only line", text)
    fields = text.split()
    if len(fields) < 4:
        raise MalformedLine(text, "fewer than 4 fields")
    if len(fields) > 4 and not config.tolerate_trailing_fields:
        raise MalformedLine(text, "unexpected trailing fields")
    day, clock, sensor, state = fields[:4]
    try:
        ts = parse_timestamp(day, clock)
    except ValueError as exc:
        raise MalformedLine(text, "unparseable date/time") from exc
    if any(sensor.startswith(p) for p in config.ignored_sensor_prefixes):
        return Skipped("ignored sensor", text)
    if state not in config.trigger_states:
        return Skipped("non-trigger state", text)
    return SensorEvent(ts, sensor, state)


def read_log(lines: Iterable[str], config: IngestConfig | None = None, source_name="",
             strict=False) -> tuple[SensorLog, IngestStats]:
    config = config or IngestConfig()
    stats = IngestStats()
    events = []
    for line in lines:
        stats.total += 1
        try:
            parsed = parse_event_line(line, config)
        except MalformedLine:
            if strict:
                raise
            stats.malformed += 1
            continue
        if isinstance(parsed, Skipped):
            stats.skipped[parsed.reason] += 1
        else:
            stats.kept += 1
            stats.per_sensor[parsed.sensor_id] += 1
            events.append(parsed)
    if stats.malformed:
        logger.warning("%s: %d malformed lines skipped", source_name or "<log>", stats.malformed)
    return SensorLog.from_events(events, source_name), stats


def load_log(path, config: IngestConfig | None = None, strict=False):
    """Load a log file; returns ``(SensorLog, IngestStats)``."""
    path = Path(path)
    # newline=None folds CRLF into LF
    with open(path, encoding="utf-8", errors="replace", newline=None) as fh:
        return read_log(fh, config, source_name=path.name, strict=strict)


def loads_log(text: str, config: IngestConfig | None = None, source_name="", strict=False):
    return read_log(io.StringIO(text, newline=None), config, source_name, strict)


def dump_log(log) -> str:
    """Normalized four-field form, LF line endings."""
    return "".join(e.to_line() + "\n" for e in log)


def write_log(log, path):
    Path(path).write_text(dump_log(log), encoding="utf-8", newline="\n")
