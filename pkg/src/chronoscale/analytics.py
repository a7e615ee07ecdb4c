"""Session reconstruction from trace logs and engagement statistics.

Raw telemetry carries no session ids, so visitor interactions are
reconstructed with a single forward sweep over the time-ordered entries.
The current session closes and a new one opens at the triggering entry
when any of four rules fires: an automation start arrives, a quiet gap of
a minute or more passes, the session grows to fifteen minutes, or it has
already absorbed 250 clicks. Sessions with no clicks at all are invisible
in interaction statistics and are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from zoneinfo import ZoneInfo, ZoneInfoNotFoundError

from .errors import ChronoError
from .logbook import LogEntry, LogKind

GAP_LIMIT_MS = 60_000
SESSION_LIMIT_MS = 900_000
CLICK_LIMIT = 250


@dataclass(frozen=True)
class Session:
    deployment_id: str
    start_ts: int
    end_ts: int
    click_count: int
    entry_count: int

    @property
    def duration_s(self) -> float:
        return (self.end_ts - self.start_ts) / 1000.0


@dataclass
class SummaryStats:
    session_count: int = 0
    duration_mean_s: float = 0.0
    duration_median_s: float = 0.0
    clicks_mean: float = 0.0
    clicks_median: float = 0.0
    sessions_per_day: dict[str, int] = field(default_factory=dict)
    sessions_per_weekday: dict[int, float] = field(default_factory=dict)
    sessions_per_ten_minute: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "session_count": self.session_count,
            "duration_mean_s": self.duration_mean_s,
            "duration_median_s": self.duration_median_s,
            "clicks_mean": self.clicks_mean,
            "clicks_median": self.clicks_median,
            "sessions_per_day": self.sessions_per_day,
            "sessions_per_weekday": {str(k): v for k, v in self.sessions_per_weekday.items()},
            "sessions_per_ten_minute": self.sessions_per_ten_minute,
        }


def sessionize(entries: list[LogEntry], drop_zero_click: bool = True) -> list[Session]:
    """Group time-ordered entries into sessions with one forward sweep.

    Split rules, checked against the current session before an entry joins:
    the entry is an automation start; the gap since the previous entry is
    60 s or more; the session would reach 15 minutes of age; or it already
    holds 250 clicks. The triggering entry always begins the new session.
    """
    ordered = sorted(entries, key=lambda e: e.timestamp)
    sessions: list[Session] = []
    current: list[LogEntry] = []
    clicks = 0

    def close() -> None:
        nonlocal clicks
        if current and (clicks > 0 or not drop_zero_click):
            sessions.append(Session(
                deployment_id=current[0].deployment_id,
                start_ts=current[0].timestamp,
                end_ts=current[-1].timestamp,
                click_count=clicks,
                entry_count=len(current),
            ))
        current.clear()
        clicks = 0

    for entry in ordered:
        if current:
            if (entry.kind is LogKind.AUTO_START
                    or entry.timestamp - current[-1].timestamp >= GAP_LIMIT_MS
                    or entry.timestamp - current[0].timestamp >= SESSION_LIMIT_MS
                    or clicks >= CLICK_LIMIT):
                close()
        current.append(entry)
        if entry.kind is LogKind.BUTTON_PRESS:
            clicks += 1
    close()
    return sessions


def _lower_median(values: list[float]) -> float:
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


def summarize(sessions: list[Session], tz: str = "UTC") -> SummaryStats:
    """Engagement statistics with calendar groupings in the given timezone."""
    if not sessions:
        return SummaryStats()

    try:
        zone = timezone.utc if tz == "UTC" else ZoneInfo(tz)
    except (ZoneInfoNotFoundError, ValueError) as exc:
        raise ChronoError("E_BAD_TIMEZONE", f"unknown timezone {tz!r}") from exc
    durations = [s.duration_s for s in sessions]
    clicks = [float(s.click_count) for s in sessions]
    stats = SummaryStats(
        session_count=len(sessions),
        duration_mean_s=sum(durations) / len(durations),
        duration_median_s=_lower_median(durations),
        clicks_mean=sum(clicks) / len(clicks),
        clicks_median=_lower_median(clicks),
    )

    starts = [datetime.fromtimestamp(s.start_ts / 1000.0, tz=timezone.utc).astimezone(zone)
              for s in sessions]
    per_day: dict[str, int] = {}
    per_weekday_total: dict[int, int] = {d: 0 for d in range(1, 8)}
    per_bucket_total: dict[str, int] = {}
    for dt in starts:
        per_day[dt.date().isoformat()] = per_day.get(dt.date().isoformat(), 0) + 1
        per_weekday_total[dt.isoweekday()] += 1
        bucket = f"{dt.hour:02d}:{dt.minute // 10}0"
        per_bucket_total[bucket] = per_bucket_total.get(bucket, 0) + 1

    # Means divide by the days observed in the span so quiet days count as zero.
    first_day = min(dt.date() for dt in starts)
    last_day = max(dt.date() for dt in starts)
    span_days = (last_day - first_day).days + 1
    weekday_days: dict[int, int] = {d: 0 for d in range(1, 8)}
    for offset in range(span_days):
        weekday_days[(first_day + timedelta(days=offset)).isoweekday()] += 1

    stats.sessions_per_day = dict(sorted(per_day.items()))
    stats.sessions_per_weekday = {
        d: (per_weekday_total[d] / weekday_days[d] if weekday_days[d] else 0.0)
        for d in range(1, 8)
    }
    stats.sessions_per_ten_minute = {
        bucket: count / span_days for bucket, count in sorted(per_bucket_total.items())
    }
    return stats


def analyze_entries(entries: list[LogEntry], tz: str = "UTC") -> SummaryStats:
    """Sessionize per deployment, then pool the sessions for one summary."""
    by_deployment: dict[str, list[LogEntry]] = {}
    for entry in entries:
        by_deployment.setdefault(entry.deployment_id, []).append(entry)
    sessions: list[Session] = []
    for deployment in sorted(by_deployment):
        sessions.extend(sessionize(by_deployment[deployment]))
    return summarize(sessions, tz=tz)
