"""UTC timestamp handling.

All timestamps in the system are timezone-aware UTC datetimes. The textual
form is fixed-width (`2025-11-03T09:00:00.000000Z`) so canonical
serializations are byte-stable and lexicographic order equals chronological
order.
"""

from __future__ import annotations

from datetime import datetime, timezone

UTC = timezone.utc

_FORMAT = "%Y-%m-%dT%H:%M:%S.%f"


def now_utc() -> datetime:
    return datetime.now(UTC)


def format_utc(dt: datetime) -> str:
    """Render as fixed-width ISO-8601 with microseconds and a Z suffix."""
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=UTC)
    return dt.astimezone(UTC).strftime(_FORMAT) + "Z"


def parse_utc(text: str) -> datetime:
    """Parse ISO-8601 text; naive input is taken as UTC."""
    if text.endswith("Z") or text.endswith("z"):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=UTC)
    return dt.astimezone(UTC)
