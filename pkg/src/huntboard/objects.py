"""Domain objects for the investigation board.

Everything here is a plain data carrier; invariants that depend on board
state (referential integrity, lifecycle rules) are enforced by the state
transitions, not by these classes. ``to_dict`` layouts feed the canonical
snapshot serialization, so field sets and shapes must stay stable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Optional

from .timeutil import format_utc

WAYPOINT_KINDS = frozenset({"event", "event-group", "user", "timeframe"})

PRIORITY_RANK = {"none": 0, "low": 1, "medium": 2, "high": 3}
PRIORITIES = frozenset(PRIORITY_RANK)

LEAD_OPEN = "open"
LEAD_CLOSED = "closed"

ITEM_PENDING = "pending"
ITEM_DONE = "done"
ITEM_STATUSES = frozenset({ITEM_PENDING, ITEM_DONE})

CHECKLIST_ACTIVE = "active"
CHECKLIST_COMPLETED = "completed"

TEAM_CANVAS_KEY = "team"


def personal_canvas_key(actor_id: str) -> str:
    return f"personal:{actor_id}"


def canvas_key(scope: str, owner: Optional[str]) -> str:
    """Stable string form of a canvas identity within one board."""
    if scope == "team":
        return TEAM_CANVAS_KEY
    if scope == "personal":
        if not owner:
            raise ValueError("personal canvas requires an owner")
        return personal_canvas_key(owner)
    raise ValueError(f"unknown canvas scope {scope!r}")


def _period_dict(start: datetime, end: datetime) -> dict[str, str]:
    return {"start": format_utc(start), "end": format_utc(end)}


@dataclass
class ViewState:
    """A captured analytics view: the query address plus its time window.

    ``query_representation`` is opaque — stored and returned verbatim, never
    parsed or normalized.
    """

    source_tool_id: str
    query_representation: str
    captured_at: datetime
    time_window: Optional[tuple[datetime, datetime]] = None

    def to_dict(self) -> dict[str, Any]:
        window = None
        if self.time_window is not None:
            window = _period_dict(self.time_window[0], self.time_window[1])
        return {
            "source_tool_id": self.source_tool_id,
            "query_representation": self.query_representation,
            "captured_at": format_utc(self.captured_at),
            "time_window": window,
        }


@dataclass
class Waypoint:
    """A marked discovery: event, event group, user, or timeframe."""

    id: str
    name: str
    kind: str
    notes: str
    details: str
    event_period: tuple[datetime, datetime]
    priority: str
    view_state: Optional[ViewState]
    created_by: str
    created_at: datetime
    updated_at: datetime

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "name": self.name,
            "kind": self.kind,
            "notes": self.notes,
            "details": self.details,
            "event_period": _period_dict(*self.event_period),
            "priority": self.priority,
            "view_state": self.view_state.to_dict() if self.view_state else None,
            "created_by": self.created_by,
            "created_at": format_utc(self.created_at),
            "updated_at": format_utc(self.updated_at),
        }


@dataclass
class Lead:
    """A hypothesis / investigative path with an open→closed lifecycle."""

    id: str
    title: str
    notes: str
    status: str
    created_by: str
    created_at: datetime
    closed_at: Optional[datetime] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "title": self.title,
            "notes": self.notes,
            "status": self.status,
            "created_by": self.created_by,
            "created_at": format_utc(self.created_at),
            "closed_at": format_utc(self.closed_at) if self.closed_at else None,
        }


@dataclass
class Annotation:
    id: str
    text: str
    created_by: str
    created_at: datetime

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "text": self.text,
            "created_by": self.created_by,
            "created_at": format_utc(self.created_at),
        }


@dataclass
class Connector:
    """An edge between two distinct board objects (never another connector)."""

    id: str
    endpoint_a: str
    endpoint_b: str
    label: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "endpoint_a": self.endpoint_a,
            "endpoint_b": self.endpoint_b,
            "label": self.label,
        }


@dataclass
class Placement:
    """Coordinates of one object on one canvas; at most one per pair."""

    x: float
    y: float
    z_order: int

    def to_dict(self) -> dict[str, Any]:
        return {"x": self.x, "y": self.y, "z_order": self.z_order}


@dataclass
class Storyline:
    """A named, shareable subgraph snapshot of canvas geometry.

    Members reference live objects (their current names/statuses apply);
    only coordinates are frozen at save time.
    """

    id: str
    title: str
    member_ids: list[str]
    member_placements: dict[str, tuple[float, float]]
    shared: bool
    created_by: str
    created_at: datetime
    last_modified: datetime

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "title": self.title,
            "member_ids": list(self.member_ids),
            "member_placements": {
                oid: [xy[0], xy[1]] for oid, xy in self.member_placements.items()
            },
            "shared": self.shared,
            "created_by": self.created_by,
            "created_at": format_utc(self.created_at),
            "last_modified": format_utc(self.last_modified),
        }


@dataclass
class ChecklistItem:
    id: str
    text: str
    origin: str  # "template" | "custom", immutable after creation
    status: str = ITEM_PENDING
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "text": self.text,
            "origin": self.origin,
            "status": self.status,
            "note": self.note,
        }


@dataclass
class Checklist:
    """Per-client-environment session tracker with a resume bookmark."""

    id: str
    client_env: str
    session_owner: str
    items: list[ChecklistItem] = field(default_factory=list)
    resume_bookmark: Optional[ViewState] = None
    status: str = CHECKLIST_ACTIVE
    created_at: Optional[datetime] = None
    completed_at: Optional[datetime] = None
    completed_override: bool = False

    def pending_count(self) -> int:
        return sum(1 for item in self.items if item.status == ITEM_PENDING)

    def done_count(self) -> int:
        return sum(1 for item in self.items if item.status == ITEM_DONE)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "client_env": self.client_env,
            "session_owner": self.session_owner,
            "items": [item.to_dict() for item in self.items],
            "resume_bookmark": (
                self.resume_bookmark.to_dict() if self.resume_bookmark else None
            ),
            "status": self.status,
            "created_at": format_utc(self.created_at) if self.created_at else None,
            "completed_at": (
                format_utc(self.completed_at) if self.completed_at else None
            ),
            "completed_override": self.completed_override,
        }
