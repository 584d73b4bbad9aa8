"""Waypoint capture and the Waypoint List (manage, filter, sort).

Capture is stateless: a ViewState only enters history when submitted inside
a waypoint creation or as a checklist bookmark. Listing operates on an
immutable snapshot of the board state and never mutates anything.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Any, Optional

from .errors import reject
from .objects import PRIORITIES, PRIORITY_RANK, WAYPOINT_KINDS, ViewState, Waypoint
from .state import BoardState
from .timeutil import now_utc

SORT_FIELDS = frozenset({"created_at", "name", "priority", "event_period_start"})
SORT_DIRECTIONS = frozenset({"asc", "desc"})


def capture_view(
    source_tool_id: str,
    query_representation: str,
    time_window: Optional[tuple[datetime, datetime]] = None,
    captured_at: Optional[datetime] = None,
) -> ViewState:
    """Bookmark the current analytics view. The query text is opaque and
    stored verbatim."""
    if not query_representation:
        raise reject("EmptyQuery", "cannot capture an empty query representation")
    if time_window is not None and time_window[0] > time_window[1]:
        raise reject("InvalidPeriod", "time window start is after its end")
    return ViewState(
        source_tool_id=source_tool_id,
        query_representation=query_representation,
        captured_at=captured_at or now_utc(),
        time_window=time_window,
    )


def prefill_draft(view: ViewState) -> dict[str, Any]:
    """A waypoint draft with most fields filled in from the captured view.

    The name stays blank for the hunter; a view without a time window
    prefills the degenerate interval at its capture instant.
    """
    window = view.time_window or (view.captured_at, view.captured_at)
    return {
        "name": "",
        "kind": "event",
        "notes": "",
        "details": f"{view.source_tool_id} query: {view.query_representation}",
        "event_period": window,
        "priority": "none",
        "view_state": view,
    }


def open_waypoint_view(state: BoardState, waypoint_id: str) -> ViewState:
    """Return the stored view byte-exact; never a copy-with-normalization."""
    waypoint = state.waypoints.get(waypoint_id)
    if waypoint is None:
        raise reject("NotFound", f"no waypoint {waypoint_id!r}")
    if waypoint.view_state is None:
        raise reject("NoSavedView", f"waypoint {waypoint_id!r} has no saved view")
    return waypoint.view_state


@dataclass(frozen=True)
class WaypointFilter:
    """All fields optional; the empty filter matches everything."""

    kinds: Optional[frozenset[str]] = None
    priority_at_least: Optional[str] = None
    text_query: Optional[str] = None
    period_overlaps: Optional[tuple[datetime, datetime]] = None

    def __post_init__(self):
        if self.kinds is not None:
            unknown = set(self.kinds) - WAYPOINT_KINDS
            if unknown:
                raise reject("InvalidKind", f"unknown kinds {sorted(unknown)}")
        if self.priority_at_least is not None and self.priority_at_least not in PRIORITIES:
            raise reject("InvalidPriority", f"unknown priority {self.priority_at_least!r}")

    def matches(self, waypoint: Waypoint) -> bool:
        if self.kinds is not None and waypoint.kind not in self.kinds:
            return False
        if self.priority_at_least is not None:
            if PRIORITY_RANK[waypoint.priority] < PRIORITY_RANK[self.priority_at_least]:
                return False
        if self.text_query is not None:
            needle = self.text_query.lower()
            haystack = f"{waypoint.name}\n{waypoint.notes}".lower()
            if needle not in haystack:
                return False
        if self.period_overlaps is not None:
            start, end = self.period_overlaps
            w_start, w_end = waypoint.event_period
            if w_start > end or start > w_end:
                return False
        return True


@dataclass(frozen=True)
class SortKey:
    field: str = "created_at"
    direction: str = "asc"

    def __post_init__(self):
        if self.field not in SORT_FIELDS:
            raise reject("InvalidPatch", f"unknown sort field {self.field!r}")
        if self.direction not in SORT_DIRECTIONS:
            raise reject("InvalidPatch", f"unknown sort direction {self.direction!r}")


def _sort_value(waypoint: Waypoint, field: str):
    if field == "created_at":
        return waypoint.created_at
    if field == "name":
        return waypoint.name
    if field == "priority":
        return PRIORITY_RANK[waypoint.priority]
    return waypoint.event_period[0]


def sort_waypoints(waypoints: list[Waypoint], sort: SortKey) -> list[Waypoint]:
    """Total order: the sort field, then EntityId ascending regardless of
    direction (ids are zero-padded, so string order is creation order)."""
    by_id = sorted(waypoints, key=lambda w: w.id)
    return sorted(
        by_id,
        key=lambda w: _sort_value(w, sort.field),
        reverse=sort.direction == "desc",
    )


def list_waypoints(
    state: BoardState,
    flt: Optional[WaypointFilter] = None,
    sort: Optional[SortKey] = None,
) -> list[Waypoint]:
    """Exactly the non-archived waypoints matching the filter, totally
    ordered."""
    flt = flt or WaypointFilter()
    sort = sort or SortKey()
    live = [
        w for wid, w in state.waypoints.items() if wid not in state.archived
    ]
    return sort_waypoints([w for w in live if flt.matches(w)], sort)
