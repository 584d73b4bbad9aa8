"""Pure state transitions: (BoardState, BoardEvent) -> result.

Every mutating operation on a board is expressed here as a handler that
validates the event's op payload against the current state and then mutates
the state. Handlers must not touch the state before all validation has
passed — a rejected event leaves the state bit-identical, which is what lets
the sequencer discard rejections without rollback machinery.

All derived values (ids, timestamps) come from the state counter and the
event's server_time, never from ambient sources, so replaying a log is a
deterministic fold.
"""

from __future__ import annotations

import math
from datetime import datetime
from typing import Any, Callable, Optional

from .errors import BoardError, GapInLog, reject
from .objects import (
    CHECKLIST_ACTIVE,
    CHECKLIST_COMPLETED,
    ITEM_DONE,
    ITEM_PENDING,
    ITEM_STATUSES,
    LEAD_CLOSED,
    LEAD_OPEN,
    PRIORITIES,
    TEAM_CANVAS_KEY,
    WAYPOINT_KINDS,
    Annotation,
    Checklist,
    ChecklistItem,
    Connector,
    Lead,
    Placement,
    Storyline,
    ViewState,
    Waypoint,
    canvas_key,
)
from .state import BoardState
from .timeutil import parse_utc
from .wire import BoardEvent

Handler = Callable[[BoardState, BoardEvent], dict[str, Any]]

OP_HANDLERS: dict[str, Handler] = {}


def _op(name: str) -> Callable[[Handler], Handler]:
    def register(fn: Handler) -> Handler:
        OP_HANDLERS[name] = fn
        return fn

    return register


def apply_event(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    """Validate and apply one event; returns the operation's result payload.

    Raises BoardError (rejection, state untouched) or GapInLog when the
    event is not the immediate successor of the last applied one.
    """
    if event.seq != state.last_applied_seq + 1:
        raise GapInLog(state.last_applied_seq + 1, event.seq)
    op_type = event.op.get("type")
    handler = OP_HANDLERS.get(op_type)
    if handler is None:
        raise reject("UnknownOp", f"unknown operation type {op_type!r}")
    try:
        result = handler(state, event)
    except KeyError as exc:
        raise reject("MalformedOp", f"op {op_type!r} missing field {exc}") from exc
    state.last_applied_seq = event.seq
    return result


# ---------------------------------------------------------------------------
# payload parsing helpers
# ---------------------------------------------------------------------------


def _parse_period(raw: dict[str, Any]) -> tuple[datetime, datetime]:
    try:
        start = parse_utc(raw["start"])
        end = parse_utc(raw["end"])
    except (KeyError, TypeError, ValueError):
        raise reject("InvalidPeriod", "event period must carry start and end timestamps")
    if start > end:
        raise reject("InvalidPeriod", "event period start is after its end")
    return start, end


def _parse_view_state(raw: dict[str, Any]) -> ViewState:
    query = raw.get("query_representation", "")
    if not isinstance(query, str) or not query:
        raise reject("EmptyQuery", "view state requires a non-empty query representation")
    window = None
    if raw.get("time_window") is not None:
        window = _parse_period(raw["time_window"])
    return ViewState(
        source_tool_id=str(raw.get("source_tool_id", "")),
        query_representation=query,
        captured_at=parse_utc(raw["captured_at"]),
        time_window=window,
    )


def _canvas_key_from_op(raw: dict[str, Any]) -> str:
    try:
        return canvas_key(raw["scope"], raw.get("owner"))
    except ValueError as exc:
        raise reject("MalformedOp", str(exc)) from exc


def _finite_xy(op: dict[str, Any]) -> tuple[float, float]:
    try:
        x = float(op["x"])
        y = float(op["y"])
    except (TypeError, ValueError):
        raise reject("InvalidCoordinates", "coordinates must be numbers")
    if not (math.isfinite(x) and math.isfinite(y)):
        raise reject("InvalidCoordinates", "coordinates must be finite")
    return x, y


def _require_text(value: Any, code: str, what: str) -> str:
    if not isinstance(value, str) or not value.strip():
        raise reject(code, f"{what} must be non-empty")
    return value


# ---------------------------------------------------------------------------
# waypoints
# ---------------------------------------------------------------------------


@_op("create_waypoint")
def _create_waypoint(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    op = event.op
    name = _require_text(op["name"], "EmptyName", "waypoint name")
    kind = op.get("kind", "event")
    if kind not in WAYPOINT_KINDS:
        raise reject("InvalidKind", f"unknown waypoint kind {kind!r}")
    priority = op.get("priority") or "none"
    if priority not in PRIORITIES:
        raise reject("InvalidPriority", f"unknown priority {priority!r}")

    view = None
    if op.get("view_state") is not None:
        view = _parse_view_state(op["view_state"])

    if op.get("event_period") is not None:
        period = _parse_period(op["event_period"])
    elif view is not None and view.time_window is not None:
        period = view.time_window
    else:
        period = (event.server_time, event.server_time)

    waypoint = Waypoint(
        id=state.new_id(),
        name=name,
        kind=kind,
        notes=str(op.get("notes", "")),
        details=str(op.get("details", "")),
        event_period=period,
        priority=priority,
        view_state=view,
        created_by=event.actor.actor_id,
        created_at=event.server_time,
        updated_at=event.server_time,
    )
    state.waypoints[waypoint.id] = waypoint
    return {"waypoint": waypoint.to_dict()}


_WAYPOINT_PATCH_FIELDS = frozenset(
    {"name", "kind", "notes", "details", "event_period", "priority", "view_state"}
)


@_op("update_waypoint")
def _update_waypoint(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    op = event.op
    waypoint_id = op["id"]
    waypoint = state.waypoints.get(waypoint_id)
    if waypoint is None:
        raise reject("NotFound", f"no waypoint {waypoint_id!r}")
    if state.is_archived(waypoint_id):
        raise reject("Archived", f"waypoint {waypoint_id!r} is archived")

    patch = op.get("patch", {})
    unknown = set(patch) - _WAYPOINT_PATCH_FIELDS
    if unknown:
        raise reject("InvalidPatch", f"unknown patch fields: {sorted(unknown)}")

    # Validate everything before mutating anything.
    new_values: dict[str, Any] = {}
    if "name" in patch:
        new_values["name"] = _require_text(patch["name"], "EmptyName", "waypoint name")
    if "kind" in patch:
        if patch["kind"] not in WAYPOINT_KINDS:
            raise reject("InvalidKind", f"unknown waypoint kind {patch['kind']!r}")
        new_values["kind"] = patch["kind"]
    if "priority" in patch:
        if patch["priority"] not in PRIORITIES:
            raise reject("InvalidPriority", f"unknown priority {patch['priority']!r}")
        new_values["priority"] = patch["priority"]
    if "event_period" in patch:
        new_values["event_period"] = _parse_period(patch["event_period"])
    if "notes" in patch:
        new_values["notes"] = str(patch["notes"])
    if "details" in patch:
        new_values["details"] = str(patch["details"])
    if "view_state" in patch:
        new_values["view_state"] = (
            _parse_view_state(patch["view_state"])
            if patch["view_state"] is not None
            else None
        )

    for field_name, value in new_values.items():
        setattr(waypoint, field_name, value)
    waypoint.updated_at = event.server_time
    return {"waypoint": waypoint.to_dict()}


# ---------------------------------------------------------------------------
# leads, annotations, connectors
# ---------------------------------------------------------------------------


@_op("create_lead")
def _create_lead(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    title = _require_text(event.op["title"], "EmptyTitle", "lead title")
    lead = Lead(
        id=state.new_id(),
        title=title,
        notes=str(event.op.get("notes", "")),
        status=LEAD_OPEN,
        created_by=event.actor.actor_id,
        created_at=event.server_time,
    )
    state.leads[lead.id] = lead
    return {"lead": lead.to_dict()}


@_op("close_lead")
def _close_lead(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    lead_id = event.op["id"]
    lead = state.leads.get(lead_id)
    if lead is None:
        raise reject("NotFound", f"no lead {lead_id!r}")
    if lead.status == LEAD_CLOSED:
        raise reject("AlreadyClosed", f"lead {lead_id!r} is already closed")
    lead.status = LEAD_CLOSED
    lead.closed_at = event.server_time
    return {"lead": lead.to_dict()}


@_op("create_annotation")
def _create_annotation(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    text = _require_text(event.op["text"], "EmptyText", "annotation text")
    annotation = Annotation(
        id=state.new_id(),
        text=text,
        created_by=event.actor.actor_id,
        created_at=event.server_time,
    )
    state.annotations[annotation.id] = annotation
    return {"annotation": annotation.to_dict()}


@_op("create_connector")
def _create_connector(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    op = event.op
    endpoint_a = op["endpoint_a"]
    endpoint_b = op["endpoint_b"]
    if endpoint_a == endpoint_b:
        raise reject("SelfLoop", "a connector needs two distinct endpoints")
    for endpoint in (endpoint_a, endpoint_b):
        found = state.find_object(endpoint)
        if found is None:
            raise reject("NotFound", f"no object {endpoint!r}")
        kind, _ = found
        if kind == "connector":
            raise reject("InvalidEndpoint", "connectors cannot connect connectors")
        if state.is_archived(endpoint):
            raise reject("EndpointArchived", f"object {endpoint!r} is archived")
    connector = Connector(
        id=state.new_id(),
        endpoint_a=endpoint_a,
        endpoint_b=endpoint_b,
        label=op.get("label"),
    )
    state.connectors[connector.id] = connector
    return {"connector": connector.to_dict()}


@_op("archive_object")
def _archive_object(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    object_id = event.op["id"]
    if state.find_object(object_id) is None or state.is_archived(object_id):
        raise reject("NotFound", f"no live object {object_id!r}")

    cascade = state.live_connectors_touching(object_id)
    archived_now = [object_id] + sorted(c for c in cascade if c != object_id)
    for oid in archived_now:
        state.archived.add(oid)
        state.remove_placements_of(oid)
    return {"archived": archived_now}


# ---------------------------------------------------------------------------
# canvas placement
# ---------------------------------------------------------------------------


def _placeable(state: BoardState, object_id: str) -> None:
    if state.find_object(object_id) is None:
        raise reject("NotFound", f"no object {object_id!r}")
    if state.is_archived(object_id):
        raise reject("Archived", f"object {object_id!r} is archived")


@_op("place_object")
def _place_object(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    op = event.op
    object_id = op["object_id"]
    _placeable(state, object_id)
    x, y = _finite_xy(op)
    key = _canvas_key_from_op(op["canvas"])
    by_object = state.canvas_placements(key)
    if object_id in by_object:
        raise reject("AlreadyPlaced", f"object {object_id!r} already on canvas {key}")
    placement = Placement(x=x, y=y, z_order=state.new_z())
    by_object[object_id] = placement
    return {"canvas": key, "object_id": object_id, "placement": placement.to_dict()}


@_op("move_object")
def _move_object(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    op = event.op
    object_id = op["object_id"]
    _placeable(state, object_id)
    x, y = _finite_xy(op)
    key = _canvas_key_from_op(op["canvas"])
    placement = state.canvas_placements(key).get(object_id)
    if placement is None:
        raise reject("NotPlaced", f"object {object_id!r} is not on canvas {key}")
    placement.x = x
    placement.y = y
    return {"canvas": key, "object_id": object_id, "placement": placement.to_dict()}


# ---------------------------------------------------------------------------
# storylines
# ---------------------------------------------------------------------------


@_op("save_storyline")
def _save_storyline(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    op = event.op
    title = _require_text(op["title"], "EmptyTitle", "storyline title")
    selected = list(dict.fromkeys(op.get("selected_ids") or []))
    if not selected:
        raise reject("EmptySelection", "a storyline needs at least one selected object")
    key = _canvas_key_from_op(op["canvas"])

    for object_id in selected:
        if state.find_object(object_id) is None:
            raise reject("NotFound", f"no object {object_id!r}")

    # Close the member set under connector endpoints: selecting a connector
    # pulls in whatever it connects.
    members = list(selected)
    seen = set(members)
    for object_id in list(members):
        connector = state.connectors.get(object_id)
        if connector is None:
            continue
        for endpoint in (connector.endpoint_a, connector.endpoint_b):
            if endpoint not in seen:
                seen.add(endpoint)
                members.append(endpoint)

    by_object = state.canvas_placements(key)
    member_placements: dict[str, tuple[float, float]] = {}
    for object_id in members:
        placement = by_object.get(object_id)
        if placement is None:
            raise reject("NotFound", f"object {object_id!r} is not on canvas {key}")
        member_placements[object_id] = (placement.x, placement.y)

    storyline = Storyline(
        id=state.new_id(),
        title=title,
        member_ids=members,
        member_placements=member_placements,
        shared=False,
        created_by=event.actor.actor_id,
        created_at=event.server_time,
        last_modified=event.server_time,
    )
    state.storylines[storyline.id] = storyline
    return {"storyline": storyline.to_dict()}


def _place_members(
    state: BoardState, storyline: Storyline, key: str, replace: bool
) -> list[dict[str, Any]]:
    """Place non-archived members at their saved coordinates.

    With replace=True existing placements are moved to the saved spot (load
    semantics); with replace=False they are left alone (share semantics).
    """
    by_object = state.canvas_placements(key)
    placed: list[dict[str, Any]] = []
    for object_id in storyline.member_ids:
        if state.is_archived(object_id):
            continue
        x, y = storyline.member_placements[object_id]
        existing = by_object.get(object_id)
        if existing is None:
            by_object[object_id] = Placement(x=x, y=y, z_order=state.new_z())
        elif replace:
            existing.x = x
            existing.y = y
        else:
            continue
        placement = by_object[object_id]
        placed.append(
            {"canvas": key, "object_id": object_id, "placement": placement.to_dict()}
        )
    return placed


@_op("load_storyline")
def _load_storyline(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    op = event.op
    storyline = state.storylines.get(op["storyline_id"])
    if storyline is None:
        raise reject("NotFound", f"no storyline {op['storyline_id']!r}")
    key = _canvas_key_from_op(op["canvas"])
    placed = _place_members(state, storyline, key, replace=True)
    return {"storyline_id": storyline.id, "placements": placed}


@_op("rename_storyline")
def _rename_storyline(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    op = event.op
    storyline = state.storylines.get(op["storyline_id"])
    if storyline is None:
        raise reject("NotFound", f"no storyline {op['storyline_id']!r}")
    storyline.title = _require_text(op["title"], "EmptyTitle", "storyline title")
    storyline.last_modified = event.server_time
    return {"storyline": storyline.to_dict()}


@_op("share_storyline")
def _share_storyline(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    op = event.op
    storyline = state.storylines.get(op["storyline_id"])
    if storyline is None:
        raise reject("NotFound", f"no storyline {op['storyline_id']!r}")
    if storyline.created_by != event.actor.actor_id:
        raise reject("NotOwner", "only the creator can share a storyline")
    if storyline.shared:
        # Sharing twice is a no-op, not an error.
        return {"storyline": storyline.to_dict(), "placements": []}
    storyline.shared = True
    storyline.last_modified = event.server_time
    placed = _place_members(state, storyline, TEAM_CANVAS_KEY, replace=False)
    return {"storyline": storyline.to_dict(), "placements": placed}


# ---------------------------------------------------------------------------
# checklists
# ---------------------------------------------------------------------------


def _active_checklist_for(
    state: BoardState, actor_id: str
) -> Optional[Checklist]:
    for checklist in state.checklists.values():
        if (
            checklist.session_owner == actor_id
            and checklist.status == CHECKLIST_ACTIVE
        ):
            return checklist
    return None


def _checklist_or_reject(state: BoardState, checklist_id: str) -> Checklist:
    checklist = state.checklists.get(checklist_id)
    if checklist is None:
        raise reject("ChecklistNotFound", f"no checklist {checklist_id!r}")
    return checklist


def _active_or_reject(state: BoardState, checklist_id: str) -> Checklist:
    checklist = _checklist_or_reject(state, checklist_id)
    if checklist.status != CHECKLIST_ACTIVE:
        raise reject("NotActive", f"checklist {checklist_id!r} is not active")
    return checklist


@_op("instantiate_checklist")
def _instantiate_checklist(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    op = event.op
    # Template content travels in the event so replay never consults the
    # template file.
    item_texts = list(op.get("items") or [])
    for text in item_texts:
        _require_text(text, "EmptyText", "template item text")
    if _active_checklist_for(state, event.actor.actor_id) is not None:
        raise reject(
            "ActiveChecklistExists",
            f"actor {event.actor.actor_id!r} already has an active checklist "
            f"for {state.client_env!r}",
        )
    checklist = Checklist(
        id=state.new_id(),
        client_env=state.client_env,
        session_owner=event.actor.actor_id,
        created_at=event.server_time,
    )
    for text in item_texts:
        checklist.items.append(
            ChecklistItem(id=state.new_id(), text=text, origin="template")
        )
    state.checklists[checklist.id] = checklist
    return {"checklist": checklist.to_dict()}


@_op("add_checklist_item")
def _add_checklist_item(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    op = event.op
    checklist = _active_or_reject(state, op["checklist_id"])
    text = _require_text(op["text"], "EmptyText", "checklist item text")
    item = ChecklistItem(id=state.new_id(), text=text, origin="custom")
    checklist.items.append(item)
    return {"checklist_id": checklist.id, "item": item.to_dict()}


@_op("set_item_status")
def _set_item_status(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    op = event.op
    checklist = _active_or_reject(state, op["checklist_id"])
    status = op["status"]
    if status not in ITEM_STATUSES:
        raise reject("InvalidStatus", f"unknown item status {status!r}")
    item = next((i for i in checklist.items if i.id == op["item_id"]), None)
    if item is None:
        raise reject("ItemNotFound", f"no item {op['item_id']!r}")
    item.status = status
    note = op.get("note")
    if note:
        item.note = f"{item.note}\n{note}" if item.note else str(note)
    return {"checklist_id": checklist.id, "item": item.to_dict()}


@_op("attach_resume_bookmark")
def _attach_resume_bookmark(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    op = event.op
    checklist = _active_or_reject(state, op["checklist_id"])
    checklist.resume_bookmark = _parse_view_state(op["view_state"])
    return {"checklist": checklist.to_dict()}


@_op("complete_checklist")
def _complete_checklist(state: BoardState, event: BoardEvent) -> dict[str, Any]:
    op = event.op
    checklist = _active_or_reject(state, op["checklist_id"])
    override = bool(op.get("override", False))
    pending = checklist.pending_count()
    if pending and not override:
        raise reject(
            "PendingItems",
            f"{pending} pending item(s); pass override to complete anyway",
        )
    checklist.status = CHECKLIST_COMPLETED
    checklist.completed_at = event.server_time
    checklist.completed_override = override
    return {"checklist": checklist.to_dict()}
