"""The process boundary: HTTP API, WebSocket event stream, persistence
wiring, and configuration.

Authentication is a trusted ``X-Actor-Id`` header (the service is meant to
sit behind a real identity layer). Every mutating route funnels through the
board sequencer, and every response carries the board seq it reflects.
Error bodies are ``{"error": {"code", "message"}}`` with the domain's
machine-readable codes.
"""

from __future__ import annotations

import asyncio
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Header, Query, Request, WebSocket, WebSocketDisconnect
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from . import reporting
from .checklist import ChecklistTemplate, load_default_templates, load_templates
from .errors import BoardError, http_status_for, reject
from .state import BoardState
from .storage import FSYNC_EVERY_EVENT, EventLogStore
from .sync import Board, BoardHub, make_clock
from .timeutil import format_utc, now_utc, parse_utc
from .waypoints import SortKey, WaypointFilter, list_waypoints, open_waypoint_view
from .wire import ActorRef, encode_event

logger = logging.getLogger(__name__)

API_PREFIX = "/api/v1"

WS_CLOSE_BOARD_NOT_FOUND = 4404
WS_CLOSE_SEQ_OUT_OF_RANGE = 4400


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8787
    data_dir: Optional[Path] = None  # None = in-memory (tests, demos)
    template_path: Optional[Path] = None  # None = packaged defaults
    fsync_policy: str = FSYNC_EVERY_EVENT
    fsync_interval: float = 1.0
    clock: str = "wall"
    log_level: str = "info"


# ---------------------------------------------------------------------------
# request bodies
# ---------------------------------------------------------------------------


class PeriodBody(BaseModel):
    start: str
    end: str


class ViewStateBody(BaseModel):
    source_tool_id: str = ""
    query_representation: str
    time_window: Optional[PeriodBody] = None
    captured_at: Optional[str] = None


def _view_state_payload(body: ViewStateBody) -> dict[str, Any]:
    captured = body.captured_at or format_utc(now_utc())
    window = None
    if body.time_window is not None:
        window = {"start": body.time_window.start, "end": body.time_window.end}
    return {
        "source_tool_id": body.source_tool_id,
        "query_representation": body.query_representation,
        "captured_at": captured,
        "time_window": window,
    }


class CreateBoardBody(BaseModel):
    board_id: str


class WaypointBody(BaseModel):
    name: str
    kind: str = "event"
    notes: str = ""
    details: str = ""
    event_period: Optional[PeriodBody] = None
    priority: str = "none"
    view_state: Optional[ViewStateBody] = None


class WaypointPatchBody(BaseModel):
    name: Optional[str] = None
    kind: Optional[str] = None
    notes: Optional[str] = None
    details: Optional[str] = None
    event_period: Optional[PeriodBody] = None
    priority: Optional[str] = None
    view_state: Optional[ViewStateBody] = None


class LeadBody(BaseModel):
    title: str
    notes: str = ""


class AnnotationBody(BaseModel):
    text: str


class ConnectorBody(BaseModel):
    endpoint_a: str
    endpoint_b: str
    label: Optional[str] = None


class PlaceBody(BaseModel):
    object_id: str
    x: float
    y: float


class MoveBody(BaseModel):
    x: float
    y: float


class StorylineSaveBody(BaseModel):
    title: str
    selected_ids: list[str]
    canvas: str = "my"


class StorylineLoadBody(BaseModel):
    canvas: str = "my"


class RenameBody(BaseModel):
    title: str


class ChecklistCreateBody(BaseModel):
    template_id: str = "default-hunt"


class ItemBody(BaseModel):
    text: str


class ItemStatusBody(BaseModel):
    status: str
    note: Optional[str] = None


class CompleteBody(BaseModel):
    override: bool = False


class _MissingActor(Exception):
    pass


def _error_json(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"error": {"code": code, "message": message}}
    )


def _canvas_payload(canvas: str, actor: ActorRef) -> dict[str, Any]:
    if canvas == "team":
        return {"scope": "team", "owner": None}
    if canvas in ("my", "personal"):
        return {"scope": "personal", "owner": actor.actor_id}
    raise reject("MalformedOp", f"unknown canvas {canvas!r} (use 'my' or 'team')")


def _period_payload(period: Optional[PeriodBody]) -> Optional[dict[str, str]]:
    if period is None:
        return None
    return {"start": period.start, "end": period.end}


def build_app(
    hub: BoardHub,
    templates: dict[str, ChecklistTemplate],
    config: Optional[ServiceConfig] = None,
) -> FastAPI:
    app = FastAPI(title="huntboard", version="0.1.0")
    app.state.hub = hub
    app.state.templates = templates
    app.state.config = config or ServiceConfig()

    # The canvas client is typically served from another origin (static
    # file server); identity is a trusted header, so open CORS is fine here.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(BoardError)
    async def _board_error(_req: Request, exc: BoardError) -> JSONResponse:
        return _error_json(http_status_for(exc.code), exc.code, exc.message)

    @app.exception_handler(_MissingActor)
    async def _missing_actor(_req: Request, _exc: _MissingActor) -> JSONResponse:
        return _error_json(401, "MissingActor", "X-Actor-Id header is required")

    @app.exception_handler(RequestValidationError)
    async def _bad_request(_req: Request, exc: RequestValidationError) -> JSONResponse:
        return _error_json(400, "ValidationError", str(exc.errors()[:3]))

    def actor_from(
        actor_id: Optional[str],
        name: Optional[str],
        role: Optional[str],
    ) -> ActorRef:
        if not actor_id:
            raise _MissingActor()
        return ActorRef(
            actor_id=actor_id, display_name=name or actor_id, role=role or "hunter"
        )

    def get_board(board_id: str) -> Board:
        return hub.get(board_id)

    # -- service-level ------------------------------------------------------

    @app.get(f"{API_PREFIX}/health")
    def health() -> dict[str, Any]:
        return {"status": "ok", "boards": len(hub.list_ids())}

    @app.get(f"{API_PREFIX}/rubric")
    def rubric() -> Any:
        return JSONResponse(content=reporting.emit_heuristic_rubric())

    @app.post(f"{API_PREFIX}/views/capture", status_code=201)
    def capture(
        body: ViewStateBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor_from(x_actor_id, x_actor_name, x_actor_role)
        if not body.query_representation:
            raise reject("EmptyQuery", "cannot capture an empty query representation")
        return {"view_state": _view_state_payload(body)}

    # -- boards -------------------------------------------------------------

    @app.post(f"{API_PREFIX}/boards", status_code=201)
    def create_board(
        body: CreateBoardBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor_from(x_actor_id, x_actor_name, x_actor_role)
        board = hub.create(body.board_id)
        return {"board_id": board.board_id, "seq": board.current_seq}

    @app.get(f"{API_PREFIX}/boards")
    def list_boards() -> dict[str, Any]:
        return {"boards": hub.list_ids()}

    @app.get(f"{API_PREFIX}/boards/{{board_id}}/snapshot")
    def snapshot(board_id: str) -> dict[str, Any]:
        board = get_board(board_id)
        with board._lock:
            seq = board.state.last_applied_seq
            state_dict = board.state.to_dict()
            canonical = board.state.canonical()
        return {"seq": seq, "state": state_dict, "state_canonical": canonical}

    @app.get(f"{API_PREFIX}/boards/{{board_id}}/events")
    def events(board_id: str, from_seq: int = 0) -> dict[str, Any]:
        board = get_board(board_id)
        backlog = board.events_since(from_seq)
        return {
            "seq": board.current_seq,
            "events": [event.to_dict() for event in backlog],
        }

    # -- waypoints ----------------------------------------------------------

    @app.post(f"{API_PREFIX}/boards/{{board_id}}/waypoints", status_code=201)
    def create_waypoint(
        board_id: str,
        body: WaypointBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        op = {
            "type": "create_waypoint",
            "name": body.name,
            "kind": body.kind,
            "notes": body.notes,
            "details": body.details,
            "event_period": _period_payload(body.event_period),
            "priority": body.priority,
            "view_state": (
                _view_state_payload(body.view_state) if body.view_state else None
            ),
        }
        outcome = get_board(board_id).submit(actor, op)
        return {"seq": outcome.seq, "result": outcome.result}

    @app.patch(f"{API_PREFIX}/boards/{{board_id}}/waypoints/{{waypoint_id}}")
    def update_waypoint(
        board_id: str,
        waypoint_id: str,
        body: WaypointPatchBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        patch: dict[str, Any] = {}
        raw = body.model_dump(exclude_unset=True)
        for key, value in raw.items():
            if key == "event_period" and value is not None:
                patch[key] = {"start": value["start"], "end": value["end"]}
            elif key == "view_state" and value is not None:
                patch[key] = _view_state_payload(ViewStateBody(**value))
            else:
                patch[key] = value
        op = {"type": "update_waypoint", "id": waypoint_id, "patch": patch}
        outcome = get_board(board_id).submit(actor, op)
        return {"seq": outcome.seq, "result": outcome.result}

    @app.get(f"{API_PREFIX}/boards/{{board_id}}/waypoints")
    def get_waypoints(
        board_id: str,
        kind: Optional[list[str]] = Query(None),
        priority_at_least: Optional[str] = None,
        q: Optional[str] = None,
        overlaps_start: Optional[str] = None,
        overlaps_end: Optional[str] = None,
        sort: str = "created_at",
        direction: str = "asc",
    ) -> dict[str, Any]:
        board = get_board(board_id)
        overlaps = None
        if overlaps_start is not None and overlaps_end is not None:
            overlaps = (parse_utc(overlaps_start), parse_utc(overlaps_end))
        flt = WaypointFilter(
            kinds=frozenset(kind) if kind else None,
            priority_at_least=priority_at_least,
            text_query=q,
            period_overlaps=overlaps,
        )
        key = SortKey(field=sort, direction=direction)

        def read(state: BoardState) -> dict[str, Any]:
            return {
                "seq": state.last_applied_seq,
                "waypoints": [w.to_dict() for w in list_waypoints(state, flt, key)],
            }

        with board._lock:
            return read(board.state)

    @app.get(f"{API_PREFIX}/boards/{{board_id}}/waypoints/{{waypoint_id}}/view")
    def waypoint_view(board_id: str, waypoint_id: str) -> dict[str, Any]:
        board = get_board(board_id)
        with board._lock:
            view = open_waypoint_view(board.state, waypoint_id)
            return {"seq": board.current_seq, "view_state": view.to_dict()}

    # -- leads / annotations / connectors / archive --------------------------

    def _submit_route(
        board_id: str, actor: ActorRef, op: dict[str, Any]
    ) -> dict[str, Any]:
        outcome = get_board(board_id).submit(actor, op)
        return {"seq": outcome.seq, "result": outcome.result}

    @app.post(f"{API_PREFIX}/boards/{{board_id}}/leads", status_code=201)
    def create_lead(
        board_id: str,
        body: LeadBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        op = {"type": "create_lead", "title": body.title, "notes": body.notes}
        return _submit_route(board_id, actor, op)

    @app.post(f"{API_PREFIX}/boards/{{board_id}}/leads/{{lead_id}}/close")
    def close_lead(
        board_id: str,
        lead_id: str,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        return _submit_route(board_id, actor, {"type": "close_lead", "id": lead_id})

    @app.post(f"{API_PREFIX}/boards/{{board_id}}/annotations", status_code=201)
    def create_annotation(
        board_id: str,
        body: AnnotationBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        return _submit_route(
            board_id, actor, {"type": "create_annotation", "text": body.text}
        )

    @app.post(f"{API_PREFIX}/boards/{{board_id}}/connectors", status_code=201)
    def create_connector(
        board_id: str,
        body: ConnectorBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        op = {
            "type": "create_connector",
            "endpoint_a": body.endpoint_a,
            "endpoint_b": body.endpoint_b,
            "label": body.label,
        }
        return _submit_route(board_id, actor, op)

    @app.post(f"{API_PREFIX}/boards/{{board_id}}/objects/{{object_id}}/archive")
    def archive_object(
        board_id: str,
        object_id: str,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        return _submit_route(
            board_id, actor, {"type": "archive_object", "id": object_id}
        )

    # -- canvases -----------------------------------------------------------

    @app.get(f"{API_PREFIX}/boards/{{board_id}}/canvases/{{canvas}}")
    def canvas_contents(
        board_id: str,
        canvas: str,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        payload = _canvas_payload(canvas, actor)
        from .objects import canvas_key

        key = canvas_key(payload["scope"], payload["owner"])
        board = get_board(board_id)
        with board._lock:
            state = board.state
            entries = []
            for object_id, placement in state.placements.get(key, {}).items():
                found = state.find_object(object_id)
                kind, obj = found if found else ("unknown", None)
                entries.append(
                    {
                        "object_id": object_id,
                        "kind": kind,
                        "archived": state.is_archived(object_id),
                        "placement": placement.to_dict(),
                        "object": obj.to_dict() if obj else None,
                    }
                )
            entries.sort(key=lambda e: e["placement"]["z_order"])
            return {"seq": state.last_applied_seq, "canvas": key, "objects": entries}

    @app.post(
        f"{API_PREFIX}/boards/{{board_id}}/canvases/{{canvas}}/placements",
        status_code=201,
    )
    def place_object(
        board_id: str,
        canvas: str,
        body: PlaceBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        op = {
            "type": "place_object",
            "canvas": _canvas_payload(canvas, actor),
            "object_id": body.object_id,
            "x": body.x,
            "y": body.y,
        }
        return _submit_route(board_id, actor, op)

    @app.put(
        f"{API_PREFIX}/boards/{{board_id}}/canvases/{{canvas}}/placements/{{object_id}}"
    )
    def move_object(
        board_id: str,
        canvas: str,
        object_id: str,
        body: MoveBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        op = {
            "type": "move_object",
            "canvas": _canvas_payload(canvas, actor),
            "object_id": object_id,
            "x": body.x,
            "y": body.y,
        }
        return _submit_route(board_id, actor, op)

    # -- storylines ----------------------------------------------------------

    @app.get(f"{API_PREFIX}/boards/{{board_id}}/storylines/most-recent")
    def most_recent_storyline(
        board_id: str,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        board = get_board(board_id)
        with board._lock:
            state = board.state
            recent = state.most_recent_storyline(actor.actor_id)
            return {
                "seq": state.last_applied_seq,
                "storyline": recent.to_dict() if recent else None,
            }

    @app.get(f"{API_PREFIX}/boards/{{board_id}}/storylines")
    def get_storylines(
        board_id: str, shared_only: bool = False
    ) -> dict[str, Any]:
        board = get_board(board_id)
        with board._lock:
            state = board.state
            storylines = [
                s.to_dict()
                for s in state.storylines.values()
                if s.shared or not shared_only
            ]
            storylines.sort(key=lambda s: s["id"])
            return {"seq": state.last_applied_seq, "storylines": storylines}

    @app.post(f"{API_PREFIX}/boards/{{board_id}}/storylines", status_code=201)
    def save_storyline(
        board_id: str,
        body: StorylineSaveBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        op = {
            "type": "save_storyline",
            "title": body.title,
            "selected_ids": body.selected_ids,
            "canvas": _canvas_payload(body.canvas, actor),
        }
        return _submit_route(board_id, actor, op)

    @app.post(f"{API_PREFIX}/boards/{{board_id}}/storylines/{{storyline_id}}/load")
    def load_storyline(
        board_id: str,
        storyline_id: str,
        body: StorylineLoadBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        op = {
            "type": "load_storyline",
            "storyline_id": storyline_id,
            "canvas": _canvas_payload(body.canvas, actor),
        }
        return _submit_route(board_id, actor, op)

    @app.post(f"{API_PREFIX}/boards/{{board_id}}/storylines/{{storyline_id}}/rename")
    def rename_storyline(
        board_id: str,
        storyline_id: str,
        body: RenameBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        op = {
            "type": "rename_storyline",
            "storyline_id": storyline_id,
            "title": body.title,
        }
        return _submit_route(board_id, actor, op)

    @app.post(f"{API_PREFIX}/boards/{{board_id}}/storylines/{{storyline_id}}/share")
    def share_storyline(
        board_id: str,
        storyline_id: str,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        op = {"type": "share_storyline", "storyline_id": storyline_id}
        return _submit_route(board_id, actor, op)

    # -- checklists -----------------------------------------------------------

    @app.post(f"{API_PREFIX}/boards/{{board_id}}/checklists", status_code=201)
    def instantiate_checklist(
        board_id: str,
        body: ChecklistCreateBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        template = templates.get(body.template_id)
        if template is None:
            raise reject("TemplateNotFound", f"no template {body.template_id!r}")
        op = {
            "type": "instantiate_checklist",
            "template_id": template.template_id,
            "template_name": template.name,
            "items": list(template.items),
        }
        return _submit_route(board_id, actor, op)

    @app.get(f"{API_PREFIX}/boards/{{board_id}}/checklists")
    def get_checklists(board_id: str) -> dict[str, Any]:
        board = get_board(board_id)
        with board._lock:
            state = board.state
            checklists = sorted(
                (c.to_dict() for c in state.checklists.values()),
                key=lambda c: c["id"],
            )
            return {"seq": state.last_applied_seq, "checklists": checklists}

    @app.post(
        f"{API_PREFIX}/boards/{{board_id}}/checklists/{{checklist_id}}/items",
        status_code=201,
    )
    def add_checklist_item(
        board_id: str,
        checklist_id: str,
        body: ItemBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        op = {
            "type": "add_checklist_item",
            "checklist_id": checklist_id,
            "text": body.text,
        }
        return _submit_route(board_id, actor, op)

    @app.put(
        f"{API_PREFIX}/boards/{{board_id}}/checklists/{{checklist_id}}/items/{{item_id}}"
    )
    def set_item_status(
        board_id: str,
        checklist_id: str,
        item_id: str,
        body: ItemStatusBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        op = {
            "type": "set_item_status",
            "checklist_id": checklist_id,
            "item_id": item_id,
            "status": body.status,
            "note": body.note,
        }
        return _submit_route(board_id, actor, op)

    @app.put(f"{API_PREFIX}/boards/{{board_id}}/checklists/{{checklist_id}}/bookmark")
    def attach_bookmark(
        board_id: str,
        checklist_id: str,
        body: ViewStateBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        op = {
            "type": "attach_resume_bookmark",
            "checklist_id": checklist_id,
            "view_state": _view_state_payload(body),
        }
        return _submit_route(board_id, actor, op)

    @app.post(f"{API_PREFIX}/boards/{{board_id}}/checklists/{{checklist_id}}/complete")
    def complete_checklist(
        board_id: str,
        checklist_id: str,
        body: CompleteBody,
        x_actor_id: Optional[str] = Header(None),
        x_actor_name: Optional[str] = Header(None),
        x_actor_role: Optional[str] = Header(None),
    ) -> dict[str, Any]:
        actor = actor_from(x_actor_id, x_actor_name, x_actor_role)
        op = {
            "type": "complete_checklist",
            "checklist_id": checklist_id,
            "override": body.override,
        }
        return _submit_route(board_id, actor, op)

    # -- reports ---------------------------------------------------------------

    @app.get(f"{API_PREFIX}/boards/{{board_id}}/reports/handover")
    def handover(
        board_id: str,
        storyline_id: str,
        checklist_id: Optional[str] = None,
        format: str = "json",
    ) -> Any:
        board = get_board(board_id)
        with board._lock:
            report = reporting.generate_handover(
                board.state, storyline_id, checklist_id
            )
        if format == "markdown":
            return PlainTextResponse(
                reporting.render_markdown(report), media_type="text/markdown"
            )
        return {"seq": report["seq"], "report": report}

    # -- event stream ------------------------------------------------------------

    @app.websocket(f"{API_PREFIX}/boards/{{board_id}}/stream")
    async def stream(websocket: WebSocket, board_id: str, from_seq: int = 0) -> None:
        await websocket.accept()
        try:
            board = hub.get(board_id)
        except BoardError:
            await websocket.close(
                code=WS_CLOSE_BOARD_NOT_FOUND, reason="BoardNotFound"
            )
            return

        loop = asyncio.get_running_loop()
        queue: asyncio.Queue[str] = asyncio.Queue()

        def push(event) -> None:
            frame = encode_event(event)
            loop.call_soon_threadsafe(queue.put_nowait, frame)

        try:
            backlog, token = board.subscribe(from_seq, push)
        except BoardError as exc:
            await websocket.close(code=WS_CLOSE_SEQ_OUT_OF_RANGE, reason=exc.code)
            return

        receive_task: Optional[asyncio.Task] = None
        queue_task: Optional[asyncio.Task] = None
        try:
            for event in backlog:
                await websocket.send_text(encode_event(event))
            receive_task = asyncio.ensure_future(websocket.receive_text())
            while True:
                queue_task = asyncio.ensure_future(queue.get())
                done, _pending = await asyncio.wait(
                    {receive_task, queue_task},
                    return_when=asyncio.FIRST_COMPLETED,
                )
                if receive_task in done:
                    # Any inbound frame or a disconnect ends the stream;
                    # clients reconnect with their last seen seq.
                    break
                await websocket.send_text(queue_task.result())
                queue_task = None
        except WebSocketDisconnect:
            pass
        finally:
            board.unsubscribe(token)
            for task in (receive_task, queue_task):
                if task is not None and not task.done():
                    task.cancel()

    return app


def create_app(config: Optional[ServiceConfig] = None) -> FastAPI:
    """Assemble a service: store (when a data dir is configured), recovered
    hub, templates, and routes."""
    config = config or ServiceConfig()
    store = None
    if config.data_dir is not None:
        store = EventLogStore(
            config.data_dir,
            fsync_policy=config.fsync_policy,
            fsync_interval=config.fsync_interval,
        )
    hub = BoardHub(store=store, clock=make_clock(config.clock))
    hub.recover()
    if config.template_path is not None:
        templates = load_templates(config.template_path)
    else:
        templates = load_default_templates()
    return build_app(hub, templates, config)
