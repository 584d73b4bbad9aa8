"""Shared test plumbing: fixtures-by-hand, independent oracles, and a
random generator of *valid* operation sequences.

The oracles here deliberately re-derive properties by brute force (fixpoint
closure expansion, full rescans) instead of reusing production shortcuts.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta
from typing import Any, Optional

from huntboard import ActorRef, Board, LogicalClock
from huntboard.objects import ITEM_DONE, ITEM_PENDING, PRIORITIES, WAYPOINT_KINDS
from huntboard.state import BoardState
from huntboard.timeutil import UTC, format_utc

JAY = ActorRef("jay", "Jay")
NOA = ActorRef("noa", "Noa")
WREN = ActorRef("wren", "Wren")

T0 = datetime(2025, 11, 3, 9, 0, 0, tzinfo=UTC)


def ts(days: float = 0, hours: float = 0, minutes: float = 0) -> datetime:
    return T0 + timedelta(days=days, hours=hours, minutes=minutes)


def period(start: datetime, end: datetime) -> dict[str, str]:
    return {"start": format_utc(start), "end": format_utc(end)}


def view_payload(
    query: str = "ueba://query/files?user=bruce",
    window: Optional[tuple[datetime, datetime]] = None,
    captured_at: Optional[datetime] = None,
    tool: str = "ueba-analytics",
) -> dict[str, Any]:
    return {
        "source_tool_id": tool,
        "query_representation": query,
        "captured_at": format_utc(captured_at or ts()),
        "time_window": period(*window) if window else None,
    }


def fresh_board(board_id: str = "env-acme") -> Board:
    return Board(board_id, clock=LogicalClock())


def make_waypoint(board: Board, name: str = "wp", actor: ActorRef = JAY, **kw) -> dict:
    op = {
        "type": "create_waypoint",
        "name": name,
        "kind": kw.pop("kind", "event"),
        "notes": kw.pop("notes", ""),
        "details": kw.pop("details", ""),
        "event_period": kw.pop("event_period", None),
        "priority": kw.pop("priority", "none"),
        "view_state": kw.pop("view_state", None),
    }
    assert not kw, f"unknown kwargs {kw}"
    return board.submit(actor, op).result["waypoint"]


def make_lead(board: Board, title: str = "lead", notes: str = "", actor: ActorRef = JAY) -> dict:
    return board.submit(
        actor, {"type": "create_lead", "title": title, "notes": notes}
    ).result["lead"]


def make_annotation(board: Board, text: str = "a note", actor: ActorRef = JAY) -> dict:
    return board.submit(
        actor, {"type": "create_annotation", "text": text}
    ).result["annotation"]


def make_connector(
    board: Board, a: str, b: str, label: Optional[str] = None, actor: ActorRef = JAY
) -> dict:
    return board.submit(
        actor,
        {"type": "create_connector", "endpoint_a": a, "endpoint_b": b, "label": label},
    ).result["connector"]


def my_canvas(actor: ActorRef = JAY) -> dict[str, Any]:
    return {"scope": "personal", "owner": actor.actor_id}


TEAM = {"scope": "team", "owner": None}


def place(
    board: Board,
    object_id: str,
    x: float = 0.0,
    y: float = 0.0,
    canvas: Optional[dict] = None,
    actor: ActorRef = JAY,
) -> dict:
    return board.submit(
        actor,
        {
            "type": "place_object",
            "canvas": canvas or my_canvas(actor),
            "object_id": object_id,
            "x": x,
            "y": y,
        },
    ).result


def save_storyline(
    board: Board,
    title: str,
    selected: list[str],
    canvas: Optional[dict] = None,
    actor: ActorRef = JAY,
) -> dict:
    return board.submit(
        actor,
        {
            "type": "save_storyline",
            "title": title,
            "selected_ids": selected,
            "canvas": canvas or my_canvas(actor),
        },
    ).result["storyline"]


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------


def closure_bruteforce(state: BoardState, ids: list[str]) -> set[str]:
    """Fixpoint expansion of a selection under connector endpoints."""
    members = set(ids)
    changed = True
    while changed:
        changed = False
        for object_id in list(members):
            conn = state.connectors.get(object_id)
            if conn is None:
                continue
            for endpoint in (conn.endpoint_a, conn.endpoint_b):
                if endpoint not in members:
                    members.add(endpoint)
                    changed = True
    return members


def assert_invariants(state: BoardState) -> None:
    """Full brute-force scan of every documented state invariant."""
    all_ids = (
        set(state.waypoints) | set(state.leads) | set(state.annotations) | set(state.connectors)
    )
    assert state.archived <= all_ids, "archived ids must reference known objects"

    for cid, conn in state.connectors.items():
        assert conn.endpoint_a != conn.endpoint_b
        if cid not in state.archived:
            for endpoint in (conn.endpoint_a, conn.endpoint_b):
                assert endpoint in all_ids and endpoint not in state.archived, (
                    f"live connector {cid} references archived/missing {endpoint}"
                )

    for canvas_key, by_object in state.placements.items():
        for object_id in by_object:
            assert object_id in all_ids, f"placement references unknown {object_id}"
            assert object_id not in state.archived, (
                f"archived {object_id} still placed on {canvas_key}"
            )

    for storyline in state.storylines.values():
        member_set = set(storyline.member_ids)
        assert member_set == closure_bruteforce(state, storyline.member_ids)
        assert set(storyline.member_placements) == member_set

    for lead in state.leads.values():
        if lead.status == "closed":
            assert lead.closed_at is not None and lead.closed_at >= lead.created_at
        else:
            assert lead.closed_at is None

    for waypoint in state.waypoints.values():
        assert waypoint.event_period[0] <= waypoint.event_period[1]
        assert waypoint.updated_at >= waypoint.created_at
        assert waypoint.kind in WAYPOINT_KINDS and waypoint.priority in PRIORITIES

    for checklist in state.checklists.values():
        done = sum(1 for i in checklist.items if i.status == ITEM_DONE)
        pending = sum(1 for i in checklist.items if i.status == ITEM_PENDING)
        assert done + pending == len(checklist.items)
        if checklist.status == "completed" and not checklist.completed_override:
            assert pending == 0, "completed without override must have no pending"


# ---------------------------------------------------------------------------
# random valid-op generator
# ---------------------------------------------------------------------------

_WORDS = (
    "lateral", "beacon", "staging", "kerberos", "egress", "anomaly",
    "partition", "archive", "mount", "token", "session", "volume",
)


class OpGenerator:
    """Emits operations that are valid against the board's current state.

    Deterministic under its seed as long as the board uses a logical clock,
    which is what the replay/convergence suites rely on.
    """

    def __init__(self, seed: int, actors: tuple[ActorRef, ...] = (JAY, NOA, WREN)):
        self.rng = random.Random(seed)
        self.actors = actors

    def _word(self) -> str:
        return f"{self.rng.choice(_WORDS)}-{self.rng.randint(1, 9999)}"

    def _period_payload(self) -> dict[str, str]:
        start = ts(days=self.rng.randint(0, 20), hours=self.rng.randint(0, 23))
        return period(start, start + timedelta(hours=self.rng.randint(1, 48)))

    def _view(self) -> dict[str, Any]:
        start = ts(days=self.rng.randint(0, 20))
        return view_payload(
            query=f"ueba://query/{self._word()}?limit={self.rng.randint(10, 5000)}",
            window=(start, start + timedelta(hours=2)),
            captured_at=start + timedelta(hours=2),
        )

    def _canvas(self, actor: ActorRef) -> dict[str, Any]:
        if self.rng.random() < 0.4:
            return dict(TEAM)
        return my_canvas(actor)

    def _live_ids(self, state: BoardState, with_connectors: bool = True) -> list[str]:
        pools = [state.waypoints, state.leads, state.annotations]
        if with_connectors:
            pools.append(state.connectors)
        ids = [oid for pool in pools for oid in pool if oid not in state.archived]
        return ids

    def next(self, state: BoardState) -> tuple[ActorRef, dict[str, Any]]:
        """Pick an actor and one valid op for the current state."""
        actor = self.rng.choice(self.actors)
        builders = [
            (4, self._op_create_waypoint),
            (2, self._op_create_lead),
            (2, self._op_create_annotation),
            (3, self._op_create_connector),
            (2, self._op_update_waypoint),
            (2, self._op_close_lead),
            (1, self._op_archive),
            (4, self._op_place),
            (2, self._op_move),
            (2, self._op_save_storyline),
            (1, self._op_load_storyline),
            (1, self._op_rename_storyline),
            (1, self._op_share_storyline),
            (1, self._op_instantiate_checklist),
            (1, self._op_add_item),
            (2, self._op_set_item_status),
            (1, self._op_attach_bookmark),
            (1, self._op_complete_checklist),
        ]
        # Retry until a feasible builder fires; creation ops always succeed.
        while True:
            weights = [w for w, _ in builders]
            builder = self.rng.choices([b for _, b in builders], weights=weights)[0]
            op = builder(state, actor)
            if op is not None:
                return actor, op

    # Builders return None when infeasible in the current state.

    def _op_create_waypoint(self, state, actor):
        return {
            "type": "create_waypoint",
            "name": self._word(),
            "kind": self.rng.choice(sorted(WAYPOINT_KINDS)),
            "notes": self._word() if self.rng.random() < 0.5 else "",
            "details": "",
            "event_period": self._period_payload() if self.rng.random() < 0.7 else None,
            "priority": self.rng.choice(sorted(PRIORITIES)),
            "view_state": self._view() if self.rng.random() < 0.5 else None,
        }

    def _op_create_lead(self, state, actor):
        return {"type": "create_lead", "title": self._word(), "notes": ""}

    def _op_create_annotation(self, state, actor):
        return {"type": "create_annotation", "text": self._word()}

    def _op_create_connector(self, state, actor):
        endpoints = self._live_ids(state, with_connectors=False)
        if len(endpoints) < 2:
            return None
        a, b = self.rng.sample(endpoints, 2)
        return {
            "type": "create_connector",
            "endpoint_a": a,
            "endpoint_b": b,
            "label": self._word() if self.rng.random() < 0.3 else None,
        }

    def _op_update_waypoint(self, state, actor):
        live = [w for w in state.waypoints if w not in state.archived]
        if not live:
            return None
        patch: dict[str, Any] = {}
        if self.rng.random() < 0.5:
            patch["priority"] = self.rng.choice(sorted(PRIORITIES))
        if self.rng.random() < 0.4:
            patch["notes"] = self._word()
        if self.rng.random() < 0.2:
            patch["event_period"] = self._period_payload()
        return {"type": "update_waypoint", "id": self.rng.choice(live), "patch": patch}

    def _op_close_lead(self, state, actor):
        open_leads = [
            lid
            for lid, lead in state.leads.items()
            if lead.status == "open" and lid not in state.archived
        ]
        if not open_leads:
            return None
        return {"type": "close_lead", "id": self.rng.choice(open_leads)}

    def _op_archive(self, state, actor):
        live = self._live_ids(state)
        if not live:
            return None
        return {"type": "archive_object", "id": self.rng.choice(live)}

    def _op_place(self, state, actor):
        canvas = self._canvas(actor)
        from huntboard.objects import canvas_key

        key = canvas_key(canvas["scope"], canvas["owner"])
        placed = set(state.placements.get(key, {}))
        candidates = [oid for oid in self._live_ids(state) if oid not in placed]
        if not candidates:
            return None
        return {
            "type": "place_object",
            "canvas": canvas,
            "object_id": self.rng.choice(candidates),
            "x": round(self.rng.uniform(-500, 500), 3),
            "y": round(self.rng.uniform(-500, 500), 3),
        }

    def _op_move(self, state, actor):
        options = [
            (key, oid)
            for key, by_object in state.placements.items()
            for oid in by_object
            if oid not in state.archived
        ]
        if not options:
            return None
        key, oid = self.rng.choice(options)
        canvas = (
            dict(TEAM)
            if key == "team"
            else {"scope": "personal", "owner": key.split(":", 1)[1]}
        )
        return {
            "type": "move_object",
            "canvas": canvas,
            "object_id": oid,
            "x": round(self.rng.uniform(-500, 500), 3),
            "y": round(self.rng.uniform(-500, 500), 3),
        }

    def _selectable(self, state, key: str) -> list[str]:
        by_object = state.placements.get(key, {})
        ids = []
        for oid in by_object:
            if oid in state.archived:
                continue
            conn = state.connectors.get(oid)
            if conn is not None and not (
                conn.endpoint_a in by_object and conn.endpoint_b in by_object
            ):
                continue  # closure would demand unplaced endpoints
            ids.append(oid)
        return ids

    def _op_save_storyline(self, state, actor):
        canvas = self._canvas(actor)
        from huntboard.objects import canvas_key

        key = canvas_key(canvas["scope"], canvas["owner"])
        candidates = self._selectable(state, key)
        if not candidates:
            return None
        count = self.rng.randint(1, min(6, len(candidates)))
        return {
            "type": "save_storyline",
            "title": self._word(),
            "selected_ids": self.rng.sample(candidates, count),
            "canvas": canvas,
        }

    def _op_load_storyline(self, state, actor):
        if not state.storylines:
            return None
        return {
            "type": "load_storyline",
            "storyline_id": self.rng.choice(sorted(state.storylines)),
            "canvas": self._canvas(actor),
        }

    def _op_rename_storyline(self, state, actor):
        if not state.storylines:
            return None
        return {
            "type": "rename_storyline",
            "storyline_id": self.rng.choice(sorted(state.storylines)),
            "title": self._word(),
        }

    def _op_share_storyline(self, state, actor):
        # Only the creator may share: the op is built for the owner actor.
        own = [
            sid
            for sid, s in state.storylines.items()
            if s.created_by == actor.actor_id
        ]
        if not own:
            return None
        return {"type": "share_storyline", "storyline_id": self.rng.choice(sorted(own))}

    def _active_checklist(self, state, actor) -> Optional[str]:
        for cid, checklist in state.checklists.items():
            if checklist.session_owner == actor.actor_id and checklist.status == "active":
                return cid
        return None

    def _op_instantiate_checklist(self, state, actor):
        if self._active_checklist(state, actor) is not None:
            return None
        count = self.rng.randint(0, 5)
        return {
            "type": "instantiate_checklist",
            "template_id": "gen-template",
            "template_name": "Generated",
            "items": [self._word() for _ in range(count)],
        }

    def _op_add_item(self, state, actor):
        cid = self._active_checklist(state, actor)
        if cid is None:
            return None
        return {"type": "add_checklist_item", "checklist_id": cid, "text": self._word()}

    def _op_set_item_status(self, state, actor):
        cid = self._active_checklist(state, actor)
        if cid is None or not state.checklists[cid].items:
            return None
        item = self.rng.choice(state.checklists[cid].items)
        return {
            "type": "set_item_status",
            "checklist_id": cid,
            "item_id": item.id,
            "status": self.rng.choice(["pending", "done"]),
            "note": self._word() if self.rng.random() < 0.3 else None,
        }

    def _op_attach_bookmark(self, state, actor):
        cid = self._active_checklist(state, actor)
        if cid is None:
            return None
        return {
            "type": "attach_resume_bookmark",
            "checklist_id": cid,
            "view_state": self._view(),
        }

    def _op_complete_checklist(self, state, actor):
        cid = self._active_checklist(state, actor)
        if cid is None:
            return None
        pending = state.checklists[cid].pending_count()
        return {
            "type": "complete_checklist",
            "checklist_id": cid,
            "override": pending > 0,
        }


def run_random_ops(board: Board, seed: int, count: int) -> None:
    """Drive ``count`` valid random ops into the board."""
    gen = OpGenerator(seed)
    for _ in range(count):
        actor, op = gen.next(board.state)
        board.submit(actor, op)
