"""The aggregate board state.

A ``BoardState`` is built exclusively by folding the board's event log from
empty (see ``transitions.apply_event``); it is never deserialized from a
snapshot. The canonical serialization is the equality oracle for replay
determinism and convergence checks, so every field it includes must be a
deterministic function of the event history.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .objects import Annotation, Checklist, Connector, Lead, Placement, Storyline, Waypoint
from .wire import canonical_json


@dataclass
class BoardState:
    board_id: str
    client_env: str
    waypoints: dict[str, Waypoint] = field(default_factory=dict)
    leads: dict[str, Lead] = field(default_factory=dict)
    annotations: dict[str, Annotation] = field(default_factory=dict)
    connectors: dict[str, Connector] = field(default_factory=dict)
    archived: set[str] = field(default_factory=set)
    # canvas key -> object id -> placement
    placements: dict[str, dict[str, Placement]] = field(default_factory=dict)
    storylines: dict[str, Storyline] = field(default_factory=dict)
    checklists: dict[str, Checklist] = field(default_factory=dict)
    last_applied_seq: int = 0
    next_id: int = 1
    next_z: int = 1

    def new_id(self) -> str:
        """Allocate the next sequential id; zero-padded so lexicographic
        order equals creation order."""
        allocated = f"obj-{self.next_id:06d}"
        self.next_id += 1
        return allocated

    def new_z(self) -> int:
        z = self.next_z
        self.next_z += 1
        return z

    def find_object(self, object_id: str) -> Optional[tuple[str, Any]]:
        """Locate a board object by id; returns (kind, object) or None."""
        if object_id in self.waypoints:
            return "waypoint", self.waypoints[object_id]
        if object_id in self.leads:
            return "lead", self.leads[object_id]
        if object_id in self.annotations:
            return "annotation", self.annotations[object_id]
        if object_id in self.connectors:
            return "connector", self.connectors[object_id]
        return None

    def is_archived(self, object_id: str) -> bool:
        return object_id in self.archived

    def live_connectors_touching(self, object_id: str) -> list[str]:
        return [
            cid
            for cid, conn in self.connectors.items()
            if cid not in self.archived
            and object_id in (conn.endpoint_a, conn.endpoint_b)
        ]

    def canvas_placements(self, key: str) -> dict[str, Placement]:
        return self.placements.setdefault(key, {})

    def most_recent_storyline(self, actor_id: str) -> Optional[Storyline]:
        """The actor's auto-display target: latest created_at, ties by id."""
        own = [s for s in self.storylines.values() if s.created_by == actor_id]
        if not own:
            return None
        return max(own, key=lambda s: (s.created_at, s.id))

    def remove_placements_of(self, object_id: str) -> None:
        for by_object in self.placements.values():
            by_object.pop(object_id, None)

    def to_dict(self) -> dict[str, Any]:
        return {
            "board_id": self.board_id,
            "client_env": self.client_env,
            "objects": {
                "waypoints": {oid: w.to_dict() for oid, w in self.waypoints.items()},
                "leads": {oid: l.to_dict() for oid, l in self.leads.items()},
                "annotations": {
                    oid: a.to_dict() for oid, a in self.annotations.items()
                },
                "connectors": {
                    oid: c.to_dict() for oid, c in self.connectors.items()
                },
            },
            "archived": sorted(self.archived),
            "placements": {
                canvas: {oid: p.to_dict() for oid, p in by_object.items()}
                for canvas, by_object in self.placements.items()
                if by_object
            },
            "storylines": {sid: s.to_dict() for sid, s in self.storylines.items()},
            "checklists": {cid: c.to_dict() for cid, c in self.checklists.items()},
            "last_applied_seq": self.last_applied_seq,
            "next_id": self.next_id,
            "next_z": self.next_z,
        }

    def canonical(self) -> str:
        """The byte-stable serialization used for all equality checks."""
        return canonical_json(self.to_dict())


def empty_state(board_id: str, client_env: Optional[str] = None) -> BoardState:
    """A fresh board; the client environment defaults to the board id."""
    return BoardState(board_id=board_id, client_env=client_env or board_id)
