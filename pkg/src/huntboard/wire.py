"""Wire and log format.

One event per line, each line a self-contained JSON record with an explicit
schema-version field. Canonical JSON (sorted keys, compact separators,
ASCII-only, no NaN) is used everywhere byte-stability matters: log lines,
WebSocket frames, and the snapshot serialization that equality tests hinge
on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime
from typing import Any

from .timeutil import format_utc, parse_utc

SCHEMA_VERSION = 1


def canonical_json(obj: Any) -> str:
    """Stable, key-ordered, compact JSON encoding."""
    return json.dumps(
        obj,
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=True,
        allow_nan=False,
    )


@dataclass(frozen=True)
class ActorRef:
    """Who performed an operation. Identity is trusted from the gateway."""

    actor_id: str
    display_name: str = ""
    role: str = "hunter"

    def __post_init__(self):
        if not self.display_name:
            object.__setattr__(self, "display_name", self.actor_id)

    def to_dict(self) -> dict[str, str]:
        return {
            "id": self.actor_id,
            "name": self.display_name,
            "role": self.role,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ActorRef":
        return cls(
            actor_id=data["id"],
            display_name=data.get("name", ""),
            role=data.get("role", "hunter"),
        )


@dataclass(frozen=True)
class BoardEvent:
    """A server-sequenced mutation record; the unit of history."""

    seq: int
    actor: ActorRef
    server_time: datetime
    op: dict[str, Any]

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "seq": self.seq,
            "actor": self.actor.to_dict(),
            "server_time": format_utc(self.server_time),
            "op": self.op,
        }


def encode_event(event: BoardEvent) -> str:
    """One canonical-JSON line (no trailing newline)."""
    return canonical_json(event.to_dict())


def decode_event(line: str) -> BoardEvent:
    """Parse one log line back into a BoardEvent.

    Raises ValueError on anything that is not a complete, well-formed record.
    """
    data = json.loads(line)
    if not isinstance(data, dict):
        raise ValueError("event record is not an object")
    schema = data.get("schema")
    if schema != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {schema!r}")
    try:
        return BoardEvent(
            seq=int(data["seq"]),
            actor=ActorRef.from_dict(data["actor"]),
            server_time=parse_utc(data["server_time"]),
            op=data["op"],
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed event record: {exc}") from exc
