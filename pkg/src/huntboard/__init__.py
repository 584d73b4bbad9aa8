"""Collaborative investigation board for threat hunters.

Event-sourced core: every board mutation is a server-sequenced event in an
append-only log; state is a deterministic fold of that log. On top sit
waypoints with saved analytics views, leads, storylines, per-session
checklists, handover reports, and an HTTP/WebSocket gateway.
"""

from .errors import BoardError, CorruptLog, GapInLog, InvalidEventAt, LogError
from .state import BoardState, empty_state
from .sync import Board, BoardHub, LogicalClock, WallClock, replay
from .wire import ActorRef, BoardEvent, canonical_json

__version__ = "0.1.0"

__all__ = [
    "ActorRef",
    "Board",
    "BoardError",
    "BoardEvent",
    "BoardHub",
    "BoardState",
    "CorruptLog",
    "GapInLog",
    "InvalidEventAt",
    "LogError",
    "LogicalClock",
    "WallClock",
    "canonical_json",
    "empty_state",
    "replay",
    "__version__",
]
