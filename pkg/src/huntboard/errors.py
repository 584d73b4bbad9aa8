"""Error types shared across the board service.

Two families:

* ``BoardError`` — a domain rejection. Carries a machine-readable ``code``
  that travels unchanged to API clients (HTTP bodies, WS close reasons).
  Rejections are never appended to the event log.
* ``LogError`` and friends — infrastructure failures around the append-only
  log itself (gaps, invalid history, torn writes). These are bugs or broken
  deployments, not client mistakes.
"""

from __future__ import annotations


class BoardError(Exception):
    """A rejected operation, identified by a stable machine-readable code."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"BoardError({self.code!r}, {self.message!r})"


def reject(code: str, message: str) -> BoardError:
    """Build a rejection; callers ``raise reject(...)``."""
    return BoardError(code, message)


# Codes that map to HTTP 400 (the request itself is malformed or violates a
# value-level precondition).
VALIDATION_CODES = frozenset({
    "EmptyName",
    "EmptyTitle",
    "EmptyText",
    "EmptyQuery",
    "EmptySelection",
    "InvalidPeriod",
    "InvalidCoordinates",
    "InvalidKind",
    "InvalidPriority",
    "InvalidStatus",
    "SelfLoop",
    "InvalidEndpoint",
    "InvalidBoardId",
    "InvalidPatch",
    "ChecklistMismatch",
    "MalformedOp",
    "UnknownOp",
})

# Codes that map to HTTP 404 (the referenced thing does not exist).
NOT_FOUND_CODES = frozenset({
    "NotFound",
    "BoardNotFound",
    "StorylineNotFound",
    "TemplateNotFound",
    "ItemNotFound",
    "NoSavedView",
    "ChecklistNotFound",
})

# Codes that map to HTTP 409 (the request conflicts with current state).
CONFLICT_CODES = frozenset({
    "AlreadyClosed",
    "AlreadyPlaced",
    "NotPlaced",
    "Archived",
    "EndpointArchived",
    "ActiveChecklistExists",
    "NotActive",
    "PendingItems",
    "NotOwner",
    "BoardExists",
    "SeqOutOfRange",
})


def http_status_for(code: str) -> int:
    """Map a rejection code onto its HTTP status."""
    if code in NOT_FOUND_CODES:
        return 404
    if code in CONFLICT_CODES:
        return 409
    return 400


class LogError(Exception):
    """Base for event-log integrity failures."""


class GapInLog(LogError):
    """The event list is not seq-dense from 1."""

    def __init__(self, expected_seq: int, found_seq: int):
        super().__init__(f"expected seq {expected_seq}, found {found_seq}")
        self.expected_seq = expected_seq
        self.found_seq = found_seq


class InvalidEventAt(LogError):
    """An event in the log fails its preconditions at its own position."""

    def __init__(self, seq: int, cause: BoardError):
        super().__init__(f"event {seq} invalid: [{cause.code}] {cause.message}")
        self.seq = seq
        self.cause = cause


class CorruptLog(LogError):
    """A persisted log file could not be decoded past ``last_valid_seq``."""

    def __init__(self, board_id: str, last_valid_seq: int, detail: str = ""):
        msg = f"corrupt log for board {board_id!r} after seq {last_valid_seq}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.board_id = board_id
        self.last_valid_seq = last_valid_seq
