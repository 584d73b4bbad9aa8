"""Event-sourced replication core.

One ``Board`` per client environment: a serial sequencer that assigns dense
seq numbers, applies each accepted operation to the live state, persists the
event line (before acknowledging), and fans the event out to subscribers.
Rejected submissions leave no trace in history.

The live state is maintained incrementally; ``replay`` rebuilds a state by
folding a log from empty. Comparing the two canonical serializations is the
determinism check the test suite leans on.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Any, Callable, Iterable, Optional

from .errors import BoardError, GapInLog, InvalidEventAt, reject
from .state import BoardState, empty_state
from .storage import EventLogStore
from .timeutil import UTC, now_utc
from .transitions import apply_event
from .wire import ActorRef, BoardEvent, encode_event


class WallClock:
    """Real time, clamped to be non-decreasing across events."""

    def next_time(self, last: Optional[datetime], seq: int) -> datetime:
        now = now_utc()
        if last is not None and now < last:
            return last
        return now


class LogicalClock:
    """Deterministic time: a fixed epoch advanced one step per seq.

    Makes independently sequenced runs byte-comparable; used by tests and
    reproducible demos, never the default.
    """

    def __init__(
        self,
        start: Optional[datetime] = None,
        step: timedelta = timedelta(seconds=1),
    ):
        self.start = start or datetime(2026, 1, 5, 0, 0, 0, tzinfo=UTC)
        self.step = step

    def next_time(self, last: Optional[datetime], seq: int) -> datetime:
        return self.start + self.step * seq


def make_clock(name: str) -> WallClock | LogicalClock:
    if name == "wall":
        return WallClock()
    if name == "logical":
        return LogicalClock()
    raise ValueError(f"unknown clock {name!r}")


@dataclass(frozen=True)
class SubmitOutcome:
    seq: int
    result: dict[str, Any]


Subscriber = Callable[[BoardEvent], None]


class Board:
    """Serial sequencer and live state for one board.

    Thread-safe: submissions funnel through one lock; reads take the same
    lock only long enough to snapshot.
    """

    def __init__(
        self,
        board_id: str,
        store: Optional[EventLogStore] = None,
        clock: Optional[WallClock | LogicalClock] = None,
        events: Optional[Iterable[BoardEvent]] = None,
    ):
        self.board_id = board_id
        self._store = store
        self._clock = clock or WallClock()
        self._lock = threading.Lock()
        self._subscribers: dict[int, Subscriber] = {}
        self._next_token = 1
        self.events: list[BoardEvent] = []
        self.state: BoardState = empty_state(board_id)
        if events:
            for event in events:
                apply_event(self.state, event)
                self.events.append(event)

    @property
    def current_seq(self) -> int:
        return self.state.last_applied_seq

    def submit(self, actor: ActorRef, op: dict[str, Any]) -> SubmitOutcome:
        """Sequence, validate, persist, broadcast. Raises BoardError on
        rejection; rejected ops are not part of history."""
        with self._lock:
            seq = self.state.last_applied_seq + 1
            last_time = self.events[-1].server_time if self.events else None
            event = BoardEvent(
                seq=seq,
                actor=actor,
                server_time=self._clock.next_time(last_time, seq),
                op=op,
            )
            result = apply_event(self.state, event)  # raises BoardError, state untouched
            if self._store is not None:
                self._store.append(self.board_id, encode_event(event))
            self.events.append(event)
            subscribers = list(self._subscribers.values())
        for push in subscribers:
            push(event)
        return SubmitOutcome(seq=seq, result=result)

    def snapshot(self) -> tuple[int, str]:
        """(seq, canonical BoardState serialization) for the current state."""
        with self._lock:
            return self.state.last_applied_seq, self.state.canonical()

    def events_since(self, from_seq: int) -> list[BoardEvent]:
        with self._lock:
            self._check_from_seq(from_seq)
            return self.events[from_seq:]

    def subscribe(
        self, from_seq: int, push: Subscriber
    ) -> tuple[list[BoardEvent], int]:
        """Atomically snapshot the backlog after ``from_seq`` and register a
        live callback; the combination is gapless and duplicate-free."""
        with self._lock:
            self._check_from_seq(from_seq)
            backlog = self.events[from_seq:]
            token = self._next_token
            self._next_token += 1
            self._subscribers[token] = push
            return backlog, token

    def unsubscribe(self, token: int) -> None:
        with self._lock:
            self._subscribers.pop(token, None)

    def _check_from_seq(self, from_seq: int) -> None:
        if from_seq < 0 or from_seq > self.state.last_applied_seq:
            raise reject(
                "SeqOutOfRange",
                f"from_seq {from_seq} outside 0..{self.state.last_applied_seq}",
            )


def replay(board_id: str, events: Iterable[BoardEvent]) -> BoardState:
    """Fold an event list into a state from empty.

    Fails fast: GapInLog when seqs are not dense from 1, InvalidEventAt when
    an event does not validate at its own position.
    """
    state = empty_state(board_id)
    for event in events:
        if event.seq != state.last_applied_seq + 1:
            raise GapInLog(state.last_applied_seq + 1, event.seq)
        try:
            apply_event(state, event)
        except BoardError as exc:
            raise InvalidEventAt(event.seq, exc) from exc
    return state


class BoardHub:
    """Registry of boards, wired to the persistent store."""

    def __init__(
        self,
        store: Optional[EventLogStore] = None,
        clock: Optional[WallClock | LogicalClock] = None,
    ):
        self._store = store
        self._clock = clock or WallClock()
        self._boards: dict[str, Board] = {}
        self._lock = threading.Lock()

    def create(self, board_id: str) -> Board:
        if not board_id or not all(
            ch.isalnum() or ch in "-_." for ch in board_id
        ):
            raise reject(
                "InvalidBoardId",
                "board ids are non-empty and limited to alphanumerics, '-', '_', '.'",
            )
        with self._lock:
            if board_id in self._boards:
                raise reject("BoardExists", f"board {board_id!r} already exists")
            if self._store is not None:
                try:
                    self._store.create_board(board_id)
                except FileExistsError:
                    raise reject(
                        "BoardExists", f"board {board_id!r} already exists on disk"
                    ) from None
            board = Board(board_id, store=self._store, clock=self._clock)
            self._boards[board_id] = board
            return board

    def get(self, board_id: str) -> Board:
        with self._lock:
            board = self._boards.get(board_id)
        if board is None:
            raise reject("BoardNotFound", f"no board {board_id!r}")
        return board

    def list_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._boards)

    def recover(self) -> None:
        """Rebuild every board found in the store by replaying its log.

        Raises CorruptLog / GapInLog / InvalidEventAt on broken history —
        startup should fail loudly rather than serve a diverged state.
        """
        if self._store is None:
            return
        for board_id in self._store.list_boards():
            events = self._store.load_events(board_id)
            board = Board(
                board_id, store=self._store, clock=self._clock, events=events
            )
            with self._lock:
                self._boards[board_id] = board
