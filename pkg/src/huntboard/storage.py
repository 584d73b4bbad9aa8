"""Append-only log persistence.

One file per board under ``<data_dir>/boards/``, one event line per record.
With the default every-event fsync policy an acknowledged submission is on
disk before the caller sees the ack; the interval policy trades that for
fewer fsyncs (flush per event, fsync at most every ``fsync_interval``
seconds and on close).

Loading is strict: any undecodable or torn line raises ``CorruptLog``
naming the board and the last seq that did decode.
"""

from __future__ import annotations

import os
import threading
import time
from pathlib import Path
from typing import IO

from .errors import CorruptLog
from .wire import BoardEvent, decode_event

FSYNC_EVERY_EVENT = "every-event"
FSYNC_INTERVAL = "interval"
FSYNC_POLICIES = (FSYNC_EVERY_EVENT, FSYNC_INTERVAL)

_LOG_SUFFIX = ".log"


class EventLogStore:
    def __init__(
        self,
        data_dir: str | Path,
        fsync_policy: str = FSYNC_EVERY_EVENT,
        fsync_interval: float = 1.0,
    ):
        if fsync_policy not in FSYNC_POLICIES:
            raise ValueError(f"unknown fsync policy {fsync_policy!r}")
        self.data_dir = Path(data_dir)
        self.boards_dir = self.data_dir / "boards"
        self.fsync_policy = fsync_policy
        self.fsync_interval = fsync_interval
        self._handles: dict[str, IO[bytes]] = {}
        self._last_fsync: dict[str, float] = {}
        self._lock = threading.Lock()
        self.boards_dir.mkdir(parents=True, exist_ok=True)

    def board_path(self, board_id: str) -> Path:
        return self.boards_dir / f"{board_id}{_LOG_SUFFIX}"

    def list_boards(self) -> list[str]:
        return sorted(
            p.name[: -len(_LOG_SUFFIX)]
            for p in self.boards_dir.glob(f"*{_LOG_SUFFIX}")
        )

    def board_exists(self, board_id: str) -> bool:
        return self.board_path(board_id).exists()

    def create_board(self, board_id: str) -> None:
        path = self.board_path(board_id)
        # Exclusive create; the hub has already checked for duplicates.
        with open(path, "xb") as fh:
            fh.flush()
            os.fsync(fh.fileno())

    def load_events(self, board_id: str) -> list[BoardEvent]:
        path = self.board_path(board_id)
        raw = path.read_bytes()
        events: list[BoardEvent] = []
        last_valid_seq = 0
        if not raw:
            return events
        torn_tail = not raw.endswith(b"\n")
        lines = raw.split(b"\n")
        if lines and lines[-1] == b"":
            lines.pop()
        for index, line in enumerate(lines):
            is_last = index == len(lines) - 1
            try:
                event = decode_event(line.decode("utf-8"))
            except (ValueError, UnicodeDecodeError) as exc:
                raise CorruptLog(board_id, last_valid_seq, str(exc)) from exc
            if is_last and torn_tail:
                # A record without its newline never finished writing.
                raise CorruptLog(board_id, last_valid_seq, "torn final record")
            events.append(event)
            last_valid_seq = event.seq
        return events

    def append(self, board_id: str, line: str) -> None:
        with self._lock:
            fh = self._handles.get(board_id)
            if fh is None:
                fh = open(self.board_path(board_id), "ab")
                self._handles[board_id] = fh
            fh.write(line.encode("utf-8") + b"\n")
            fh.flush()
            if self.fsync_policy == FSYNC_EVERY_EVENT:
                os.fsync(fh.fileno())
            else:
                now = time.monotonic()
                if now - self._last_fsync.get(board_id, 0.0) >= self.fsync_interval:
                    os.fsync(fh.fileno())
                    self._last_fsync[board_id] = now

    def close(self) -> None:
        with self._lock:
            for fh in self._handles.values():
                try:
                    fh.flush()
                    os.fsync(fh.fileno())
                finally:
                    fh.close()
            self._handles.clear()
