"""Capture, prefill, saved-view round-trips, and the waypoint list."""

from __future__ import annotations

from datetime import timedelta

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from huntboard.errors import BoardError
from huntboard.objects import PRIORITY_RANK
from huntboard.state import empty_state
from huntboard.timeutil import format_utc
from huntboard.waypoints import (
    SortKey,
    WaypointFilter,
    capture_view,
    list_waypoints,
    open_waypoint_view,
    prefill_draft,
    sort_waypoints,
)
from huntboard.wire import canonical_json

from helpers import JAY, fresh_board, make_waypoint, period, ts, view_payload


def test_capture_view_holds_query_verbatim():
    query = "ueba://query/file-access?user=Bruce+Wright&min_files=3000&x=%20%7C"
    view = capture_view("ueba-analytics", query, time_window=(ts(0), ts(1)))
    assert view.query_representation == query
    assert view.time_window == (ts(0), ts(1))


def test_capture_without_window():
    view = capture_view("tool", "q://x")
    assert view.time_window is None


def test_capture_empty_query_rejected():
    with pytest.raises(BoardError) as excinfo:
        capture_view("tool", "")
    assert excinfo.value.code == "EmptyQuery"


def test_capture_backwards_window_rejected():
    with pytest.raises(BoardError) as excinfo:
        capture_view("tool", "q://x", time_window=(ts(2), ts(1)))
    assert excinfo.value.code == "InvalidPeriod"


def test_prefill_copies_window():
    view = capture_view("tool", "q://x", time_window=(ts(1), ts(1, hours=2)))
    draft = prefill_draft(view)
    assert draft["event_period"] == (ts(1), ts(1, hours=2))
    assert draft["name"] == ""
    assert draft["kind"] == "event"


def test_prefill_degenerate_interval_without_window():
    view = capture_view("tool", "q://x", captured_at=ts(3))
    draft = prefill_draft(view)
    start, end = draft["event_period"]
    assert start == end == ts(3)
    assert start <= end  # the waypoint invariant the rule exists for


def test_prefill_details_reference_query():
    view = capture_view("ueba-analytics", "ueba://anomalies/file-access?min=3000")
    draft = prefill_draft(view)
    assert "ueba://anomalies/file-access?min=3000" in draft["details"]


def test_open_view_round_trips_byte_exact(board):
    query = "ueba://query/users?name=Bruce%20Wright&window=-1h"
    wp = make_waypoint(
        board, "Bruce", kind="user", view_state=view_payload(query=query)
    )
    first = open_waypoint_view(board.state, wp["id"])
    second = open_waypoint_view(board.state, wp["id"])
    assert first.query_representation == query
    assert canonical_json(first.to_dict()) == canonical_json(second.to_dict())


def test_open_view_missing_and_viewless(board):
    wp = make_waypoint(board, "no view")
    with pytest.raises(BoardError) as excinfo:
        open_waypoint_view(board.state, wp["id"])
    assert excinfo.value.code == "NoSavedView"
    with pytest.raises(BoardError) as excinfo:
        open_waypoint_view(board.state, "obj-000404")
    assert excinfo.value.code == "NotFound"


def test_view_state_survives_unrelated_updates(board):
    query = "ueba://query/x?a=1"
    wp = make_waypoint(board, "w", view_state=view_payload(query=query))
    before = canonical_json(open_waypoint_view(board.state, wp["id"]).to_dict())
    board.submit(
        JAY, {"type": "update_waypoint", "id": wp["id"], "patch": {"notes": "n"}}
    )
    after = canonical_json(open_waypoint_view(board.state, wp["id"]).to_dict())
    assert before == after


# -- listing ------------------------------------------------------------------


def seeded_board():
    board = fresh_board()
    make_waypoint(board, "Unusual File Access", event_period=period(ts(0), ts(0, 1)))
    make_waypoint(board, "Bruce", kind="user", event_period=period(ts(0), ts(0, 1)))
    make_waypoint(
        board, "Unusual Software Usage", event_period=period(ts(3), ts(3, 1))
    )
    make_waypoint(board, "Data Compression", event_period=period(ts(6), ts(6, 1)))
    exfil = make_waypoint(
        board, "Data Exfiltration", event_period=period(ts(9), ts(9, 1))
    )
    board.submit(
        JAY,
        {"type": "update_waypoint", "id": exfil["id"], "patch": {"priority": "high"}},
    )
    return board


def names(waypoints):
    return [w.name for w in waypoints]


def test_empty_filter_lists_all_in_creation_order():
    board = seeded_board()
    assert names(list_waypoints(board.state)) == [
        "Unusual File Access",
        "Bruce",
        "Unusual Software Usage",
        "Data Compression",
        "Data Exfiltration",
    ]


def test_filter_by_kind_user():
    board = seeded_board()
    got = list_waypoints(board.state, WaypointFilter(kinds=frozenset({"user"})))
    assert names(got) == ["Bruce"]


def test_filter_priority_at_least_high():
    board = seeded_board()
    got = list_waypoints(board.state, WaypointFilter(priority_at_least="high"))
    assert names(got) == ["Data Exfiltration"]


def test_filter_text_is_case_insensitive_over_name_and_notes():
    board = fresh_board()
    make_waypoint(board, "Alpha", notes="kerberos ticket reuse")
    make_waypoint(board, "Beta")
    got = list_waypoints(board.state, WaypointFilter(text_query="KERBEROS"))
    assert names(got) == ["Alpha"]
    got = list_waypoints(board.state, WaypointFilter(text_query="alph"))
    assert names(got) == ["Alpha"]


def test_filter_period_overlaps():
    board = seeded_board()
    got = list_waypoints(
        board.state, WaypointFilter(period_overlaps=(ts(2, 12), ts(4)))
    )
    assert names(got) == ["Unusual Software Usage"]


def test_archived_waypoints_excluded():
    board = seeded_board()
    target = next(iter(board.state.waypoints))
    board.submit(JAY, {"type": "archive_object", "id": target})
    assert len(list_waypoints(board.state)) == 4


def test_sort_descending_keeps_id_tiebreak_ascending():
    board = fresh_board()
    for name in ("n", "n", "n"):
        make_waypoint(board, name)
    got = list_waypoints(board.state, sort=SortKey(field="name", direction="desc"))
    assert [w.id for w in got] == sorted(w.id for w in got)


# -- property tests -----------------------------------------------------------

_priority = st.sampled_from(sorted(PRIORITY_RANK))
_kind = st.sampled_from(["event", "event-group", "user", "timeframe"])
_name = st.text(
    alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd"), min_codepoint=32),
    min_size=1,
    max_size=8,
)


@st.composite
def waypoint_boards(draw):
    board = fresh_board()
    count = draw(st.integers(min_value=0, max_value=100))
    for _ in range(count):
        start_h = draw(st.integers(min_value=0, max_value=400))
        length = draw(st.integers(min_value=0, max_value=96))
        make_waypoint(
            board,
            draw(_name),
            kind=draw(_kind),
            priority=draw(_priority),
            notes=draw(st.sampled_from(["", "beacon", "egress staging"])),
            event_period=period(ts(hours=start_h), ts(hours=start_h + length)),
        )
    return board


@st.composite
def filters(draw):
    kinds = draw(
        st.none()
        | st.frozensets(
            st.sampled_from(["event", "event-group", "user", "timeframe"]),
            min_size=1,
        )
    )
    overlaps = None
    if draw(st.booleans()):
        a = draw(st.integers(min_value=0, max_value=400))
        b = draw(st.integers(min_value=0, max_value=96))
        overlaps = (ts(hours=a), ts(hours=a + b))
    return WaypointFilter(
        kinds=kinds,
        priority_at_least=draw(st.none() | _priority),
        text_query=draw(st.none() | st.sampled_from(["a", "beacon", "Z"])),
        period_overlaps=overlaps,
    )


@st.composite
def sort_keys(draw):
    return SortKey(
        field=draw(
            st.sampled_from(["created_at", "name", "priority", "event_period_start"])
        ),
        direction=draw(st.sampled_from(["asc", "desc"])),
    )


@settings(max_examples=60, deadline=None)
@given(board=waypoint_boards(), flt=filters(), sort=sort_keys())
def test_filter_then_sort_commutes_with_sort_then_filter(board, flt, sort):
    state = board.state
    live = [w for wid, w in state.waypoints.items() if wid not in state.archived]
    filter_then_sort = sort_waypoints([w for w in live if flt.matches(w)], sort)
    sort_then_filter = [w for w in sort_waypoints(live, sort) if flt.matches(w)]
    assert [w.id for w in filter_then_sort] == [w.id for w in sort_then_filter]
    assert [w.id for w in list_waypoints(state, flt, sort)] == [
        w.id for w in filter_then_sort
    ]


@settings(max_examples=40, deadline=None)
@given(board=waypoint_boards(), sort=sort_keys(), seed=st.integers(0, 2**16))
def test_total_order_is_permutation_stable(board, sort, seed):
    import random

    live = list(board.state.waypoints.values())
    shuffled = live[:]
    random.Random(seed).shuffle(shuffled)
    assert [w.id for w in sort_waypoints(live, sort)] == [
        w.id for w in sort_waypoints(shuffled, sort)
    ]
