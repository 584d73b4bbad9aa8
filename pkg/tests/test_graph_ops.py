"""Leads, annotations, connectors."""

from __future__ import annotations

import pytest

from huntboard.errors import BoardError

from helpers import JAY, make_annotation, make_connector, make_lead, make_waypoint


def submit_raises(board, op, code):
    before = board.state.canonical()
    with pytest.raises(BoardError) as excinfo:
        board.submit(JAY, op)
    assert excinfo.value.code == code
    assert board.state.canonical() == before
    return excinfo.value


def test_create_leads_open(board):
    for title in ("Technical Anomaly", "Behavioral Change", "Security Breach"):
        lead = make_lead(board, title)
        assert lead["status"] == "open"
        assert lead["closed_at"] is None


def test_create_lead_empty_title(board):
    submit_raises(board, {"type": "create_lead", "title": "", "notes": ""}, "EmptyTitle")


def test_close_lead_lifecycle(board):
    technical = make_lead(board, "Technical Anomaly")
    behavioral = make_lead(board, "Behavioral Change")
    breach = make_lead(board, "Security Breach")

    closed = board.submit(JAY, {"type": "close_lead", "id": technical["id"]}).result["lead"]
    assert closed["status"] == "closed"
    assert closed["closed_at"] is not None
    assert closed["closed_at"] >= closed["created_at"]

    submit_raises(board, {"type": "close_lead", "id": technical["id"]}, "AlreadyClosed")

    board.submit(JAY, {"type": "close_lead", "id": behavioral["id"]})
    still_open = [
        l.title
        for l in board.state.leads.values()
        if l.status == "open"
    ]
    assert still_open == ["Security Breach"]
    assert board.state.leads[breach["id"]].status == "open"


def test_close_missing_lead(board):
    submit_raises(board, {"type": "close_lead", "id": "obj-000123"}, "NotFound")


def test_annotation_created(board):
    note = make_annotation(board, "may relate to data migration")
    assert note["text"] == "may relate to data migration"
    assert note["created_by"] == "jay"


def test_annotation_empty_text_rejected(board):
    submit_raises(board, {"type": "create_annotation", "text": " "}, "EmptyText")


def test_connector_between_event_and_actor(board):
    ufa = make_waypoint(board, "Unusual File Access")
    bruce = make_waypoint(board, "Bruce", kind="user")
    conn = make_connector(board, ufa["id"], bruce["id"], label="performed by")
    assert conn["endpoint_a"] == ufa["id"]
    assert conn["endpoint_b"] == bruce["id"]
    assert conn["label"] == "performed by"


def test_connector_self_loop_rejected(board):
    wp = make_waypoint(board, "solo")
    submit_raises(
        board,
        {"type": "create_connector", "endpoint_a": wp["id"], "endpoint_b": wp["id"]},
        "SelfLoop",
    )


def test_connector_to_archived_endpoint_rejected(board):
    a = make_waypoint(board, "a")
    b = make_waypoint(board, "b")
    board.submit(JAY, {"type": "archive_object", "id": b["id"]})
    submit_raises(
        board,
        {"type": "create_connector", "endpoint_a": a["id"], "endpoint_b": b["id"]},
        "EndpointArchived",
    )


def test_connector_to_missing_endpoint_rejected(board):
    a = make_waypoint(board, "a")
    submit_raises(
        board,
        {"type": "create_connector", "endpoint_a": a["id"], "endpoint_b": "obj-000999"},
        "NotFound",
    )


def test_connector_cannot_connect_connectors(board):
    a = make_waypoint(board, "a")
    b = make_waypoint(board, "b")
    c = make_waypoint(board, "c")
    conn = make_connector(board, a["id"], b["id"])
    submit_raises(
        board,
        {"type": "create_connector", "endpoint_a": conn["id"], "endpoint_b": c["id"]},
        "InvalidEndpoint",
    )


def test_ids_are_sequential_and_replay_stable(board):
    first = make_waypoint(board, "one")
    second = make_lead(board, "two")
    third = make_annotation(board, "three")
    assert [first["id"], second["id"], third["id"]] == [
        "obj-000001",
        "obj-000002",
        "obj-000003",
    ]
