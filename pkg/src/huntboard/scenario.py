"""Synthetic anomaly feed and the scripted end-to-end investigation run.

Stands in for a real behavior-analytics product: ``generate_scenario``
emits the four-signal "Bruce Wright" anomaly sequence (seed-deterministic,
synthetic values), and ``run_scripted_scenario`` drives the complete
five-scene hunter workflow against a running service through its public
HTTP API only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Any, Optional

import httpx

from .timeutil import UTC, format_utc
from .wire import canonical_json

SCENARIO_USER = "Bruce Wright"
SOURCE_TOOL = "ueba-analytics"

# Fixed scenario epoch: sessions land days apart regardless of wall time.
_BASE = datetime(2025, 11, 3, 9, 0, 0, tzinfo=UTC)
_SESSION_DAYS = (0, 3, 6, 9)

GIB = 2**30


@dataclass
class AnomalySignal:
    signal_id: str
    timestamp: datetime
    user: str
    headline: str
    metrics: dict[str, int]
    view_query: str

    @property
    def window(self) -> tuple[datetime, datetime]:
        return (self.timestamp - timedelta(hours=1), self.timestamp)

    def view_state_payload(self) -> dict[str, Any]:
        start, end = self.window
        return {
            "source_tool_id": SOURCE_TOOL,
            "query_representation": self.view_query,
            "captured_at": format_utc(self.timestamp),
            "time_window": {"start": format_utc(start), "end": format_utc(end)},
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "signal_id": self.signal_id,
            "timestamp": format_utc(self.timestamp),
            "user": self.user,
            "headline": self.headline,
            "metrics": dict(self.metrics),
            "suggested_view": self.view_state_payload(),
        }


def generate_scenario(seed: int = 0) -> list[AnomalySignal]:
    """The four anomaly signals, in order, deterministic under the seed.

    Values beyond the scripted thresholds (>3000 files, >800 GiB uploaded)
    are synthetic and seed-derived.
    """
    rng = random.Random(seed)
    stamps = [
        _BASE + timedelta(days=days, minutes=rng.randint(0, 179))
        for days in _SESSION_DAYS
    ]

    file_count = 3000 + rng.randint(101, 999)
    partitions = rng.randint(4, 12)
    compressed = rng.randint(180, 900)
    uploaded_gib = 800 + rng.randint(13, 137)

    def q(path: str, **params: Any) -> str:
        joined = "&".join(f"{k}={v}" for k, v in params.items())
        return f"ueba://{path}?{joined}"

    user_q = SCENARIO_USER.replace(" ", "+")
    return [
        AnomalySignal(
            signal_id="sig-001",
            timestamp=stamps[0],
            user=SCENARIO_USER,
            headline=(
                f"{SCENARIO_USER} accessed {file_count} files in a single session"
            ),
            metrics={"file_count": file_count},
            view_query=q("anomalies/file-access", user=user_q, min_files=3000),
        ),
        AnomalySignal(
            signal_id="sig-002",
            timestamp=stamps[1],
            user=SCENARIO_USER,
            headline=(
                f"Unusual executable partx-helper.exe created {partitions} "
                f"disk partitions for {SCENARIO_USER}"
            ),
            metrics={"partitions_created": partitions},
            view_query=q("anomalies/process", user=user_q, exe="partx-helper.exe"),
        ),
        AnomalySignal(
            signal_id="sig-003",
            timestamp=stamps[2],
            user=SCENARIO_USER,
            headline=(
                f"winzip.exe compressed {compressed} files on newly "
                f"partitioned volumes"
            ),
            metrics={"files_compressed": compressed},
            view_query=q("anomalies/process", user=user_q, exe="winzip.exe"),
        ),
        AnomalySignal(
            signal_id="sig-004",
            timestamp=stamps[3],
            user=SCENARIO_USER,
            headline=(
                f"{SCENARIO_USER} uploaded {uploaded_gib} GB to an external volume"
            ),
            metrics={"bytes_uploaded": uploaded_gib * GIB},
            view_query=q("anomalies/egress", user=user_q, min_gb=800),
        ),
    ]


def signals_json(seed: int = 0) -> str:
    return canonical_json([s.to_dict() for s in generate_scenario(seed)])


class ScenarioError(RuntimeError):
    """A scripted step failed; carries the zero-based step index."""

    def __init__(self, step: int, detail: str):
        super().__init__(f"scenario aborted at step {step}: {detail}")
        self.step = step
        self.detail = detail


class _Script:
    """Step counter + HTTP plumbing for the scripted run."""

    def __init__(self, client: httpx.Client, actor_id: str):
        self.client = client
        self.step = -1
        self.headers = {"X-Actor-Id": actor_id, "X-Actor-Name": "Jay"}

    def call(self, method: str, path: str, json_body: Optional[dict] = None) -> Any:
        self.step += 1
        try:
            response = self.client.request(
                method, path, json=json_body, headers=self.headers
            )
        except httpx.HTTPError as exc:
            raise ScenarioError(self.step, f"{type(exc).__name__}: {exc}") from exc
        if response.status_code >= 400:
            raise ScenarioError(
                self.step, f"{method} {path} -> {response.status_code} {response.text}"
            )
        return response.json()


def run_scripted_scenario(
    client: httpx.Client,
    seed: int = 0,
    board_id: str = "hunt-brightpath",
    actor_id: str = "jay",
) -> dict[str, Any]:
    """Drive Scenes 1-5 through the public API; returns the final census.

    Any rejection or transport failure aborts with the failing step index.
    """
    signals = generate_scenario(seed)
    sig_files, sig_partitions, sig_compress, sig_upload = signals
    s = _Script(client, actor_id)
    api = "/api/v1"

    s.call("GET", f"{api}/health")
    s.call("POST", f"{api}/boards", {"board_id": board_id})
    boards = f"{api}/boards/{board_id}"

    checklist = s.call(
        "POST", f"{boards}/checklists", {"template_id": "default-hunt"}
    )["result"]["checklist"]
    items = checklist["items"]

    def mark_done(index: int) -> None:
        s.call(
            "PUT",
            f"{boards}/checklists/{checklist['id']}/items/{items[index]['id']}",
            {"status": "done"},
        )

    def waypoint(name: str, kind: str, signal: AnomalySignal, notes: str = "") -> dict:
        view = signal.view_state_payload()
        body = {
            "name": name,
            "kind": kind,
            "notes": notes,
            "details": f"{SOURCE_TOOL} query: {view['query_representation']}",
            "event_period": view["time_window"],
            "view_state": view,
        }
        return s.call("POST", f"{boards}/waypoints", body)["result"]["waypoint"]

    def place(object_id: str, x: float, y: float, canvas: str = "my") -> None:
        s.call(
            "POST",
            f"{boards}/canvases/{canvas}/placements",
            {"object_id": object_id, "x": x, "y": y},
        )

    def connect(a: str, b: str, label: str, x: float, y: float) -> dict:
        conn = s.call(
            "POST",
            f"{boards}/connectors",
            {"endpoint_a": a, "endpoint_b": b, "label": label},
        )["result"]["connector"]
        place(conn["id"], x, y)
        return conn

    # Scene 1: first anomaly, first waypoints, first storyline.
    mark_done(0)
    ufa = waypoint("Unusual File Access", "event", sig_files)
    place(ufa["id"], 120.0, 80.0)
    note = s.call(
        "POST",
        f"{boards}/annotations",
        {"text": "Hypothesis: Bruce's activity may relate to data migration."},
    )["result"]["annotation"]
    place(note["id"], 120.0, 180.0)
    bruce = waypoint(
        "Bruce",
        "user",
        sig_files,
        notes="Permissions reviewed; data-migration hypothesis ruled out.",
    )
    place(bruce["id"], 360.0, 80.0)
    connect(ufa["id"], bruce["id"], "performed by", 240.0, 80.0)
    first_story = s.call(
        "POST",
        f"{boards}/storylines",
        {
            "title": "Weird Bruce Activity",
            "selected_ids": [ufa["id"], bruce["id"], note["id"]],
            "canvas": "my",
        },
    )["result"]["storyline"]

    # Scene 2: new anomaly, reload the storyline, branch into three leads.
    mark_done(1)
    usu = waypoint("Unusual Software Usage", "event", sig_partitions)
    s.call(
        "POST", f"{boards}/storylines/{first_story['id']}/load", {"canvas": "my"}
    )
    place(usu["id"], 120.0, 320.0)
    connect(usu["id"], ufa["id"], "same host chain", 120.0, 200.0)
    lead_titles_notes = [
        ("Technical Anomaly", "Could the partitioning be a misconfigured backup job?"),
        ("Behavioral Change", "Has Bruce's role or project changed recently?"),
        ("Security Breach", "Is an account takeover staging data for theft?"),
    ]
    leads = []
    for row, (title, lead_notes) in enumerate(lead_titles_notes):
        lead = s.call(
            "POST", f"{boards}/leads", {"title": title, "notes": lead_notes}
        )["result"]["lead"]
        place(lead["id"], 600.0, 80.0 + 120.0 * row)
        connect(lead["id"], usu["id"], "hypothesis for", 460.0, 100.0 + 120.0 * row)
        leads.append(lead)
    technical, behavioral, breach = leads
    mark_done(2)

    # Scene 3: compression discovered; first hypothesis dies.
    dc = waypoint("Data Compression", "event", sig_compress)
    place(dc["id"], 120.0, 440.0)
    connect(dc["id"], behavioral["id"], "supports?", 340.0, 330.0)
    connect(dc["id"], breach["id"], "supports", 340.0, 400.0)
    s.call("POST", f"{boards}/leads/{technical['id']}/close")

    # Scene 4: exfiltration confirmed; narrative renamed.
    de = waypoint("Data Exfiltration", "event", sig_upload)
    place(de["id"], 120.0, 560.0)
    s.call(
        "PATCH", f"{boards}/waypoints/{de['id']}", {"priority": "high"}
    )
    connect(de["id"], dc["id"], "staged then exfiltrated", 120.0, 500.0)
    s.call("POST", f"{boards}/leads/{behavioral['id']}/close")
    mark_done(3)

    canvas = s.call("GET", f"{boards}/canvases/my")
    all_on_canvas = [entry["object_id"] for entry in canvas["objects"]]
    full_story = s.call(
        "POST",
        f"{boards}/storylines",
        {
            "title": "Weird Bruce Activity",
            "selected_ids": all_on_canvas,
            "canvas": "my",
        },
    )["result"]["storyline"]
    s.call(
        "POST",
        f"{boards}/storylines/{full_story['id']}/rename",
        {"title": "Bruce Exfiltrating Data"},
    )
    s.call(
        "PUT",
        f"{boards}/checklists/{checklist['id']}/bookmark",
        sig_upload.view_state_payload(),
    )

    # Scene 5: share with the team, finish the checklist, hand over.
    s.call("POST", f"{boards}/storylines/{full_story['id']}/share")
    mark_done(4)
    mark_done(5)
    s.call(
        "POST",
        f"{boards}/checklists/{checklist['id']}/complete",
        {"override": False},
    )
    report = s.call(
        "GET",
        f"{boards}/reports/handover?storyline_id={full_story['id']}"
        f"&checklist_id={checklist['id']}",
    )["report"]

    snapshot = s.call("GET", f"{boards}/snapshot")
    return {
        "board_id": board_id,
        "seq": snapshot["seq"],
        "state_canonical": snapshot["state_canonical"],
        "state": snapshot["state"],
        "storyline_id": full_story["id"],
        "checklist_id": checklist["id"],
        "report": report,
        "steps": s.step + 1,
    }
