"""Handover reports and the evaluation rubric.

A handover report packages one storyline (the communicable investigative
story), an optional checklist, and the storyline's annotations into a
structured document plus a Markdown rendering. Waypoints are ordered by the
start of their event period — investigation chronology, not creation order.
"""

from __future__ import annotations

from typing import Any, Optional

from .errors import reject
from .objects import LEAD_OPEN
from .state import BoardState
from .timeutil import format_utc, now_utc
from .wire import canonical_json

RUBRIC_SCALE = {"min": 1, "max": 5}

RUBRIC_ENTRIES: list[dict[str, str]] = [
    {
        "id": "DH1",
        "name": "Navigation & Exploration",
        "description": (
            "Supports users in traversing related entities, events, or data "
            "while maintaining orientation and the ability to retrace "
            "investigative paths."
        ),
    },
    {
        "id": "DH2",
        "name": "Clarity & Sense-Making",
        "description": (
            "Helps organize fragmented or ambiguous data into coherent "
            "investigative narratives that clarify evolving hypotheses."
        ),
    },
    {
        "id": "DH3",
        "name": "Decision Support",
        "description": (
            "Provides structure and cues to assist threat hunters in "
            "prioritizing, shifting focus, or determining when to conclude "
            "an investigation."
        ),
    },
    {
        "id": "DH4",
        "name": "Communication & Handover",
        "description": (
            "Facilitates the transfer of reasoning and evidence across "
            "individuals or teams, enabling continuity and collaborative "
            "sense-making."
        ),
    },
    {
        "id": "DH5",
        "name": "Memory & Mental Load",
        "description": (
            "Reduces reliance on short-term memory by externalizing "
            "information, tracking progress, and resuming suspended work."
        ),
    },
    {
        "id": "DH6",
        "name": "Overall Perception",
        "description": (
            "Reflects the holistic experience of usefulness, usability, and "
            "the prototype's perceived fit within existing workflows and "
            "tools."
        ),
    },
]


def emit_heuristic_rubric() -> dict[str, Any]:
    """The six-heuristic evaluation rubric with empty 1-5 rating slots.

    A pure function of nothing: emitting twice yields identical bytes.
    """
    return {
        "scale": dict(RUBRIC_SCALE),
        "entries": [
            {
                "id": entry["id"],
                "name": entry["name"],
                "description": entry["description"],
                "rating": None,
            }
            for entry in RUBRIC_ENTRIES
        ],
    }


def rubric_json() -> str:
    return canonical_json(emit_heuristic_rubric())


def _id_number(entity_id: str) -> str:
    # Zero-padded ids sort lexicographically in creation (seq) order.
    return entity_id


def generate_handover(
    state: BoardState,
    storyline_id: str,
    checklist_id: Optional[str] = None,
) -> dict[str, Any]:
    storyline = state.storylines.get(storyline_id)
    if storyline is None:
        raise reject("StorylineNotFound", f"no storyline {storyline_id!r}")

    checklist = None
    if checklist_id is not None:
        checklist = state.checklists.get(checklist_id)
        if checklist is None:
            raise reject(
                "ChecklistMismatch",
                f"checklist {checklist_id!r} does not belong to board "
                f"{state.board_id!r}",
            )

    members = list(storyline.member_ids)
    member_set = set(members)

    waypoints = [
        state.waypoints[oid] for oid in members if oid in state.waypoints
    ]
    # Investigation chronology: event period start, ties by creation order.
    waypoints.sort(key=lambda w: (w.event_period[0], _id_number(w.id)))

    leads = [state.leads[oid] for oid in members if oid in state.leads]
    open_leads = sorted(
        (l for l in leads if l.status == LEAD_OPEN), key=lambda l: l.id
    )
    closed_leads = sorted(
        (l for l in leads if l.status != LEAD_OPEN), key=lambda l: l.id
    )

    def _name_of(object_id: str) -> str:
        found = state.find_object(object_id)
        if found is None:
            return object_id
        kind, obj = found
        if kind == "waypoint":
            return obj.name
        if kind == "lead":
            return obj.title
        if kind == "annotation":
            return obj.text
        return object_id

    relations = [
        {
            "id": conn.id,
            "from_id": conn.endpoint_a,
            "from_name": _name_of(conn.endpoint_a),
            "to_id": conn.endpoint_b,
            "to_name": _name_of(conn.endpoint_b),
            "label": conn.label,
        }
        for conn in (
            state.connectors[oid] for oid in members if oid in state.connectors
        )
    ]

    notes = [
        state.annotations[oid].to_dict()
        for oid in members
        if oid in state.annotations
    ]

    checklist_section = None
    if checklist is not None:
        checklist_section = {
            "id": checklist.id,
            "status": checklist.status,
            "done": [i.to_dict() for i in checklist.items if i.status == "done"],
            "pending": [
                i.to_dict() for i in checklist.items if i.status == "pending"
            ],
            "completed_override": checklist.completed_override,
            "resume_bookmark": (
                checklist.resume_bookmark.to_dict()
                if checklist.resume_bookmark
                else None
            ),
        }

    return {
        "board_id": state.board_id,
        "seq": state.last_applied_seq,
        "generated_at": format_utc(now_utc()),
        "storyline": {
            "id": storyline.id,
            "title": storyline.title,
            "shared": storyline.shared,
            "waypoints": [
                dict(w.to_dict(), archived=w.id in state.archived)
                for w in waypoints
            ],
            "leads": [l.to_dict() for l in open_leads + closed_leads],
            "relations": relations,
            "member_count": len(member_set),
        },
        "checklist": checklist_section,
        "notes": notes,
    }


def render_markdown(report: dict[str, Any]) -> str:
    story = report["storyline"]
    lines: list[str] = []
    lines.append(f"# Handover: {story['title']}")
    lines.append("")
    lines.append(
        f"Board `{report['board_id']}` at seq {report['seq']}, "
        f"generated {report['generated_at']}."
    )
    lines.append("")

    lines.append("## Waypoints (investigation chronology)")
    lines.append("")
    if story["waypoints"]:
        for wp in story["waypoints"]:
            period = wp["event_period"]
            flags = []
            if wp["priority"] != "none":
                flags.append(f"priority {wp['priority']}")
            if wp.get("archived"):
                flags.append("archived")
            suffix = f" ({', '.join(flags)})" if flags else ""
            lines.append(
                f"- **{wp['name']}** [{wp['kind']}] "
                f"{period['start']} → {period['end']}{suffix}"
            )
            if wp["notes"]:
                lines.append(f"  - notes: {wp['notes']}")
    else:
        lines.append("_none_")
    lines.append("")

    lines.append("## Leads (open first)")
    lines.append("")
    if story["leads"]:
        for lead in story["leads"]:
            marker = "OPEN" if lead["status"] == "open" else "closed"
            lines.append(f"- [{marker}] **{lead['title']}**")
            if lead["notes"]:
                lines.append(f"  - {lead['notes']}")
    else:
        lines.append("_none_")
    lines.append("")

    if story["relations"]:
        lines.append("## Relations")
        lines.append("")
        for rel in story["relations"]:
            label = f" — {rel['label']}" if rel["label"] else ""
            lines.append(f"- {rel['from_name']} ↔ {rel['to_name']}{label}")
        lines.append("")

    checklist = report.get("checklist")
    if checklist is not None:
        lines.append("## Checklist")
        lines.append("")
        lines.append(
            f"Status: {checklist['status']}"
            + (" (completed with override)" if checklist["completed_override"] else "")
        )
        for item in checklist["done"]:
            lines.append(f"- [x] {item['text']}")
        for item in checklist["pending"]:
            lines.append(f"- [ ] {item['text']}")
        bookmark = checklist.get("resume_bookmark")
        if bookmark:
            lines.append(
                f"- Resume from: `{bookmark['query_representation']}` "
                f"(captured {bookmark['captured_at']})"
            )
        lines.append("")

    lines.append("## Notes")
    lines.append("")
    if report["notes"]:
        for note in report["notes"]:
            lines.append(f"- {note['text']} — {note['created_by']}")
    else:
        lines.append("_none_")
    lines.append("")
    return "\n".join(lines)


def report_filenames(board_id: str, seq: int) -> tuple[str, str]:
    base = f"handover-{board_id}-{seq}"
    return f"{base}.md", f"{base}.json"
