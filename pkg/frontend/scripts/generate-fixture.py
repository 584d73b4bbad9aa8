#!/usr/bin/env python3
"""Regenerate tests/fixtures/scenario.json from the backend package.

Runs the scripted scenario against an in-memory service with the logical
clock, then dumps the full event log plus the final canonical state. The
frontend store test folds the events and must reproduce the state exactly.

Usage (from frontend/): python3 scripts/generate-fixture.py
"""

import json
from pathlib import Path

from starlette.testclient import TestClient

from huntboard.scenario import run_scripted_scenario
from huntboard.server import ServiceConfig, create_app


def main() -> None:
    app = create_app(ServiceConfig(clock="logical"))
    with TestClient(app) as client:
        summary = run_scripted_scenario(client, seed=0)
    board = app.state.hub.get(summary["board_id"])
    fixture = {
        "board_id": summary["board_id"],
        "seq": summary["seq"],
        "events": [event.to_dict() for event in board.events],
        "state": json.loads(summary["state_canonical"]),
    }
    out = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "scenario.json"
    out.write_text(json.dumps(fixture, indent=1, sort_keys=True), encoding="utf-8")
    print(f"wrote {out} ({len(fixture['events'])} events)")


if __name__ == "__main__":
    main()
