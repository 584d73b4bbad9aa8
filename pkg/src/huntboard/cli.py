"""Command-line entry points.

    huntboard serve --port 8787 --data-dir ./data [--template FILE]
                    [--fsync every-event|interval] [--clock wall|logical]
    huntboard scenario run --endpoint http://127.0.0.1:8787 [--seed N]
    huntboard scenario signals --seed N [--out FILE]
    huntboard export handover --board B --storyline S --data-dir D [--out-dir .]
    huntboard emit rubric [--out-dir .]
    huntboard snapshot --board B --data-dir D

Environment variables (HUNTBOARD_PORT, HUNTBOARD_DATA_DIR,
HUNTBOARD_TEMPLATE, HUNTBOARD_FSYNC) provide defaults; explicit flags win.
"""

from __future__ import annotations

import errno
import json
import logging
import sys
from pathlib import Path

import click
import httpx

from . import reporting
from .errors import CorruptLog
from .scenario import ScenarioError, run_scripted_scenario, signals_json
from .server import ServiceConfig, create_app
from .storage import FSYNC_POLICIES, EventLogStore
from .sync import replay


@click.group()
@click.version_option(package_name="huntboard")
def main() -> None:
    """Collaborative investigation board for threat hunters."""


@main.command()
@click.option("--host", default="127.0.0.1", envvar="HUNTBOARD_HOST", show_default=True)
@click.option("--port", default=8787, envvar="HUNTBOARD_PORT", show_default=True, type=int)
@click.option(
    "--data-dir",
    required=True,
    envvar="HUNTBOARD_DATA_DIR",
    type=click.Path(file_okay=False, path_type=Path),
)
@click.option(
    "--template",
    "template_path",
    envvar="HUNTBOARD_TEMPLATE",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Checklist template file; defaults to the packaged templates.",
)
@click.option(
    "--fsync",
    "fsync_policy",
    default="every-event",
    envvar="HUNTBOARD_FSYNC",
    type=click.Choice(FSYNC_POLICIES),
    show_default=True,
)
@click.option("--fsync-interval", default=1.0, show_default=True, type=float)
@click.option(
    "--clock",
    default="wall",
    type=click.Choice(["wall", "logical"]),
    show_default=True,
    help="logical = deterministic event timestamps, for reproducible demos.",
)
@click.option("--log-level", default="info", show_default=True)
def serve(
    host: str,
    port: int,
    data_dir: Path,
    template_path: Path | None,
    fsync_policy: str,
    fsync_interval: float,
    clock: str,
    log_level: str,
) -> None:
    """Run the board service over a data directory of event logs."""
    import uvicorn

    logging.basicConfig(level=log_level.upper())
    try:
        data_dir.mkdir(parents=True, exist_ok=True)
        probe = data_dir / ".write-probe"
        probe.write_text("ok")
        probe.unlink()
    except OSError as exc:
        click.echo(f"DataDirUnwritable: {data_dir}: {exc}", err=True)
        raise SystemExit(2)

    config = ServiceConfig(
        host=host,
        port=port,
        data_dir=data_dir,
        template_path=template_path,
        fsync_policy=fsync_policy,
        fsync_interval=fsync_interval,
        clock=clock,
        log_level=log_level,
    )
    try:
        app = create_app(config)
    except CorruptLog as exc:
        click.echo(
            f"CorruptLog: board={exc.board_id} last_valid_seq={exc.last_valid_seq}",
            err=True,
        )
        raise SystemExit(2)

    try:
        uvicorn.run(app, host=host, port=port, log_level=log_level)
    except OSError as exc:
        if exc.errno == errno.EADDRINUSE:
            click.echo(f"PortInUse: {host}:{port}", err=True)
            raise SystemExit(3)
        raise


@main.group()
def scenario() -> None:
    """Synthetic anomaly feed and the scripted end-to-end run."""


@scenario.command("run")
@click.option("--endpoint", required=True, help="Base URL of a running service.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--board", "board_id", default="hunt-brightpath", show_default=True)
@click.option("--actor", "actor_id", default="jay", show_default=True)
@click.option(
    "--out-dir",
    type=click.Path(file_okay=False, path_type=Path),
    help="Also write the handover report files here.",
)
def scenario_run(
    endpoint: str, seed: int, board_id: str, actor_id: str, out_dir: Path | None
) -> None:
    """Drive the full five-scene investigation against a fresh server."""
    try:
        with httpx.Client(base_url=endpoint, timeout=10.0) as client:
            summary = run_scripted_scenario(
                client, seed=seed, board_id=board_id, actor_id=actor_id
            )
    except ScenarioError as exc:
        click.echo(f"scenario failed at step {exc.step}: {exc.detail}", err=True)
        raise SystemExit(1)

    state = summary["state"]
    waypoints = state["objects"]["waypoints"]
    leads = state["objects"]["leads"].values()
    click.echo(f"board {summary['board_id']} at seq {summary['seq']}")
    click.echo(f"waypoints: {[w['name'] for w in waypoints.values()]}")
    click.echo(
        "leads: "
        + ", ".join(f"{l['title']} ({l['status']})" for l in leads)
    )
    shared = [s for s in state["storylines"].values() if s["shared"]]
    click.echo(f"shared storyline: {shared[0]['title'] if shared else None}")
    click.echo(f"steps: {summary['steps']}")

    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        report = summary["report"]
        md_name, json_name = reporting.report_filenames(
            summary["board_id"], report["seq"]
        )
        (out_dir / md_name).write_text(
            reporting.render_markdown(report), encoding="utf-8"
        )
        (out_dir / json_name).write_text(
            json.dumps(report, indent=2, sort_keys=True), encoding="utf-8"
        )
        click.echo(f"wrote {out_dir / md_name} and {out_dir / json_name}")


@scenario.command("signals")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path))
def scenario_signals(seed: int, out: Path | None) -> None:
    """Emit the anomaly signal list as JSON (fixture export)."""
    text = signals_json(seed)
    if out is None:
        click.echo(text)
    else:
        out.write_text(text + "\n", encoding="utf-8")
        click.echo(f"wrote {out}")


def _replayed_state(board_id: str, data_dir: Path):
    store = EventLogStore(data_dir)
    if not store.board_exists(board_id):
        click.echo(f"BoardNotFound: {board_id}", err=True)
        raise SystemExit(1)
    try:
        events = store.load_events(board_id)
    except CorruptLog as exc:
        click.echo(
            f"CorruptLog: board={exc.board_id} last_valid_seq={exc.last_valid_seq}",
            err=True,
        )
        raise SystemExit(2)
    return replay(board_id, events)


@main.group()
def export() -> None:
    """Offline exports from a data directory."""


@export.command("handover")
@click.option("--board", "board_id", required=True)
@click.option("--storyline", "storyline_id", required=True)
@click.option("--checklist", "checklist_id", default=None)
@click.option(
    "--data-dir",
    required=True,
    envvar="HUNTBOARD_DATA_DIR",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
)
@click.option(
    "--out-dir",
    default=Path("."),
    show_default=True,
    type=click.Path(file_okay=False, path_type=Path),
)
def export_handover(
    board_id: str,
    storyline_id: str,
    checklist_id: str | None,
    data_dir: Path,
    out_dir: Path,
) -> None:
    """Render handover-<board>-<seq>.md and .json for one storyline."""
    state = _replayed_state(board_id, data_dir)
    report = reporting.generate_handover(state, storyline_id, checklist_id)
    out_dir.mkdir(parents=True, exist_ok=True)
    md_name, json_name = reporting.report_filenames(board_id, report["seq"])
    (out_dir / md_name).write_text(
        reporting.render_markdown(report), encoding="utf-8"
    )
    (out_dir / json_name).write_text(
        json.dumps(report, indent=2, sort_keys=True), encoding="utf-8"
    )
    click.echo(f"wrote {out_dir / md_name}")
    click.echo(f"wrote {out_dir / json_name}")


@main.group()
def emit() -> None:
    """Emit static machine-readable documents."""


@emit.command("rubric")
@click.option(
    "--out-dir",
    type=click.Path(file_okay=False, path_type=Path),
    help="Write dh-rubric.json here instead of stdout.",
)
def emit_rubric(out_dir: Path | None) -> None:
    """The six-heuristic evaluation rubric with empty rating slots."""
    text = reporting.rubric_json()
    if out_dir is None:
        click.echo(text)
    else:
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "dh-rubric.json"
        path.write_text(text + "\n", encoding="utf-8")
        click.echo(f"wrote {path}")


@main.command()
@click.option("--board", "board_id", required=True)
@click.option(
    "--data-dir",
    required=True,
    envvar="HUNTBOARD_DATA_DIR",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
)
def snapshot(board_id: str, data_dir: Path) -> None:
    """Replay a board's log and print seq plus the canonical state."""
    state = _replayed_state(board_id, data_dir)
    click.echo(str(state.last_applied_seq))
    click.echo(state.canonical())


if __name__ == "__main__":  # pragma: no cover
    main()
