/**
 * Browser bootstrap for the demo page (index.html).
 *
 *   ?endpoint=http://127.0.0.1:8787&board=hunt-brightpath&actor=jay
 *
 * Wires real fetch + WebSocket into the BoardClient, renders the active
 * canvas, and exposes the canvas switch, the waypoint list with
 * drag-to-canvas, and connection status.
 */

import { BoardApi, fetchTransport } from "./api.js";
import { BoardClient } from "./client.js";
import { renderScene } from "./dom.js";
import type { WaypointRecord } from "./protocol.js";
import type { SocketLike } from "./stream.js";

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

export async function bootstrap(): Promise<void> {
  const endpoint = param("endpoint", window.location.origin);
  const boardId = param("board", "hunt-brightpath");
  const actorId = param("actor", "jay");

  const api = new BoardApi(fetchTransport(fetch.bind(window)), endpoint, actorId);
  const client = new BoardClient(api, boardId, actorId, {
    // DOM WebSocket satisfies SocketLike structurally; the cast only papers
    // over MessageEvent's extra fields.
    socketFactory: (url) => new WebSocket(url) as unknown as SocketLike,
    wsBaseUrl: endpoint.replace(/^http/, "ws"),
  });

  const canvasEl = document.getElementById("canvas")!;
  const listEl = document.getElementById("waypoint-list")!;
  const bannerEl = document.getElementById("banner")!;
  const switchEl = document.getElementById("canvas-switch") as HTMLButtonElement;

  function waypointRow(wp: WaypointRecord): HTMLElement {
    const row = document.createElement("div");
    row.className = "waypoint-row";
    row.textContent = `${wp.name} [${wp.kind}]`;
    row.draggable = true;
    row.addEventListener("dragstart", () => client.gestures.beginDragFromList(wp.id));
    row.addEventListener("dragend", () => client.gestures.cancelDrag());
    return row;
  }

  function render(): void {
    renderScene(canvasEl as HTMLElement, client.scene(), client.viewport.current);
    bannerEl.textContent =
      client.connectionStatus === "connected" ? "" : "reconnecting…";
    bannerEl.style.display = client.connectionStatus === "connected" ? "none" : "block";

    listEl.textContent = "";
    const waypoints = Object.values(client.store.record.objects.waypoints).filter(
      (wp) => !client.store.isArchived(wp.id),
    );
    for (const wp of client.panels.applyTo(waypoints)) {
      listEl.appendChild(waypointRow(wp));
    }
    switchEl.textContent =
      client.viewport.active === "my" ? "Switch to Team Canvas" : "Switch to My Canvas";
  }

  canvasEl.addEventListener("dragover", (event) => event.preventDefault());
  canvasEl.addEventListener("drop", (event) => {
    event.preventDefault();
    const rect = (canvasEl as HTMLElement).getBoundingClientRect();
    const point = client.viewport.toCanvas(
      (event as DragEvent).clientX - rect.left,
      (event as DragEvent).clientY - rect.top,
    );
    void client.gestures.completeDrop(point.x, point.y);
  });
  switchEl.addEventListener("click", () => {
    client.viewport.switchTo(client.viewport.active === "my" ? "team" : "my");
    render();
  });

  client.onChange = render;
  await client.login();
  render();
}

void bootstrap();
