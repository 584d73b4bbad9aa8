/**
 * Scene construction: board state + canvas -> a renderer-agnostic scene
 * graph. Waypoints are rounded nodes with a kind icon at the center
 * (headlight for events, person for users), node color tracks priority,
 * and closed leads are visually distinct from open ones.
 */

import type { BoardStateRecord, Priority } from "./protocol.js";

export type NodeIcon = "headlight" | "cluster" | "person" | "clock" | "lead" | "note";

export interface SceneNode {
  id: string;
  kind: "waypoint" | "lead" | "annotation";
  label: string;
  icon: NodeIcon;
  color: string;
  x: number;
  y: number;
  zOrder: number;
  closed: boolean;
  shape: "rounded";
}

export interface SceneEdge {
  id: string;
  from: string;
  to: string;
  label: string | null;
}

export interface Scene {
  canvas: string;
  nodes: SceneNode[];
  edges: SceneEdge[];
}

const KIND_ICONS: Record<string, NodeIcon> = {
  event: "headlight",
  "event-group": "cluster",
  user: "person",
  timeframe: "clock",
};

export const PRIORITY_COLORS: Record<Priority, string> = {
  none: "#e8eef7",
  low: "#cfe8cf",
  medium: "#f5d98f",
  high: "#f08f8f",
};

const LEAD_OPEN_COLOR = "#d6d2f0";
const LEAD_CLOSED_COLOR = "#c9c9c9";
const NOTE_COLOR = "#fdf6c9";

/**
 * Build the scene for one canvas. Archived objects never render; a
 * connector renders as an edge when both endpoints are placed here.
 */
export function buildScene(state: BoardStateRecord, canvasKey: string): Scene {
  const placements = state.placements[canvasKey] ?? {};
  const archived = new Set(state.archived);
  const nodes: SceneNode[] = [];
  const edges: SceneEdge[] = [];

  for (const [objectId, placement] of Object.entries(placements)) {
    if (archived.has(objectId)) continue;

    const waypoint = state.objects.waypoints[objectId];
    if (waypoint) {
      nodes.push({
        id: objectId,
        kind: "waypoint",
        label: waypoint.name,
        icon: KIND_ICONS[waypoint.kind] ?? "headlight",
        color: PRIORITY_COLORS[waypoint.priority],
        x: placement.x,
        y: placement.y,
        zOrder: placement.z_order,
        closed: false,
        shape: "rounded",
      });
      continue;
    }
    const lead = state.objects.leads[objectId];
    if (lead) {
      nodes.push({
        id: objectId,
        kind: "lead",
        label: lead.title,
        icon: "lead",
        color: lead.status === "closed" ? LEAD_CLOSED_COLOR : LEAD_OPEN_COLOR,
        x: placement.x,
        y: placement.y,
        zOrder: placement.z_order,
        closed: lead.status === "closed",
        shape: "rounded",
      });
      continue;
    }
    const annotation = state.objects.annotations[objectId];
    if (annotation) {
      nodes.push({
        id: objectId,
        kind: "annotation",
        label: annotation.text,
        icon: "note",
        color: NOTE_COLOR,
        x: placement.x,
        y: placement.y,
        zOrder: placement.z_order,
        closed: false,
        shape: "rounded",
      });
    }
  }

  const placedHere = new Set(nodes.map((n) => n.id));
  for (const connector of Object.values(state.objects.connectors)) {
    if (archived.has(connector.id)) continue;
    if (placedHere.has(connector.endpoint_a) && placedHere.has(connector.endpoint_b)) {
      edges.push({
        id: connector.id,
        from: connector.endpoint_a,
        to: connector.endpoint_b,
        label: connector.label,
      });
    }
  }

  nodes.sort((a, b) => a.zOrder - b.zOrder);
  edges.sort((a, b) => (a.id < b.id ? -1 : 1));
  return { canvas: canvasKey, nodes, edges };
}
