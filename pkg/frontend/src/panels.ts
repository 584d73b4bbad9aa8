/**
 * Panel state: the floating Waypoint List and Storyline panels on the left,
 * the Checklist panel, and the single-object detail panel on the right.
 */

import type { Priority, WaypointKind, WaypointRecord } from "./protocol.js";

export interface WaypointListFilter {
  kinds: WaypointKind[] | null;
  priorityAtLeast: Priority | null;
  text: string | null;
}

export interface WaypointListSort {
  field: "created_at" | "name" | "priority" | "event_period_start";
  direction: "asc" | "desc";
}

const PRIORITY_RANK: Record<Priority, number> = { none: 0, low: 1, medium: 2, high: 3 };

export class PanelState {
  waypointListVisible = true;
  storylinePanelVisible = true;
  checklistPanelVisible = false;
  filter: WaypointListFilter = { kinds: null, priorityAtLeast: null, text: null };
  sort: WaypointListSort = { field: "created_at", direction: "asc" };

  /** The detail panel shows at most one object. */
  private detailObjectId: string | null = null;

  get detailObject(): string | null {
    return this.detailObjectId;
  }

  openDetail(objectId: string): void {
    this.detailObjectId = objectId; // replaces any previous selection
  }

  closeDetail(): void {
    this.detailObjectId = null;
  }

  /** Server-side query string for the current filter + sort. */
  waypointQuery(): string {
    const params = new URLSearchParams();
    for (const kind of this.filter.kinds ?? []) params.append("kind", kind);
    if (this.filter.priorityAtLeast) params.set("priority_at_least", this.filter.priorityAtLeast);
    if (this.filter.text) params.set("q", this.filter.text);
    params.set("sort", this.sort.field);
    params.set("direction", this.sort.direction);
    return params.toString();
  }

  /** Client-side mirror of the list order, for offline rendering. */
  applyTo(waypoints: WaypointRecord[]): WaypointRecord[] {
    const { kinds, priorityAtLeast, text } = this.filter;
    const needle = text?.toLowerCase() ?? null;
    const matched = waypoints.filter((wp) => {
      if (kinds && !kinds.includes(wp.kind)) return false;
      if (priorityAtLeast && PRIORITY_RANK[wp.priority] < PRIORITY_RANK[priorityAtLeast]) {
        return false;
      }
      if (needle && !`${wp.name}\n${wp.notes}`.toLowerCase().includes(needle)) return false;
      return true;
    });
    const key = (wp: WaypointRecord): string | number => {
      switch (this.sort.field) {
        case "created_at":
          return wp.created_at;
        case "name":
          return wp.name;
        case "priority":
          return PRIORITY_RANK[wp.priority];
        case "event_period_start":
          return wp.event_period.start;
      }
    };
    const direction = this.sort.direction === "desc" ? -1 : 1;
    return [...matched].sort((a, b) => {
      const ka = key(a);
      const kb = key(b);
      if (ka < kb) return -direction;
      if (ka > kb) return direction;
      return a.id < b.id ? -1 : a.id > b.id ? 1 : 0; // EntityId ascending
    });
  }
}
