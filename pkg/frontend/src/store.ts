/**
 * Client-side mirror of a board: a snapshot plus a fold of received events.
 *
 * The one rule here (and the invariant the tests enforce): nothing mutates
 * this state except `applyEvent` with a server-sequenced BoardEvent. The
 * fold re-derives ids, z-orders, and timestamps exactly the way the server
 * does — ids from the `next_id` counter, timestamps copied verbatim from
 * the event's `server_time` — so folding events 1..n from an empty board
 * reproduces the server's snapshot at seq n structurally. `deepEqual`
 * against a fresh snapshot is the divergence detector.
 *
 * Timestamp caveat: the server normalizes inbound ISO strings to its fixed
 * format. Every writer in this system already submits that format, so the
 * fold treats op timestamps as pre-normalized and copies them through.
 */

import type {
  BoardEventRecord,
  BoardStateRecord,
  CanvasRef,
  ChecklistRecord,
  PeriodRecord,
  PlacementRecord,
  StorylineRecord,
  WaypointRecord,
} from "./protocol.js";
import { canvasKeyOf } from "./protocol.js";

function emptyState(boardId: string): BoardStateRecord {
  return {
    board_id: boardId,
    client_env: boardId,
    objects: { waypoints: {}, leads: {}, annotations: {}, connectors: {} },
    archived: [],
    placements: {},
    storylines: {},
    checklists: {},
    last_applied_seq: 0,
    next_id: 1,
    next_z: 1,
  };
}

export class ClientBoardState {
  private state: BoardStateRecord;
  private archivedSet = new Set<string>();

  constructor(boardId: string) {
    this.state = emptyState(boardId);
  }

  get seq(): number {
    return this.state.last_applied_seq;
  }

  /** Replace local state wholesale from a server snapshot. */
  loadSnapshot(snapshot: BoardStateRecord): void {
    this.state = JSON.parse(JSON.stringify(snapshot)) as BoardStateRecord;
    this.archivedSet = new Set(this.state.archived);
  }

  /** Read-only view for rendering; never mutate through this. */
  get record(): BoardStateRecord {
    this.state.archived = [...this.archivedSet].sort();
    // The server serialization omits empty canvases; keep parity.
    for (const key of Object.keys(this.state.placements)) {
      if (Object.keys(this.state.placements[key]).length === 0) {
        delete this.state.placements[key];
      }
    }
    return this.state;
  }

  isArchived(objectId: string): boolean {
    return this.archivedSet.has(objectId);
  }

  findKind(objectId: string): "waypoint" | "lead" | "annotation" | "connector" | null {
    const { waypoints, leads, annotations, connectors } = this.state.objects;
    if (objectId in waypoints) return "waypoint";
    if (objectId in leads) return "lead";
    if (objectId in annotations) return "annotation";
    if (objectId in connectors) return "connector";
    return null;
  }

  placementsOn(canvasKey: string): Record<string, PlacementRecord> {
    return this.state.placements[canvasKey] ?? {};
  }

  mostRecentStorylineOf(actorId: string): StorylineRecord | null {
    let best: StorylineRecord | null = null;
    for (const storyline of Object.values(this.state.storylines)) {
      if (storyline.created_by !== actorId) continue;
      if (
        best === null ||
        storyline.created_at > best.created_at ||
        (storyline.created_at === best.created_at && storyline.id > best.id)
      ) {
        best = storyline;
      }
    }
    return best;
  }

  // -- the fold ---------------------------------------------------------------

  applyEvent(event: BoardEventRecord): void {
    if (event.seq !== this.state.last_applied_seq + 1) {
      throw new Error(
        `event gap: got seq ${event.seq}, expected ${this.state.last_applied_seq + 1}`,
      );
    }
    this.dispatch(event);
    this.state.last_applied_seq = event.seq;
  }

  private allocId(): string {
    const id = `obj-${String(this.state.next_id).padStart(6, "0")}`;
    this.state.next_id += 1;
    return id;
  }

  private allocZ(): number {
    const z = this.state.next_z;
    this.state.next_z += 1;
    return z;
  }

  private canvasOf(canvas: CanvasRef): Record<string, PlacementRecord> {
    const key = canvasKeyOf(canvas);
    this.state.placements[key] ??= {};
    return this.state.placements[key];
  }

  private removePlacementsOf(objectId: string): void {
    for (const key of Object.keys(this.state.placements)) {
      delete this.state.placements[key][objectId];
      if (Object.keys(this.state.placements[key]).length === 0) {
        delete this.state.placements[key];
      }
    }
  }

  private dispatch(event: BoardEventRecord): void {
    const op = event.op;
    const time = event.server_time;
    const actor = event.actor.id;
    const objects = this.state.objects;

    switch (op.type) {
      case "create_waypoint": {
        const period: PeriodRecord =
          op.event_period ??
          op.view_state?.time_window ?? { start: time, end: time };
        const waypoint: WaypointRecord = {
          id: this.allocId(),
          name: op.name,
          kind: op.kind ?? "event",
          notes: op.notes ?? "",
          details: op.details ?? "",
          event_period: period,
          priority: op.priority && op.priority.length > 0 ? op.priority : "none",
          view_state: op.view_state ?? null,
          created_by: actor,
          created_at: time,
          updated_at: time,
        };
        objects.waypoints[waypoint.id] = waypoint;
        break;
      }
      case "update_waypoint": {
        const waypoint = objects.waypoints[op.id];
        Object.assign(waypoint, op.patch);
        waypoint.updated_at = time;
        break;
      }
      case "create_lead": {
        const id = this.allocId();
        objects.leads[id] = {
          id,
          title: op.title,
          notes: op.notes ?? "",
          status: "open",
          created_by: actor,
          created_at: time,
          closed_at: null,
        };
        break;
      }
      case "close_lead": {
        const lead = objects.leads[op.id];
        lead.status = "closed";
        lead.closed_at = time;
        break;
      }
      case "create_annotation": {
        const id = this.allocId();
        objects.annotations[id] = { id, text: op.text, created_by: actor, created_at: time };
        break;
      }
      case "create_connector": {
        const id = this.allocId();
        objects.connectors[id] = {
          id,
          endpoint_a: op.endpoint_a,
          endpoint_b: op.endpoint_b,
          label: op.label ?? null,
        };
        break;
      }
      case "archive_object": {
        const cascade = Object.values(objects.connectors)
          .filter(
            (conn) =>
              !this.archivedSet.has(conn.id) &&
              conn.id !== op.id &&
              (conn.endpoint_a === op.id || conn.endpoint_b === op.id),
          )
          .map((conn) => conn.id)
          .sort();
        for (const gone of [op.id, ...cascade]) {
          this.archivedSet.add(gone);
          this.removePlacementsOf(gone);
        }
        break;
      }
      case "place_object": {
        this.canvasOf(op.canvas)[op.object_id] = {
          x: op.x,
          y: op.y,
          z_order: this.allocZ(),
        };
        break;
      }
      case "move_object": {
        const placement = this.canvasOf(op.canvas)[op.object_id];
        placement.x = op.x;
        placement.y = op.y;
        break;
      }
      case "save_storyline": {
        const members: string[] = [];
        const seen = new Set<string>();
        for (const selected of op.selected_ids) {
          if (!seen.has(selected)) {
            seen.add(selected);
            members.push(selected);
          }
        }
        for (const memberId of [...members]) {
          const conn = objects.connectors[memberId];
          if (!conn) continue;
          for (const endpoint of [conn.endpoint_a, conn.endpoint_b]) {
            if (!seen.has(endpoint)) {
              seen.add(endpoint);
              members.push(endpoint);
            }
          }
        }
        const onCanvas = this.canvasOf(op.canvas);
        const memberPlacements: Record<string, [number, number]> = {};
        for (const memberId of members) {
          const placement = onCanvas[memberId];
          memberPlacements[memberId] = [placement.x, placement.y];
        }
        const id = this.allocId();
        this.state.storylines[id] = {
          id,
          title: op.title,
          member_ids: members,
          member_placements: memberPlacements,
          shared: false,
          created_by: actor,
          created_at: time,
          last_modified: time,
        };
        break;
      }
      case "load_storyline": {
        this.placeStorylineMembers(op.storyline_id, canvasKeyOf(op.canvas), true);
        break;
      }
      case "rename_storyline": {
        const storyline = this.state.storylines[op.storyline_id];
        storyline.title = op.title;
        storyline.last_modified = time;
        break;
      }
      case "share_storyline": {
        const storyline = this.state.storylines[op.storyline_id];
        if (storyline.shared) break; // sharing twice is a no-op
        storyline.shared = true;
        storyline.last_modified = time;
        this.placeStorylineMembers(op.storyline_id, "team", false);
        break;
      }
      case "instantiate_checklist": {
        const checklist: ChecklistRecord = {
          id: this.allocId(),
          client_env: this.state.client_env,
          session_owner: actor,
          items: [],
          resume_bookmark: null,
          status: "active",
          created_at: time,
          completed_at: null,
          completed_override: false,
        };
        for (const text of op.items) {
          checklist.items.push({
            id: this.allocId(),
            text,
            origin: "template",
            status: "pending",
            note: "",
          });
        }
        this.state.checklists[checklist.id] = checklist;
        break;
      }
      case "add_checklist_item": {
        this.state.checklists[op.checklist_id].items.push({
          id: this.allocId(),
          text: op.text,
          origin: "custom",
          status: "pending",
          note: "",
        });
        break;
      }
      case "set_item_status": {
        const checklist = this.state.checklists[op.checklist_id];
        const item = checklist.items.find((i) => i.id === op.item_id)!;
        item.status = op.status;
        if (op.note) {
          item.note = item.note ? `${item.note}\n${op.note}` : op.note;
        }
        break;
      }
      case "attach_resume_bookmark": {
        this.state.checklists[op.checklist_id].resume_bookmark = op.view_state;
        break;
      }
      case "complete_checklist": {
        const checklist = this.state.checklists[op.checklist_id];
        checklist.status = "completed";
        checklist.completed_at = time;
        checklist.completed_override = Boolean(op.override);
        break;
      }
      default: {
        const exhaustive: never = op;
        throw new Error(`unknown op ${(exhaustive as { type: string }).type}`);
      }
    }
  }

  private placeStorylineMembers(storylineId: string, canvasKey: string, replace: boolean): void {
    const storyline = this.state.storylines[storylineId];
    this.state.placements[canvasKey] ??= {};
    const onCanvas = this.state.placements[canvasKey];
    for (const memberId of storyline.member_ids) {
      if (this.archivedSet.has(memberId)) continue;
      const [x, y] = storyline.member_placements[memberId];
      const existing = onCanvas[memberId];
      if (existing === undefined) {
        onCanvas[memberId] = { x, y, z_order: this.allocZ() };
      } else if (replace) {
        existing.x = x;
        existing.y = y;
      }
    }
  }
}

/** Structural equality with numeric value comparison (1 == 1.0). */
export function deepEqual(a: unknown, b: unknown): boolean {
  if (a === b) return true;
  if (typeof a === "number" && typeof b === "number") return a === b;
  if (Array.isArray(a) && Array.isArray(b)) {
    return a.length === b.length && a.every((item, i) => deepEqual(item, b[i]));
  }
  if (a && b && typeof a === "object" && typeof b === "object") {
    const keysA = Object.keys(a as object).sort();
    const keysB = Object.keys(b as object).sort();
    if (!deepEqual(keysA, keysB)) return false;
    return keysA.every((key) =>
      deepEqual((a as Record<string, unknown>)[key], (b as Record<string, unknown>)[key]),
    );
  }
  return false;
}
