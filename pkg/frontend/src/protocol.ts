/**
 * Wire types for the board service (snake_case mirror of the server's
 * /api/v1 JSON and the event-stream frames).
 *
 * Everything the client holds locally is derived from these records: a
 * snapshot of `BoardStateRecord` plus a gapless sequence of
 * `BoardEventRecord`s folded on top.
 */

export interface PeriodRecord {
  start: string;
  end: string;
}

export interface ViewStateRecord {
  source_tool_id: string;
  query_representation: string;
  captured_at: string;
  time_window: PeriodRecord | null;
}

export type WaypointKind = "event" | "event-group" | "user" | "timeframe";
export type Priority = "none" | "low" | "medium" | "high";

export interface WaypointRecord {
  id: string;
  name: string;
  kind: WaypointKind;
  notes: string;
  details: string;
  event_period: PeriodRecord;
  priority: Priority;
  view_state: ViewStateRecord | null;
  created_by: string;
  created_at: string;
  updated_at: string;
}

export interface LeadRecord {
  id: string;
  title: string;
  notes: string;
  status: "open" | "closed";
  created_by: string;
  created_at: string;
  closed_at: string | null;
}

export interface AnnotationRecord {
  id: string;
  text: string;
  created_by: string;
  created_at: string;
}

export interface ConnectorRecord {
  id: string;
  endpoint_a: string;
  endpoint_b: string;
  label: string | null;
}

export interface PlacementRecord {
  x: number;
  y: number;
  z_order: number;
}

export interface StorylineRecord {
  id: string;
  title: string;
  member_ids: string[];
  member_placements: Record<string, [number, number]>;
  shared: boolean;
  created_by: string;
  created_at: string;
  last_modified: string;
}

export interface ChecklistItemRecord {
  id: string;
  text: string;
  origin: "template" | "custom";
  status: "pending" | "done";
  note: string;
}

export interface ChecklistRecord {
  id: string;
  client_env: string;
  session_owner: string;
  items: ChecklistItemRecord[];
  resume_bookmark: ViewStateRecord | null;
  status: "active" | "completed";
  created_at: string | null;
  completed_at: string | null;
  completed_override: boolean;
}

export interface BoardStateRecord {
  board_id: string;
  client_env: string;
  objects: {
    waypoints: Record<string, WaypointRecord>;
    leads: Record<string, LeadRecord>;
    annotations: Record<string, AnnotationRecord>;
    connectors: Record<string, ConnectorRecord>;
  };
  archived: string[];
  placements: Record<string, Record<string, PlacementRecord>>;
  storylines: Record<string, StorylineRecord>;
  checklists: Record<string, ChecklistRecord>;
  last_applied_seq: number;
  next_id: number;
  next_z: number;
}

export interface ActorRecord {
  id: string;
  name: string;
  role: string;
}

/** Canvas address in an op payload. */
export interface CanvasRef {
  scope: "personal" | "team";
  owner: string | null;
}

export interface BoardEventRecord {
  schema: number;
  seq: number;
  actor: ActorRecord;
  server_time: string;
  op: OpRecord;
}

/** Tagged union of every mutating operation's payload. */
export type OpRecord =
  | {
      type: "create_waypoint";
      name: string;
      kind: WaypointKind;
      notes: string;
      details: string;
      event_period: PeriodRecord | null;
      priority: Priority;
      view_state: ViewStateRecord | null;
    }
  | {
      type: "update_waypoint";
      id: string;
      patch: Partial<
        Pick<
          WaypointRecord,
          | "name"
          | "kind"
          | "notes"
          | "details"
          | "event_period"
          | "priority"
          | "view_state"
        >
      >;
    }
  | { type: "create_lead"; title: string; notes: string }
  | { type: "close_lead"; id: string }
  | { type: "create_annotation"; text: string }
  | {
      type: "create_connector";
      endpoint_a: string;
      endpoint_b: string;
      label: string | null;
    }
  | { type: "archive_object"; id: string }
  | { type: "place_object"; canvas: CanvasRef; object_id: string; x: number; y: number }
  | { type: "move_object"; canvas: CanvasRef; object_id: string; x: number; y: number }
  | { type: "save_storyline"; title: string; selected_ids: string[]; canvas: CanvasRef }
  | { type: "load_storyline"; storyline_id: string; canvas: CanvasRef }
  | { type: "rename_storyline"; storyline_id: string; title: string }
  | { type: "share_storyline"; storyline_id: string }
  | {
      type: "instantiate_checklist";
      template_id: string;
      template_name: string;
      items: string[];
    }
  | { type: "add_checklist_item"; checklist_id: string; text: string }
  | {
      type: "set_item_status";
      checklist_id: string;
      item_id: string;
      status: "pending" | "done";
      note: string | null;
    }
  | {
      type: "attach_resume_bookmark";
      checklist_id: string;
      view_state: ViewStateRecord;
    }
  | { type: "complete_checklist"; checklist_id: string; override: boolean };

export const TEAM_CANVAS_KEY = "team";

export function personalCanvasKey(actorId: string): string {
  return `personal:${actorId}`;
}

export function canvasKeyOf(canvas: CanvasRef): string {
  if (canvas.scope === "team") return TEAM_CANVAS_KEY;
  if (!canvas.owner) throw new Error("personal canvas requires an owner");
  return personalCanvasKey(canvas.owner);
}

export function decodeEventFrame(raw: string): BoardEventRecord {
  const record = JSON.parse(raw) as BoardEventRecord;
  if (record.schema !== 1) {
    throw new Error(`unsupported event schema ${record.schema}`);
  }
  return record;
}
