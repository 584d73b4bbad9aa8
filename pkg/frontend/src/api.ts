/**
 * REST client for /api/v1. One method per route; every mutating call counts
 * as exactly one submission (observable through `onSubmission`, which the
 * gesture tests use as their recorder hook).
 *
 * Transport is injectable: the browser passes `fetch`, tests pass a fake.
 */

import type {
  BoardEventRecord,
  BoardStateRecord,
  CanvasRef,
  ChecklistRecord,
  PeriodRecord,
  PlacementRecord,
  StorylineRecord,
  ViewStateRecord,
  WaypointRecord,
} from "./protocol.js";

export interface HttpResponse {
  status: number;
  body: unknown;
}

/** Minimal fetch-shaped transport: method, url, optional JSON body. */
export type HttpTransport = (
  method: string,
  url: string,
  body: unknown | undefined,
  headers: Record<string, string>,
) => Promise<HttpResponse>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface SubmissionOutcome<T> {
  seq: number;
  result: T;
}

export interface SnapshotResponse {
  seq: number;
  state: BoardStateRecord;
  state_canonical: string;
}

export interface CanvasEntry {
  object_id: string;
  kind: string;
  archived: boolean;
  placement: PlacementRecord;
  object: Record<string, unknown> | null;
}

export function fetchTransport(fetchFn: typeof fetch): HttpTransport {
  return async (method, url, body, headers) => {
    const response = await fetchFn(url, {
      method,
      headers: { "Content-Type": "application/json", ...headers },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    return { status: response.status, body: await response.json() };
  };
}

export class BoardApi {
  /** Called once per accepted or rejected mutating request. */
  onSubmission?: (op: string) => void;

  constructor(
    private readonly transport: HttpTransport,
    private readonly baseUrl: string,
    private readonly actorId: string,
    private readonly actorName?: string,
  ) {}

  private headers(): Record<string, string> {
    const headers: Record<string, string> = { "X-Actor-Id": this.actorId };
    if (this.actorName) headers["X-Actor-Name"] = this.actorName;
    return headers;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const { status, body: payload } = await this.transport(
      method,
      `${this.baseUrl}/api/v1${path}`,
      body,
      this.headers(),
    );
    if (status >= 400) {
      const error = (payload as { error?: { code?: string; message?: string } }).error;
      throw new ApiError(status, error?.code ?? "Unknown", error?.message ?? "request failed");
    }
    return payload as T;
  }

  private async submit<T>(method: string, path: string, body?: unknown): Promise<T> {
    this.onSubmission?.(path);
    return this.request<T>(method, path, body);
  }

  // -- reads ----------------------------------------------------------------

  snapshot(board: string): Promise<SnapshotResponse> {
    return this.request("GET", `/boards/${board}/snapshot`);
  }

  events(board: string, fromSeq: number): Promise<{ seq: number; events: BoardEventRecord[] }> {
    return this.request("GET", `/boards/${board}/events?from_seq=${fromSeq}`);
  }

  canvas(board: string, canvas: "my" | "team"): Promise<{ seq: number; canvas: string; objects: CanvasEntry[] }> {
    return this.request("GET", `/boards/${board}/canvases/${canvas}`);
  }

  mostRecentStoryline(board: string): Promise<{ seq: number; storyline: StorylineRecord | null }> {
    return this.request("GET", `/boards/${board}/storylines/most-recent`);
  }

  waypointView(board: string, waypointId: string): Promise<{ seq: number; view_state: ViewStateRecord }> {
    return this.request("GET", `/boards/${board}/waypoints/${waypointId}/view`);
  }

  listWaypoints(board: string, query: string): Promise<{ seq: number; waypoints: WaypointRecord[] }> {
    const suffix = query ? `?${query}` : "";
    return this.request("GET", `/boards/${board}/waypoints${suffix}`);
  }

  checklists(board: string): Promise<{ seq: number; checklists: ChecklistRecord[] }> {
    return this.request("GET", `/boards/${board}/checklists`);
  }

  // -- submissions ------------------------------------------------------------

  createBoard(board: string): Promise<{ board_id: string; seq: number }> {
    return this.submit("POST", "/boards", { board_id: board });
  }

  createWaypoint(
    board: string,
    draft: {
      name: string;
      kind?: string;
      notes?: string;
      details?: string;
      event_period?: PeriodRecord | null;
      priority?: string;
      view_state?: ViewStateRecord | null;
    },
  ): Promise<SubmissionOutcome<{ waypoint: WaypointRecord }>> {
    return this.submit("POST", `/boards/${board}/waypoints`, draft);
  }

  updateWaypoint(
    board: string,
    waypointId: string,
    patch: Record<string, unknown>,
  ): Promise<SubmissionOutcome<{ waypoint: WaypointRecord }>> {
    return this.submit("PATCH", `/boards/${board}/waypoints/${waypointId}`, patch);
  }

  createLead(board: string, title: string, notes = ""): Promise<SubmissionOutcome<{ lead: unknown }>> {
    return this.submit("POST", `/boards/${board}/leads`, { title, notes });
  }

  closeLead(board: string, leadId: string): Promise<SubmissionOutcome<{ lead: unknown }>> {
    return this.submit("POST", `/boards/${board}/leads/${leadId}/close`);
  }

  createAnnotation(board: string, text: string): Promise<SubmissionOutcome<{ annotation: unknown }>> {
    return this.submit("POST", `/boards/${board}/annotations`, { text });
  }

  createConnector(
    board: string,
    endpointA: string,
    endpointB: string,
    label: string | null = null,
  ): Promise<SubmissionOutcome<{ connector: unknown }>> {
    return this.submit("POST", `/boards/${board}/connectors`, {
      endpoint_a: endpointA,
      endpoint_b: endpointB,
      label,
    });
  }

  archiveObject(board: string, objectId: string): Promise<SubmissionOutcome<{ archived: string[] }>> {
    return this.submit("POST", `/boards/${board}/objects/${objectId}/archive`);
  }

  placeObject(
    board: string,
    canvas: "my" | "team",
    objectId: string,
    x: number,
    y: number,
  ): Promise<SubmissionOutcome<{ placement: PlacementRecord }>> {
    return this.submit("POST", `/boards/${board}/canvases/${canvas}/placements`, {
      object_id: objectId,
      x,
      y,
    });
  }

  moveObject(
    board: string,
    canvas: "my" | "team",
    objectId: string,
    x: number,
    y: number,
  ): Promise<SubmissionOutcome<{ placement: PlacementRecord }>> {
    return this.submit("PUT", `/boards/${board}/canvases/${canvas}/placements/${objectId}`, { x, y });
  }

  saveStoryline(
    board: string,
    title: string,
    selectedIds: string[],
    canvas: "my" | "team" = "my",
  ): Promise<SubmissionOutcome<{ storyline: StorylineRecord }>> {
    return this.submit("POST", `/boards/${board}/storylines`, {
      title,
      selected_ids: selectedIds,
      canvas,
    });
  }

  loadStoryline(
    board: string,
    storylineId: string,
    canvas: "my" | "team" = "my",
  ): Promise<SubmissionOutcome<{ placements: unknown[] }>> {
    return this.submit("POST", `/boards/${board}/storylines/${storylineId}/load`, { canvas });
  }

  renameStoryline(
    board: string,
    storylineId: string,
    title: string,
  ): Promise<SubmissionOutcome<{ storyline: StorylineRecord }>> {
    return this.submit("POST", `/boards/${board}/storylines/${storylineId}/rename`, { title });
  }

  shareStoryline(board: string, storylineId: string): Promise<SubmissionOutcome<{ storyline: StorylineRecord }>> {
    return this.submit("POST", `/boards/${board}/storylines/${storylineId}/share`);
  }

  instantiateChecklist(board: string, templateId = "default-hunt"): Promise<SubmissionOutcome<{ checklist: ChecklistRecord }>> {
    return this.submit("POST", `/boards/${board}/checklists`, { template_id: templateId });
  }

  addChecklistItem(board: string, checklistId: string, text: string): Promise<SubmissionOutcome<{ item: unknown }>> {
    return this.submit("POST", `/boards/${board}/checklists/${checklistId}/items`, { text });
  }

  setItemStatus(
    board: string,
    checklistId: string,
    itemId: string,
    status: "pending" | "done",
    note?: string,
  ): Promise<SubmissionOutcome<{ item: unknown }>> {
    return this.submit("PUT", `/boards/${board}/checklists/${checklistId}/items/${itemId}`, {
      status,
      note: note ?? null,
    });
  }

  attachBookmark(
    board: string,
    checklistId: string,
    view: ViewStateRecord,
  ): Promise<SubmissionOutcome<{ checklist: ChecklistRecord }>> {
    return this.submit("PUT", `/boards/${board}/checklists/${checklistId}/bookmark`, view);
  }

  completeChecklist(
    board: string,
    checklistId: string,
    override = false,
  ): Promise<SubmissionOutcome<{ checklist: ChecklistRecord }>> {
    return this.submit("POST", `/boards/${board}/checklists/${checklistId}/complete`, { override });
  }
}

export type { CanvasRef };
