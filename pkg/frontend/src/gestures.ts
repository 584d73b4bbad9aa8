/**
 * Gesture layer: every *completed* user gesture maps to exactly one API
 * submission; cancelled gestures map to none. Rejections surface as toasts
 * and never mutate local state (the store only moves on received events).
 */

import { ApiError, BoardApi } from "./api.js";
import type { ClientBoardState } from "./store.js";
import type { PeriodRecord, ViewStateRecord } from "./protocol.js";

export interface DragState {
  waypointId: string;
  x: number;
  y: number;
}

export interface Toast {
  code: string;
  message: string;
}

export class GestureController {
  private drag: DragState | null = null;
  readonly toasts: Toast[] = [];

  constructor(
    private readonly api: BoardApi,
    private readonly board: string,
    private readonly store: ClientBoardState,
    private readonly activeCanvas: () => "my" | "team",
  ) {}

  private toast(error: unknown): void {
    if (error instanceof ApiError) {
      this.toasts.push({ code: error.code, message: error.message });
      return;
    }
    throw error;
  }

  // -- drag from the waypoint list -------------------------------------------

  beginDragFromList(waypointId: string): void {
    this.drag = { waypointId, x: 0, y: 0 };
  }

  updateDrag(x: number, y: number): void {
    if (this.drag) {
      this.drag.x = x;
      this.drag.y = y;
    }
  }

  /** Escape / drop outside: the gesture ends with zero submissions. */
  cancelDrag(): void {
    this.drag = null;
  }

  /** Drop onto the canvas: exactly one place_object submission. */
  async completeDrop(x: number, y: number): Promise<void> {
    if (!this.drag) return;
    const { waypointId } = this.drag;
    this.drag = null;
    try {
      await this.api.placeObject(this.board, this.activeCanvas(), waypointId, x, y);
    } catch (error) {
      this.toast(error); // e.g. AlreadyPlaced
    }
  }

  get dragInProgress(): boolean {
    return this.drag !== null;
  }

  // -- inline editing ----------------------------------------------------------

  /** Commit a detail-panel or floating-menu edit: one update event. */
  async commitInlineEdit(
    waypointId: string,
    patch: Partial<{
      name: string;
      notes: string;
      details: string;
      priority: string;
      kind: string;
      event_period: PeriodRecord;
    }>,
  ): Promise<void> {
    try {
      await this.api.updateWaypoint(this.board, waypointId, patch);
    } catch (error) {
      this.toast(error);
    }
  }

  /** The open-saved-view affordance is disabled when there is no view. */
  canOpenSavedView(waypointId: string): boolean {
    return this.store.record.objects.waypoints[waypointId]?.view_state != null;
  }

  /**
   * Resolve the stored query address for a new browsing context. Reads are
   * not submissions; navigation is the caller's job.
   */
  async openSavedView(waypointId: string): Promise<string | null> {
    if (!this.canOpenSavedView(waypointId)) return null;
    const { view_state } = await this.api.waypointView(this.board, waypointId);
    return view_state.query_representation;
  }

  // -- storyline controls -------------------------------------------------------

  async saveStorylineFromSelection(title: string, selectedIds: string[]): Promise<void> {
    try {
      await this.api.saveStoryline(this.board, title, selectedIds, this.activeCanvas());
    } catch (error) {
      this.toast(error);
    }
  }

  async loadStoryline(storylineId: string): Promise<void> {
    try {
      await this.api.loadStoryline(this.board, storylineId, this.activeCanvas());
    } catch (error) {
      this.toast(error);
    }
  }

  async renameStoryline(storylineId: string, title: string): Promise<void> {
    try {
      await this.api.renameStoryline(this.board, storylineId, title);
    } catch (error) {
      this.toast(error);
    }
  }

  async shareStoryline(storylineId: string): Promise<void> {
    try {
      await this.api.shareStoryline(this.board, storylineId);
    } catch (error) {
      this.toast(error);
    }
  }

  // -- checklist panel -----------------------------------------------------------

  async toggleChecklistItem(
    checklistId: string,
    itemId: string,
    done: boolean,
  ): Promise<void> {
    try {
      await this.api.setItemStatus(this.board, checklistId, itemId, done ? "done" : "pending");
    } catch (error) {
      this.toast(error);
    }
  }

  async addChecklistItem(checklistId: string, text: string): Promise<void> {
    try {
      await this.api.addChecklistItem(this.board, checklistId, text);
    } catch (error) {
      this.toast(error);
    }
  }

  async attachBookmark(checklistId: string, view: ViewStateRecord): Promise<void> {
    try {
      await this.api.attachBookmark(this.board, checklistId, view);
    } catch (error) {
      this.toast(error);
    }
  }

  /** PendingItems rejections toast with an override affordance. */
  async completeChecklist(checklistId: string, override = false): Promise<void> {
    try {
      await this.api.completeChecklist(this.board, checklistId, override);
    } catch (error) {
      this.toast(error);
    }
  }
}
