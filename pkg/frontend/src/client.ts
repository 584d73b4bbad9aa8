/**
 * The full board client: snapshot load, live subscription, and the login
 * flow (My Canvas auto-loads the actor's most recent storyline).
 *
 * Local state only ever changes by applying received BoardEvents; optimistic
 * rendering is deliberately off — a node appears when its event echoes back.
 */

import { BoardApi } from "./api.js";
import { GestureController } from "./gestures.js";
import { PanelState } from "./panels.js";
import { personalCanvasKey, TEAM_CANVAS_KEY } from "./protocol.js";
import type { BoardEventRecord } from "./protocol.js";
import { buildScene, type Scene } from "./scene.js";
import { ClientBoardState } from "./store.js";
import { EventStream, type SocketFactory, type StreamStatus } from "./stream.js";
import { CanvasViewport } from "./viewport.js";

export interface BoardClientOptions {
  socketFactory: SocketFactory;
  wsBaseUrl: string;
  reconnectDelayMs?: number;
}

export class BoardClient {
  readonly store: ClientBoardState;
  readonly viewport = new CanvasViewport();
  readonly panels = new PanelState();
  readonly gestures: GestureController;
  private stream: EventStream | null = null;

  /** Disconnect banner state, driven by the stream. */
  connectionStatus: StreamStatus = "reconnecting";
  onChange: () => void = () => {};

  constructor(
    readonly api: BoardApi,
    readonly boardId: string,
    readonly actorId: string,
    private readonly options: BoardClientOptions,
  ) {
    this.store = new ClientBoardState(boardId);
    this.gestures = new GestureController(api, boardId, this.store, () => this.viewport.active);
  }

  private activeCanvasKey(): string {
    return this.viewport.active === "team"
      ? TEAM_CANVAS_KEY
      : personalCanvasKey(this.actorId);
  }

  /**
   * Login: load the snapshot, auto-load the most recent storyline onto My
   * Canvas (one submission, when one exists), then subscribe from the
   * snapshot's seq. Events received while loading are folded in order.
   */
  async login(): Promise<void> {
    const snapshot = await this.api.snapshot(this.boardId);
    this.store.loadSnapshot(snapshot.state);

    const { storyline } = await this.api.mostRecentStoryline(this.boardId);
    if (storyline !== null) {
      await this.api.loadStoryline(this.boardId, storyline.id, "my");
    }

    this.subscribe(snapshot.seq);
  }

  private subscribe(fromSeq: number): void {
    this.stream = new EventStream(
      this.options.socketFactory,
      this.options.wsBaseUrl,
      this.boardId,
      fromSeq,
      { reconnectDelayMs: this.options.reconnectDelayMs },
    );
    this.stream.onEvent = (event) => this.applyEvent(event);
    this.stream.onStatus = (status) => {
      this.connectionStatus = status;
      this.onChange();
    };
    this.stream.start();
  }

  private applyEvent(event: BoardEventRecord): void {
    this.store.applyEvent(event);
    this.onChange();
  }

  /** The visual scene for the active canvas. */
  scene(): Scene {
    return buildScene(this.store.record, this.activeCanvasKey());
  }

  teamScene(): Scene {
    return buildScene(this.store.record, TEAM_CANVAS_KEY);
  }

  /** Divergence probe: local fold vs a fresh server snapshot. */
  async verifyAgainstSnapshot(): Promise<boolean> {
    const snapshot = await this.api.snapshot(this.boardId);
    const { deepEqual } = await import("./store.js");
    if (snapshot.seq !== this.store.seq) return false;
    return deepEqual(this.store.record, snapshot.state);
  }

  stop(): void {
    this.stream?.stop();
  }
}
