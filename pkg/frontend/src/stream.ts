/**
 * Gapless event subscription over the board's WebSocket stream.
 *
 * Frames are individual BoardEvents in wire format, dense from
 * `from_seq + 1`. On disconnect the stream flips to "reconnecting" (the UI
 * shows a banner off this state) and resubscribes from the last seq it has
 * seen, so no event is duplicated or skipped across drops.
 *
 * The socket is injectable: browsers pass `(url) => new WebSocket(url)`,
 * tests pass fakes.
 */

import type { BoardEventRecord } from "./protocol.js";
import { decodeEventFrame } from "./protocol.js";

export interface SocketLike {
  onmessage: ((event: { data: unknown }) => void) | null;
  onclose: ((event: { code?: number }) => void) | null;
  onerror: ((event: unknown) => void) | null;
  onopen: ((event: unknown) => void) | null;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

export type StreamStatus = "connected" | "reconnecting" | "stopped";

export interface EventStreamOptions {
  /** Delay before each reconnect attempt, ms. Exponential up to max. */
  reconnectDelayMs?: number;
  maxReconnectDelayMs?: number;
  /** Injectable timer for tests. */
  schedule?: (fn: () => void, ms: number) => void;
}

export class EventStream {
  private socket: SocketLike | null = null;
  private lastSeq: number;
  private stopped = false;
  private attempts = 0;
  private readonly delay: number;
  private readonly maxDelay: number;
  private readonly schedule: (fn: () => void, ms: number) => void;

  status: StreamStatus = "reconnecting";
  onEvent: (event: BoardEventRecord) => void = () => {};
  onStatus: (status: StreamStatus) => void = () => {};

  constructor(
    private readonly socketFactory: SocketFactory,
    private readonly wsBaseUrl: string,
    private readonly boardId: string,
    fromSeq: number,
    options: EventStreamOptions = {},
  ) {
    this.lastSeq = fromSeq;
    this.delay = options.reconnectDelayMs ?? 250;
    this.maxDelay = options.maxReconnectDelayMs ?? 10_000;
    this.schedule = options.schedule ?? ((fn, ms) => setTimeout(fn, ms));
  }

  get seenSeq(): number {
    return this.lastSeq;
  }

  start(): void {
    this.connect();
  }

  stop(): void {
    this.stopped = true;
    this.setStatus("stopped");
    this.socket?.close();
    this.socket = null;
  }

  private setStatus(status: StreamStatus): void {
    if (this.status !== status) {
      this.status = status;
      this.onStatus(status);
    }
  }

  private connect(): void {
    if (this.stopped) return;
    const url = `${this.wsBaseUrl}/api/v1/boards/${this.boardId}/stream?from_seq=${this.lastSeq}`;
    const socket = this.socketFactory(url);
    this.socket = socket;

    socket.onopen = () => {
      this.attempts = 0;
      this.setStatus("connected");
    };
    socket.onmessage = (message) => {
      const event = decodeEventFrame(String(message.data));
      if (event.seq <= this.lastSeq) return; // duplicate across reconnect races
      if (event.seq !== this.lastSeq + 1) {
        // A gap means this subscription is unusable; resubscribe cleanly.
        socket.close();
        return;
      }
      this.lastSeq = event.seq;
      this.onEvent(event);
    };
    socket.onerror = () => {
      // close follows; handled there
    };
    socket.onclose = () => {
      if (this.stopped) return;
      this.setStatus("reconnecting");
      const backoff = Math.min(this.delay * 2 ** this.attempts, this.maxDelay);
      this.attempts += 1;
      this.schedule(() => this.connect(), backoff);
    };
  }
}
