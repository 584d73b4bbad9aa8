/**
 * EventStream: gapless in-order delivery, duplicate suppression across
 * reconnect races, and resubscription from the last seen seq.
 */

import { describe, expect, it } from "vitest";

import type { BoardEventRecord } from "../src/protocol.js";
import { EventStream, type SocketLike } from "../src/stream.js";
import { FakeBoardServer } from "./fake.js";
import { BoardApi } from "../src/api.js";

function frame(seq: number): string {
  const event: BoardEventRecord = {
    schema: 1,
    seq,
    actor: { id: "jay", name: "Jay", role: "hunter" },
    server_time: `2026-01-05T00:00:0${seq}.000000Z`,
    op: { type: "create_annotation", text: `n${seq}` },
  };
  return JSON.stringify(event);
}

class ManualSocket implements SocketLike {
  onmessage: ((event: { data: unknown }) => void) | null = null;
  onclose: ((event: { code?: number }) => void) | null = null;
  onerror: ((event: unknown) => void) | null = null;
  onopen: ((event: unknown) => void) | null = null;
  closedByClient = false;

  close(): void {
    this.closedByClient = true;
    this.onclose?.({ code: 1000 });
  }
}

function manualFactory() {
  const sockets: ManualSocket[] = [];
  const urls: string[] = [];
  const factory = (url: string): SocketLike => {
    const socket = new ManualSocket();
    sockets.push(socket);
    urls.push(url);
    return socket;
  };
  return { factory, sockets, urls };
}

describe("EventStream", () => {
  it("delivers dense frames and drops duplicates", () => {
    const { factory, sockets } = manualFactory();
    const stream = new EventStream(factory, "ws://x", "b", 0, {
      schedule: (fn) => fn(),
    });
    const seen: number[] = [];
    stream.onEvent = (event) => seen.push(event.seq);
    stream.start();

    const socket = sockets[0];
    socket.onopen?.({});
    socket.onmessage?.({ data: frame(1) });
    socket.onmessage?.({ data: frame(2) });
    socket.onmessage?.({ data: frame(2) }); // duplicate: ignored
    socket.onmessage?.({ data: frame(3) });
    expect(seen).toEqual([1, 2, 3]);
    expect(stream.seenSeq).toBe(3);
  });

  it("reconnects from the last seen seq after a drop", () => {
    const { factory, sockets, urls } = manualFactory();
    const statuses: string[] = [];
    const stream = new EventStream(factory, "ws://x", "b", 0, {
      schedule: (fn) => fn(), // immediate reconnect
    });
    stream.onStatus = (status) => statuses.push(status);
    const seen: number[] = [];
    stream.onEvent = (event) => seen.push(event.seq);
    stream.start();

    sockets[0].onopen?.({});
    sockets[0].onmessage?.({ data: frame(1) });
    sockets[0].onmessage?.({ data: frame(2) });
    sockets[0].onclose?.({ code: 1006 }); // network drop

    expect(urls[1]).toContain("from_seq=2");
    sockets[1].onopen?.({});
    sockets[1].onmessage?.({ data: frame(3) });
    expect(seen).toEqual([1, 2, 3]);
    expect(statuses).toEqual(["connected", "reconnecting", "connected"]);
  });

  it("treats a gap as a broken subscription and resubscribes", () => {
    const { factory, sockets, urls } = manualFactory();
    const stream = new EventStream(factory, "ws://x", "b", 0, {
      schedule: (fn) => fn(),
    });
    const seen: number[] = [];
    stream.onEvent = (event) => seen.push(event.seq);
    stream.start();

    sockets[0].onopen?.({});
    sockets[0].onmessage?.({ data: frame(1) });
    sockets[0].onmessage?.({ data: frame(3) }); // gap: must not apply
    expect(seen).toEqual([1]);
    expect(sockets[0].closedByClient).toBe(true);
    expect(urls[1]).toContain("from_seq=1");
  });

  it("stop() silences the stream permanently", () => {
    const { factory, sockets } = manualFactory();
    const stream = new EventStream(factory, "ws://x", "b", 0, {
      schedule: (fn) => fn(),
    });
    const seen: number[] = [];
    stream.onEvent = (event) => seen.push(event.seq);
    stream.start();
    sockets[0].onopen?.({});
    stream.stop();
    sockets[0].onmessage?.({ data: frame(1) });
    expect(seen).toEqual([1]); // message arrived before close propagated
    expect(sockets.length).toBe(1); // no reconnect after stop
  });

  it("streams backlog then live against the fake service", async () => {
    const server = new FakeBoardServer();
    const api = new BoardApi(server.transport(), "http://fake", "jay");
    await api.createBoard("b");
    await api.createAnnotation("b", "one");
    await api.createAnnotation("b", "two");

    const stream = new EventStream(server.socketFactory(), "ws://fake", "b", 0, {
      schedule: (fn) => fn(),
    });
    const seen: number[] = [];
    stream.onEvent = (event) => seen.push(event.seq);
    stream.start();
    await new Promise((resolve) => setTimeout(resolve, 0)); // let microtasks run

    await api.createAnnotation("b", "three");
    expect(seen).toEqual([1, 2, 3]);
    stream.stop();
  });
});
