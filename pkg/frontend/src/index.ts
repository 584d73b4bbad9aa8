export * from "./protocol.js";
export * from "./api.js";
export * from "./store.js";
export * from "./stream.js";
export * from "./viewport.js";
export * from "./panels.js";
export * from "./scene.js";
export * from "./gestures.js";
export * from "./client.js";
