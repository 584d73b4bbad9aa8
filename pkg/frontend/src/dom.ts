/**
 * Minimal DOM renderer for the scene graph: SVG edges underneath,
 * absolutely-positioned rounded divs on top. No framework; the demo shell
 * (app.ts) re-renders wholesale on every change, which is plenty for a
 * board's object counts.
 */

import type { Scene, SceneNode } from "./scene.js";
import type { ViewportState } from "./viewport.js";

const ICON_GLYPHS: Record<string, string> = {
  headlight: "\u{1F526}", // flashlight
  cluster: "\u{1F5C3}",
  person: "\u{1F464}",
  clock: "\u{1F552}",
  lead: "\u{2753}",
  note: "\u{1F4DD}",
};

function nodeElement(doc: Document, node: SceneNode): HTMLElement {
  const el = doc.createElement("div");
  el.className = `board-node board-node--${node.kind}`;
  el.dataset.objectId = node.id;
  el.style.position = "absolute";
  el.style.left = `${node.x}px`;
  el.style.top = `${node.y}px`;
  el.style.zIndex = String(node.zOrder);
  el.style.background = node.color;
  el.style.borderRadius = "14px";
  el.style.padding = "6px 12px";
  el.style.border = "1px solid #7789a4";
  if (node.closed) {
    el.style.opacity = "0.55";
    el.style.textDecoration = "line-through";
  }
  el.textContent = `${ICON_GLYPHS[node.icon] ?? ""} ${node.label}`;
  return el;
}

export function renderScene(
  container: HTMLElement,
  scene: Scene,
  viewport: ViewportState,
): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  container.style.position = "relative";
  container.style.overflow = "hidden";

  const world = doc.createElement("div");
  world.className = "board-world";
  world.style.position = "absolute";
  world.style.transformOrigin = "0 0";
  world.style.transform = `translate(${viewport.panX}px, ${viewport.panY}px) scale(${viewport.zoom})`;

  const byId = new Map(scene.nodes.map((n) => [n.id, n]));
  const svgNS = "http://www.w3.org/2000/svg";
  const svg = doc.createElementNS(svgNS, "svg");
  svg.setAttribute("class", "board-edges");
  svg.style.position = "absolute";
  svg.style.left = "-5000px";
  svg.style.top = "-5000px";
  svg.setAttribute("width", "10000");
  svg.setAttribute("height", "10000");
  for (const edge of scene.edges) {
    const from = byId.get(edge.from);
    const to = byId.get(edge.to);
    if (!from || !to) continue;
    const line = doc.createElementNS(svgNS, "line");
    line.setAttribute("x1", String(from.x + 5000));
    line.setAttribute("y1", String(from.y + 5000));
    line.setAttribute("x2", String(to.x + 5000));
    line.setAttribute("y2", String(to.y + 5000));
    line.setAttribute("stroke", "#8899aa");
    svg.appendChild(line);
  }
  world.appendChild(svg);
  for (const node of scene.nodes) {
    world.appendChild(nodeElement(doc, node));
  }
  container.appendChild(world);
}
