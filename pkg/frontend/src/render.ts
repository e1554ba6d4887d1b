/** DOM rendering for quivers and the explorer panels.
 *
 * Pure construction: every datum shown comes straight from server JSON —
 * arrow multiplicities, variable strings, relation text.  Nothing algebraic
 * is recomputed here. */

import { layoutQuiver } from "./layout.js";
import type { HistoryNode } from "./state.js";
import type { QuiverDoc, RelationDoc } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const VERTEX_RADIUS = 14;

export interface QuiverHandlers {
  onVertexClick?: (id: string, frozen: boolean) => void;
}

export interface CanvasSize {
  width: number;
  height: number;
}

export function renderQuiver(
  doc: Document,
  quiver: QuiverDoc,
  handlers: QuiverHandlers = {},
  size: CanvasSize = { width: 480, height: 360 },
): SVGSVGElement {
  const svg = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("class", "quiver");
  svg.setAttribute("viewBox", `0 0 ${size.width} ${size.height}`);
  svg.setAttribute("width", String(size.width));
  svg.setAttribute("height", String(size.height));

  const defs = doc.createElementNS(SVG_NS, "defs");
  const marker = doc.createElementNS(SVG_NS, "marker");
  marker.setAttribute("id", "arrowhead");
  marker.setAttribute("markerWidth", "8");
  marker.setAttribute("markerHeight", "8");
  marker.setAttribute("refX", "7");
  marker.setAttribute("refY", "3");
  marker.setAttribute("orient", "auto");
  const tip = doc.createElementNS(SVG_NS, "path");
  tip.setAttribute("d", "M0,0 L7,3 L0,6 z");
  marker.appendChild(tip);
  defs.appendChild(marker);
  svg.appendChild(defs);

  const pos = layoutQuiver(quiver, size);
  const arrowsGroup = doc.createElementNS(SVG_NS, "g");
  arrowsGroup.setAttribute("class", "arrows");
  for (const arrow of quiver.arrows) {
    const from = pos.get(String(arrow.from));
    const to = pos.get(String(arrow.to));
    if (!from || !to) continue;
    const g = doc.createElementNS(SVG_NS, "g");
    g.setAttribute("class", "arrow");
    g.setAttribute("data-from", String(arrow.from));
    g.setAttribute("data-to", String(arrow.to));
    g.setAttribute("data-mult", String(arrow.mult));

    const dx = to.x - from.x;
    const dy = to.y - from.y;
    const dist = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
    const trim = VERTEX_RADIUS + 4;
    const x1 = from.x + (dx / dist) * trim;
    const y1 = from.y + (dy / dist) * trim;
    const x2 = to.x - (dx / dist) * trim;
    const y2 = to.y - (dy / dist) * trim;

    const line = doc.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", x1.toFixed(1));
    line.setAttribute("y1", y1.toFixed(1));
    line.setAttribute("x2", x2.toFixed(1));
    line.setAttribute("y2", y2.toFixed(1));
    line.setAttribute("marker-end", "url(#arrowhead)");
    g.appendChild(line);

    if (arrow.mult > 1) {
      const label = doc.createElementNS(SVG_NS, "text");
      label.setAttribute("class", "mult");
      label.setAttribute("x", ((x1 + x2) / 2 + 6).toFixed(1));
      label.setAttribute("y", ((y1 + y2) / 2 - 6).toFixed(1));
      label.textContent = String(arrow.mult);
      g.appendChild(label);
    }
    arrowsGroup.appendChild(g);
  }
  svg.appendChild(arrowsGroup);

  const verticesGroup = doc.createElementNS(SVG_NS, "g");
  verticesGroup.setAttribute("class", "vertices");
  for (const vertex of quiver.vertices) {
    const id = String(vertex.id);
    const p = pos.get(id);
    if (!p) continue;
    const g = doc.createElementNS(SVG_NS, "g");
    g.setAttribute("class", vertex.frozen ? "vertex frozen" : "vertex");
    g.setAttribute("data-id", id);
    g.setAttribute("data-frozen", vertex.frozen ? "true" : "false");

    if (vertex.frozen) {
      const box = doc.createElementNS(SVG_NS, "rect");
      box.setAttribute("x", (p.x - VERTEX_RADIUS).toFixed(1));
      box.setAttribute("y", (p.y - VERTEX_RADIUS).toFixed(1));
      box.setAttribute("width", String(2 * VERTEX_RADIUS));
      box.setAttribute("height", String(2 * VERTEX_RADIUS));
      g.appendChild(box);
    } else {
      const disc = doc.createElementNS(SVG_NS, "circle");
      disc.setAttribute("cx", p.x.toFixed(1));
      disc.setAttribute("cy", p.y.toFixed(1));
      disc.setAttribute("r", String(VERTEX_RADIUS));
      g.appendChild(disc);
    }

    const label = doc.createElementNS(SVG_NS, "text");
    label.setAttribute("x", p.x.toFixed(1));
    label.setAttribute("y", (p.y + 4).toFixed(1));
    label.setAttribute("text-anchor", "middle");
    label.textContent = id;
    g.appendChild(label);

    if (handlers.onVertexClick) {
      const onClick = handlers.onVertexClick;
      g.addEventListener("click", () => onClick(id, vertex.frozen));
    }
    verticesGroup.appendChild(g);
  }
  svg.appendChild(verticesGroup);
  return svg;
}

export function renderNotice(doc: Document, text: string | null): HTMLElement {
  const div = doc.createElement("div");
  div.className = text ? "notice active" : "notice";
  div.textContent = text ?? "";
  return div;
}

export function renderRelation(doc: Document, relation: RelationDoc | null): HTMLElement {
  const div = doc.createElement("div");
  div.className = "relation";
  if (relation) {
    div.setAttribute("data-vertex", relation.vertex);
    div.textContent = relation.text;
  }
  return div;
}

export function renderVars(
  doc: Document,
  display: Record<string, string>,
  inverted: readonly string[],
): HTMLElement {
  const list = doc.createElement("dl");
  list.className = "vars";
  const invertedSet = new Set(inverted);
  for (const vertex of Object.keys(display).sort()) {
    const row = doc.createElement("div");
    row.className = "var";
    row.setAttribute("data-vertex", vertex);
    row.setAttribute("data-inverted", invertedSet.has(vertex) ? "true" : "false");
    const dt = doc.createElement("dt");
    dt.textContent = vertex;
    const dd = doc.createElement("dd");
    dd.textContent = display[vertex];
    row.appendChild(dt);
    row.appendChild(dd);
    list.appendChild(row);
  }
  return list;
}

export function renderWord(doc: Document, graph: string, word: readonly number[]): HTMLElement {
  const div = doc.createElement("div");
  div.className = "word";
  div.setAttribute("data-graph", graph);
  div.setAttribute("data-word", word.join(","));
  div.textContent = word.length ? `${graph}: ${word.join(",")}` : `${graph}: (empty)`;
  return div;
}

export function renderHistory(
  doc: Document,
  nodes: readonly HistoryNode[],
  currentId: number | null,
  onJump: (id: number) => void,
): HTMLElement {
  const list = doc.createElement("ul");
  list.className = "history";
  for (const node of nodes) {
    const item = doc.createElement("li");
    item.setAttribute("data-node", String(node.id));
    item.className = node.id === currentId ? "current" : "";
    item.textContent =
      node.parent === null
        ? `#${node.id} root (${node.kind})`
        : `#${node.id} <- #${node.parent} mutate at ${node.edge}`;
    item.addEventListener("click", () => onJump(node.id));
    list.appendChild(item);
  }
  return list;
}
