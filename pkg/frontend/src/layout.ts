/** Deterministic force-directed layout.
 *
 * Frozen vertices are pinned to the boundary circle; exchangeable vertices
 * settle in the interior.  No randomness: initial positions come from the
 * vertex order, so the same quiver always lays out the same way. */

import type { QuiverDoc } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

export interface LayoutOptions {
  width?: number;
  height?: number;
  iterations?: number;
}

export const BOUNDARY_MARGIN = 24;
const INTERIOR = 0.82;

export function boundaryRadius(width: number, height: number): number {
  return Math.min(width, height) / 2 - BOUNDARY_MARGIN;
}

export function layoutQuiver(quiver: QuiverDoc, options: LayoutOptions = {}): Map<string, Point> {
  const width = options.width ?? 480;
  const height = options.height ?? 360;
  const iterations = options.iterations ?? 120;
  const cx = width / 2;
  const cy = height / 2;
  const radius = boundaryRadius(width, height);

  const ids = quiver.vertices.map((v) => String(v.id));
  const frozen = new Set(quiver.vertices.filter((v) => v.frozen).map((v) => String(v.id)));
  const pos = new Map<string, Point>();
  ids.forEach((id, i) => {
    const angle = (2 * Math.PI * i) / Math.max(ids.length, 1) - Math.PI / 2;
    const r = frozen.has(id) ? radius : radius * 0.45;
    pos.set(id, { x: cx + r * Math.cos(angle), y: cy + r * Math.sin(angle) });
  });

  const springs = quiver.arrows.map((a) => ({ a: String(a.from), b: String(a.to) }));
  const repulsion = radius * radius * 0.5;
  const springLength = radius * 0.8;

  for (let step = 0; step < iterations; step++) {
    const force = new Map<string, Point>(ids.map((id) => [id, { x: 0, y: 0 }]));
    for (let i = 0; i < ids.length; i++) {
      for (let j = i + 1; j < ids.length; j++) {
        const p = pos.get(ids[i])!;
        const q = pos.get(ids[j])!;
        let dx = p.x - q.x;
        let dy = p.y - q.y;
        const dist2 = Math.max(dx * dx + dy * dy, 1);
        const dist = Math.sqrt(dist2);
        dx /= dist;
        dy /= dist;
        const push = repulsion / dist2;
        const fi = force.get(ids[i])!;
        const fj = force.get(ids[j])!;
        fi.x += dx * push;
        fi.y += dy * push;
        fj.x -= dx * push;
        fj.y -= dy * push;
      }
    }
    for (const { a, b } of springs) {
      const p = pos.get(a);
      const q = pos.get(b);
      if (!p || !q) continue;
      let dx = q.x - p.x;
      let dy = q.y - p.y;
      const dist = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const pull = (dist - springLength) * 0.05;
      dx /= dist;
      dy /= dist;
      const fa = force.get(a)!;
      const fb = force.get(b)!;
      fa.x += dx * pull;
      fa.y += dy * pull;
      fb.x -= dx * pull;
      fb.y -= dy * pull;
    }
    const cool = 1 - step / iterations;
    for (const id of ids) {
      const p = pos.get(id)!;
      const f = force.get(id)!;
      p.x += Math.max(-12, Math.min(12, f.x)) * cool;
      p.y += Math.max(-12, Math.min(12, f.y)) * cool;
      const dx = p.x - cx;
      const dy = p.y - cy;
      const r = Math.sqrt(dx * dx + dy * dy) || 1;
      if (frozen.has(id)) {
        // pinned: frozen vertices live on the boundary circle
        p.x = cx + (dx / r) * radius;
        p.y = cy + (dy / r) * radius;
      } else if (r > radius * INTERIOR) {
        p.x = cx + (dx / r) * radius * INTERIOR;
        p.y = cy + (dy / r) * radius * INTERIOR;
      }
    }
  }
  return pos;
}
