/** Layout contract: frozen vertices sit exactly on the boundary circle,
 * exchangeable ones stay strictly inside, and the layout is deterministic. */

import { describe, expect, test } from "vitest";
import { boundaryRadius, layoutQuiver } from "../src/layout.js";
import type { QuiverDoc } from "../src/types.js";

const LADDER: QuiverDoc = {
  vertices: [
    { id: 1, frozen: false },
    { id: 2, frozen: false },
    { id: 3, frozen: true },
    { id: 4, frozen: true },
  ],
  arrows: [
    { from: 1, to: 2, mult: 2 },
    { from: 2, to: 3, mult: 2 },
    { from: 3, to: 4, mult: 2 },
    { from: 3, to: 1, mult: 1 },
    { from: 4, to: 2, mult: 1 },
  ],
};

const SIZE = { width: 480, height: 360 };

function radiusOf(point: { x: number; y: number }): number {
  const dx = point.x - SIZE.width / 2;
  const dy = point.y - SIZE.height / 2;
  return Math.sqrt(dx * dx + dy * dy);
}

describe("layoutQuiver", () => {
  test("frozen vertices are pinned to the boundary circle", () => {
    const pos = layoutQuiver(LADDER, SIZE);
    const boundary = boundaryRadius(SIZE.width, SIZE.height);
    for (const id of ["3", "4"]) {
      expect(Math.abs(radiusOf(pos.get(id)!) - boundary)).toBeLessThan(1e-6);
    }
  });

  test("exchangeable vertices stay strictly inside the boundary", () => {
    const pos = layoutQuiver(LADDER, SIZE);
    const boundary = boundaryRadius(SIZE.width, SIZE.height);
    for (const id of ["1", "2"]) {
      expect(radiusOf(pos.get(id)!)).toBeLessThan(boundary - 1);
    }
  });

  test("same quiver, same layout", () => {
    const a = layoutQuiver(LADDER, SIZE);
    const b = layoutQuiver(LADDER, SIZE);
    expect(JSON.stringify([...a.entries()])).toBe(JSON.stringify([...b.entries()]));
  });

  test("handles empty and single-vertex quivers", () => {
    expect(layoutQuiver({ vertices: [], arrows: [] }, SIZE).size).toBe(0);
    const solo = layoutQuiver(
      { vertices: [{ id: "v", frozen: true }], arrows: [] },
      SIZE,
    );
    expect(Math.abs(radiusOf(solo.get("v")!) - boundaryRadius(SIZE.width, SIZE.height))).toBeLessThan(1e-6);
  });
});
