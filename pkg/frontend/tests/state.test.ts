/** History-tree bookkeeping: roots, appends, jumps, and the reachability
 * invariant (every node walks back to the root; its edge path is what a
 * replay feeds to the server). */

import { describe, expect, test } from "vitest";
import { SessionState } from "../src/state.js";

function planted(): SessionState {
  const state = new SessionState();
  state.reset("seed", "{root}\n", { "1": "d1" });
  return state;
}

describe("SessionState", () => {
  test("reset plants a root with no parent and selects it", () => {
    const state = planted();
    expect(state.nodes).toHaveLength(1);
    expect(state.root?.parent).toBeNull();
    expect(state.root?.edge).toBeNull();
    expect(state.currentId).toBe(state.root?.id);
    expect(state.pathEdges(state.root!.id)).toEqual([]);
  });

  test("append hangs a child below the current node and moves to it", () => {
    const state = planted();
    const a = state.append("1", "seed", "{a}\n", {}, null);
    const b = state.append("2", "seed", "{b}\n", {}, null);
    expect(a.parent).toBe(state.root!.id);
    expect(b.parent).toBe(a.id);
    expect(state.current?.id).toBe(b.id);
    expect(state.pathEdges(b.id)).toEqual(["1", "2"]);
  });

  test("jump restores the stored node and branches fork the tree", () => {
    const state = planted();
    const a = state.append("1", "seed", "{a}\n", {}, null);
    state.append("2", "seed", "{b}\n", {}, null);
    state.jump(a.id);
    expect(state.current?.payload).toBe("{a}\n");
    const c = state.append("3", "seed", "{c}\n", {}, null);
    expect(c.parent).toBe(a.id);
    expect(state.nodes).toHaveLength(4);
  });

  test("every node reaches the root by parent links", () => {
    const state = planted();
    state.append("1", "seed", "{a}\n", {}, null);
    state.append("2", "seed", "{b}\n", {}, null);
    state.jump(state.root!.id);
    state.append("1", "seed", "{c}\n", {}, null);
    for (const node of state.nodes) {
      let cursor = node;
      let hops = 0;
      while (cursor.parent !== null) {
        cursor = state.node(cursor.parent);
        hops += 1;
        expect(hops).toBeLessThanOrEqual(state.nodes.length);
      }
      expect(cursor.id).toBe(state.root!.id);
      expect(state.pathEdges(node.id)).toHaveLength(hops);
    }
  });

  test("clear empties the tree and reset starts ids over", () => {
    const state = planted();
    state.append("1", "seed", "{a}\n", {}, null);
    state.clear();
    expect(state.nodes).toHaveLength(0);
    expect(state.currentId).toBeNull();
    const root = state.reset("quiver", "{q}\n", {});
    expect(root.id).toBe(0);
    expect(root.kind).toBe("quiver");
  });

  test("unknown node ids are rejected", () => {
    const state = planted();
    expect(() => state.jump(99)).toThrow(/no history node/);
  });
});
