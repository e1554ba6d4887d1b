/** Client-side session state: the history tree of visited documents plus
 * the word under construction.
 *
 * Nodes store the server's canonical bytes for each state, never a
 * re-derived rendering, so restoring a node is byte-identical, and replaying
 * a node's recorded edge labels through the server must land on the same
 * bytes.  Every node is reachable from the root by construction: a node is
 * only ever appended below the current one. */

import type { RelationDoc } from "./types.js";

export type DocKind = "seed" | "quiver";

export interface HistoryNode {
  id: number;
  parent: number | null;
  /** Vertex label of the mutation that produced this node (null at the root). */
  edge: string | null;
  kind: DocKind;
  /** Canonical JSON bytes of the seed or quiver at this node. */
  payload: string;
  /** Vertex -> cluster-variable text, exactly as reported by the server. */
  display: Record<string, string>;
  /** Exchange relation of the mutation that produced this node. */
  relation: RelationDoc | null;
}

export class SessionState {
  graph = "kronecker";
  word: number[] = [];
  nodes: HistoryNode[] = [];
  currentId: number | null = null;
  private nextId = 0;

  get current(): HistoryNode | null {
    return this.currentId === null ? null : this.node(this.currentId);
  }

  get root(): HistoryNode | null {
    return this.nodes.length ? this.nodes[0] : null;
  }

  node(id: number): HistoryNode {
    const found = this.nodes.find((n) => n.id === id);
    if (!found) throw new Error(`no history node ${id}`);
    return found;
  }

  /** Drop the whole tree. */
  clear(): void {
    this.nodes = [];
    this.currentId = null;
    this.nextId = 0;
  }

  /** Drop the whole tree and plant a new root. */
  reset(kind: DocKind, payload: string, display: Record<string, string>): HistoryNode {
    this.clear();
    const root: HistoryNode = {
      id: this.nextId++,
      parent: null,
      edge: null,
      kind,
      payload,
      display,
      relation: null,
    };
    this.nodes.push(root);
    this.currentId = root.id;
    return root;
  }

  /** Record a mutation step below the current node and move to it. */
  append(
    edge: string,
    kind: DocKind,
    payload: string,
    display: Record<string, string>,
    relation: RelationDoc | null,
  ): HistoryNode {
    if (this.currentId === null) throw new Error("no current state to mutate");
    const node: HistoryNode = {
      id: this.nextId++,
      parent: this.currentId,
      edge,
      kind,
      payload,
      display,
      relation,
    };
    this.nodes.push(node);
    this.currentId = node.id;
    return node;
  }

  jump(id: number): HistoryNode {
    const node = this.node(id);
    this.currentId = node.id;
    return node;
  }

  /** Edge labels along the root -> id path; replaying them through the
   * server reproduces the node's payload exactly. */
  pathEdges(id: number): string[] {
    const edges: string[] = [];
    let node: HistoryNode | null = this.node(id);
    while (node !== null && node.parent !== null) {
      edges.push(node.edge as string);
      node = this.node(node.parent);
    }
    return edges.reverse();
  }
}
