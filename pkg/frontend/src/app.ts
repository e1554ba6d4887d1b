/** Interactive explorer: click vertices to mutate, build reduced words
 * letter by letter, and walk the history tree.
 *
 * All algebra happens on the server; this class moves documents around and
 * renders them.  Interactions are serialized: while one is running, later
 * ones queue behind it, so at most one request is ever in flight. */

import { ApiClient, ApiError } from "./api.js";
import { canonicalJson } from "./canonical.js";
import {
  renderHistory,
  renderNotice,
  renderQuiver,
  renderRelation,
  renderVars,
  renderWord,
} from "./render.js";
import { SessionState } from "./state.js";
import type { HistoryNode } from "./state.js";
import type { LaurentDoc, QuiverDoc, SeedDoc } from "./types.js";

/** A one-term, coefficient-1, single-exponent-1 polynomial is just its
 * generator; anything else has no plain name. */
function readGeneratorName(poly: LaurentDoc): string | null {
  if (poly.terms.length !== 1) return null;
  const term = poly.terms[0];
  if (term.coef !== "1") return null;
  const hot = term.exp.map((e, i) => [e, i] as const).filter(([e]) => e !== 0);
  if (hot.length !== 1 || hot[0][0] !== 1) return null;
  return poly.vars[hot[0][1]] ?? null;
}

/** Initial cluster variables are single generators; read their names off
 * the served document. */
function initialDisplay(seed: SeedDoc): Record<string, string> {
  const display: Record<string, string> = {};
  for (const [vertex, poly] of Object.entries(seed.vars)) {
    display[vertex] = readGeneratorName(poly) ?? "(mutated)";
  }
  return display;
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.detail}`;
  if (err instanceof Error) return err.message;
  return String(err);
}

export class Explorer {
  readonly api: ApiClient;
  readonly state = new SessionState();
  private readonly root: HTMLElement;
  private readonly doc: Document;
  private notice: string | null = null;
  private chain: Promise<void> = Promise.resolve();

  constructor(root: HTMLElement, api: ApiClient) {
    this.root = root;
    this.doc = root.ownerDocument;
    this.api = api;
    this.render();
  }

  /** Resolves once every interaction queued so far has settled. */
  idle(): Promise<void> {
    return this.chain;
  }

  /** One interaction at a time; later clicks wait for earlier ones. */
  private serialize(task: () => Promise<void>): Promise<void> {
    const next = this.chain.then(task, task);
    this.chain = next.then(
      () => undefined,
      () => undefined,
    );
    return next;
  }

  currentNode(): HistoryNode | null {
    return this.state.current;
  }

  currentQuiver(): QuiverDoc | null {
    const node = this.state.current;
    if (!node) return null;
    const parsed = JSON.parse(node.payload) as SeedDoc | QuiverDoc;
    return node.kind === "seed" ? (parsed as SeedDoc).quiver : (parsed as QuiverDoc);
  }

  currentSeed(): SeedDoc | null {
    const node = this.state.current;
    if (!node || node.kind !== "seed") return null;
    return JSON.parse(node.payload) as SeedDoc;
  }

  /** Load a cell's initial seed and plant it as the history root. */
  loadSeed(cell: string): Promise<void> {
    return this.serialize(async () => {
      try {
        const got = await this.api.seedFromCell(cell);
        this.notice = null;
        this.state.reset("seed", got.body, initialDisplay(got.doc));
      } catch (err) {
        this.notice = describe(err);
      }
      this.render();
    });
  }

  /** Mutate the displayed document at a vertex.  Frozen vertices never
   * reach the server: the click only raises an inline notice. */
  mutateAt(vertexId: string): Promise<void> {
    return this.serialize(async () => {
      const node = this.state.current;
      if (!node) return;
      const quiver = this.currentQuiver();
      const vertex = quiver?.vertices.find((v) => String(v.id) === vertexId);
      if (!vertex) {
        this.notice = `no vertex ${vertexId} in the displayed quiver`;
        this.render();
        return;
      }
      if (vertex.frozen) {
        this.notice = `vertex ${vertexId} is frozen and cannot be mutated`;
        this.render();
        return;
      }
      try {
        if (node.kind === "seed") {
          const seed = JSON.parse(node.payload) as SeedDoc;
          const got = await this.api.mutateSeed(seed, vertexId);
          const display = {
            ...node.display,
            [got.doc.relation.vertex]: got.doc.relation.after,
          };
          this.notice = null;
          this.state.append(vertexId, "seed", canonicalJson(got.doc.seed), display, got.doc.relation);
        } else {
          const quiverDoc = JSON.parse(node.payload) as QuiverDoc;
          const got = await this.api.mutateQuiver(quiverDoc, vertexId);
          this.notice = null;
          this.state.append(vertexId, "quiver", got.body, {}, null);
        }
      } catch (err) {
        this.notice = describe(err);
      }
      this.render();
    });
  }

  /** Append a letter to the word under construction; the server decides
   * whether the longer word is still reduced.  On rejection the word is
   * left unchanged and the server's complaint is shown inline. */
  appendLetter(letter: number): Promise<void> {
    return this.serialize(async () => {
      const candidate = [...this.state.word, letter];
      try {
        const got = await this.api.quiverFromWord(this.state.graph, candidate);
        this.notice = null;
        this.state.word = candidate;
        this.state.reset("quiver", got.body, {});
      } catch (err) {
        this.notice = describe(err);
      }
      this.render();
    });
  }

  /** Drop the last letter; an empty word empties the canvas. */
  popLetter(): Promise<void> {
    return this.serialize(async () => {
      if (!this.state.word.length) return;
      const shorter = this.state.word.slice(0, -1);
      if (!shorter.length) {
        this.notice = null;
        this.state.word = [];
        this.state.clear();
        this.render();
        return;
      }
      try {
        const got = await this.api.quiverFromWord(this.state.graph, shorter);
        this.notice = null;
        this.state.word = shorter;
        this.state.reset("quiver", got.body, {});
      } catch (err) {
        this.notice = describe(err);
      }
      this.render();
    });
  }

  /** Switch the Coxeter graph for the word builder, starting over. */
  setGraph(name: string): Promise<void> {
    return this.serialize(async () => {
      this.state.graph = name;
      this.state.word = [];
      this.state.clear();
      this.notice = null;
      this.render();
    });
  }

  /** Return to a stored state: the bytes rendered are exactly the bytes
   * recorded when the node was created. */
  jumpTo(nodeId: number): Promise<void> {
    return this.serialize(async () => {
      this.state.jump(nodeId);
      this.notice = null;
      this.render();
    });
  }

  private render(): void {
    const doc = this.doc;
    this.root.textContent = "";
    const node = this.state.current;

    const canvas = doc.createElement("section");
    canvas.className = "canvas";
    const quiver = this.currentQuiver();
    if (quiver) {
      canvas.appendChild(
        renderQuiver(doc, quiver, { onVertexClick: (id) => void this.mutateAt(id) }),
      );
    }
    this.root.appendChild(canvas);

    this.root.appendChild(renderNotice(doc, this.notice));
    this.root.appendChild(renderWord(doc, this.state.graph, this.state.word));
    if (node && node.kind === "seed") {
      const seed = this.currentSeed();
      this.root.appendChild(renderVars(doc, node.display, seed ? seed.inverted : []));
      this.root.appendChild(renderRelation(doc, node.relation));
    }
    this.root.appendChild(
      renderHistory(doc, this.state.nodes, this.state.currentId, (id) => void this.jumpTo(id)),
    );
  }
}
