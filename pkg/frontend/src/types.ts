/** JSON documents exchanged with the workbench server.
 *
 * These mirror the server's wire format exactly; the explorer never adds,
 * renames, or recomputes fields. */

export interface QuiverVertex {
  id: number | string;
  frozen: boolean;
}

export interface QuiverArrow {
  from: number | string;
  to: number | string;
  mult: number;
}

export interface QuiverDoc {
  vertices: QuiverVertex[];
  arrows: QuiverArrow[];
}

export interface LaurentTerm {
  exp: number[];
  coef: string;
}

export interface LaurentDoc {
  vars: string[];
  terms: LaurentTerm[];
}

export interface SeedDoc {
  quiver: QuiverDoc;
  vars: Record<string, LaurentDoc>;
  inverted: string[];
}

export interface RelationDoc {
  vertex: string;
  before: string;
  after: string;
  incoming: string;
  outgoing: string;
  text: string;
}

export interface SeedMutation {
  seed: SeedDoc;
  relation: RelationDoc;
}

export interface StepNeighbor {
  vertex: string;
  seed: SeedDoc;
}

export interface StepDoc {
  neighbors: StepNeighbor[];
}
