"""Seeds, exact seed mutation, exchange-graph exploration, type detection,
and the subcluster conditions.

A seed is an extended quiver (frozen vertices = coefficients) together with
an assignment of a Laurent polynomial to every vertex, all in a fixed
initial variable alphabet. Mutation rewrites one exchangeable variable by
its exchange relation and mutates the quiver; the division is performed
exactly, and an inexact division is a hard error because it would disprove
the Laurent phenomenon rather than signal bad input.
"""

from .errors import FrozenVertex, LaurentViolation, NotDivisible
from .foundation import LaurentPoly, canonical_json, laurent_divide_exact
from .quiver import MultiQuiver, detect, fz_mutate


def _pkey(p):
    """Canonical serialization of a Laurent polynomial value.

    to_json drops variables that occur in no term, so equal values reached
    through different intermediate alphabets key identically."""
    return canonical_json(p.to_json())


class Seed:
    __slots__ = ("quiver", "assignment", "inverted")

    def __init__(self, quiver, assignment, inverted=()):
        self.quiver = quiver
        self.assignment = dict(assignment)
        self.inverted = frozenset(inverted)
        if set(self.assignment) != set(quiver.vertices):
            raise ValueError("assignment must cover exactly the vertices")
        if not self.inverted <= quiver.frozen:
            raise ValueError("only coefficients may be inverted")
        vals = list(self.assignment.values())
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                if vals[i] == vals[j]:
                    raise ValueError("assignment values must be pairwise distinct")
        problems = detect(quiver)
        if problems["loops"] or problems["two_cycles"]:
            raise ValueError(
                f"exchangeable part is not mutable: {problems}"
            )

    def cluster_values(self):
        return [self.assignment[v] for v in self.quiver.exchangeable()]

    def coefficient_values(self):
        return [self.assignment[v] for v in self.quiver.vertices if v in self.quiver.frozen]

    def extended_values(self):
        return [self.assignment[v] for v in self.quiver.vertices]

    def key(self):
        """Unordered extended cluster, canonically serialized."""
        return frozenset(_pkey(p) for p in self.extended_values())

    def __eq__(self, other):
        if not isinstance(other, Seed):
            return NotImplemented
        if self.key() != other.key():
            return False
        _matching(self, other)  # asserted, per the seed-identity convention
        return True

    def __hash__(self):
        return hash(self.key())

    def to_json(self):
        return {
            "quiver": self.quiver.to_json(),
            "vars": {
                str(v): self.assignment[v].to_json() for v in self.quiver.vertices
            },
            "inverted": sorted(str(v) for v in self.inverted),
        }

    @classmethod
    def from_json(cls, obj):
        quiver = MultiQuiver.from_json(obj["quiver"])
        label = {str(v): v for v in quiver.vertices}
        assignment = {
            label[k]: LaurentPoly.from_json(p) for k, p in obj["vars"].items()
        }
        inverted = frozenset(label[k] for k in obj["inverted"])
        return cls(quiver, assignment, inverted)


def _matching(a, b):
    """The unique value-preserving vertex bijection; checked to preserve
    frozen flags and arrow multiplicities. A seed is determined by its
    extended cluster, so a mismatch here is a bug, not bad input."""
    m = {}
    for v in a.quiver.vertices:
        hits = [w for w in b.quiver.vertices if b.assignment[w] == a.assignment[v]]
        if len(hits) != 1:
            raise AssertionError("equal clusters but no value bijection")
        m[v] = hits[0]
    for v in a.quiver.vertices:
        if (v in a.quiver.frozen) != (m[v] in b.quiver.frozen):
            raise AssertionError("equal clusters but frozen flags differ")
    for v in a.quiver.vertices:
        for w in a.quiver.vertices:
            if a.quiver.mult(v, w) != b.quiver.mult(m[v], m[w]):
                raise AssertionError("equal clusters but quivers differ")
    return m


def initial_seed(quiver, names=None):
    """Identity assignment: each vertex carries its own variable."""
    if names is None:
        names = {v: f"x{v}" for v in quiver.vertices}
    assignment = {v: LaurentPoly.var(names[v]) for v in quiver.vertices}
    return Seed(quiver, assignment, ())


def seed_mutate(seed, k):
    """Exchange at an exchangeable vertex: x_k' = (prod over arrows into k
    of x_src^mult + prod over arrows out of k of x_tgt^mult) / x_k."""
    if k not in seed.quiver.vertices:
        raise ValueError(f"{k} is not a vertex")
    if k in seed.quiver.frozen:
        raise FrozenVertex(f"vertex {k} is a coefficient")
    one = LaurentPoly.const(1, [])
    p_in = one
    p_out = one
    for (s, t), m in sorted(seed.quiver.arrows.items(), key=lambda kv: str(kv[0])):
        if t == k:
            p_in = p_in * seed.assignment[s] ** m
        elif s == k:
            p_out = p_out * seed.assignment[t] ** m
    numerator = p_in + p_out
    try:
        new_val = laurent_divide_exact(numerator, seed.assignment[k])
    except NotDivisible as exc:
        raise LaurentViolation(
            f"exchange at {k} does not divide: {exc}"
        ) from exc
    assignment = dict(seed.assignment)
    assignment[k] = new_val
    return Seed(fz_mutate(seed.quiver, k), assignment, seed.inverted)


class ExchangeGraph:
    """BFS fragment of the exchange graph. nodes[0] is the start seed;
    edges are (from_index, to_index, mutated_vertex); complete means the
    closure was exhausted within the caps."""

    __slots__ = ("nodes", "edges", "depths", "complete")

    def __init__(self, nodes, edges, depths, complete):
        self.nodes = nodes
        self.edges = edges
        self.depths = depths
        self.complete = complete

    def variables(self):
        """All exchangeable-vertex values over the fragment, deduplicated."""
        seen = {}
        for s in self.nodes:
            for p in s.cluster_values():
                seen.setdefault(_pkey(p), p)
        return [seen[k] for k in sorted(seen)]

    def new_variables_by_depth(self):
        """Depth of first appearance for every cluster variable."""
        first = {}
        for i, s in enumerate(self.nodes):
            for p in s.cluster_values():
                key = _pkey(p)
                if key not in first or self.depths[i] < first[key][0]:
                    first[key] = (self.depths[i], p)
        out = {}
        for depth, p in first.values():
            out.setdefault(depth, []).append(p)
        return out

    def degrees(self):
        deg = [0] * len(self.nodes)
        for (i, j, _k) in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def to_dot(self):
        lines = ["graph exchange {"]
        for i, _s in enumerate(self.nodes):
            shape = "doublecircle" if i == 0 else "circle"
            lines.append(f'  n{i} [shape={shape}];')
        for (i, j, k) in self.edges:
            lines.append(f'  n{i} -- n{j} [label="{k}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def explore(seed, depth=6, node_cap=10000, order="bfs"):
    """Closure of the seed under mutation, capped by depth and node count.

    Nodes past the depth cap are never created; seeds already at the cap are
    still mutated once so that edges inside the fragment are recorded and
    completeness is decided honestly."""
    if depth < 0 or node_cap <= 0:
        raise ValueError("caps must be positive")
    nodes = [seed]
    depths = [0]
    index = {seed.key(): 0}
    edges = []
    edge_seen = set()
    work = [0]
    complete = True
    while work:
        i = work.pop(0) if order == "bfs" else work.pop()
        s = nodes[i]
        for k in s.quiver.exchangeable():
            t = seed_mutate(s, k)
            j = index.get(t.key())
            if j is None:
                if depths[i] >= depth or len(nodes) >= node_cap:
                    complete = False
                    continue
                j = len(nodes)
                index[t.key()] = j
                nodes.append(t)
                depths.append(depths[i] + 1)
                work.append(j)
            else:
                _matching(t, nodes[j])
            ekey = (min(i, j), max(i, j))
            if i != j and ekey not in edge_seen:
                edge_seen.add(ekey)
                edges.append((ekey[0], ekey[1], k))
    return ExchangeGraph(nodes, edges, depths, complete)


class FiniteType:
    __slots__ = ("name", "clusters", "variables")

    def __init__(self, name, clusters, variables):
        self.name = name
        self.clusters = clusters
        self.variables = variables

    def __repr__(self):
        return f"FiniteType({self.name}, clusters={self.clusters}, variables={self.variables})"


class InfiniteWithinCap:
    __slots__ = ("depth", "node_cap", "nodes_found")

    def __init__(self, depth, node_cap, nodes_found):
        self.depth = depth
        self.node_cap = node_cap
        self.nodes_found = nodes_found

    def __repr__(self):
        return f"InfiniteWithinCap(depth={self.depth}, nodes_found={self.nodes_found})"


_TYPE_NAMES = {
    (1, 2): "A1",
    (2, 4): "A1xA1",
    (2, 5): "A2",
    (2, 6): "B2",
    (2, 8): "G2",
    (3, 8): "A1xA1xA1",
    (3, 10): "A1xA2",
    (3, 14): "A3",
    (3, 20): "B3",
}


def classify_type(seed, depth=16, node_cap=10000):
    g = explore(seed, depth=depth, node_cap=node_cap)
    if not g.complete:
        return InfiniteWithinCap(depth, node_cap, len(g.nodes))
    rank = len(seed.quiver.exchangeable())
    clusters = len(g.nodes)
    name = _TYPE_NAMES.get((rank, clusters), f"finite_rank{rank}")
    return FiniteType(name, clusters, len(g.variables()))


def check_subcluster(sub, ambient, embedding):
    """The three subcluster conditions, checked syntactically.

    embedding maps sub vertices to ambient vertices, injectively. Returns
    (ok, report) where report carries one boolean per condition."""
    if len(set(embedding.values())) != len(embedding):
        raise ValueError("embedding must be injective")
    if set(embedding) != set(sub.quiver.vertices):
        raise ValueError("embedding must cover the sub seed")
    for v, u in embedding.items():
        if u not in ambient.quiver.vertices:
            raise ValueError(f"{u} is not an ambient vertex")

    amb_cluster = {_pkey(p) for p in ambient.cluster_values()}
    amb_extended = {_pkey(p) for p in ambient.extended_values()}
    s1 = all(
        _pkey(sub.assignment[v]) in amb_cluster
        for v in sub.quiver.exchangeable()
    ) and all(
        _pkey(sub.assignment[v]) in amb_extended
        for v in sub.quiver.vertices
        if v in sub.quiver.frozen
    )

    # values must agree pointwise along the embedding for S2/S3 to make sense
    aligned = all(
        sub.assignment[v] == ambient.assignment[embedding[v]] for v in embedding
    )

    s2 = aligned
    if aligned:
        for v in sub.quiver.exchangeable():
            u = embedding[v]
            sub_in = {
                embedding[s]: m
                for (s, t), m in sub.quiver.arrows.items()
                if t == v
            }
            sub_out = {
                embedding[t]: m
                for (s, t), m in sub.quiver.arrows.items()
                if s == v
            }
            amb_in = {s: m for (s, t), m in ambient.quiver.arrows.items() if t == u}
            amb_out = {t: m for (s, t), m in ambient.quiver.arrows.items() if s == u}
            if sub_in != amb_in or sub_out != amb_out:
                s2 = False
                break

    sub_coeff_values = {
        _pkey(sub.assignment[v])
        for v in sub.quiver.vertices
        if v in sub.quiver.frozen
    }
    sub_inverted_values = {_pkey(sub.assignment[v]) for v in sub.inverted}
    s3 = True
    for u in ambient.inverted:
        val = _pkey(ambient.assignment[u])
        if val in sub_coeff_values and val not in sub_inverted_values:
            s3 = False
            break

    report = {"S1": s1, "S2": s2, "S3": s3}
    return all(report.values()), report
