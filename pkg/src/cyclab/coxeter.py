"""Coxeter combinatorics on multigraphs.

A graph with edge multiplicities d_ij determines a symmetric generalized
Cartan matrix (C_ii = 2, C_ij = -d_ij) and a Coxeter group acting on the
root lattice. Words are tuples of vertex labels. Everything here works with
the exact reflection representation over the integers, so length and
reducedness checks are decisive, not heuristic.
"""

from fractions import Fraction

from .errors import CapExceeded, InfiniteParabolic, NotReduced


class CoxeterGraph:
    """Finite multigraph without loops; vertices are arbitrary int labels."""

    __slots__ = ("vertices", "_mult", "_index")

    def __init__(self, vertices, edges):
        self.vertices = tuple(sorted(vertices))
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertices")
        self._index = {v: i for i, v in enumerate(self.vertices)}
        self._mult = {}
        for a, b, m in edges:
            if a == b:
                raise ValueError("loops are not allowed")
            if a not in self._index or b not in self._index:
                raise ValueError(f"edge endpoint {a, b} not a vertex")
            if m < 1:
                raise ValueError("edge multiplicity must be positive")
            key = (a, b) if a < b else (b, a)
            if key in self._mult:
                raise ValueError(f"duplicate edge {key}")
            self._mult[key] = m

    def d(self, a, b):
        if a == b:
            return 0
        key = (a, b) if a < b else (b, a)
        return self._mult.get(key, 0)

    def cartan(self, a, b):
        return 2 if a == b else -self.d(a, b)

    def index(self, v):
        return self._index[v]

    def edges(self):
        return sorted((a, b, m) for (a, b), m in self._mult.items())

    def neighbors(self, v):
        out = []
        for (a, b), m in self._mult.items():
            if a == v:
                out.append((b, m))
            elif b == v:
                out.append((a, m))
        return sorted(out)

    def subgraph(self, subset):
        subset = set(subset)
        edges = [
            (a, b, m) for (a, b), m in self._mult.items() if a in subset and b in subset
        ]
        return CoxeterGraph(subset, edges)

    def __eq__(self, other):
        return (
            isinstance(other, CoxeterGraph)
            and self.vertices == other.vertices
            and self._mult == other._mult
        )

    def __hash__(self):
        return hash((self.vertices, tuple(sorted(self._mult.items()))))

    def key(self):
        return (self.vertices, tuple(sorted(self._mult.items())))

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "edges": [{"a": a, "b": b, "mult": m} for a, b, m in self.edges()],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            obj["vertices"],
            [(e["a"], e["b"], e.get("mult", 1)) for e in obj["edges"]],
        )


def kronecker_graph():
    """Two vertices joined by a double edge."""
    return CoxeterGraph((0, 1), [(0, 1, 2)])


def triangle_graph():
    """Three vertices pairwise joined by single edges."""
    return CoxeterGraph((1, 2, 3), [(1, 2, 1), (1, 3, 1), (2, 3, 1)])


def type_a_graph(n):
    return CoxeterGraph(range(1, n + 1), [(i, i + 1, 1) for i in range(1, n)])


def type_d4_graph():
    """A central vertex 0 joined to three leaves."""
    return CoxeterGraph((0, 1, 2, 3), [(0, 1, 1), (0, 2, 1), (0, 3, 1)])


NAMED_GRAPHS = {
    "kronecker": kronecker_graph,
    "triangle": triangle_graph,
    "a2": lambda: type_a_graph(2),
    "a3": lambda: type_a_graph(3),
    "a4": lambda: type_a_graph(4),
    "d4": type_d4_graph,
}


# ---------------------------------------------------------------------------
# reflection representation

def _identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _reflection_matrix(graph, v):
    """Matrix of s_v on root coordinates; only row v differs from identity."""
    n = len(graph.vertices)
    i = graph.index(v)
    rows = []
    for r, a in enumerate(graph.vertices):
        if r != i:
            rows.append(tuple(1 if c == r else 0 for c in range(n)))
        else:
            rows.append(
                tuple(
                    (1 if c == r else 0) - graph.cartan(a, b)
                    for c, b in enumerate(graph.vertices)
                )
            )
    return tuple(rows)


def _mat_mul(a, b):
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def canonical_form(graph, word):
    """Image of the word in the reflection representation. Two words are
    equal in the group iff their canonical forms coincide."""
    m = _identity(len(graph.vertices))
    for letter in word:
        m = _mat_mul(m, _reflection_matrix(graph, letter))
    return m


def length_increases(graph, word, i):
    """True iff appending letter i on the right increases the length.

    Decided by positivity of w(alpha_i): column i of the matrix of w.
    """
    m = canonical_form(graph, word) if not _is_matrix(word) else word
    col = graph.index(i)
    return all(row[col] >= 0 for row in m)


def _is_matrix(w):
    return bool(w) and isinstance(w[0], tuple)


def is_reduced(graph, word):
    """Stepwise length check along the prefixes."""
    m = _identity(len(graph.vertices))
    for letter in word:
        if letter not in graph._index:
            raise ValueError(f"letter {letter} is not a vertex")
        if not length_increases(graph, m, letter):
            return False
        m = _mat_mul(m, _reflection_matrix(graph, letter))
    return True


def reduced_words(graph, word, cap=100000):
    """All reduced words of the element, by closure under commutation
    (d_ij = 0) and braid (d_ij = 1) rewrites. Edges with d_ij >= 2 impose
    no relation. Raises NotReduced on non-reduced input, CapExceeded when
    the closure grows past cap."""
    word = tuple(word)
    if not is_reduced(graph, word):
        raise NotReduced(f"word {word} is not reduced")
    seen = {word}
    frontier = [word]
    while frontier:
        nxt = []
        for w in frontier:
            for t in range(len(w) - 1):
                a, b = w[t], w[t + 1]
                if a != b and graph.d(a, b) == 0:
                    u = w[:t] + (b, a) + w[t + 2 :]
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            for t in range(len(w) - 2):
                a, b, c = w[t], w[t + 1], w[t + 2]
                if a == c and a != b and graph.d(a, b) == 1:
                    u = w[:t] + (b, a, b) + w[t + 3 :]
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            if len(seen) > cap:
                raise CapExceeded(f"closure exceeded {cap} words")
        frontier = nxt
    return seen


def element_length(graph, word):
    """Coxeter length of the product of the letters (word need not be
    reduced); each letter raises or lowers the length by one."""
    m = _identity(len(graph.vertices))
    ell = 0
    for letter in word:
        if letter not in graph._index:
            raise ValueError(f"letter {letter} is not a vertex")
        ell += 1 if length_increases(graph, m, letter) else -1
        m = _mat_mul(m, _reflection_matrix(graph, letter))
    return ell


def words_of_length(graph, length, cap=1000000):
    """All reduced words of exactly the given length, sorted."""
    level = [((), _identity(len(graph.vertices)))]
    for _ in range(length):
        nxt = []
        for w, m in level:
            for v in graph.vertices:
                if length_increases(graph, m, v):
                    nxt.append(
                        (w + (v,), _mat_mul(m, _reflection_matrix(graph, v)))
                    )
            if len(nxt) > cap:
                raise CapExceeded(f"more than {cap} words at one length")
        level = nxt
    return sorted(w for w, _ in level)


def _positive_definite(graph, subset):
    """Exact Sylvester test on the Cartan matrix of the induced subgraph."""
    subset = sorted(subset)
    n = len(subset)
    mat = [
        [Fraction(graph.cartan(a, b)) for b in subset] for a in subset
    ]
    for k in range(1, n + 1):
        det = _det([row[:k] for row in mat[:k]])
        if det <= 0:
            return False
    return True


def _det(rows):
    rows = [list(r) for r in rows]
    n = len(rows)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det *= rows[c][c]
        for r in range(c + 1, n):
            if rows[r][c]:
                f = rows[r][c] / rows[c][c]
                for k in range(c, n):
                    rows[r][k] -= f * rows[c][k]
    return det


def longest_element(graph, subset=None):
    """A reduced word for the longest element of the parabolic generated by
    subset (default: all vertices). The parabolic must be finite and the
    induced subgraph simply laced, else InfiniteParabolic."""
    subset = sorted(graph.vertices if subset is None else subset)
    for a in subset:
        for b in subset:
            if a < b and graph.d(a, b) > 1:
                raise InfiniteParabolic(f"multiple edge {a},{b} in parabolic")
    if not _positive_definite(graph, subset):
        raise InfiniteParabolic(f"parabolic {subset} is infinite")
    word = []
    m = _identity(len(graph.vertices))
    for _ in range(10000):
        step = next(
            (i for i in subset if length_increases(graph, m, i)), None
        )
        if step is None:
            return tuple(word)
        word.append(step)
        m = _mat_mul(m, _reflection_matrix(graph, step))
    raise InfiniteParabolic("ascent did not terminate")


def enumerate_group(graph, cap):
    """BFS of the whole group: {canonical matrix: length}. CapExceeded when
    more than cap elements appear (used to guard tests on small groups)."""
    n = len(graph.vertices)
    gens = {v: _reflection_matrix(graph, v) for v in graph.vertices}
    ident = _identity(n)
    lengths = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for v, s in gens.items():
                u = _mat_mul(m, s)
                if u not in lengths:
                    lengths[u] = lengths[m] + 1
                    nxt.append(u)
                    if len(lengths) > cap:
                        raise CapExceeded(f"group larger than {cap}")
        frontier = nxt
    return lengths
