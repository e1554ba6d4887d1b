"""Truncated preprojective algebras and their module calculus.

The algebra of a graph is built degree by degree: degree d sits inside
(degree d-1) tensor (arrows) and is cut out by pushing the mesh relations up
from degree d-2. A basis of path classes and a rewriting table for arrow
extension are kept per degree, so multiplication never revisits the
relations. On top of that sit per-column graded ideals (the chains attached
to words), quotient modules with their arrow actions, exact hom/ext
computations, Gabriel quivers of summand families, summand exchange, and
flag counting over prime fields.

Conventions, fixed once: products compose right to left (x*y means "y then
x"), a path acts on a left module by applying its arrows in traversal
order, and e_a * x * e_b is nonzero only when the path runs from b to a.
Columns of an ideal are the right idempotent slices X e_j.
"""

from fractions import Fraction

from .coxeter import CoxeterGraph  # noqa: F401  (re-exported for callers)
from .errors import (
    DecomposableSummand,
    InterpolationInconsistent,
    NoExchange,
    NotClusterTilting,
    TruncationTooSmall,
)
from .foundation import SparseMatrix, rank_kernel, rank_mod
from .quiver import MultiQuiver

# ---------------------------------------------------------------------------
# reduced row echelon utilities over Q, rows as {col: Fraction}


def _rref_insert(piv, row):
    """Insert one row into a fully reduced pivot map {col: row}. Returns the
    pivot column if the row added a dimension, else None."""
    row = dict(row)
    while row:
        c = min(row)
        if c in piv:
            f = row.pop(c)
            for k, v in piv[c].items():
                if k == c:
                    continue
                w = row.get(k, Fraction(0)) - f * v
                if w:
                    row[k] = w
                else:
                    row.pop(k, None)
        else:
            f = row[c]
            if f != 1:
                row = {k: v / f for k, v in row.items()}
            for c2, r2 in piv.items():
                if c in r2:
                    f2 = r2.pop(c)
                    for k, v in row.items():
                        if k == c:
                            continue
                        w = r2.get(k, Fraction(0)) - f2 * v
                        if w:
                            r2[k] = w
                        else:
                            r2.pop(k, None)
            piv[c] = row
            return c
    return None


def _rref_rows(rows):
    piv = {}
    for row in rows:
        _rref_insert(piv, row)
    return piv


def _reduce_vec(piv, vec):
    """Residue of vec modulo the span described by a reduced pivot map."""
    vec = dict(vec)
    for c in sorted(set(vec) & set(piv)):
        f = vec.pop(c, None)
        if f is None:
            continue
        for k, v in piv[c].items():
            if k == c:
                continue
            w = vec.get(k, Fraction(0)) - f * v
            if w:
                vec[k] = w
            else:
                vec.pop(k, None)
    return vec


def _rref_key(piv):
    """Canonical hashable form of a reduced pivot map."""
    out = []
    for c in sorted(piv):
        row = piv[c]
        out.append((c, tuple(sorted((k, v) for k, v in row.items()))))
    return tuple(out)


# ---------------------------------------------------------------------------
# the truncated algebra


class _Arrow:
    __slots__ = ("idx", "name", "src", "tgt", "star")

    def __init__(self, idx, name, src, tgt):
        self.idx = idx
        self.name = name
        self.src = src
        self.tgt = tgt
        self.star = None

    def __repr__(self):
        return f"{self.name}:{self.src}->{self.tgt}"


class GradedAlgebra:
    """Preprojective algebra of a graph, truncated to path length < N."""

    def __init__(self, graph, N):
        if N < 1:
            raise ValueError("need at least the idempotent degree")
        self.graph = graph
        self.N = N
        self._build_arrows()
        self._build_basis()
        self._right_cache = {}
        self._chain_cache = {}
        self._module_cache = {}

    # -- construction

    def _build_arrows(self):
        arrows = []
        for a, b, m in self.graph.edges():
            for c in range(m):
                arrows.append((f"a{a}_{b}_{c}", a, b))
                arrows.append((f"s{a}_{b}_{c}", b, a))
        arrows.sort()
        self.arrows = tuple(
            _Arrow(i, name, s, t) for i, (name, s, t) in enumerate(arrows)
        )
        self.arrow_by_name = {ar.name: ar for ar in self.arrows}
        for ar in self.arrows:
            partner = "s" + ar.name[1:] if ar.name[0] == "a" else "a" + ar.name[1:]
            ar.star = self.arrow_by_name[partner].idx
        self.arrows_from = {v: [] for v in self.graph.vertices}
        for ar in self.arrows:
            self.arrows_from[ar.src].append(ar)
        # mesh relation at v: sum over forward arrows beta into v of
        # beta*beta^ minus sum over forward arrows alpha out of v of
        # alpha^*alpha, written as traversal pairs based at v.
        self.relations = {v: [] for v in self.graph.vertices}
        for ar in self.arrows:
            if ar.name[0] != "a":
                continue
            self.relations[ar.tgt].append((1, (ar.star, ar.idx)))
            self.relations[ar.src].append((-1, (ar.idx, ar.star)))

    def _build_basis(self):
        # basis[d]: list of (start, arrows, end); path_index[d]: key -> idx
        self.basis = [[(v, (), v) for v in self.graph.vertices]]
        self.e_index = {v: i for i, (v, _, _) in enumerate(self.basis[0])}
        self.cand_reduce = [None]
        for d in range(1, self.N):
            prev = self.basis[d - 1]
            cands = []
            for b_idx, (s, path, e) in enumerate(prev):
                for ar in self.arrows_from[e]:
                    cands.append(((s, path + (ar.idx,), ar.tgt), b_idx, ar.idx))
            cands.sort(key=lambda t: t[0][:2])
            col_of = {(b, a): c for c, (_, b, a) in enumerate(cands)}
            rows = []
            if d >= 2:
                below = self.cand_reduce[d - 1]
                for b2, (s2, _, e2) in enumerate(self.basis[d - 2]):
                    row = {}
                    for sign, (g, dl) in self.relations[e2]:
                        mid = below.get((b2, g))
                        if not mid:
                            continue
                        for b1, coef in mid.items():
                            col = col_of.get((b1, dl))
                            if col is None:
                                continue
                            w = row.get(col, Fraction(0)) + sign * coef
                            if w:
                                row[col] = w
                            else:
                                row.pop(col, None)
                    if row:
                        rows.append(row)
            piv = _rref_rows(rows)
            new_basis = []
            col_to_new = {}
            for c, (key, _, _) in enumerate(cands):
                if c not in piv:
                    col_to_new[c] = len(new_basis)
                    new_basis.append(key)
            table = {}
            for c, (_, b_idx, a_idx) in enumerate(cands):
                if c in piv:
                    vec = {}
                    for k, v in piv[c].items():
                        if k != c:
                            vec[col_to_new[k]] = -v
                    table[(b_idx, a_idx)] = vec
                else:
                    table[(b_idx, a_idx)] = {col_to_new[c]: Fraction(1)}
            self.basis.append(new_basis)
            self.cand_reduce.append(table)

    # -- queries

    def dim(self, d):
        if 0 <= d < self.N:
            return len(self.basis[d])
        return 0

    def dims(self):
        return [len(b) for b in self.basis]

    def start_of(self, d, idx):
        return self.basis[d][idx][0]

    def end_of(self, d, idx):
        return self.basis[d][idx][2]

    def indices_with_start(self, d, j):
        return [i for i, (s, _, _) in enumerate(self.basis[d]) if s == j]

    # -- multiplication

    def apply_arrow(self, d, vec, a_idx):
        """Left multiply a degree-d vector by one arrow (degree d+1)."""
        if d + 1 >= self.N:
            return {}
        table = self.cand_reduce[d + 1]
        out = {}
        for b, c in vec.items():
            red = table.get((b, a_idx))
            if not red:
                continue
            for k, v in red.items():
                w = out.get(k, Fraction(0)) + c * v
                if w:
                    out[k] = w
                else:
                    out.pop(k, None)
        return out

    def right_mult_basis(self, d, b_idx, a_idx):
        """basis[d][b_idx] * arrow, a degree-(d+1) vector, cached."""
        key = (d, b_idx, a_idx)
        hit = self._right_cache.get(key)
        if hit is not None:
            return hit
        ar = self.arrows[a_idx]
        s, path, _ = self.basis[d][b_idx]
        if s != ar.tgt or d + 1 >= self.N:
            vec = {}
        else:
            unit = self.cand_reduce[1][(self.e_index[ar.src], a_idx)]
            vec = dict(unit)
            deg = 1
            for step in path:
                vec = self.apply_arrow(deg, vec, step)
                deg += 1
        self._right_cache[key] = vec
        return vec

    def right_mult(self, d, vec, a_idx):
        out = {}
        for b, c in vec.items():
            for k, v in self.right_mult_basis(d, b, a_idx).items():
                w = out.get(k, Fraction(0)) + c * v
                if w:
                    out[k] = w
                else:
                    out.pop(k, None)
        return out

    def mul(self, a, b):
        """Product of elements a=(deg, vec) and b=(deg, vec): b then a."""
        da, va = a
        db, vb = b
        d = da + db
        if d >= self.N or not va or not vb:
            return (d, {})
        out = {}
        for ia, ca in va.items():
            s, path, _ = self.basis[da][ia]
            vec = {k: v for k, v in vb.items() if self.end_of(db, k) == s}
            deg = db
            for step in path:
                if not vec:
                    break
                vec = self.apply_arrow(deg, vec, step)
                deg += 1
            for k, v in vec.items():
                w = out.get(k, Fraction(0)) + ca * v
                if w:
                    out[k] = w
                else:
                    out.pop(k, None)
        return (d, out)

    def unit_e(self, v):
        return (0, {self.e_index[v]: Fraction(1)})

    def unit_arrow(self, name):
        ar = self.arrow_by_name[name]
        vec = self.cand_reduce[1][(self.e_index[ar.src], ar.idx)]
        return (1, dict(vec))


_ALG_CACHE = {}


def build_truncated(graph, N):
    """Memoized constructor; degrees 0 .. N-1 survive, J^N = 0."""
    key = (graph.key(), N)
    alg = _ALG_CACHE.get(key)
    if alg is None:
        alg = GradedAlgebra(graph, N)
        _ALG_CACHE[key] = alg
    return alg


# ---------------------------------------------------------------------------
# graded ideals, stored per column


class GradedIdeal:
    """Two-sided graded ideal, stored as one reduced echelon subspace per
    column (right idempotent slice) per degree."""

    __slots__ = ("alg", "cols", "elementary_vertex")

    def __init__(self, alg, cols, elementary_vertex=None):
        self.alg = alg
        self.cols = cols
        self.elementary_vertex = elementary_vertex

    def col_dim(self, j, d):
        return len(self.cols[j][d])

    def dim(self):
        return sum(
            len(degs[d]) for degs in self.cols.values() for d in range(self.alg.N)
        )

    def dims_by_degree(self):
        return [
            sum(len(self.cols[j][d]) for j in self.cols) for d in range(self.alg.N)
        ]

    def refined_dim(self, a, b):
        """dim of e_a * (ideal) * e_b, summed over degrees."""
        alg = self.alg
        total = 0
        for d in range(alg.N):
            for c in self.cols[b][d]:
                if alg.end_of(d, c) == a:
                    total += 1
        return total

    def key(self):
        return tuple(
            (j, tuple(_rref_key(self.cols[j][d]) for d in range(self.alg.N)))
            for j in sorted(self.cols, key=str)
        )

    def __eq__(self, other):
        return (
            isinstance(other, GradedIdeal)
            and self.alg is other.alg
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash(self.key())

    def contains(self, other):
        for j in self.cols:
            for d in range(self.alg.N):
                mine = self.cols[j][d]
                for row in other.cols[j][d].values():
                    if _reduce_vec(mine, row):
                        return False
        return True


def _full_rows(alg, j, d):
    return {i: {i: Fraction(1)} for i in alg.indices_with_start(d, j)}


def unit_ideal(alg):
    cols = {
        j: [_full_rows(alg, j, d) for d in range(alg.N)] for j in alg.graph.vertices
    }
    return GradedIdeal(alg, cols)


def zero_ideal(alg):
    cols = {j: [{} for _ in range(alg.N)] for j in alg.graph.vertices}
    return GradedIdeal(alg, cols)


def jpow_ideal(alg, l):
    """The l-th power of the radical as a graded ideal."""
    cols = {
        j: [
            _full_rows(alg, j, d) if d >= l else {} for d in range(alg.N)
        ]
        for j in alg.graph.vertices
    }
    return GradedIdeal(alg, cols)


def ideal_i(alg, i):
    """The tilting ideal generated by the idempotents away from i."""
    if i not in alg.graph._index:
        raise ValueError(f"{i} is not a vertex")
    cols = {}
    for j in alg.graph.vertices:
        if j == i:
            cols[j] = [{} if d == 0 else _full_rows(alg, j, d) for d in range(alg.N)]
        else:
            cols[j] = [_full_rows(alg, j, d) for d in range(alg.N)]
    return GradedIdeal(alg, cols, elementary_vertex=i)


def _split_by_end(alg, d, vec):
    parts = {}
    for k, v in vec.items():
        parts.setdefault(alg.end_of(d, k), {})[k] = v
    return parts.values()


def _product_elementary(t, i):
    """t * I_i: only column i changes, becoming sum over arrows alpha with
    source i of (t e_{target alpha}) * alpha."""
    alg = t.alg
    new_col = [{} for _ in range(alg.N)]
    for d in range(1, alg.N):
        piv = {}
        for ar in alg.arrows_from[i]:
            for row in t.cols[ar.tgt][d - 1].values():
                out = alg.right_mult(d - 1, row, ar.idx)
                if out:
                    _rref_insert(piv, out)
        new_col[d] = piv
    cols = dict(t.cols)
    cols[i] = new_col
    return GradedIdeal(alg, cols)


def _product_general(a, b):
    alg = a.alg
    cols = {}
    for j in alg.graph.vertices:
        per_degree = [{} for _ in range(alg.N)]
        for d in range(alg.N):
            piv = {}
            for dy in range(d + 1):
                for row_y in b.cols[j][dy].values():
                    for part in _split_by_end(alg, dy, row_y):
                        v = alg.end_of(dy, next(iter(part)))
                        for row_x in a.cols[v][d - dy].values():
                            _, out = alg.mul((d - dy, row_x), (dy, part))
                            if out:
                                _rref_insert(piv, out)
            per_degree[d] = piv
        cols[j] = per_degree
    return GradedIdeal(alg, cols)


def ideal_product(a, b):
    """Product ideal a*b. Both arguments must be two-sided (every ideal made
    by this module is); the result is two-sided again."""
    if a.alg is not b.alg:
        raise ValueError("ideals over different algebras")
    if b.elementary_vertex is not None:
        return _product_elementary(a, b.elementary_vertex)
    return _product_general(a, b)


def ideal_for_word(alg, word):
    """Chain T_1, ..., T_k of ideals attached to the letters of the word.
    Memoized by prefix; the word need not be reduced."""
    word = tuple(word)
    out = []
    t = unit_ideal(alg)
    for k in range(1, len(word) + 1):
        prefix = word[:k]
        hit = alg._chain_cache.get(prefix)
        if hit is None:
            hit = ideal_product(t, ideal_i(alg, word[k - 1]))
            alg._chain_cache[prefix] = hit
        t = hit
        out.append(t)
    return out


def quotient_dim(alg, ideal):
    total = sum(alg.dim(d) for d in range(alg.N))
    return total - ideal.dim()


def hom_formula(alg, word, k, m):
    """dim Hom of the k-th chain summand into the m-th, by ideal slices:
    e_a (T_{k+1,m} / T_m) e_b with a, b the k-th and m-th letters."""
    word = tuple(word)
    a, b = word[k - 1], word[m - 1]
    t_m = ideal_for_word(alg, word[:m])[-1]
    if k >= m:
        full = sum(
            1
            for d in range(alg.N)
            for i in alg.indices_with_start(d, b)
            if alg.end_of(d, i) == a
        )
        return full - t_m.refined_dim(a, b)
    upper = ideal_for_word(alg, word[k:m])[-1]
    return upper.refined_dim(a, b) - t_m.refined_dim(a, b)


# ---------------------------------------------------------------------------
# module representations


class ModuleRep:
    """Representation of the doubled quiver satisfying the mesh relations.

    dims: {vertex: n}; mats: {arrow name: tuple-of-rows matrix} where the
    matrix of an arrow u -> v has shape (n_v, n_u) and acts on column
    vectors. grading, when present, tags each basis vector with its degree
    and every arrow raises degree by exactly one.
    """

    __slots__ = ("graph", "dims", "mats", "grading", "p")

    def __init__(self, graph, dims, mats, grading=None, p=None):
        self.graph = graph
        self.dims = dict(dims)
        self.mats = dict(mats)
        self.grading = grading
        self.p = p

    def dim(self):
        return sum(self.dims.values())

    def dim_vector(self):
        return {v: self.dims.get(v, 0) for v in self.graph.vertices}

    def zero(self):
        return self.dim() == 0

    def validate(self, alg):
        for ar in alg.arrows:
            mat = self.mats[ar.name]
            if len(mat) != self.dims[ar.tgt] or (
                mat and len(mat[0]) != self.dims[ar.src]
            ):
                raise ValueError(f"shape mismatch at {ar.name}")
        for v in self.graph.vertices:
            n = self.dims[v]
            acc = [[Fraction(0)] * n for _ in range(n)]
            for sign, (g, dl) in alg.relations[v]:
                first = self.mats[alg.arrows[g].name]
                second = self.mats[alg.arrows[dl].name]
                prod = _mat_mul(second, first)
                for i in range(n):
                    for j in range(n):
                        acc[i][j] += sign * prod[i][j]
            if any(any(x for x in row) for row in acc):
                raise ValueError(f"mesh relation fails at vertex {v}")
        return True

    def to_json(self):
        from .foundation import rat_str

        out = {
            "graph": self.graph.to_json(),
            "dims": {str(v): self.dims[v] for v in self.graph.vertices},
            "mats": {
                name: [[rat_str(x) for x in row] for row in mat]
                for name, mat in sorted(self.mats.items())
            },
        }
        if self.grading is not None:
            out["grading"] = {
                str(v): list(self.grading[v]) for v in self.graph.vertices
            }
        return out

    @classmethod
    def from_json(cls, obj):
        from .foundation import rat_parse

        graph = CoxeterGraph.from_json(obj["graph"])
        label = {str(v): v for v in graph.vertices}
        dims = {label[k]: n for k, n in obj["dims"].items()}
        mats = {
            name: tuple(tuple(rat_parse(x) for x in row) for row in mat)
            for name, mat in obj["mats"].items()
        }
        grading = None
        if obj.get("grading") is not None:
            grading = {label[k]: tuple(t) for k, t in obj["grading"].items()}
        return cls(graph, dims, mats, grading)


def _mat_mul(a, b):
    if not a or not b:
        return tuple(tuple() for _ in a)
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def _mat_vec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def _zeros(r, c):
    return [[Fraction(0)] * c for _ in range(r)]


def quotient_module(alg, ideal, j=None, allow_top=False):
    """Module (Lambda / ideal) e_j, or the whole quotient when j is None.

    Vertex spaces are spanned by the non-pivot path classes, graded by path
    length. Raises TruncationTooSmall if the quotient survives to the top
    degree of the algebra (unless allow_top)."""
    cache_key = (ideal.key(), j, allow_top)
    hit = alg._module_cache.get(cache_key)
    if hit is not None:
        return hit
    graph = alg.graph
    columns = [j] if j is not None else list(graph.vertices)
    members = {v: [] for v in graph.vertices}
    for col in columns:
        for d in range(alg.N):
            piv = ideal.cols[col][d]
            for idx in alg.indices_with_start(d, col):
                if idx not in piv:
                    members[alg.end_of(d, idx)].append((d, col, idx))
    for v in members:
        members[v].sort()
    if not allow_top and any(
        d == alg.N - 1 for v in members for (d, _, _) in members[v]
    ):
        raise TruncationTooSmall(
            "quotient reaches the top degree; rebuild with a larger N"
        )
    pos = {}
    for v in members:
        for i, key in enumerate(members[v]):
            pos[key] = (v, i)
    dims = {v: len(members[v]) for v in graph.vertices}
    mats = {}
    for ar in alg.arrows:
        mat = _zeros(dims[ar.tgt], dims[ar.src])
        for (d, col, idx) in members[ar.src]:
            _, src_i = pos[(d, col, idx)]
            img = alg.apply_arrow(d, {idx: Fraction(1)}, ar.idx)
            if img and d + 1 < alg.N:
                img = _reduce_vec(ideal.cols[col][d + 1], img)
            for k, v in img.items():
                tgt_v, tgt_i = pos[(d + 1, col, k)]
                mat[tgt_i][src_i] = v
        mats[ar.name] = tuple(tuple(row) for row in mat)
    grading = {v: tuple(d for (d, _, _) in members[v]) for v in graph.vertices}
    mod = ModuleRep(graph, dims, mats, grading)
    alg._module_cache[cache_key] = mod
    return mod


def projective(alg, v, length=None):
    """P_v truncated to the given Loewy length (default: the whole algebra)."""
    if length is None:
        return quotient_module(alg, zero_ideal(alg), v, allow_top=True)
    return quotient_module(alg, jpow_ideal(alg, length), v, allow_top=length >= alg.N)


def chain_modules(alg, word):
    """The summand family of a word: k-th member is (Lambda/T_k) e_{i_k}."""
    word = tuple(word)
    chain = ideal_for_word(alg, word)
    return [
        quotient_module(alg, chain[k - 1], word[k - 1]) for k in range(1, len(word) + 1)
    ]


def composition_multiplicities(x):
    return x.dim_vector()


# -- radical filtration


class _Subspace:
    __slots__ = ("piv",)

    def __init__(self):
        self.piv = {}

    def insert(self, vec):
        return _rref_insert(self.piv, vec) is not None

    def contains(self, vec):
        return not _reduce_vec(self.piv, vec)

    def dim(self):
        return len(self.piv)

    def basis_rows(self):
        return [dict(r) for r in self.piv.values()]


def _radical_spaces(x):
    """Per-vertex span of all incoming arrow images."""
    spaces = {v: _Subspace() for v in x.graph.vertices}
    for name, mat in x.mats.items():
        ar_tgt = _arrow_tgt(x.graph, name)
        for col in zip(*mat) if mat and mat[0] else ():
            vec = {i: c for i, c in enumerate(col) if c}
            if vec:
                spaces[ar_tgt].insert(vec)
    return spaces


def _arrow_tgt(graph, name):
    kind = name[0]
    body = name[1:]
    a, b, _ = body.split("_")
    a, b = _parse_label(graph, a), _parse_label(graph, b)
    return b if kind == "a" else a


def _arrow_src(graph, name):
    kind = name[0]
    body = name[1:]
    a, b, _ = body.split("_")
    a, b = _parse_label(graph, a), _parse_label(graph, b)
    return a if kind == "a" else b


def _parse_label(graph, s):
    for v in graph.vertices:
        if str(v) == s:
            return v
    raise ValueError(f"unknown vertex label {s}")


def radical_filtration(x):
    """List of layer dim vectors, top first, computed from arrow images."""
    current = {
        v: [_unit_vec(i) for i in range(x.dims[v])] for v in x.graph.vertices
    }
    layers = []
    while any(current[v] for v in current):
        nxt = {v: _Subspace() for v in x.graph.vertices}
        for name, mat in x.mats.items():
            tgt = _arrow_tgt(x.graph, name)
            src = _arrow_src(x.graph, name)
            for vec in current[src]:
                img = _apply_mat(mat, vec)
                if img:
                    nxt[tgt].insert(img)
        layer = {
            v: len(current[v]) - nxt[v].dim() for v in x.graph.vertices
        }
        layers.append(layer)
        current = {v: nxt[v].basis_rows() for v in x.graph.vertices}
        if len(layers) > x.dim() + 1:
            raise ValueError("radical filtration does not terminate")
    return layers


def _unit_vec(i):
    return {i: Fraction(1)}


def _apply_mat(mat, vec):
    out = {}
    for j, c in vec.items():
        for i in range(len(mat)):
            w = mat[i][j]
            if w:
                s = out.get(i, Fraction(0)) + c * w
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
    return out


def loewy_length(x):
    return len(radical_filtration(x))


# -- hom spaces


def _hom_systems(x, y):
    """Unknowns and equations of the intertwiner system, split into graded
    blocks when both modules carry gradings."""
    graded = x.grading is not None and y.grading is not None
    blocks = {}

    def block_for(shift):
        if shift not in blocks:
            blocks[shift] = {"unknowns": [], "index": {}, "rows": []}
        return blocks[shift]

    for v in x.graph.vertices:
        for r in range(y.dims[v]):
            for c in range(x.dims[v]):
                s = (y.grading[v][r] - x.grading[v][c]) if graded else 0
                blk = block_for(s)
                blk["index"][(v, r, c)] = len(blk["unknowns"])
                blk["unknowns"].append((v, r, c))
    for name in x.mats:
        u = _arrow_src(x.graph, name)
        v = _arrow_tgt(x.graph, name)
        gx = x.mats[name]
        gy = y.mats[name]
        for i in range(y.dims[v]):
            for j in range(x.dims[u]):
                s = (y.grading[v][i] - x.grading[u][j] - 1) if graded else 0
                blk = blocks.get(s)
                if blk is None:
                    continue
                row = {}
                for c in range(x.dims[v]):
                    w = gx[c][j]
                    if w:
                        k = blk["index"].get((v, i, c))
                        if k is not None:
                            row[k] = row.get(k, Fraction(0)) + w
                for r in range(y.dims[u]):
                    w = gy[i][r]
                    if w:
                        k = blk["index"].get((u, r, j))
                        if k is not None:
                            row[k] = row.get(k, Fraction(0)) - w
                row = {k: v2 for k, v2 in row.items() if v2}
                if row:
                    blk["rows"].append(row)
    return blocks


def hom(x, y):
    """Basis of Hom(x, y): list of {vertex: matrix} intertwiners."""
    if x.graph.key() != y.graph.key():
        raise ValueError("modules over different graphs")
    out = []
    blocks = _hom_systems(x, y)
    for s in sorted(blocks):
        blk = blocks[s]
        n = len(blk["unknowns"])
        if n == 0:
            continue
        mat = SparseMatrix.from_rows(blk["rows"], ncols=n)
        _, kern = rank_kernel(mat)
        for vec in kern:
            phi = {
                v: _zeros(y.dims[v], x.dims[v]) for v in x.graph.vertices
            }
            for k, (v, r, c) in enumerate(blk["unknowns"]):
                phi[v][r][c] = vec[k]
            out.append({v: tuple(tuple(r) for r in m) for v, m in phi.items()})
    return out


def hom_dim(x, y):
    return len(hom(x, y))


def hom_dim_mod(x, y, p):
    """Upper bound for dim Hom over Q: the same system solved over F_p."""
    total = 0
    for blk in _hom_systems(x, y).values():
        n = len(blk["unknowns"])
        if n == 0:
            continue
        mat = SparseMatrix.from_rows(blk["rows"], ncols=n)
        total += n - rank_mod(mat, p)
    return total


def compose(g, f):
    """g after f, as vertex-wise matrix product."""
    return {v: _mat_mul(g[v], f[v]) for v in g}


def identity_hom(x):
    return {
        v: tuple(
            tuple(Fraction(1) if i == j else Fraction(0) for j in range(x.dims[v]))
            for i in range(x.dims[v])
        )
        for v in x.graph.vertices
    }


def _hom_to_vec(phi, order):
    # rows may come out zero-width after composing through a zero space
    out = {}
    for k, (v, r, c) in enumerate(order):
        mat = phi[v]
        if r < len(mat) and c < len(mat[r]):
            val = mat[r][c]
            if val:
                out[k] = val
    return out


def _hom_order(x, y):
    return [
        (v, r, c)
        for v in x.graph.vertices
        for r in range(y.dims[v])
        for c in range(x.dims[v])
    ]


def modules_isomorphic(x, y):
    """Isomorphism test for indecomposable modules: x ~ y iff the identity
    of x lies in the span of composites Hom(y,x) o Hom(x,y)."""
    if x.dim_vector() != y.dim_vector():
        return False
    if x.dim() == 0:
        return True
    fwd = hom(x, y)
    bwd = hom(y, x)
    if not fwd or not bwd:
        return False
    order = _hom_order(x, x)
    span = _Subspace()
    for f in fwd:
        for g in bwd:
            span.insert(_hom_to_vec(compose(g, f), order))
    return span.contains(_hom_to_vec(identity_hom(x), order))


def end_radical(x):
    """Radical of End(x) via the trace form of the regular representation.
    Returns (endo basis, radical basis). Valid over Q (char 0)."""
    basis = hom(x, x)
    k = len(basis)
    order = _hom_order(x, x)
    coords = _Coords([_hom_to_vec(b, order) for b in basis])
    lmats = []
    for b in basis:
        cols = []
        for c in basis:
            prod = compose(b, c)
            cols.append(coords.express(_hom_to_vec(prod, order)))
        lmats.append(tuple(zip(*cols)))
    gram = [
        [_trace(_mat_mul(lmats[i], lmats[j])) for j in range(k)] for i in range(k)
    ]
    mat = SparseMatrix.from_rows(gram, ncols=k)
    _, kern = rank_kernel(mat)
    rad = []
    for vec in kern:
        phi = None
        for i, c in enumerate(vec):
            if not c:
                continue
            scaled = {v: _scale_mat(basis[i][v], c) for v in basis[i]}
            phi = scaled if phi is None else _add_homs(phi, scaled)
        rad.append(phi)
    return basis, rad


def _trace(m):
    return sum(m[i][i] for i in range(len(m)))


def _scale_mat(m, c):
    return tuple(tuple(c * x for x in row) for row in m)


def _add_homs(a, b):
    return {
        v: tuple(
            tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a[v], b[v])
        )
        for v in a
    }


class _Coords:
    """Express vectors in a fixed independent family (rows as dicts)."""

    def __init__(self, rows):
        self.piv = {}
        self.combos = {}
        for i, row in enumerate(rows):
            work = dict(row)
            combo = {i: Fraction(1)}
            while work:
                c = min(work)
                if c in self.piv:
                    f = work.pop(c)
                    for k, v in self.piv[c].items():
                        if k == c:
                            continue
                        w = work.get(k, Fraction(0)) - f * v
                        if w:
                            work[k] = w
                        else:
                            work.pop(k, None)
                    for k, v in self.combos[c].items():
                        combo[k] = combo.get(k, Fraction(0)) - f * v
                else:
                    f = work[c]
                    work = {k: v / f for k, v in work.items()}
                    combo = {k: v / f for k, v in combo.items()}
                    self.piv[c] = work
                    self.combos[c] = combo
                    break
            else:
                raise ValueError("dependent family given to _Coords")
        self.n = len(rows)

    def express(self, vec):
        """Coefficient tuple, or raises if vec is outside the span."""
        work = dict(vec)
        out = [Fraction(0)] * self.n
        while work:
            c = min(work)
            if c not in self.piv:
                raise ValueError("vector outside span")
            f = work.pop(c)
            for k, v in self.piv[c].items():
                if k == c:
                    continue
                w = work.get(k, Fraction(0)) - f * v
                if w:
                    work[k] = w
                else:
                    work.pop(k, None)
            for k, v in self.combos[c].items():
                out[k] += f * v
        return tuple(out)


def indecomposable(x):
    basis, rad = end_radical(x)
    return len(basis) - len(rad) == 1


def end_quiver(family, frozen=()):
    """Gabriel quiver of End of the direct sum of the family.

    Vertices are 1-based summand indices; arrows a -> c count irreducible
    maps family[a] -> family[c] as dim rad - dim rad^2. Frozen indices are
    marked frozen on the result."""
    r = len(family)
    frozen = frozenset(frozen)
    homs = {}
    rads = {}
    for a in range(r):
        for b in range(r):
            if a == b:
                basis, rad = end_radical(family[a])
                if len(basis) - len(rad) != 1:
                    raise DecomposableSummand(f"summand {a + 1} decomposes")
                homs[(a, b)] = basis
                rads[(a, b)] = rad
            else:
                homs[(a, b)] = hom(family[a], family[b])
                rads[(a, b)] = homs[(a, b)]
    for a in range(r):
        for b in range(a + 1, r):
            if family[a].dim_vector() == family[b].dim_vector() and modules_isomorphic(
                family[a], family[b]
            ):
                raise NotClusterTilting(f"summands {a + 1} and {b + 1} isomorphic")
    arrows = {}
    for a in range(r):
        for c in range(r):
            d1 = len(rads[(a, c)])
            if d1 == 0:
                continue
            order = _hom_order(family[a], family[c])
            span = _Subspace()
            for b in range(r):
                for f in rads[(a, b)]:
                    for g in rads[(b, c)]:
                        span.insert(_hom_to_vec(compose(g, f), order))
            d2 = span.dim()
            if d1 - d2 > 0:
                arrows[(a + 1, c + 1)] = d1 - d2
    return MultiQuiver(range(1, r + 1), frozen, arrows)


# -- covers, syzygies, extensions


def _top_lifts(x):
    """Greedy standard-basis lifts of the top, per vertex, as (v, index)."""
    rad = _radical_spaces(x)
    lifts = []
    for v in x.graph.vertices:
        space = rad[v]
        for i in range(x.dims[v]):
            vec = _unit_vec(i)
            if not space.contains(vec):
                space.insert(vec)
                lifts.append((v, i))
    return lifts


def direct_sum(parts):
    if not parts:
        raise ValueError("empty direct sum")
    graph = parts[0].graph
    dims = {v: sum(p.dims[v] for p in parts) for v in graph.vertices}
    graded = all(p.grading is not None for p in parts)
    grading = (
        {v: tuple(t for p in parts for t in p.grading[v]) for v in graph.vertices}
        if graded
        else None
    )
    mats = {}
    for name in parts[0].mats:
        tgt = _arrow_tgt(graph, name)
        src = _arrow_src(graph, name)
        mat = _zeros(dims[tgt], dims[src])
        ro = co = 0
        for p in parts:
            pm = p.mats[name]
            for i in range(p.dims[tgt]):
                for j in range(p.dims[src]):
                    mat[ro + i][co + j] = pm[i][j]
            ro += p.dims[tgt]
            co += p.dims[src]
        mats[name] = tuple(tuple(row) for row in mat)
    return ModuleRep(graph, dims, mats, grading)


def _shift_grading(mod, s):
    if mod.grading is None:
        return mod
    return ModuleRep(
        mod.graph,
        mod.dims,
        mod.mats,
        {v: tuple(t + s for t in mod.grading[v]) for v in mod.grading},
    )


def _act_path(x, arrows_names, vec, start_vertex):
    v = start_vertex
    cur = vec
    for name in arrows_names:
        cur = _apply_mat(x.mats[name], cur)
        v = _arrow_tgt(x.graph, name)
        if not cur:
            break
    return cur


def projective_cover_map(alg, x):
    """(P0, phi) with P0 the minimal graded cover and phi: P0 -> x given as
    per-vertex matrices (columns: P0 basis, rows: x basis)."""
    lifts = _top_lifts(x)
    if not lifts:
        raise ValueError("zero module has no cover")
    parts = []
    images = []
    for (v, i) in lifts:
        p = projective(alg, v)
        if x.grading is not None:
            p = _shift_grading(p, x.grading[v][i])
        parts.append(p)
        images.append((v, i))
    p0 = direct_sum(parts)
    # phi columns follow the direct-sum layout: per part, per vertex index
    phi = {u: _zeros(x.dims[u], p0.dims[u]) for u in x.graph.vertices}
    offsets = {u: 0 for u in x.graph.vertices}
    for part_idx, p in enumerate(parts):
        v, i = images[part_idx]
        base = projective(alg, v)  # unshifted copy for path data
        # basis members of P_v are path classes (d, v, idx) ordered as built
        members = {u: [] for u in x.graph.vertices}
        for d in range(alg.N):
            for idx in alg.indices_with_start(d, v):
                members[alg.end_of(d, idx)].append((d, idx))
        for u in members:
            members[u].sort()
        for u in x.graph.vertices:
            col0 = offsets[u]
            for local, (d, idx) in enumerate(members[u]):
                s, path, e = alg.basis[d][idx]
                names = tuple(alg.arrows[a].name for a in path)
                img = _act_path(x, names, _unit_vec(i), v)
                for r, cval in img.items():
                    phi[u][r][col0 + local] = cval
            offsets[u] += base.dims[u]
    return p0, {u: tuple(tuple(r) for r in m) for u, m in phi.items()}


def _kernel_module(big, phi, graded_ok=True):
    """Kernel of a surjective-or-not module map phi: big -> x as a module,
    with restricted arrow actions. Grading survives when phi is graded."""
    graph = big.graph
    kerbasis = {}
    tags = {}
    graded = graded_ok and big.grading is not None
    for u in graph.vertices:
        rows = []
        ncols = big.dims[u]
        mat = phi[u]
        for r in range(len(mat)):
            row = {c: mat[r][c] for c in range(ncols) if mat[r][c]}
            if row:
                rows.append(row)
        if graded:
            vecs = []
            by_tag = {}
            for c in range(ncols):
                by_tag.setdefault(big.grading[u][c], []).append(c)
            for t in sorted(by_tag):
                cols = by_tag[t]
                colmap = {c: k for k, c in enumerate(cols)}
                sub = []
                for row in rows:
                    pick = {colmap[c]: v for c, v in row.items() if c in colmap}
                    if pick:
                        sub.append(pick)
                m = SparseMatrix.from_rows(sub, ncols=len(cols))
                _, kern = rank_kernel(m)
                for vec in kern:
                    full = [Fraction(0)] * ncols
                    for k, c in enumerate(cols):
                        full[c] = vec[k]
                    vecs.append((t, tuple(full)))
            kerbasis[u] = [v for _, v in vecs]
            tags[u] = tuple(t for t, _ in vecs)
        else:
            m = SparseMatrix.from_rows(rows, ncols=ncols)
            _, kern = rank_kernel(m)
            kerbasis[u] = [tuple(v) for v in kern]
            tags[u] = None
    dims = {u: len(kerbasis[u]) for u in graph.vertices}
    coords = {u: _Coords([_dense_to_dict(v) for v in kerbasis[u]]) for u in graph.vertices}
    mats = {}
    for name in big.mats:
        src = _arrow_src(graph, name)
        tgt = _arrow_tgt(graph, name)
        mat = _zeros(dims[tgt], dims[src])
        for jv, vec in enumerate(kerbasis[src]):
            img = _apply_mat(big.mats[name], _dense_to_dict(vec))
            if img:
                coeffs = coords[tgt].express(img)
                for iv, c in enumerate(coeffs):
                    mat[iv][jv] = c
        mats[name] = tuple(tuple(row) for row in mat)
    grading = {u: tags[u] for u in graph.vertices} if graded else None
    return ModuleRep(graph, dims, mats, grading)


def _dense_to_dict(vec):
    return {i: c for i, c in enumerate(vec) if c}


def syzygy(alg, x):
    """Kernel of the minimal projective cover over the truncated algebra."""
    if x.zero() or not _top_lifts(x):
        raise ValueError("zero module")
    p0, phi = projective_cover_map(alg, x)
    for u in x.graph.vertices:
        rows = [
            {c: phi[u][r][c] for c in range(p0.dims[u]) if phi[u][r][c]}
            for r in range(x.dims[u])
        ]
        m = SparseMatrix.from_rows(rows, ncols=p0.dims[u])
        rank, _ = rank_kernel(m)
        if rank != x.dims[u]:
            raise ValueError("cover map is not surjective")
    graded_ok = x.grading is not None and p0.grading is not None
    return _kernel_module(p0, phi, graded_ok=graded_ok)


_EXT_PRIMES = (1000003, 2000003)


def ext1(x, y, recheck=True):
    """dim Ext^1(x, y) = dim coker(Hom(P0, y) -> Hom(Omega x, y)).

    Computed over a truncation long enough that every extension of x by y
    is a module over it; recomputed one degree higher and compared. The
    cokernel dimension equals dim Hom(Omega, y) - dim Hom(P0, y) +
    dim Hom(x, y); the first term is bounded above by its prime-field
    value, which certifies vanishing without the exact solve."""
    if x.graph.key() != y.graph.key():
        raise ValueError("modules over different graphs")
    if x.zero() or y.zero():
        return 0
    n_needed = loewy_length(x) + loewy_length(y) + 1
    vals = []
    for n in ((n_needed, n_needed + 1) if recheck else (n_needed,)):
        alg = build_truncated(x.graph, n)
        vals.append(_ext1_at(alg, x, y))
    if recheck and vals[0] != vals[1]:
        raise TruncationTooSmall(f"ext unstable: {vals[0]} vs {vals[1]}")
    return vals[0]


def _ext1_at(alg, x, y):
    p0, phi = projective_cover_map(alg, x)
    omega = _kernel_module(p0, phi, graded_ok=x.grading is not None)
    if omega.zero():
        return 0
    h_p0y = sum(y.dims[v] for (v, _) in _top_lifts(x))
    h_xy = hom_dim(x, y)
    upper = None
    for p in _EXT_PRIMES:
        try:
            bound = hom_dim_mod(omega, y, p)
        except ZeroDivisionError:
            continue
        upper = bound if upper is None else min(upper, bound)
        if upper - h_p0y + h_xy <= 0:
            break
    if upper is not None:
        cand = upper - h_p0y + h_xy
        if cand < 0:
            raise ArithmeticError("modular bound below zero, logic error")
        if cand == 0:
            return 0
    exact = hom_dim(omega, y)
    val = exact - h_p0y + h_xy
    if val < 0:
        raise ArithmeticError("negative ext dimension, logic error")
    return val


def _assert_rigid(family):
    for a, ma in enumerate(family):
        for b, mb in enumerate(family):
            if a < b and ma.dim_vector() == mb.dim_vector() and modules_isomorphic(
                ma, mb
            ):
                raise NotClusterTilting(f"summands {a + 1} and {b + 1} isomorphic")
            e = ext1(ma, mb, recheck=False)
            if e:
                raise NotClusterTilting(
                    f"ext1 between summands {a + 1} and {b + 1} is {e}"
                )


def exchange_summand(family, idx, frozen=(), validate=True):
    """Exchange the idx-th (1-based) summand of a rigid family.

    Returns {"replacement": module, "right": ..., "left": ...} where the
    right record is the kernel sequence of the minimal right approximation
    ad(U) -> X and the left record the cokernel sequence of the minimal
    left approximation X -> ad(U). NoExchange when idx is frozen or the
    approximation fails to be onto/into."""
    r = len(family)
    if not 1 <= idx <= r:
        raise ValueError("index out of range")
    if idx in set(frozen):
        raise NoExchange(f"summand {idx} is frozen")
    for i, m in enumerate(family):
        if not indecomposable(m):
            raise DecomposableSummand(f"summand {i + 1} decomposes")
    if validate:
        _assert_rigid(family)
    x = family[idx - 1]
    others = [(j + 1, m) for j, m in enumerate(family) if j + 1 != idx]

    rad_between = {}
    for (j1, m1) in others:
        for (j2, m2) in others:
            if j1 == j2:
                _, rad = end_radical(m1)
                rad_between[(j1, j2)] = rad
            else:
                rad_between[(j1, j2)] = hom(m1, m2)

    def minimal_multiplicities(hom_to_x, rad_pairs, compose_side):
        # returns chosen lift homs per member
        out = {}
        for (j, _m) in others:
            hx = hom_to_x[j]
            if not hx:
                out[j] = []
                continue
            order_j = rad_pairs[j]
            span = _Subspace()
            for (j2, _m2) in others:
                for h2 in hom_to_x[j2]:
                    for rr in rad_between[
                        (j, j2) if compose_side == "right" else (j2, j)
                    ]:
                        prod = (
                            compose(h2, rr)
                            if compose_side == "right"
                            else compose(rr, h2)
                        )
                        span.insert(_hom_to_vec(prod, order_j))
            lifts = []
            for h in hx:
                vec = _hom_to_vec(h, order_j)
                if not span.contains(vec):
                    span.insert(vec)
                    lifts.append(h)
            out[j] = lifts
        return out

    # right approximation: B = sum U_j^{d_j} -> X
    hom_to_x = {j: hom(m, x) for (j, m) in others}
    order_to = {j: _hom_order(m, x) for (j, m) in others}
    lifts_r = minimal_multiplicities(hom_to_x, order_to, "right")
    parts = []
    maps = []
    for (j, m) in others:
        for h in lifts_r[j]:
            parts.append(m)
            maps.append(h)
    if not parts:
        raise NoExchange("no approximation maps available")
    b_mod = direct_sum(parts)
    phi = {u: _zeros(x.dims[u], b_mod.dims[u]) for u in x.graph.vertices}
    off = {u: 0 for u in x.graph.vertices}
    for part, h in zip(parts, maps):
        for u in x.graph.vertices:
            for rr in range(x.dims[u]):
                for cc in range(part.dims[u]):
                    phi[u][rr][off[u] + cc] = h[u][rr][cc]
        for u in x.graph.vertices:
            off[u] += part.dims[u]
    phi = {u: tuple(tuple(rw) for rw in m) for u, m in phi.items()}
    for u in x.graph.vertices:
        rows = [
            {c: phi[u][rr][c] for c in range(b_mod.dims[u]) if phi[u][rr][c]}
            for rr in range(x.dims[u])
        ]
        rank, _ = rank_kernel(SparseMatrix.from_rows(rows, ncols=b_mod.dims[u]))
        if rank != x.dims[u]:
            raise NoExchange("right approximation is not surjective")
    y = _kernel_module(b_mod, phi, graded_ok=False)
    if y.zero() or not indecomposable(y):
        raise NoExchange("kernel of the approximation is not indecomposable")
    if modules_isomorphic(x, y):
        raise NoExchange("exchange returned an isomorphic summand")

    # left approximation: X -> B' = sum U_j^{c_j}
    hom_from_x = {j: hom(x, m) for (j, m) in others}
    order_from = {j: _hom_order(x, m) for (j, m) in others}
    lifts_l = minimal_multiplicities(hom_from_x, order_from, "left")
    parts_l = []
    maps_l = []
    for (j, m) in others:
        for h in lifts_l[j]:
            parts_l.append(m)
            maps_l.append(h)
    if not parts_l:
        raise NoExchange("no left approximation maps available")
    bp_mod = direct_sum(parts_l)
    g = {u: _zeros(bp_mod.dims[u], x.dims[u]) for u in x.graph.vertices}
    off = {u: 0 for u in x.graph.vertices}
    for part, h in zip(parts_l, maps_l):
        for u in x.graph.vertices:
            for rr in range(part.dims[u]):
                for cc in range(x.dims[u]):
                    g[u][off[u] + rr][cc] = h[u][rr][cc]
        for u in x.graph.vertices:
            off[u] += part.dims[u]
    # injectivity: kernel of stacked map must vanish
    for u in x.graph.vertices:
        rows = [
            {c: g[u][rr][c] for c in range(x.dims[u]) if g[u][rr][c]}
            for rr in range(bp_mod.dims[u])
        ]
        rank, _ = rank_kernel(SparseMatrix.from_rows(rows, ncols=x.dims[u]))
        if rank != x.dims[u]:
            raise NoExchange("left approximation is not injective")
    coker = _cokernel_module(bp_mod, g, x)
    if not modules_isomorphic(coker, y):
        raise NoExchange("left and right exchanges disagree")

    e1 = ext1(x, y, recheck=False)
    e2 = ext1(y, x, recheck=False)
    if e1 != 1 or e2 != 1:
        raise NoExchange(f"exchange pair has ext dims {e1}, {e2}")

    mult_r = {j: len(lifts_r[j]) for (j, _m) in others if lifts_r[j]}
    mult_l = {j: len(lifts_l[j]) for (j, _m) in others if lifts_l[j]}
    return {
        "replacement": y,
        "right": {"middle": mult_r},
        "left": {"middle": mult_l},
    }


def _cokernel_module(big, g, x):
    """Cokernel of an injective map g: x -> big."""
    graph = big.graph
    img = {u: _Subspace() for u in graph.vertices}
    for u in graph.vertices:
        for cc in range(x.dims[u]):
            vec = {rr: g[u][rr][cc] for rr in range(big.dims[u]) if g[u][rr][cc]}
            if vec:
                img[u].insert(vec)
    # complement coordinates: big basis vectors not pivotal in the image
    keep = {}
    for u in graph.vertices:
        piv = img[u].piv
        keep[u] = [i for i in range(big.dims[u]) if i not in piv]
    index = {u: {i: k for k, i in enumerate(keep[u])} for u in graph.vertices}
    dims = {u: len(keep[u]) for u in graph.vertices}
    mats = {}
    for name in big.mats:
        src = _arrow_src(graph, name)
        tgt = _arrow_tgt(graph, name)
        mat = _zeros(dims[tgt], dims[src])
        for k, i in enumerate(keep[src]):
            imgv = _apply_mat(big.mats[name], _unit_vec(i))
            imgv = _reduce_vec(img[tgt].piv, imgv)
            for rr, c in imgv.items():
                mat[index[tgt][rr]][k] = c
        mats[name] = tuple(tuple(row) for row in mat)
    return ModuleRep(graph, dims, mats, None)


# ---------------------------------------------------------------------------
# prime fields: flag counting


def reduce_mod_p(x, p):
    """The same representation with entries in F_p. All denominators must
    be prime to p."""
    mats = {}
    for name, mat in x.mats.items():
        rows = []
        for row in mat:
            out = []
            for val in row:
                den = val.denominator % p
                if den == 0:
                    raise InterpolationInconsistent(
                        f"denominator of {val} vanishes mod {p}"
                    )
                out.append(val.numerator * pow(den, p - 2, p) % p)
            rows.append(tuple(out))
        mats[name] = tuple(rows)
    return ModuleRep(x.graph, x.dims, mats, x.grading, p=p)


def _mp_nullspace(rows, ncols, p):
    """Nullspace basis over F_p; rows are dense tuples."""
    work = [list(r) for r in rows]
    pivots = []
    rr = 0
    for c in range(ncols):
        piv = next((i for i in range(rr, len(work)) if work[i][c] % p), None)
        if piv is None:
            continue
        work[rr], work[piv] = work[piv], work[rr]
        inv = pow(work[rr][c], p - 2, p)
        work[rr] = [v * inv % p for v in work[rr]]
        for i in range(len(work)):
            if i != rr and work[i][c] % p:
                f = work[i][c]
                work[i] = [(a - f * b) % p for a, b in zip(work[i], work[rr])]
        pivots.append(c)
        rr += 1
        if rr == len(work):
            break
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = [0] * ncols
        vec[free] = 1
        for i, c in enumerate(pivots):
            vec[c] = (-work[i][free]) % p
        basis.append(tuple(vec))
    return basis


def _mp_express(basis, vec, p):
    """Solve sum c_k basis[k] = vec over F_p (basis independent)."""
    n = len(vec)
    cols = len(basis)
    aug = []
    for i in range(n):
        aug.append([basis[k][i] % p for k in range(cols)] + [vec[i] % p])
    # gaussian elimination on the augmented system
    rr = 0
    where = [-1] * cols
    for c in range(cols):
        piv = next((i for i in range(rr, n) if aug[i][c]), None)
        if piv is None:
            continue
        aug[rr], aug[piv] = aug[piv], aug[rr]
        inv = pow(aug[rr][c], p - 2, p)
        aug[rr] = [v * inv % p for v in aug[rr]]
        for i in range(n):
            if i != rr and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(a - f * b) % p for a, b in zip(aug[i], aug[rr])]
        where[c] = rr
        rr += 1
    out = [0] * cols
    for c in range(cols):
        if where[c] >= 0:
            out[c] = aug[where[c]][cols]
    # consistency check
    for i in range(n):
        s = sum(basis[k][i] * out[k] for k in range(cols)) % p
        if s != vec[i] % p:
            raise ArithmeticError("vector outside span mod p")
    return out


def count_flags(x, flag_type):
    """Number of chains M = M_0 > M_1 > ... > M_k = 0 over F_p with
    M_{l-1}/M_l isomorphic to the simple at flag_type[l-1] (top first)."""
    if x.p is None:
        raise ValueError("count_flags needs a mod-p representation")
    p = x.p
    graph = x.graph
    arrows_in = {v: [] for v in graph.vertices}
    arrows_out = {v: [] for v in graph.vertices}
    for name in x.mats:
        arrows_in[_arrow_tgt(graph, name)].append(name)
        arrows_out[_arrow_src(graph, name)].append(name)

    def rec(dims, mats, t):
        if not t:
            return 1 if all(n == 0 for n in dims.values()) else 0
        i = t[0]
        ni = dims[i]
        if ni == 0:
            return 0
        if sum(dims.values()) < len(t):
            return 0
        # radical part at i: images of all incoming arrows
        rad_rows = []
        for name in arrows_in[i]:
            src = _arrow_src(graph, name)
            mat = mats[name]
            for j in range(dims[src]):
                rad_rows.append(tuple(mat[r][j] for r in range(ni)))
        # functionals on M_i vanishing on the radical part
        funcs = _mp_nullspace(rad_rows, ni, p)
        if not funcs:
            return 0
        total = 0
        mu = len(funcs)
        for combo in _proj_points(mu, p):
            lam = [0] * ni
            for k, c in enumerate(combo):
                if c:
                    lam = [(a + c * b) % p for a, b in zip(lam, funcs[k])]
            hyper = _mp_nullspace([tuple(lam)], ni, p)
            new_dims = dict(dims)
            new_dims[i] = ni - 1
            new_mats = dict(mats)
            for name in arrows_out[i]:
                mat = mats[name]
                tgt = _arrow_tgt(graph, name)
                cols = []
                for hv in hyper:
                    cols.append(
                        tuple(
                            sum(mat[r][j] * hv[j] for j in range(ni)) % p
                            for r in range(dims[tgt])
                        )
                    )
                new_mats[name] = tuple(
                    tuple(col[r] for col in cols) for r in range(dims[tgt])
                )
            for name in arrows_in[i]:
                mat = mats[name]
                src = _arrow_src(graph, name)
                cols = []
                for j in range(dims[src]):
                    vec = tuple(mat[r][j] for r in range(ni))
                    cols.append(_mp_express(hyper, vec, p))
                new_mats[name] = tuple(
                    tuple(col[r] for col in cols) for r in range(ni - 1)
                )
            total += rec(new_dims, new_mats, t[1:])
        return total

    dims0 = dict(x.dims)
    mats0 = {name: mat for name, mat in x.mats.items()}
    return rec(dims0, mats0, tuple(flag_type))


def _proj_points(mu, p):
    """Canonical representatives of lines in F_p^mu: first nonzero entry 1."""
    for lead in range(mu):
        tail = mu - lead - 1
        count = p**tail
        for code in range(count):
            combo = [0] * lead + [1]
            rem = code
            for _ in range(tail):
                combo.append(rem % p)
                rem //= p
            yield tuple(combo)


DEFAULT_FLAG_PRIMES = (2, 3, 5, 7, 11)


def flag_euler(x, flag_type, primes=DEFAULT_FLAG_PRIMES):
    """Euler characteristic of the flag variety: counts over several primes
    are interpolated by one integer polynomial in q and evaluated at 1."""
    if len(primes) < 2:
        raise ValueError("need at least two primes")
    counts = []
    for p in primes:
        counts.append(count_flags(reduce_mod_p(x, p), flag_type))
    # fit through all but the last point, then verify the last
    pts = list(zip(primes, counts))
    poly = _lagrange(pts[:-1])
    last_p, last_c = pts[-1]
    if _poly_eval(poly, last_p) != last_c:
        raise InterpolationInconsistent(
            f"flag counts {counts} at primes {primes} fit no polynomial"
        )
    for c in poly:
        if c.denominator != 1:
            raise InterpolationInconsistent(f"non-integer coefficient {c}")
    val = _poly_eval(poly, 1)
    return int(val)


def _lagrange(points):
    """Coefficient list (ascending) of the interpolating polynomial."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        # numerator polynomial prod_{j != i} (X - xj)
        base = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            base = _poly_mul_linear(base, -Fraction(xj))
            denom *= Fraction(xi - xj)
        scale = Fraction(yi) / denom
        for k, c in enumerate(base):
            coeffs[k] += scale * c
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul_linear(poly, const):
    # poly * (X + const)
    out = [Fraction(0)] * (len(poly) + 1)
    for i, c in enumerate(poly):
        out[i] += c * const
        out[i + 1] += c
    return out


def _poly_eval(poly, xval):
    acc = Fraction(0)
    for c in reversed(poly):
        acc = acc * xval + c
    return acc
