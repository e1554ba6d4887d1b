"""Quivers with frozen vertices and Fomin-Zelevinsky mutation.

Arrows are stored as a multiplicity map (src, tgt) -> count, so loops and
2-cycles are representable; mutation refuses to run at a vertex touching
either. The exchange-matrix picture is kept alongside the quiver picture and
the two are tied together by to_exchange_matrix.
"""

from .errors import FrozenVertex, LoopAtVertex, NotMutable, TwoCycleAtVertex


class MultiQuiver:
    __slots__ = ("vertices", "frozen", "arrows")

    def __init__(self, vertices, frozen=(), arrows=None):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertices")
        vset = set(self.vertices)
        self.frozen = frozenset(frozen)
        if not self.frozen <= vset:
            raise ValueError("frozen set contains non-vertices")
        self.arrows = {}
        for (s, t), m in (arrows or {}).items():
            if s not in vset or t not in vset:
                raise ValueError(f"arrow endpoint {(s, t)} not a vertex")
            if m < 0:
                raise ValueError("negative multiplicity")
            if m:
                self.arrows[(s, t)] = m

    def mult(self, s, t):
        return self.arrows.get((s, t), 0)

    def exchangeable(self):
        return tuple(v for v in self.vertices if v not in self.frozen)

    def __eq__(self, other):
        return (
            isinstance(other, MultiQuiver)
            and set(self.vertices) == set(other.vertices)
            and self.frozen == other.frozen
            and self.arrows == other.arrows
        )

    def __repr__(self):
        parts = [f"{s}->{t}x{m}" for (s, t), m in sorted(self.arrows.items(), key=str)]
        return f"MultiQuiver({list(self.vertices)}, frozen={sorted(self.frozen, key=str)}, {' '.join(parts)})"

    def to_json(self):
        return {
            "vertices": [
                {"id": v, "frozen": v in self.frozen} for v in self.vertices
            ],
            "arrows": [
                {"from": s, "to": t, "mult": m}
                for (s, t), m in sorted(self.arrows.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))
            ],
        }

    @classmethod
    def from_json(cls, obj):
        vertices = [v["id"] for v in obj["vertices"]]
        frozen = [v["id"] for v in obj["vertices"] if v.get("frozen")]
        arrows = {}
        for a in obj["arrows"]:
            key = (a["from"], a["to"])
            arrows[key] = arrows.get(key, 0) + a.get("mult", 1)
        return cls(vertices, frozen, arrows)

    def to_dot(self):
        lines = ["digraph {"]
        for v in self.vertices:
            shape = "box" if v in self.frozen else "ellipse"
            lines.append(f'  "{v}" [shape={shape}];')
        for (s, t), m in sorted(self.arrows.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
            label = f' [label="{m}"]' if m > 1 else ""
            lines.append(f'  "{s}" -> "{t}"{label};')
        lines.append("}")
        return "\n".join(lines) + "\n"


def detect(q):
    """Loops, and 2-cycles touching at least one exchangeable vertex."""
    loops = sorted((v for (v, w) in q.arrows if v == w), key=str)
    two = set()
    for (s, t) in q.arrows:
        if s != t and (t, s) in q.arrows:
            if s not in q.frozen or t not in q.frozen:
                two.add(frozenset((s, t)))
    return {
        "loops": loops,
        "two_cycles": sorted((sorted(p, key=str) for p in two), key=str),
    }


def fz_mutate(q, k):
    """Quiver mutation at exchangeable vertex k.

    Composites i -> j through k are added with product multiplicity except
    when i and j are both frozen; arrows at k are reversed; 2-cycles are
    cancelled. Arrows between frozen vertices never change.
    """
    if k not in q.vertices:
        raise ValueError(f"{k} is not a vertex")
    if k in q.frozen:
        raise FrozenVertex(f"vertex {k} is frozen")
    if q.mult(k, k):
        raise LoopAtVertex(f"loop at {k}")
    for v in q.vertices:
        if v != k and q.mult(v, k) and q.mult(k, v):
            raise TwoCycleAtVertex(f"2-cycle between {v} and {k}")
    new = {}
    for (s, t), m in q.arrows.items():
        if s == k:
            new[(t, k)] = new.get((t, k), 0) + m
        elif t == k:
            new[(k, s)] = new.get((k, s), 0) + m
        else:
            new[(s, t)] = new.get((s, t), 0) + m
    touched = set()
    for (s, t1), m1 in q.arrows.items():
        if t1 != k:
            continue
        for (s2, t), m2 in q.arrows.items():
            if s2 != k:
                continue
            if s in q.frozen and t in q.frozen:
                continue
            new[(s, t)] = new.get((s, t), 0) + m1 * m2
            touched.add((s, t))
    # cancellation only where composites landed; arrows elsewhere, in
    # particular between two frozen vertices, pass through unchanged
    for (s, t) in sorted(touched, key=str):
        a, b = new.get((s, t), 0), new.get((t, s), 0)
        if a and b:
            c = min(a, b)
            new[(s, t)] = a - c
            new[(t, s)] = b - c
    return MultiQuiver(q.vertices, q.frozen, new)


class ExchangeMatrix:
    """m x n integer matrix whose top n x n block is skew-symmetric; the
    first n rows index the exchangeable vertices, the rest are frozen."""

    __slots__ = ("rows", "n", "labels")

    def __init__(self, rows, n, labels=None):
        self.rows = tuple(tuple(int(x) for x in r) for r in rows)
        self.n = n
        self.labels = tuple(labels) if labels is not None else None
        if any(len(r) != n for r in self.rows):
            raise ValueError("row width must equal n")
        if len(self.rows) < n:
            raise ValueError("fewer rows than exchangeable columns")
        for i in range(n):
            for j in range(n):
                if self.rows[i][j] != -self.rows[j][i]:
                    raise ValueError("top block is not skew-symmetric")

    def __eq__(self, other):
        return (
            isinstance(other, ExchangeMatrix)
            and self.rows == other.rows
            and self.n == other.n
        )

    def __repr__(self):
        return f"ExchangeMatrix({[list(r) for r in self.rows]}, n={self.n})"


def matrix_mutate(b, k):
    """Fomin-Zelevinsky matrix mutation at column k (0-based, k < n)."""
    if not 0 <= k < b.n:
        raise ValueError("mutation index out of range")
    rows = []
    for i, row in enumerate(b.rows):
        out = []
        for j in range(b.n):
            if i == k or j == k:
                out.append(-row[j])
            else:
                bik, bkj = row[k], b.rows[k][j]
                out.append(row[j] + (abs(bik) * bkj + bik * abs(bkj)) // 2)
        rows.append(out)
    return ExchangeMatrix(rows, b.n, b.labels)


def to_exchange_matrix(q):
    """Exchange matrix of a quiver: b_ij = #(i->j) - #(j->i), rows over all
    vertices (exchangeable first), columns over exchangeable vertices.
    Arrows between two frozen vertices are not recorded. NotMutable if a
    loop or 2-cycle touches an exchangeable vertex."""
    bad = detect(q)
    for v in bad["loops"]:
        if v not in q.frozen:
            raise NotMutable(f"loop at exchangeable vertex {v}")
    if bad["two_cycles"]:
        raise NotMutable(f"2-cycle at {bad['two_cycles'][0]}")
    ex = q.exchangeable()
    order = list(ex) + [v for v in q.vertices if v in q.frozen]
    rows = []
    for i in order:
        rows.append([q.mult(i, j) - q.mult(j, i) for j in ex])
    return ExchangeMatrix(rows, len(ex), order)


def _refine_colors(q):
    color = {v: (v in q.frozen,) for v in q.vertices}
    for _ in range(len(q.vertices)):
        sigs = {}
        for v in q.vertices:
            outs = sorted(
                (m, color[t]) for (s, t), m in q.arrows.items() if s == v
            )
            ins = sorted(
                (m, color[s]) for (s, t), m in q.arrows.items() if t == v
            )
            sigs[v] = (color[v], tuple(outs), tuple(ins))
        # number classes by sorted signature so colors agree across quivers
        palette = {sig: i for i, sig in enumerate(sorted(set(sigs.values())))}
        nxt = {v: palette[sigs[v]] for v in q.vertices}
        if len(set(nxt.values())) == len(set(color.values())):
            return nxt
        color = {v: (c,) for v, c in nxt.items()}
    return {v: c[0] for v, c in color.items()}


def is_isomorphic(a, b):
    """A frozen-preserving isomorphism {a-vertex: b-vertex}, or None."""
    if len(a.vertices) != len(b.vertices):
        return None
    if len(a.frozen) != len(b.frozen):
        return None
    if sorted(a.arrows.values()) != sorted(b.arrows.values()):
        return None
    ca, cb = _refine_colors(a), _refine_colors(b)
    freq_a = sorted((c, v in a.frozen) for v, c in ca.items())
    freq_b = sorted((c, v in b.frozen) for v, c in cb.items())
    if sorted(x[0] for x in freq_a) != sorted(x[0] for x in freq_b):
        return None
    averts = sorted(a.vertices, key=lambda v: (ca[v], str(v)))
    by_color = {}
    for v in b.vertices:
        by_color.setdefault(cb[v], []).append(v)

    mapping = {}
    used = set()

    def ok(v, w):
        if (v in a.frozen) != (w in b.frozen):
            return False
        for u, x in mapping.items():
            if a.mult(v, u) != b.mult(w, x) or a.mult(u, v) != b.mult(x, w):
                return False
        return a.mult(v, v) == b.mult(w, w)

    def search(idx):
        if idx == len(averts):
            return True
        v = averts[idx]
        for w in by_color.get(ca[v], []):
            if w not in used and ok(v, w):
                mapping[v] = w
                used.add(w)
                if search(idx + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    if search(0):
        return dict(mapping)
    return None


def drop_frozen_arrows(q):
    """Copy of q without the arrows joining two frozen vertices (the part
    of an extended quiver that mutation neither reads nor writes)."""
    arrows = {
        (s, t): m
        for (s, t), m in q.arrows.items()
        if not (s in q.frozen and t in q.frozen)
    }
    return MultiQuiver(q.vertices, q.frozen, arrows)
