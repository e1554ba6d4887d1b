"""Exact arithmetic kernel: rationals, sparse matrices over Q, Laurent
polynomials with exact division, and dense polynomials in a single formal
parameter t with Laurent coefficients.

Everything downstream (ideal chains, module homs, minor identities) reduces
to the handful of primitives in this file, so they are written for
correctness first: no floats anywhere, all division is exact or raises.
"""

import json
from fractions import Fraction

from .errors import NotDivisible

# Rationals are stdlib Fractions throughout. Fraction already guarantees
# lowest terms and positive denominator, which is the normal form we need.
Rational = Fraction


def rat_str(x):
    """Serialize a rational as "p" or "p/q" (lowest terms, q > 0)."""
    return str(Fraction(x))


def rat_parse(s):
    return Fraction(s)


def canonical_json(obj):
    """Byte-stable JSON: sorted keys, no whitespace, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


# ---------------------------------------------------------------------------
# sparse matrices and exact linear algebra


class SparseMatrix:
    """Dict-of-entries matrix over Q. Zero entries are never stored."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows, ncols, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {}
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < nrows and 0 <= c < ncols):
                    raise ValueError(f"index {(r, c)} out of range")
                v = Fraction(v)
                if v:
                    self.entries[(r, c)] = v

    @classmethod
    def from_rows(cls, rows, ncols=None):
        """rows: list of dense lists or of {col: value} dicts."""
        ents = {}
        width = ncols or 0
        for r, row in enumerate(rows):
            items = row.items() if isinstance(row, dict) else enumerate(row)
            for c, v in items:
                v = Fraction(v)
                width = max(width, c + 1)
                if v:
                    ents[(r, c)] = v
        return cls(len(rows), width if ncols is None else ncols, ents)

    def row_dicts(self):
        rows = [dict() for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, {len(self.entries)} nz)"


def _scale_to_int(row):
    """Scale a {col: Fraction} row to primitive integers."""
    if not row:
        return {}
    denom = 1
    for v in row.values():
        denom = denom * v.denominator // _gcd(denom, v.denominator)
    ints = {c: int(v * denom) for c, v in row.items()}
    g = 0
    for v in ints.values():
        g = _gcd(g, abs(v))
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _bareiss_echelon(rows):
    """Fraction-free elimination. Input rows are {col: int} dicts (consumed).

    Returns the pivot list [(col, row_dict)] with strictly increasing pivot
    columns. Intermediate entries stay integral by the Bareiss identity.
    """
    rows = [r for r in rows if r]
    pivots = []
    prev = 1
    while rows:
        col = min(min(r) for r in rows)
        cand = [r for r in rows if col in r]
        piv = min(cand, key=lambda r: (abs(r[col]), len(r)))
        rows.remove(piv)
        f1 = piv[col]
        nxt = []
        for r in rows:
            f2 = r.pop(col, 0)
            nr = {}
            if f2 == 0:
                # still rescale by f1/prev so later exact divisions hold
                for k, v in r.items():
                    v = f1 * v
                    if v % prev:
                        raise ArithmeticError("bareiss exact division failed")
                    nr[k] = v // prev
            else:
                keys = set(r)
                keys.update(piv)
                keys.discard(col)
                for k in keys:
                    v = f1 * r.get(k, 0) - f2 * piv.get(k, 0)
                    if v % prev:
                        raise ArithmeticError("bareiss exact division failed")
                    v //= prev
                    if v:
                        nr[k] = v
            if nr:
                nxt.append(nr)
        rows = nxt
        pivots.append((col, piv))
        prev = f1
    return pivots


def _kernel_from_echelon(pivots, ncols):
    pivot_cols = [c for c, _ in pivots]
    pivot_set = set(pivot_cols)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        x = {free: Fraction(1)}
        for col, row in reversed(pivots):
            s = Fraction(0)
            for k, v in row.items():
                if k != col and k in x:
                    s += v * x[k]
            if s:
                x[col] = -s / Fraction(row[col])
        vec = [x.get(c, Fraction(0)) for c in range(ncols)]
        basis.append(_primitive(vec))
    return basis


def _primitive(vec):
    """Scale a rational vector to a primitive integer vector, first nonzero
    entry positive."""
    denom = 1
    for v in vec:
        denom = denom * v.denominator // _gcd(denom, v.denominator)
    ints = [int(v * denom) for v in vec]
    g = 0
    for v in ints:
        g = _gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-u for u in ints]
            break
    return tuple(Fraction(v) for v in ints)


def rank_kernel(m):
    """Exact rank and a kernel basis of m over Q.

    Kernel vectors are primitive integer vectors with the first nonzero
    coordinate positive, so the output is deterministic.
    """
    int_rows = [_scale_to_int(r) for r in m.row_dicts()]
    pivots = _bareiss_echelon(int_rows)
    return len(pivots), _kernel_from_echelon(pivots, m.ncols)


def rank_mod(m, p):
    """Rank of m over the prime field F_p.

    Raises ZeroDivisionError if some denominator vanishes mod p; callers
    retry with a different prime.
    """
    rows = []
    for r in m.row_dicts():
        row = {}
        for c, v in r.items():
            num = v.numerator % p
            den = v.denominator % p
            if den == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            val = num * pow(den, p - 2, p) % p
            if val:
                row[c] = val
        if row:
            rows.append(row)
    rank = 0
    while rows:
        col = min(min(r) for r in rows)
        piv = next(r for r in rows if col in r)
        rows.remove(piv)
        inv = pow(piv[col], p - 2, p)
        nxt = []
        for r in rows:
            f = r.pop(col, 0)
            if f:
                f = f * inv % p
                for k, v in piv.items():
                    if k == col:
                        continue
                    w = (r.get(k, 0) - f * v) % p
                    if w:
                        r[k] = w
                    else:
                        r.pop(k, None)
            if r:
                nxt.append(r)
        rows = nxt
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """Laurent polynomial over Q in named variables.

    Variables are sorted lexicographically at construction; exponent tuples
    are keyed to that order. Zero coefficients are dropped, so equality is
    plain structural equality.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms):
        variables = tuple(variables)
        order = sorted(range(len(variables)), key=lambda i: variables[i])
        svars = tuple(variables[i] for i in order)
        if len(set(svars)) != len(svars):
            raise ValueError("duplicate variable names")
        st = {}
        for exp, coef in terms.items():
            coef = Fraction(coef)
            if not coef:
                continue
            if len(exp) != len(svars):
                raise ValueError("exponent arity mismatch")
            key = tuple(exp[i] for i in order)
            st[key] = st.get(key, Fraction(0)) + coef
            if not st[key]:
                del st[key]
        self.vars = svars
        self.terms = st

    # -- constructors

    @classmethod
    def const(cls, c, variables=()):
        c = Fraction(c)
        if not c:
            return cls(variables, {})
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name, power=1):
        return cls((name,), {(power,): Fraction(1)})

    # -- helpers

    def _aligned(self, other):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        union = tuple(sorted(set(self.vars) | set(other.vars)))

        def remap(poly):
            idx = [union.index(v) for v in poly.vars]
            out = {}
            for exp, c in poly.terms.items():
                key = [0] * len(union)
                for i, e in enumerate(exp):
                    key[idx[i]] = e
                out[tuple(key)] = c
            return out

        return union, remap(self), remap(other)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        [(exp, c)] = self.terms.items()
        if any(exp):
            raise ValueError("not a constant")
        return c

    def total_degree(self):
        """Max over terms of the sum of positive exponents."""
        if not self.terms:
            return 0
        return max(sum(e for e in exp if e > 0) for exp in self.terms)

    # -- arithmetic

    def __add__(self, other):
        other = _coerce(other, self.vars)
        varset, a, b = self._aligned(other)
        out = dict(a)
        for exp, c in b.items():
            out[exp] = out.get(exp, Fraction(0)) + c
        return LaurentPoly(varset, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other, self.vars))

    def __rsub__(self, other):
        return _coerce(other, self.vars) + (-self)

    def __mul__(self, other):
        other = _coerce(other, self.vars)
        varset, a, b = self._aligned(other)
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                key = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(key, Fraction(0)) + c1 * c2
                if v:
                    out[key] = v
                else:
                    del out[key]
        return LaurentPoly(varset, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            inv = laurent_invert(self)
            return inv ** (-n)
        out = LaurentPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other, self.vars)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        varset, a, b = self._aligned(other)
        return a == b

    def __hash__(self):
        # strip variables that appear in no term so hash matches ==
        live = [i for i in range(len(self.vars)) if any(e[i] for e in self.terms)]
        key_vars = tuple(self.vars[i] for i in live)
        items = sorted(
            (tuple(e[i] for i in live), c) for e, c in self.terms.items()
        )
        return hash((key_vars, tuple(items)))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for exp in sorted(self.terms):
            c = self.terms[exp]
            mono = "*".join(
                f"{v}^{e}" if e != 1 else v
                for v, e in zip(self.vars, exp)
                if e
            )
            if mono:
                bits.append(f"{c}*{mono}" if c != 1 else mono)
            else:
                bits.append(str(c))
        return " + ".join(bits)

    def evaluate(self, assignment):
        """Evaluate at rational values. Negative exponents need nonzero base."""
        total = Fraction(0)
        vals = [Fraction(assignment[v]) for v in self.vars]
        for exp, c in self.terms.items():
            term = c
            for base, e in zip(vals, exp):
                term *= base**e
            total += term
        return total

    def to_json(self):
        # dead variables are dropped so equal values serialize identically,
        # matching what == and hash consider equal
        live = [i for i in range(len(self.vars)) if any(e[i] for e in self.terms)]
        terms = []
        for exp in sorted(self.terms):
            terms.append(
                {"exp": [exp[i] for i in live], "coef": rat_str(self.terms[exp])}
            )
        return {"vars": [self.vars[i] for i in live], "terms": terms}

    @classmethod
    def from_json(cls, obj):
        terms = {tuple(t["exp"]): rat_parse(t["coef"]) for t in obj["terms"]}
        return cls(tuple(obj["vars"]), terms)


def _coerce(x, variables):
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.const(x, variables)


def laurent_invert(p):
    """Invert a monomial. Units of the Laurent ring are exactly the single
    term elements, anything else raises NotDivisible."""
    if len(p.terms) != 1:
        raise NotDivisible("only monomials are invertible")
    [(exp, c)] = p.terms.items()
    return LaurentPoly(p.vars, {tuple(-e for e in exp): 1 / c})


def laurent_substitute(p, mapping):
    """Substitute polynomials for variables. Every variable of p must be
    mapped. Negative exponents divide at the end and must divide exactly,
    so substituting into a genuine Laurent polynomial raises NotDivisible
    unless the values keep it polynomial."""
    for v in p.vars:
        if v not in mapping:
            raise ValueError(f"no value for {v}")
    shift = _min_exponents(p.terms, len(p.vars))
    shift = tuple(min(m, 0) for m in shift)
    num = LaurentPoly.const(0)
    for exp, coef in p.terms.items():
        term = LaurentPoly.const(coef)
        for v, e, m in zip(p.vars, exp, shift):
            term = term * _coerce(mapping[v], ()) ** (e - m)
        num = num + term
    den = LaurentPoly.const(1)
    for v, m in zip(p.vars, shift):
        den = den * _coerce(mapping[v], ()) ** (-m)
    return laurent_divide_exact(num, den)


def _min_exponents(terms, arity):
    mins = [None] * arity
    for exp in terms:
        for i, e in enumerate(exp):
            if mins[i] is None or e < mins[i]:
                mins[i] = e
    return tuple(0 if m is None else m for m in mins)


def laurent_divide_exact(p, q):
    """Exact division p / q in the Laurent ring. Raises NotDivisible.

    Both are shifted by their componentwise-minimal exponents to honest
    polynomials, then divided by lex leading terms; the monomial shift is
    divided back in at the end. Exactness of every step is checked.
    """
    if q.is_zero():
        raise NotDivisible("division by zero")
    if p.is_zero():
        return LaurentPoly(p.vars, {})
    varset, a, b = p._aligned(q)
    n = len(varset)
    ma = _min_exponents(a, n)
    mb = _min_exponents(b, n)
    shift = tuple(x - y for x, y in zip(ma, mb))
    a = {tuple(e - m for e, m in zip(exp, ma)): c for exp, c in a.items()}
    b = {tuple(e - m for e, m in zip(exp, mb)): c for exp, c in b.items()}
    lead_b = max(b)
    cb = b[lead_b]
    quot = {}
    rem = dict(a)
    while rem:
        lead_r = max(rem)
        t = tuple(x - y for x, y in zip(lead_r, lead_b))
        if any(e < 0 for e in t):
            raise NotDivisible("leading term not divisible")
        c = rem[lead_r] / cb
        quot[t] = c
        for exp, cc in b.items():
            key = tuple(x + y for x, y in zip(t, exp))
            v = rem.get(key, Fraction(0)) - c * cc
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    out = {tuple(e + s for e, s in zip(exp, shift)): c for exp, c in quot.items()}
    return LaurentPoly(varset, out)


# ---------------------------------------------------------------------------
# polynomials in t with Laurent coefficients


class TPoly:
    """Finite t-expansion sum_k coeffs[k - low] * t^(low + k).

    Coefficients are LaurentPoly in the ambient coordinate variables; the
    parameter t itself is kept separate so coefficient extraction is O(1).
    """

    __slots__ = ("low", "coeffs")

    def __init__(self, low, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[0].is_zero():
            coeffs.pop(0)
            low += 1
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            low = 0
        self.low = low
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_terms(cls, pairs):
        """pairs: iterable of (power, LaurentPoly)."""
        pairs = [(k, c) for k, c in pairs if not c.is_zero()]
        if not pairs:
            return cls(0, ())
        lo = min(k for k, _ in pairs)
        hi = max(k for k, _ in pairs)
        slots = [LaurentPoly.const(0) for _ in range(hi - lo + 1)]
        for k, c in pairs:
            slots[k - lo] = slots[k - lo] + c
        return cls(lo, slots)

    def coeff(self, k):
        i = k - self.low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return LaurentPoly.const(0)

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        pairs = [(self.low + i, c) for i, c in enumerate(self.coeffs)]
        pairs += [(other.low + i, c) for i, c in enumerate(other.coeffs)]
        return TPoly.from_terms(pairs)

    def __mul__(self, other):
        pairs = []
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                pairs.append((self.low + i + other.low + j, a * b))
        return TPoly.from_terms(pairs)

    def __eq__(self, other):
        return (
            isinstance(other, TPoly)
            and self.low == other.low
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(
            f"({c})*t^{self.low + i}" for i, c in enumerate(self.coeffs)
        )


def tpoly_coeff(g, k):
    """Coefficient of t^k, zero when absent."""
    return g.coeff(k)


def tpoly_residue(g, d):
    """Residue of g / t^d, i.e. the coefficient of t^(d-1) in g."""
    return g.coeff(d - 1)


def det_laurent(rows):
    """Determinant of a small square matrix of LaurentPoly, by expansion
    along the first column with memoization on column subsets."""
    n = len(rows)
    if n == 0:
        return LaurentPoly.const(1)
    cache = {}

    def minor(r0, cols):
        if not cols:
            return LaurentPoly.const(1)
        key = (r0, cols)
        if key in cache:
            return cache[key]
        total = LaurentPoly.const(0)
        sign = 1
        for idx, c in enumerate(cols):
            entry = rows[r0][c]
            if not entry.is_zero():
                rest = cols[:idx] + cols[idx + 1 :]
                term = entry * minor(r0 + 1, rest)
                total = total + (term if sign > 0 else -term)
            sign = -sign
        cache[key] = total
        return total

    return minor(0, tuple(range(n)))
