"""Multivariate polynomial arithmetic over an exact field.

Polynomials are dicts keyed by exponent tuples.  All of the degreewise
solving works through dense coefficient vectors over `monomial_basis`,
which lists the monomials of a fixed total degree in descending
lexicographic order.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

from .fields import check_same_field


@lru_cache(maxsize=None)
def monomial_basis(ell: int, d: int):
    """All exponent tuples of length ell with total degree d, descending lex."""
    if ell < 1:
        raise ValueError("need at least one variable")
    if d < 0:
        return ()

    def gen(nvars, total):
        if nvars == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in gen(nvars - 1, total - first):
                yield (first,) + rest

    return tuple(gen(ell, d))


@lru_cache(maxsize=None)
def monomial_index(ell: int, d: int):
    """Monomial -> position map for the basis of degree d."""
    return {m: i for i, m in enumerate(monomial_basis(ell, d))}


def dim_homogeneous(ell: int, d: int) -> int:
    """dim of the degree-d graded piece of a polynomial ring in ell variables."""
    if d < 0:
        return 0
    return comb(d + ell - 1, ell - 1)


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Homogeneous-friendly sparse polynomial."""

    __slots__ = ("field", "ell", "terms")

    def __init__(self, field, ell, terms=None):
        self.field = field
        self.ell = ell
        self.terms = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    self.terms[mono] = c

    # -- constructors ------------------------------------------------
    @classmethod
    def zero(cls, field, ell):
        return cls(field, ell)

    @classmethod
    def const(cls, field, ell, c):
        c = field.of(c)
        return cls(field, ell, {(0,) * ell: c} if c else None)

    @classmethod
    def variable(cls, field, ell, i):
        mono = tuple(1 if j == i else 0 for j in range(ell))
        return cls(field, ell, {mono: field.one})

    @classmethod
    def monomial(cls, field, ell, mono, c=None):
        c = field.one if c is None else field.of(c)
        return cls(field, ell, {tuple(mono): c})

    # -- queries -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, mono):
        return self.terms.get(tuple(mono), self.field.zero)

    def total_degree(self):
        """Max total degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_degree(self):
        if not self.is_homogeneous():
            raise ValueError("not homogeneous")
        return self.total_degree()

    # -- arithmetic ---------------------------------------------------
    def _check(self, other):
        check_same_field(self.field, other.field)
        if self.ell != other.ell:
            raise ValueError("different variable counts")

    def __add__(self, other):
        self._check(other)
        f = self.field
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = f.add(terms.get(m, f.zero), c)
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Poly(f, self.ell, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        f = self.field
        return Poly(f, self.ell, {m: f.neg(c) for m, c in self.terms.items()})

    def scale(self, c):
        f = self.field
        c = f.of(c)
        if not c:
            return Poly.zero(f, self.ell)
        return Poly(f, self.ell, {m: f.mul(c, x) for m, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        f = self.field
        out = {}
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = _mono_mul(m1, m2)
                s = f.add(out.get(m, f.zero), f.mul(c1, c2))
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly(f, self.ell, out)

    __rmul__ = scale

    def times_monomial(self, mono, c=None):
        f = self.field
        c = f.one if c is None else f.of(c)
        if not c:
            return Poly.zero(f, self.ell)
        mono = tuple(mono)
        return Poly(f, self.ell, {_mono_mul(m, mono): f.mul(c, x) for m, x in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(self.field, self.ell, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field == other.field
            and self.ell == other.ell
            and self.terms == other.terms
        )

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mono = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(m) if e
            )
            cs = self.field.format(c)
            bits.append(f"{cs}*{mono}" if mono else cs)
        return " + ".join(bits)

    # -- coefficient vectors ------------------------------------------
    def to_vector(self, d: int):
        """Dense coefficient vector over monomial_basis(ell, d)."""
        idx = monomial_index(self.ell, d)
        f = self.field
        v = [f.zero] * len(idx)
        for m, c in self.terms.items():
            if sum(m) != d:
                raise ValueError("not homogeneous of requested degree")
            v[idx[m]] = c
        return v

    @classmethod
    def from_vector(cls, field, ell, d, v):
        basis = monomial_basis(ell, d)
        return cls(field, ell, {m: field.of(c) for m, c in zip(basis, v) if c})

    # -- substitution ---------------------------------------------------
    def substitute(self, images: list["Poly"]) -> "Poly":
        """Substitute x_i -> images[i]; images live in a common target ring."""
        if len(images) != self.ell:
            raise ValueError("need one image per variable")
        if not images:
            raise ValueError("empty substitution")
        f = self.field
        tgt_ell = images[0].ell
        out = Poly.zero(f, tgt_ell)
        pow_cache = [{0: Poly.const(f, tgt_ell, 1)} for _ in range(self.ell)]

        def power(i, e):
            cache = pow_cache[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * images[i]
            return cache[e]

        for m, c in self.terms.items():
            term = Poly.const(f, tgt_ell, c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out


class LinearForm:
    """A nonzero linear form, stored as its coefficient vector."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = tuple(field.of(c) for c in coeffs)
        if not any(self.coeffs):
            raise ValueError("zero linear form")

    @property
    def ell(self):
        return len(self.coeffs)

    def pivot(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise AssertionError

    def as_poly(self) -> Poly:
        f = self.field
        ell = self.ell
        return Poly(
            f,
            ell,
            {
                tuple(1 if j == i else 0 for j in range(ell)): c
                for i, c in enumerate(self.coeffs)
                if c
            },
        )

    def proportional_to(self, other: "LinearForm") -> bool:
        if self.field != other.field or self.ell != other.ell:
            return False
        f = self.field
        i = self.pivot()
        if not other.coeffs[i]:
            return False
        ratio = f.div(other.coeffs[i], self.coeffs[i])
        return all(f.mul(ratio, a) == b for a, b in zip(self.coeffs, other.coeffs))

    def __eq__(self, other):
        return (
            isinstance(other, LinearForm)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return "(" + ", ".join(self.field.format(c) for c in self.coeffs) + ")"


def substitute_linear(f: Poly, T) -> Poly:
    """f(T x) for an invertible square matrix T over the same field."""
    from .linalg import Matrix, rank

    if not isinstance(T, Matrix):
        T = Matrix(f.field, T)
    if T.nrows != T.ncols or T.nrows != f.ell:
        raise ValueError("substitution matrix must be square of matching size")
    if rank(T) != T.nrows:
        raise ValueError("singular substitution matrix")
    images = [
        Poly(f.field, f.ell, {tuple(1 if j == k else 0 for k in range(f.ell)): c
                              for j, c in enumerate(T.rows[i]) if c})
        for i in range(f.ell)
    ]
    return f.substitute(images)


def divide_by_linear(f: Poly, alpha: LinearForm):
    """Exact division with remainder by a linear form.

    Returns (q, r) with f = q*alpha + r and r free of the pivot variable.
    """
    check_same_field(f.field, alpha.field)
    if f.ell != alpha.ell:
        raise ValueError("variable count mismatch")
    fld = f.field
    k = alpha.pivot()
    a_k = alpha.coeffs[k]
    # split f by the pivot exponent: f = sum_t f_t * x_k^t
    layers: dict[int, dict] = {}
    for m, c in f.terms.items():
        t = m[k]
        m0 = m[:k] + (0,) + m[k + 1 :]
        layers.setdefault(t, {})[m0] = c
    if not layers:
        return Poly.zero(fld, f.ell), Poly.zero(fld, f.ell)
    top = max(layers)
    # L = alpha - a_k x_k (no pivot variable)
    L = Poly(
        fld,
        f.ell,
        {
            tuple(1 if j == i else 0 for j in range(f.ell)): c
            for i, c in enumerate(alpha.coeffs)
            if c and i != k
        },
    )
    inv_ak = fld.inv(a_k)
    q_layers: dict[int, Poly] = {}
    carry = Poly.zero(fld, f.ell)  # q_s * L propagated downward
    for s in range(top, 0, -1):
        f_s = Poly(fld, f.ell, layers.get(s, {}))
        q_sm1 = (f_s - carry).scale(inv_ak)
        q_layers[s - 1] = q_sm1
        carry = q_sm1 * L
    r = Poly(fld, f.ell, layers.get(0, {})) - carry
    q = Poly.zero(fld, f.ell)
    unit = tuple(1 if j == k else 0 for j in range(f.ell))
    for t, qt in q_layers.items():
        if qt:
            shift = tuple(e * t for e in unit)
            q = q + qt.times_monomial(shift)
    return q, r


def divisible_by_linear_power(f: Poly, alpha: LinearForm, m: int) -> bool:
    """True iff alpha^m divides f exactly."""
    from .fields import Rationals

    if m == 1 and isinstance(f.field, Rationals):
        return _divides_linear_rational(f, alpha)
    g = f
    for _ in range(m):
        if g.is_zero():
            return True
        g, r = divide_by_linear(g, alpha)
        if not r.is_zero():
            return False
    return True


@lru_cache(maxsize=256)
def _int_linear_powers(coeffs: tuple, k: int, top: int):
    """Integer expansions of (-L)^t for L = alpha - a_k x_k, t <= top."""
    ell = len(coeffs)
    neg = {}
    for i, a in enumerate(coeffs):
        if a and i != k:
            neg[tuple(1 if j == i else 0 for j in range(ell))] = -a
    pows = [{(0,) * ell: 1}]
    for _ in range(top):
        prev = pows[-1]
        nxt = {}
        for m1, c1 in prev.items():
            for m2, c2 in neg.items():
                key = tuple(x + y for x, y in zip(m1, m2))
                nxt[key] = nxt.get(key, 0) + c1 * c2
        pows.append({m: c for m, c in nxt.items() if c})
    return pows


def _divides_linear_rational(f: Poly, alpha: LinearForm) -> bool:
    """alpha | f over Q via an integer-scaled reduction mod alpha.

    Substituting x_k -> -L/a_k and clearing a_k powers gives
    a_k^E (f mod alpha); f is divisible iff that vanishes.
    """
    if f.is_zero():
        return True
    from math import gcd

    den = 1
    for c in f.terms.values():
        den = den // gcd(den, c.denominator) * c.denominator
    aden = 1
    for c in alpha.coeffs:
        aden = aden // gcd(aden, c.denominator) * c.denominator
    a = tuple(int(c * aden) for c in alpha.coeffs)
    k = alpha.pivot()
    ak = a[k]
    E = max(mono[k] for mono in f.terms)
    pows = _int_linear_powers(a, k, E)
    acc: dict = {}
    for mono, c in f.terms.items():
        ci = int(c * den)
        e = mono[k]
        rest = mono[:k] + (0,) + mono[k + 1 :]
        scale = ci * ak ** (E - e)
        for pm, pc in pows[e].items():
            key = _mono_mul(rest, pm)
            v = acc.get(key, 0) + scale * pc
            if v:
                acc[key] = v
            else:
                acc.pop(key, None)
    return not acc


def wedge_numerators(f, alpha: LinearForm):
    """Numerators of (sum_i f_i dx_i) wedge d(alpha), indexed by pairs i<j.

    Returns {(i, j): f_i a_j - f_j a_i}.  A 1-form with these numerators
    over the defining product satisfies the logarithmic condition at
    ker(alpha) iff alpha divides every returned polynomial.
    """
    f = tuple(f)
    ell = alpha.ell
    if len(f) != ell:
        raise ValueError("need one numerator per variable")
    degs = {p.homogeneous_degree() for p in f if not p.is_zero()}
    if len(degs) > 1:
        raise ValueError("numerators must be homogeneous of equal degree")
    a = alpha.coeffs
    out = {}
    for i in range(ell):
        for j in range(i + 1, ell):
            out[(i, j)] = f[i].scale(a[j]) - f[j].scale(a[i])
    return out


def product(polys, field=None, ell=None):
    it = list(polys)
    if not it:
        if field is None or ell is None:
            raise ValueError("empty product needs explicit field/ell")
        return Poly.const(field, ell, 1)
    out = it[0]
    for p in it[1:]:
        out = out * p
    return out


def poly_det(entries):
    """Determinant of a small square matrix of polynomials (cofactor)."""
    n = len(entries)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return entries[0][0]
    f = entries[0][0].field
    ell = entries[0][0].ell
    out = Poly.zero(f, ell)
    for j in range(n):
        e = entries[0][j]
        if e.is_zero():
            continue
        minor = [[entries[i][k] for k in range(n) if k != j] for i in range(1, n)]
        sub = poly_det(minor)
        term = e * sub
        out = out + (term if j % 2 == 0 else -term)
    return out


# ---------------------------------------------------------------------------
# divisibility constraints: linear conditions for alpha^m | f on S_d
# ---------------------------------------------------------------------------


def _truncated_pivot_powers(alpha: LinearForm, max_e: int, m: int):
    """Expansions of ((y1 - L)/a_k)^e keeping only y1-degree < m.

    In adapted coordinates y1 = alpha, y_other = x_other, the pivot
    variable is x_k = (y1 - L)/a_k with L = alpha - a_k x_k.  Returns
    per-exponent lists mapping t < m to the polynomial coefficient of
    y1^t (a polynomial in the non-pivot variables).
    """
    fld = alpha.field
    ell = alpha.ell
    k = alpha.pivot()
    inv_ak = fld.inv(alpha.coeffs[k])
    L = Poly(
        fld,
        ell,
        {
            tuple(1 if j == i else 0 for j in range(ell)): c
            for i, c in enumerate(alpha.coeffs)
            if c and i != k
        },
    )
    negL = -L
    # neg_pows[j] = (-L)^j
    neg_pows = [Poly.const(fld, ell, 1)]
    for _ in range(max_e):
        neg_pows.append(neg_pows[-1] * negL)
    table = []
    for e in range(max_e + 1):
        scale = fld.one
        for _ in range(e):
            scale = fld.mul(scale, inv_ak)
        per_t = {}
        for t in range(min(m, e + 1)):
            c = fld.mul(scale, fld.of(comb(e, t)))
            per_t[t] = neg_pows[e - t].scale(c)
        table.append(per_t)
    return table, k


@lru_cache(maxsize=None)
def _reduced_basis(ell: int, d: int, k: int):
    """Monomials of degree d with zero exponent on variable k."""
    return tuple(m for m in monomial_basis(ell, d) if m[k] == 0)


def divisibility_row_data(alpha: LinearForm, m: int, degree: int):
    """Sparse rows whose kernel on S_degree is {f : alpha^m | f}.

    Row indices are (t, reduced monomial) pairs for t < m flattened in a
    deterministic order; the return value is (row_count, columns) where
    columns[j] lists (row_index, coeff) for the j-th monomial of
    monomial_basis(ell, degree).
    """
    if m < 1:
        raise ValueError("multiplicity must be positive")
    if degree < 0:
        return 0, []
    fld = alpha.field
    ell = alpha.ell
    basis = monomial_basis(ell, degree)
    max_e = max((mono[alpha.pivot()] for mono in basis), default=0)
    table, k = _truncated_pivot_powers(alpha, max_e, m)
    row_index = {}
    offsets = []
    count = 0
    for t in range(m):
        offsets.append(count)
        red = _reduced_basis(ell, degree - t, k)
        for mono in red:
            row_index[(t, mono)] = count
            count += 1
    columns = []
    for mono in basis:
        e = mono[k]
        rest = mono[:k] + (0,) + mono[k + 1 :]
        col = []
        for t, expansion in table[e].items():
            for em, c in expansion.terms.items():
                target = _mono_mul(em, rest)
                col.append((row_index[(t, target)], c))
        columns.append(col)
    return count, columns


def divisibility_constraints(poly_degree: int, alpha: LinearForm, m: int):
    """Dense constraint matrix for divisibility by alpha^m on S_poly_degree.

    The kernel, acting on coefficient vectors in monomial_basis order, is
    exactly the set of degree-poly_degree forms divisible by alpha^m.
    """
    from .linalg import Matrix

    if poly_degree < 0:
        raise ValueError("poly_degree must be nonnegative")
    fld = alpha.field
    nrows, columns = divisibility_row_data(alpha, m, poly_degree)
    ncols = len(columns)
    rows = [[fld.zero] * ncols for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, c in col:
            rows[i][j] = fld.add(rows[i][j], c)
    return Matrix(fld, rows)
