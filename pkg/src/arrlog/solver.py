"""Degreewise exact computation of logarithmic derivation and form modules.

Graded pieces are kernels of divisibility constraints on numerator
coefficient vectors.  Two engines produce them:

  * ambient: unknowns are the numerator tuples themselves; one
    divisibility block per hyperplane and condition subset;
  * relative: for simple essential arrangements with p = 1, unknowns are
    coordinates over the explicit free basis attached to a maximal
    independent subset of the forms, so only the remaining hyperplanes
    contribute constraints.  This collapses the solve sizes; the two
    engines must agree and are cross-checked in the tests.

Over F_p the modular elimination is the field arithmetic, hence exact.
Over Q kernels are computed mod deterministic ladder primes, lifted by
CRT + rational reconstruction, and then certified: exhibited elements
are verified exactly at the polynomial level, and mod-p ranks bound the
ranks over Q from below, which pins every reported dimension exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .arrangement import Arrangement, ArrangementError
from .fields import GF, QQ, Rationals
from .linalg import Matrix
from .modular import (
    PRIMES,
    ReconstructionFailed,
    kernel_mod,
    kernel_qq_candidates,
    rank_mod,
    reconstruct_matrix,
    rref_mod,
)
from .poly import (
    LinearForm,
    Poly,
    dim_homogeneous,
    divisibility_row_data,
    divisible_by_linear_power,
    monomial_basis,
    monomial_index,
    product,
)


class SolverError(ArrangementError):
    pass


class NotLogarithmic(SolverError):
    pass


# ---------------------------------------------------------------------------
# coefficient vectors and membership checks
# ---------------------------------------------------------------------------


def subsets(ell: int, p: int):
    return tuple(combinations(range(ell), p))


@dataclass(frozen=True)
class CoeffVector:
    """Numerator tuple of a module element.

    kind "D": numerators are the coefficient polynomials of a p-vector
    field, homogeneous of degree `degree`.
    kind "O": numerators of a p-form over Q(A, m), homogeneous of degree
    `degree` + deg Q(A, m).  Indexing follows combinations(range(ell), p).
    """

    kind: str
    order: int
    degree: int
    numerators: tuple

    @property
    def ell(self):
        return self.numerators[0].ell

    def numerator_degree(self):
        for f in self.numerators:
            if not f.is_zero():
                return f.homogeneous_degree()
        return None

    def is_zero(self):
        return all(f.is_zero() for f in self.numerators)


def condition_polys(cv: CoeffVector, alpha: LinearForm):
    """The per-hyperplane polynomials that must be divisible by alpha^m."""
    ell = alpha.ell
    subs = subsets(ell, cv.order)
    index = {s: i for i, s in enumerate(subs)}
    a = alpha.coeffs
    fld = alpha.field
    out = []
    if cv.kind == "D":
        for J in combinations(range(ell), cv.order - 1):
            P = None
            for i in range(ell):
                if i in J:
                    continue
                I = tuple(sorted((i,) + J))
                sign = (-1) ** I.index(i)
                c = a[i] if sign > 0 else fld.neg(a[i])
                if not c:
                    continue
                term = cv.numerators[index[I]].scale(c)
                P = term if P is None else P + term
            out.append(P)
    elif cv.order == 1:
        # parallel-to-a mod alpha: the ell-1 pivot pairs carry full rank
        k0 = alpha.pivot()
        for j in range(ell):
            if j == k0:
                continue
            P = cv.numerators[j].scale(a[k0]) - cv.numerators[k0].scale(a[j])
            out.append(P)
    else:
        for K in combinations(range(ell), cv.order + 1):
            P = None
            for t, k in enumerate(K):
                rest = K[:t] + K[t + 1 :]
                c = a[k] if t % 2 == 0 else fld.neg(a[k])
                if not c:
                    continue
                term = cv.numerators[index[rest]].scale(c)
                P = term if P is None else P + term
            out.append(P)
    return [p for p in out if p is not None]


def membership_failures(A: Arrangement, cv: CoeffVector, hyperplanes=None):
    """Exact logarithmic-condition check; returns offending indices."""
    bad = []
    indices = range(A.n) if hyperplanes is None else hyperplanes
    for h in indices:
        alpha = A.forms[h]
        m = A.mult[h]
        for P in condition_polys(cv, alpha):
            if not divisible_by_linear_power(P, alpha, m):
                bad.append(h)
                break
    return bad


def is_logarithmic(A: Arrangement, cv: CoeffVector) -> bool:
    return not membership_failures(A, cv)


# ---------------------------------------------------------------------------
# graded coordinate spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwistSpace:
    """Direct sum of twisted polynomial blocks.

    Block j at module degree d holds a homogeneous polynomial of degree
    d - twists[j]; flattened coordinates concatenate the dense
    coefficient vectors in monomial_basis order.
    """

    ell: int
    twists: tuple

    def block_degrees(self, d: int):
        return [d - e for e in self.twists]

    def dim(self, d: int) -> int:
        return sum(dim_homogeneous(self.ell, deg) for deg in self.block_degrees(d))

    def element_from_coords(self, field, d: int, coords):
        blocks = []
        pos = 0
        for deg in self.block_degrees(d):
            k = dim_homogeneous(self.ell, deg)
            if deg >= 0:
                blocks.append(Poly.from_vector(field, self.ell, deg, coords[pos : pos + k]))
            else:
                blocks.append(Poly.zero(field, self.ell))
            pos += k
        return tuple(blocks)

    def flatten(self, element, d: int):
        out = []
        for poly, deg in zip(element, self.block_degrees(d)):
            if deg < 0:
                if not poly.is_zero():
                    raise ValueError("nonzero block of negative degree")
                continue
            out.extend(poly.to_vector(deg))
        return out

    def flatten_mod(self, element, d: int, p: int) -> np.ndarray:
        vec = np.zeros(self.dim(d), dtype=np.int64)
        pos = 0
        for poly, deg in zip(element, self.block_degrees(d)):
            if deg < 0:
                continue
            idx = monomial_index(self.ell, deg)
            for mono, c in poly.terms.items():
                vec[pos + idx[mono]] = _coeff_mod(c, p)
            pos += len(idx)
        return vec

    def times_monomial(self, element, mono):
        return tuple(poly.times_monomial(mono) for poly in element)


def _coeff_mod(c, p: int) -> int:
    if isinstance(c, Fraction):
        den = c.denominator % p
        if den == 0:
            raise ZeroDivisionError("denominator divisible by prime")
        return c.numerator % p * pow(den, p - 2, p) % p
    return int(c) % p


@lru_cache(maxsize=None)
def shift_table(ell: int, d_src: int, mono: tuple) -> np.ndarray:
    """Index map: position of basis(d_src)[i] * mono inside basis(d_src+|mono|)."""
    tgt = monomial_index(ell, d_src + sum(mono))
    src = monomial_basis(ell, d_src)
    return np.array([tgt[tuple(a + b for a, b in zip(m, mono))] for m in src], dtype=np.int64)


# ---------------------------------------------------------------------------
# constraint engines
# ---------------------------------------------------------------------------


class _DivTable:
    """Dense divisibility matrix for (alpha, m) at one polynomial degree.

    `dense` has one row per vanishing condition and one column per
    degree-N monomial; a homogeneous polynomial is divisible by alpha^m
    iff its coefficient vector is killed by every row.
    """

    def __init__(self, alpha: LinearForm, m: int, degree: int):
        self.nrows, columns = divisibility_row_data(alpha, m, degree)
        self.dense = np.zeros((self.nrows, len(columns)), dtype=np.int64)
        for j, col in enumerate(columns):
            for i, c in col:
                self.dense[i, j] = int(c)


class AmbientEngine:
    """Constraints on raw numerator tuples; valid for any (A, m, p)."""

    def __init__(self, A: Arrangement, kind: str, order: int = 1):
        if kind not in ("D", "O"):
            raise ValueError("kind must be 'D' or 'O'")
        if not 0 <= order <= A.ell:
            raise SolverError("order must satisfy 0 <= p <= ell")
        self.A = A
        self.kind = kind
        self.order = order
        offset = 0 if kind == "D" else A.deg_Q()
        self.space = TwistSpace(A.ell, tuple([-offset] * comb(A.ell, order)))
        self._subsets = subsets(A.ell, order)
        self._sub_index = {s: i for i, s in enumerate(self._subsets)}
        self._div_cache = {}

    def numerator_degree(self, d: int) -> int:
        return d if self.kind == "D" else d + self.A.deg_Q()

    def _condition_terms(self, alpha: LinearForm):
        """Per condition: list of (block index, scalar coefficient)."""
        ell = self.A.ell
        a = alpha.coeffs
        fld = alpha.field
        conds = []
        if self.kind == "D" and self.order == 0:
            pass  # Lambda^0 Der = S carries no conditions
        elif self.kind == "D":
            for J in combinations(range(ell), self.order - 1):
                terms = []
                for i in range(ell):
                    if i in J:
                        continue
                    I = tuple(sorted((i,) + J))
                    sign = (-1) ** I.index(i)
                    c = a[i] if sign > 0 else fld.neg(a[i])
                    if c:
                        terms.append((self._sub_index[I], c))
                conds.append(terms)
        elif self.order == 1:
            # F parallel to a mod alpha: the ell-1 pairs against the pivot
            # coordinate already have full rank among the wedge conditions
            k0 = alpha.pivot()
            for j in range(ell):
                if j == k0:
                    continue
                conds.append([(j, a[k0]), (k0, fld.neg(a[j]))])
        else:
            for K in combinations(range(ell), self.order + 1):
                terms = []
                for t, k in enumerate(K):
                    rest = K[:t] + K[t + 1 :]
                    c = a[k] if t % 2 == 0 else fld.neg(a[k])
                    if c:
                        terms.append((self._sub_index[rest], c))
                conds.append(terms)
        return conds

    def build_mod(self, d: int, p: int) -> np.ndarray:
        N = self.numerator_degree(d)
        ncols = self.space.dim(d)
        if N < 0 or ncols == 0:
            return np.zeros((0, max(ncols, 0)), dtype=np.int64)
        dimS = dim_homogeneous(self.A.ell, N)
        blocks = []
        for h in range(self.A.n):
            alpha = _form_mod(self.A.forms[h], p)
            m = self.A.mult[h]
            key = (h, m, N, p)
            table = self._div_cache.get(key)
            if table is None:
                table = _DivTable(alpha, m, N)
                self._div_cache[key] = table
            conds = self._condition_terms(alpha)
            M = np.zeros((table.nrows * len(conds), ncols), dtype=np.int64)
            for ci, terms in enumerate(conds):
                base = ci * table.nrows
                for b, c in terms:
                    c = int(c) % p
                    M[base : base + table.nrows, b * dimS : (b + 1) * dimS] = (
                        M[base : base + table.nrows, b * dimS : (b + 1) * dimS]
                        + c * table.dense
                    ) % p
            blocks.append(M)
        if not blocks:
            return np.zeros((0, ncols), dtype=np.int64)
        return np.vstack(blocks)

    def to_coeffvector(self, element, d: int) -> CoeffVector:
        return CoeffVector(self.kind, self.order, d, tuple(element))

    def element_from_cv(self, cv: CoeffVector):
        if cv.kind != self.kind or cv.order != self.order:
            raise SolverError("hint does not match the module selector")
        return tuple(cv.numerators)

    def verify(self, element, d: int) -> bool:
        return not membership_failures(self.A, self.to_coeffvector(element, d))


@dataclass
class FreeBase:
    """A certified free subarrangement with explicit module bases.

    `indices` select the base hyperplanes inside the host arrangement;
    `d_basis[i]` is a logarithmic derivation basis of the base (degrees =
    `exponents`, Saito determinant = constant * Q(base)) and
    `omega_numerators[i]` the numerator tuples of the dual basis of its
    1-forms (degrees = negated exponents).
    """

    indices: list
    exponents: list
    d_basis: list  # CoeffVector
    omega_numerators: list  # tuple[Poly] per basis form, over Q(base)
    constant: object


def boolean_like_base(A: Arrangement) -> FreeBase:
    """The free base on a greedy maximal independent subset of the forms.

    With u_i the chosen forms (rows of T), the base derivations are
    u_i d/du_i and the base 1-forms du_i / u_i.
    """
    from .lattice import _Echelon

    ell = A.ell
    fld = A.field
    idxs = []
    ech = _Echelon(fld)
    for i, f in enumerate(A.forms):
        if ech.add(list(f.coeffs)):
            idxs.append(i)
        if len(idxs) == ell:
            break
    if len(idxs) < ell:
        raise SolverError("arrangement not essential")
    T = Matrix(fld, [A.forms[i].coeffs for i in idxs])
    Tinv = _invert(T)
    u = [A.forms[i].as_poly() for i in idxs]
    d_basis = []
    for i in range(ell):
        nums = tuple(u[i].scale(Tinv.rows[k][i]) for k in range(ell))
        d_basis.append(CoeffVector("D", 1, 1, nums))
    omega = []
    for i in range(ell):
        P_i = product([u[j] for j in range(ell) if j != i], field=fld, ell=ell)
        omega.append(tuple(P_i.scale(T.rows[i][k]) for k in range(ell)))
    det_t = _scalar_det_field(fld, [list(r) for r in T.rows])
    return FreeBase(
        indices=idxs,
        exponents=[1] * ell,
        d_basis=d_basis,
        omega_numerators=omega,
        constant=det_t,
    )


def _scalar_det_field(fld, entries):
    k = len(entries)
    if k == 1:
        return entries[0][0]
    acc = fld.zero
    for j in range(k):
        if not entries[0][j]:
            continue
        minor = [[entries[i][c] for c in range(k) if c != j] for i in range(1, k)]
        term = fld.mul(entries[0][j], _scalar_det_field(fld, minor))
        acc = fld.add(acc, term) if j % 2 == 0 else fld.sub(acc, term)
    return acc


def free_base_from_saito(A: Arrangement, indices, saito_result) -> FreeBase:
    """Build a FreeBase from a Saito-certified free subarrangement.

    `saito_result` must be the certificate for the subarrangement of
    `A` selected by `indices` (same form order).  The dual 1-form basis
    comes from the adjugate of the derivation coefficient matrix and is
    verified exactly.
    """
    from .poly import poly_det

    if not saito_result.free:
        raise SolverError("free base needs a Saito-certified subarrangement")
    ell = A.ell
    fld = A.field
    sub = validate_subarrangement(A, indices)
    gens = saito_result.generators
    cvs = gens.representatives
    degrees = list(gens.degrees)
    M = [list(cv.numerators) for cv in cvs]
    inv_c = fld.inv(saito_result.constant)
    omega = []
    for i in range(ell):
        # F = (1/c) adj(M)^T pairs dually with the derivation basis:
        # F[i][k] = (1/c) (-1)^{i+k} det(M without row i, column k)
        nums = []
        for k in range(ell):
            minor = [
                [M[r][s] for s in range(ell) if s != k]
                for r in range(ell)
                if r != i
            ]
            cof = poly_det(minor) if minor else Poly.const(fld, ell, 1)
            sign = fld.one if (i + k) % 2 == 0 else fld.neg(fld.one)
            nums.append(cof.scale(fld.mul(sign, inv_c)))
        omega.append(tuple(nums))
    for i, nums in enumerate(omega):
        cv = CoeffVector("O", 1, -degrees[i], nums)
        if membership_failures(sub, cv):
            raise SolverError("dual basis form failed the membership check")
    return FreeBase(
        indices=list(indices),
        exponents=degrees,
        d_basis=cvs,
        omega_numerators=omega,
        constant=saito_result.constant,
    )


def validate_subarrangement(A: Arrangement, indices) -> Arrangement:
    return Arrangement(
        A.field,
        A.ell,
        [A.forms[i] for i in indices],
        [A.mult[i] for i in indices],
    )


class RelativeEngine:
    """Constraints in coordinates over a free subarrangement's basis.

    Requires a simple essential arrangement and p = 1.  With base modules
    free on theta0_i (derivations, degrees e_i) and eta_i (1-forms,
    degrees -e_i):

      kind "D": theta = sum g_i theta0_i; each complement hyperplane H
      imposes alpha_H | sum_i g_i * theta0_i(alpha_H).
      kind "O": (prod of complement forms) * omega = sum g_i eta_i; each
      complement H imposes the wedge conditions on the combined
      numerators over Q(A).

    Base-hyperplane conditions hold identically for any coefficients.
    """

    def __init__(self, A: Arrangement, kind: str, base: FreeBase | None = None):
        if kind not in ("D", "O"):
            raise ValueError("kind must be 'D' or 'O'")
        if not A.is_simple():
            raise SolverError("relative engine needs a simple arrangement")
        if A.essential_rank != A.ell:
            raise SolverError("relative engine needs an essential arrangement")
        self.A = A
        self.kind = kind
        self.order = 1
        if base is None:
            base = boolean_like_base(A)
        self.base = base
        self.complement = [i for i in range(A.n) if i not in set(base.indices)]
        nc = len(self.complement)
        if kind == "D":
            self.space = TwistSpace(A.ell, tuple(base.exponents))
        else:
            self.space = TwistSpace(A.ell, tuple(-(nc + e) for e in base.exponents))
        self._div_cache = {}
        self._carrier_cache = {}

    def numerator_degree(self, d: int) -> int:
        return d if self.kind == "D" else d + self.A.n

    def _conditions_exact(self, h: int):
        """Conditions over the host field: [(block i, carrier Poly)]."""
        key = h
        cached = self._carrier_cache.get(key)
        if cached is not None:
            return cached
        ell = self.A.ell
        fld = self.A.field
        a = self.A.forms[h].coeffs
        base = self.base
        if self.kind == "D":
            terms = []
            for i in range(ell):
                w = Poly.zero(fld, ell)
                for k in range(ell):
                    if a[k]:
                        w = w + base.d_basis[i].numerators[k].scale(a[k])
                if not w.is_zero():
                    terms.append((i, w))
            conds = [terms]
        else:
            k0 = self.A.forms[h].pivot()
            conds = []
            for j in range(ell):
                if j == k0:
                    continue
                terms = []
                for i in range(ell):
                    F = base.omega_numerators[i]
                    w = F[k0].scale(a[j]) - F[j].scale(a[k0])
                    if not w.is_zero():
                        terms.append((i, w))
                if terms:
                    conds.append(terms)
        self._carrier_cache[key] = conds
        return conds

    def build_mod(self, d: int, p: int) -> np.ndarray:
        ell = self.A.ell
        block_degs = self.space.block_degrees(d)
        ncols = self.space.dim(d)
        if ncols == 0 or all(bd < 0 for bd in block_degs):
            return np.zeros((0, max(ncols, 0)), dtype=np.int64)
        N = self.numerator_degree(d)
        blocks = []
        col_offsets = []
        pos = 0
        for bd in block_degs:
            col_offsets.append(pos)
            pos += dim_homogeneous(ell, bd)
        for h in self.complement:
            alpha = _form_mod(self.A.forms[h], p)
            key = (h, N, p)
            table = self._div_cache.get(key)
            if table is None:
                table = _DivTable(alpha, self.A.mult[h], N)
                self._div_cache[key] = table
            conds = self._conditions_exact(h)
            M = np.zeros((table.nrows * len(conds), ncols), dtype=np.int64)
            for ci, terms in enumerate(conds):
                base_row = ci * table.nrows
                for i, carrier in terms:
                    bd = block_degs[i]
                    if bd < 0:
                        continue
                    dimg = dim_homogeneous(ell, bd)
                    block = M[base_row : base_row + table.nrows, col_offsets[i] : col_offsets[i] + dimg]
                    # products are < 2**56; reduce every 32 terms so the
                    # running sum stays inside int64
                    pending = 0
                    for cm, cc in carrier.terms.items():
                        tab = shift_table(ell, bd, cm)
                        block += _coeff_mod(cc, p) * table.dense[:, tab]
                        pending += 1
                        if pending == 32:
                            np.mod(block, p, out=block)
                            pending = 0
                    np.mod(block, p, out=block)
            blocks.append(M)
        if not blocks:
            return np.zeros((0, ncols), dtype=np.int64)
        return np.vstack(blocks)

    def to_coeffvector(self, element, d: int) -> CoeffVector:
        ell = self.A.ell
        fld = self.A.field
        numerators = []
        if self.kind == "D":
            for k in range(ell):
                P = Poly.zero(fld, ell)
                for i in range(ell):
                    src = self.base.d_basis[i].numerators[k]
                    if element[i] and src:
                        P = P + element[i] * src
                numerators.append(P)
            return CoeffVector("D", 1, d, tuple(numerators))
        for k in range(ell):
            P = Poly.zero(fld, ell)
            for i in range(ell):
                src = self.base.omega_numerators[i][k]
                if element[i] and src:
                    P = P + element[i] * src
            numerators.append(P)
        return CoeffVector("O", 1, d, tuple(numerators))

    def verify(self, element, d: int) -> bool:
        # base-form conditions hold identically; check the complement
        cv = self.to_coeffvector(element, d)
        return not membership_failures(self.A, cv, hyperplanes=self.complement)


def normalize_element(element):
    """Scale an element's polynomials to primitive integer coefficients."""
    from math import gcd

    num_gcd = 0
    den_lcm = 1
    rational = False
    for poly in element:
        for c in poly.terms.values():
            if isinstance(c, Fraction):
                rational = True
                num_gcd = gcd(num_gcd, c.numerator)
                den_lcm = den_lcm // gcd(den_lcm, c.denominator) * c.denominator
            else:
                return element
    if not rational or num_gcd == 0:
        return element
    scale = Fraction(den_lcm, num_gcd)
    if scale == 1:
        return element
    return tuple(poly.scale(scale) for poly in element)


def _form_mod(form: LinearForm, p: int) -> LinearForm:
    return LinearForm(GF(p), [_coeff_mod(c, p) for c in form.coeffs])


def _poly_mod(poly: Poly, p: int) -> Poly:
    fld = GF(p)
    return Poly(fld, poly.ell, {m: _coeff_mod(c, p) for m, c in poly.terms.items()})


def _dot_field(fld, u, v):
    s = fld.zero
    for a, b in zip(u, v):
        if a and b:
            s = fld.add(s, fld.mul(a, b))
    return s


def _invert(M: Matrix) -> Matrix:
    from .linalg import rref

    f = M.field
    n = M.nrows
    aug = Matrix(
        f,
        [list(M.rows[i]) + [f.one if j == i else f.zero for j in range(n)] for i in range(n)],
    )
    R, pivots, rk = rref(aug)
    if rk != n or pivots != list(range(n)):
        raise SolverError("matrix not invertible")
    return Matrix(f, [R.rows[i][n:] for i in range(n)])


def pick_engine(A: Arrangement, kind: str, order: int, prefer: str = "auto", base=None):
    if prefer == "ambient":
        return AmbientEngine(A, kind, order)
    if base is not None or prefer == "relative":
        return RelativeEngine(A, kind, base)
    if (
        order == 1
        and A.is_simple()
        and A.ell >= 1
        and A.n > A.ell
        and A.essential_rank == A.ell
    ):
        return RelativeEngine(A, kind)
    return AmbientEngine(A, kind, order)


# ---------------------------------------------------------------------------
# certified graded pieces
# ---------------------------------------------------------------------------


@dataclass
class GradedBasis:
    """Exact basis of one graded piece."""

    arrangement: Arrangement
    kind: str
    order: int
    degree: int
    vectors: list  # of CoeffVector
    elements: list  # engine-internal block tuples
    engine: object
    certified: bool
    primes: tuple

    @property
    def dimension(self):
        return len(self.vectors)


class _PieceSolver:
    """Kernel machinery for one engine over one field."""

    def __init__(self, engine, field):
        self.engine = engine
        self.field = field
        self.modular = not isinstance(field, Rationals) and field.p < (1 << 28)

    def kernel(self, d: int):
        """Exact kernel basis at degree d: (elements, coords, primes)."""
        ncols = self.engine.space.dim(d)
        if ncols == 0:
            return [], [], ()
        if isinstance(self.field, Rationals):
            vectors, rank, pivots, primes = kernel_qq_candidates(
                lambda p: self.engine.build_mod(d, p), ncols
            )
            elements = [
                self.engine.space.element_from_coords(self.field, d, v) for v in vectors
            ]
            return elements, vectors, primes
        p = self.field.p
        if not self.modular:
            raise SolverError("primes >= 2**28 not supported by the dense solver")
        K = kernel_mod(self.engine.build_mod(d, p), p)
        coords = [[int(x) for x in row] for row in K]
        elements = [
            self.engine.space.element_from_coords(self.field, d, v) for v in coords
        ]
        return elements, coords, (p,)

    def dim_upper_bound(self, d: int):
        """dim of the piece mod one prime: exact over F_p, an upper bound over Q."""
        ncols = self.engine.space.dim(d)
        if ncols == 0:
            return 0, None
        if isinstance(self.field, Rationals):
            p = PRIMES[0]
        else:
            p = self.field.p
        return ncols - rank_mod(self.engine.build_mod(d, p), p), p


def graded_basis(
    A: Arrangement,
    kind: str,
    order: int = 1,
    d: int = 0,
    engine: str = "auto",
    certify: bool = True,
    base=None,
) -> GradedBasis:
    """Exact basis of D^p(A, m)_d (kind "D") or Omega^p(A, m)_d (kind "O").

    Multiplicities ride along on the arrangement.  Over Q the basis is
    reconstructed from modular solves and, with certify=True (default),
    every element is verified against the defining divisibility
    conditions exactly; dimensions are exact either way because mod-p
    ranks bound the rank over Q from below.
    """
    eng = pick_engine(A, kind, order, engine, base=base)
    solver = _PieceSolver(eng, A.field)
    elements, coords, primes = solver.kernel(d)
    vectors = [eng.to_coeffvector(el, d) for el in elements]
    certified = True
    if isinstance(A.field, Rationals) and certify:
        for el in elements:
            if not eng.verify(el, d):
                raise SolverError(
                    f"reconstructed basis element failed exact verification at degree {d}"
                )
    return GradedBasis(
        arrangement=A,
        kind=kind,
        order=order,
        degree=d,
        vectors=vectors,
        elements=elements,
        engine=eng,
        certified=certified,
        primes=primes,
    )


def graded_dimension(A: Arrangement, kind: str, order: int = 1, d: int = 0, engine: str = "auto", base=None) -> int:
    """Exact dimension of a graded piece.

    Over F_p this is native.  Over Q a zero answer is already exact (the
    mod-p kernel bounds the rational kernel); a nonzero answer is
    certified by reconstructing and verifying a full basis.
    """
    eng = pick_engine(A, kind, order, engine, base=base)
    solver = _PieceSolver(eng, A.field)
    n, _ = solver.dim_upper_bound(d)
    if n == 0 or not isinstance(A.field, Rationals):
        return n
    return graded_basis(A, kind, order, d, engine=engine, base=base).dimension


# ---------------------------------------------------------------------------
# evaluation matrices (free module -> graded piece coordinates)
# ---------------------------------------------------------------------------


def eval_matrix_mod(space: TwistSpace, gens, d: int, p: int) -> np.ndarray:
    """Matrix of the evaluation map  (+)_k S[-e_k] -> piece coords at degree d.

    `gens` is a list of (degree e_k, element); column (k, mono) holds the
    flattened coordinates of mono * gen_k.  Column order matches the
    TwistSpace with twists (e_1, ..., e_s).
    """
    ell = space.ell
    ncols = sum(dim_homogeneous(ell, d - e) for e, _ in gens)
    E = np.zeros((space.dim(d), ncols), dtype=np.int64)
    tgt_offsets = []
    pos = 0
    for deg in space.block_degrees(d):
        tgt_offsets.append(pos)
        pos += dim_homogeneous(ell, deg)
    col = 0
    for e, el in gens:
        gdeg = d - e
        if gdeg < 0:
            continue
        src_degs = space.block_degrees(e)
        per_block = []
        for j, poly in enumerate(el):
            if src_degs[j] < 0 or poly.is_zero():
                per_block.append(None)
                continue
            idxmap = monomial_index(ell, src_degs[j])
            src_idx = np.array([idxmap[mo] for mo in poly.terms], dtype=np.int64)
            vals = np.array([_coeff_mod(c, p) for c in poly.terms.values()], dtype=np.int64)
            per_block.append((src_idx, vals, src_degs[j]))
        for mono in monomial_basis(ell, gdeg):
            for j, blk in enumerate(per_block):
                if blk is None:
                    continue
                src_idx, vals, sdeg = blk
                tab = shift_table(ell, sdeg, mono)
                E[tgt_offsets[j] + tab[src_idx], col] = vals
            col += 1
    return E


def combination_is_zero(space: TwistSpace, gens, coeff_element, d: int) -> bool:
    """Exact check that sum_k c_k * gen_k vanishes identically.

    `coeff_element` is an element of the TwistSpace with twists = gen
    degrees at degree d (one coefficient polynomial per generator).
    """
    if not gens:
        return all(p.is_zero() for p in coeff_element)
    nblocks = len(gens[0][1])
    field = None
    for poly in coeff_element:
        field = poly.field
        break
    for j in range(nblocks):
        acc = None
        for (e, el), c in zip(gens, coeff_element):
            if c.is_zero() or el[j].is_zero():
                continue
            term = c * el[j]
            acc = term if acc is None else acc + term
        if acc is not None and not acc.is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# certified minimal-generator sweep
# ---------------------------------------------------------------------------


class ConstraintFamily:
    """Graded pieces cut out by an engine's divisibility constraints."""

    def __init__(self, engine, field):
        self.engine = engine
        self.space = engine.space
        self.field = field

    def matrix_mod(self, d: int, p: int) -> np.ndarray:
        return self.engine.build_mod(d, p)

    def verify_element(self, element, d: int) -> bool:
        return self.engine.verify(element, d)


class EvalKernelFamily:
    """Graded pieces of the relation module of a list of generators.

    The piece at degree d is the kernel of the evaluation map into
    `tgt_space`; its elements are coefficient tuples (one polynomial per
    generator), i.e. elements of TwistSpace(twists = generator degrees).
    """

    def __init__(self, tgt_space: TwistSpace, gens, field):
        self.tgt_space = tgt_space
        self.gens = gens
        self.space = TwistSpace(tgt_space.ell, tuple(e for e, _ in gens))
        self.field = field

    def matrix_mod(self, d: int, p: int) -> np.ndarray:
        return eval_matrix_mod(self.tgt_space, self.gens, d, p)

    def verify_element(self, element, d: int) -> bool:
        return combination_is_zero(self.tgt_space, self.gens, element, d)


@dataclass
class SweepResult:
    degrees: list  # generator degrees in sweep order
    elements: list  # engine/space elements, aligned with degrees
    dims: dict  # degree -> exact piece dimension
    degree_range: tuple
    stopped_early: bool
    certified: bool


def _eval_prime(gens, fallback: int):
    """First ladder prime coprime to every denominator in the generators."""
    for p in PRIMES:
        try:
            for e, el in gens:
                for poly in el:
                    for c in poly.terms.values():
                        _coeff_mod(c, p)
            return p
        except ZeroDivisionError:
            continue
    return fallback


def sweep_minimal_generators(family, degree_range, stop_if_exceeds=None, hints=None) -> SweepResult:
    """Degreewise minimal generators of the graded module cut out by `family`.

    At each degree the new generators are the cokernel of the evaluation
    map of the generators found so far.  Over F_p everything is native;
    over Q the dimensions are certified by mod-p rank bounds and every
    exhibited representative passes `family.verify_element` exactly.
    """
    lo, hi = degree_range
    field = family.field
    rational = isinstance(field, Rationals)
    gens = []
    degrees = []
    elements = []
    dims = {}
    stopped = False
    for d in range(lo, hi + 1):
        ncols = family.space.dim(d)
        if ncols == 0:
            dims[d] = 0
            continue
        hints_d = (hints or {}).get(d, ())
        if rational:
            n_d, new = _degree_step_qq(family, gens, d, ncols, hints_d)
        else:
            n_d, new = _degree_step_fp(family, gens, d, field.p)
        dims[d] = n_d
        for el in new:
            gens.append((d, el))
            degrees.append(d)
            elements.append(el)
        if stop_if_exceeds is not None and len(gens) > stop_if_exceeds:
            stopped = True
            break
    return SweepResult(
        degrees=degrees,
        elements=elements,
        dims=dims,
        degree_range=(lo, hi),
        stopped_early=stopped,
        certified=True,
    )


def _degree_step_fp(family, gens, d: int, p: int):
    C = family.matrix_mod(d, p)
    K = kernel_mod(C, p)
    n_d = K.shape[0]
    if n_d == 0:
        return 0, []
    E = eval_matrix_mod(family.space, gens, d, p) if gens else np.zeros((family.space.dim(d), 0), dtype=np.int64)
    r = rank_mod(E, p) if E.shape[1] else 0
    if r == n_d:
        return n_d, []
    aug = np.hstack([E, K.T])
    _, pivots = rref_mod(aug, p)
    new = []
    for c in pivots:
        if c >= E.shape[1]:
            coords = [int(x) for x in K[c - E.shape[1]]]
            new.append(family.space.element_from_coords(family.field, d, coords))
    assert len(new) == n_d - r
    return n_d, new


def _degree_step_qq(family, gens, d: int, ncols: int, hints_d=()):
    # fast path: dim <= n0 (constraint rank mod p bounds the rational
    # kernel) and dim >= eval rank mod p (the span of verified-member
    # multiples); equality pins the dimension with no reconstruction
    p0 = _eval_prime(gens, PRIMES[0])
    n0 = ncols - rank_mod(family.matrix_mod(d, p0), p0)
    if n0 == 0:
        return 0, []
    E = (
        eval_matrix_mod(family.space, gens, d, p0)
        if gens
        else np.zeros((family.space.dim(d), 0), dtype=np.int64)
    )
    r0 = rank_mod(E, p0) if E.shape[1] else 0
    if r0 == n0:
        return n0, []
    rank_eval = _certified_eval_rank(family, gens, d) if E.shape[1] else 0
    if rank_eval == n0:
        return n0, []
    if hints_d:
        chosen = _try_hinted_generators(family, gens, d, hints_d, n0, rank_eval, E, p0)
        if chosen is not None:
            return n0, chosen
    # apparent generator degree: reconstruct candidates, certify the
    # exact eval rank, and verify the selected representatives; the
    # piece dimension is then rank + (number of new generators), both
    # sides certified (mod-p ranks bound the rational ranks from below,
    # the representatives are exhibited members)
    vectors, rank_c, pivots, primes = kernel_qq_candidates(
        lambda p: family.matrix_mod(d, p), ncols
    )
    n_d = len(vectors)
    if n_d == 0:
        return 0, []
    elements = [
        normalize_element(family.space.element_from_coords(QQ, d, v)) for v in vectors
    ]
    if rank_eval == n_d:
        return n_d, []
    # pick representatives with a prime whose eval rank is the true one
    for p in PRIMES:
        try:
            Ep = eval_matrix_mod(family.space, gens, d, p) if gens else np.zeros((family.space.dim(d), 0), dtype=np.int64)
        except ZeroDivisionError:
            continue
        if (rank_mod(Ep, p) if Ep.shape[1] else 0) != rank_eval:
            continue
        Kmod = np.zeros((n_d, ncols), dtype=np.int64)
        try:
            for i, v in enumerate(vectors):
                for j, x in enumerate(v):
                    if x:
                        Kmod[i, j] = _coeff_mod(x, p)
        except ZeroDivisionError:
            continue
        aug = np.hstack([Ep, Kmod.T])
        _, aug_pivots = rref_mod(aug, p)
        new = [elements[c - Ep.shape[1]] for c in aug_pivots if c >= Ep.shape[1]]
        if len(new) != n_d - rank_eval:
            continue
        for el in new:
            if not family.verify_element(el, d):
                raise SolverError(
                    f"selected generator failed exact verification at degree {d}"
                )
        return rank_eval + len(new), new
    raise SolverError("no ladder prime reproduced the certified eval rank")


def _try_hinted_generators(family, gens, d, hints_d, n0, rank_eval, E, p0):
    """Fill the quotient with caller-supplied exact elements if possible.

    Returns the selected new generators, or None when the hints do not
    span the whole cokernel (the caller then falls back to kernel
    reconstruction).  Exactness: each selected hint is verified as a
    member, the eval rank is already certified, and the mod-p pivot
    count bounds the rational independence from below while n0 bounds
    the piece dimension from above.
    """
    cols = []
    valid = []
    for el in hints_d:
        if not family.verify_element(el, d):
            continue
        try:
            cols.append(family.space.flatten_mod(el, d, p0))
        except ZeroDivisionError:
            return None
        valid.append(el)
    if not valid:
        return None
    H = np.stack(cols, axis=1)
    aug = np.hstack([E, H]) if E.shape[1] else H
    _, pivots = rref_mod(aug, p0)
    chosen = [valid[c - E.shape[1]] for c in pivots if c >= E.shape[1]]
    if rank_eval + len(chosen) != n0:
        return None
    return [normalize_element(el) for el in chosen]


def _certified_eval_rank(family, gens, d: int) -> int:
    """Exact rank of the evaluation map, certified by exhibiting its kernel."""
    src = TwistSpace(family.space.ell, tuple(e for e, _ in gens))
    ncols = src.dim(d)
    if ncols == 0:
        return 0
    vectors, rank_c, _, _ = kernel_qq_candidates(
        lambda p: eval_matrix_mod(family.space, gens, d, p), ncols
    )
    for v in vectors:
        coeff_el = src.element_from_coords(QQ, d, v)
        if not combination_is_zero(family.space, gens, coeff_el, d):
            raise SolverError("eval kernel candidate failed exact verification")
    return ncols - len(vectors)


# ---------------------------------------------------------------------------
# public API: minimal generators and the Saito criterion
# ---------------------------------------------------------------------------


@dataclass
class GeneratorSet:
    """Minimal generators of a log module within a degree window."""

    arrangement: Arrangement
    kind: str
    order: int
    degrees: list
    representatives: list  # CoeffVector, aligned with degrees
    elements: list
    dims: dict
    degree_bound_used: tuple
    certified: bool
    engine: object
    stopped_early: bool = False

    def degree_multiset(self):
        return sorted(self.degrees)

    def count_by_degree(self):
        out = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return out


def default_degree_range(A: Arrangement, kind: str):
    if kind == "D":
        return (0, A.deg_Q())
    return (-A.deg_Q(), 0)


def minimal_generators(
    A: Arrangement,
    kind: str,
    order: int = 1,
    degree_range=None,
    engine: str = "auto",
    stop_if_exceeds=None,
    base=None,
    hints=None,
) -> GeneratorSet:
    """Minimal generators of D^p (kind "D") or Omega^p (kind "O").

    Sweeps the degree window (default: [0, deg Q] for D, [-deg Q, 0] for
    Omega) and at each degree quotients the graded piece by the span of
    the monomial multiples of the generators already found.
    """
    if degree_range is None:
        degree_range = default_degree_range(A, kind)
    eng = pick_engine(A, kind, order, engine, base=base)
    family = ConstraintFamily(eng, A.field)
    hint_map = None
    if hints:
        hint_map = {}
        for cv in hints:
            hint_map.setdefault(cv.degree, []).append(eng.element_from_cv(cv))
    res = sweep_minimal_generators(
        family, degree_range, stop_if_exceeds=stop_if_exceeds, hints=hint_map
    )
    reps = [eng.to_coeffvector(el, d) for d, el in zip(res.degrees, res.elements)]
    return GeneratorSet(
        arrangement=A,
        kind=kind,
        order=order,
        degrees=res.degrees,
        representatives=reps,
        elements=res.elements,
        dims=res.dims,
        degree_bound_used=res.degree_range,
        certified=res.certified,
        engine=eng,
        stopped_early=res.stopped_early,
    )


@dataclass
class SaitoResult:
    free: bool
    exponents: list | None
    constant: object | None
    generators: GeneratorSet | None
    reason: str

    def __bool__(self):
        return self.free


def saito_check(A: Arrangement, degree_bound=None, engine: str = "auto", base=None) -> SaitoResult:
    """Freeness certificate via the determinant criterion.

    Sweeps minimal generators of the derivation module; once ell
    generators with degree sum deg Q(A, m) are found, their coefficient
    determinant is compared with c * Q(A, m) by exact polynomial
    division.  Success certifies freeness with the generator degrees as
    exponents; a completed sweep without success certifies non-freeness.
    """
    if A.essential_rank != A.ell:
        raise SolverError("saito_check needs an essential arrangement; essentialize first")
    ell = A.ell
    degQ = A.deg_Q()
    hi = degQ if degree_bound is None else degree_bound
    eng = pick_engine(A, "D", 1, engine, base=base)
    family = ConstraintFamily(eng, A.field)
    gens = []
    degrees = []
    dims = {}
    rational = isinstance(A.field, Rationals)
    for d in range(0, hi + 1):
        ncols = family.space.dim(d)
        if ncols == 0:
            dims[d] = 0
            continue
        if rational:
            n_d, new = _degree_step_qq(family, gens, d, ncols)
        else:
            n_d, new = _degree_step_fp(family, gens, d, A.field.p)
        dims[d] = n_d
        for el in new:
            gens.append((d, el))
            degrees.append(d)
        if len(gens) > ell:
            gs = _generator_set(A, "D", eng, gens, dims, (0, d), stopped=True)
            return SaitoResult(False, None, None, gs, f"more than {ell} minimal generators")
        if len(gens) == ell and sum(degrees) == degQ:
            cvs = [eng.to_coeffvector(el, dd) for dd, el in gens]
            c = _saito_constant(A, cvs)
            if c is not None:
                gs = _generator_set(A, "D", eng, gens, dims, (0, d), stopped=False)
                return SaitoResult(True, sorted(degrees), c, gs, "determinant matches Q")
    gs = _generator_set(A, "D", eng, gens, dims, (0, hi), stopped=False)
    if degree_bound is None:
        return SaitoResult(False, None, None, gs, "no Saito basis; arrangement not free")
    return SaitoResult(False, None, None, gs, "not free up to bound")


def _generator_set(A, kind, eng, gens, dims, rng, stopped):
    reps = [eng.to_coeffvector(el, d) for d, el in gens]
    return GeneratorSet(
        arrangement=A,
        kind=kind,
        order=1,
        degrees=[d for d, _ in gens],
        representatives=reps,
        elements=[el for _, el in gens],
        dims=dims,
        degree_bound_used=rng,
        certified=True,
        engine=eng,
        stopped_early=stopped,
    )


def _saito_constant(A: Arrangement, cvs):
    """c with det(coefficient matrix) = c * Q(A, m), or None."""
    from .poly import poly_det, divide_by_linear

    entries = [list(cv.numerators) for cv in cvs]
    det = poly_det(entries)
    if det.is_zero():
        return None
    f = det
    for alpha, m in zip(A.forms, A.mult):
        for _ in range(m):
            q, r = divide_by_linear(f, alpha)
            if not r.is_zero():
                return None
            f = q
    if f.is_zero() or f.total_degree() != 0:
        return None
    return f.coeff((0,) * A.ell)


def free_piece_dimension(ell: int, exponents, d: int) -> int:
    """Graded dimension of a free module with the given generator degrees."""
    return sum(dim_homogeneous(ell, d - e) for e in exponents)


def omega_generators_from_free(A: Arrangement, saito_result: SaitoResult) -> GeneratorSet:
    """Minimal 1-form generators of a Saito-certified free arrangement.

    The dual basis of the derivation basis generates the forms freely
    (its numerator determinant is a nonzero multiple of Q^{ell-1}), so no
    sweep is required; the dimension table is the free Hilbert function.
    """
    if not saito_result.free:
        raise SolverError("needs a Saito-certified free arrangement")
    base = free_base_from_saito(A, list(range(A.n)), saito_result)
    degrees = [-e for e in base.exponents]
    reps = [
        CoeffVector("O", 1, -e, base.omega_numerators[i])
        for i, e in enumerate(base.exponents)
    ]
    lo, hi = default_degree_range(A, "O")
    dims = {d: free_piece_dimension(A.ell, degrees, d) for d in range(lo, hi + 1)}
    order_idx = sorted(range(len(degrees)), key=lambda i: degrees[i])
    return GeneratorSet(
        arrangement=A,
        kind="O",
        order=1,
        degrees=[degrees[i] for i in order_idx],
        representatives=[reps[i] for i in order_idx],
        elements=[tuple(reps[i].numerators) for i in order_idx],
        dims=dims,
        degree_bound_used=(lo, hi),
        certified=True,
        engine=AmbientEngine(A, "O", 1),
        stopped_early=False,
    )
