"""Modular fast path for exact rational linear algebra.

Heavy kernels over Q are computed by reducing an integer matrix modulo a
deterministic ladder of word-sized primes (numpy int64 Gauss-Jordan),
combining the reduced rows by CRT and lifting entries with rational
reconstruction.  The lift is a *candidate*: callers certify it exactly
(membership checks plus the mod-p rank lower bound) before trusting it,
so every published result remains exact.

Primes are kept below 2**28 so that sparse integer matrix products used
during constraint assembly cannot overflow int64.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

import numpy as np

from .fields import _is_prime


def _prime_ladder(start: int, count: int):
    out = []
    n = start
    while len(out) < count:
        if _is_prime(n):
            out.append(n)
        n -= 2
    return out


#: deterministic primes used for reduction/reconstruction, largest first
PRIMES = tuple(_prime_ladder((1 << 28) - 1, 64))


class ReconstructionFailed(RuntimeError):
    """Rational reconstruction did not stabilize within the prime ladder."""


class BadPrimeSuspected(RuntimeError):
    """Results over the surrogate primes disagree."""


def rref_mod(A: np.ndarray, p: int):
    """Reduced row echelon form of an integer matrix mod p.

    Returns (R, pivots) with R containing only the nonzero rows.
    """
    A = np.array(A, dtype=np.int64) % p
    m, n = A.shape
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        col = A[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = A[r] * inv % p
        rows = np.nonzero(A[:, c])[0]
        rows = rows[rows != r]
        if rows.size:
            A[rows] = (A[rows] - np.outer(A[rows, c], A[r])) % p
        pivots.append(c)
        r += 1
    return A[: len(pivots)], pivots


def rank_mod(A: np.ndarray, p: int) -> int:
    return len(rref_mod(A, p)[1])


def kernel_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel mod p, one row per free column."""
    R, pivots = rref_mod(A, p)
    n = A.shape[1]
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    K = np.zeros((len(free), n), dtype=np.int64)
    for k, j in enumerate(free):
        K[k, j] = 1
        for i, c in enumerate(pivots):
            K[k, c] = (-int(R[i, j])) % p
    return K


def crt_pair(r1: int, m1: int, r2: int, m2: int):
    g, x = _xgcd(m1, m2)
    assert g == 1
    m = m1 * m2
    return (r1 + (r2 - r1) * x % m2 * m1) % m, m


def _xgcd(a, b):
    """(g, x) with a*x === g (mod b)."""
    x0, x1 = 1, 0
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
    return a, x0


def rational_reconstruct(r: int, m: int):
    """Lift r mod m to a fraction n/d with |n|, d <= sqrt(m/2), or None."""
    r %= m
    bound = isqrt(m // 2)
    s, t = m, r
    x0, x1 = 0, 1
    while t > bound:
        q = s // t
        s, t = t, s - q * t
        x0, x1 = x1, x0 - q * x1
    if x1 == 0:
        return None
    n, d = t, x1
    if d < 0:
        n, d = -n, -d
    if d > bound or _gcd(abs(n), d) != 1 or _gcd(d, m) != 1:
        return None
    return Fraction(n, d)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def reconstruct_matrix(rows_mod: list[np.ndarray], primes: list[int]):
    """CRT-combine per-prime integer matrices and lift entrywise to Q.

    All matrices must have the same shape.  Returns a list of Fraction
    rows, or None if any entry fails to reconstruct.
    """
    m = 1
    combined = np.zeros(rows_mod[0].shape, dtype=object)
    for R, p in zip(rows_mod, primes):
        if m == 1:
            combined = R.astype(object)
            m = p
        else:
            g, x = _xgcd(m, p)
            Rp = R.astype(object)
            combined = (combined + (Rp - combined) * x % p * m) % (m * p)
            m *= p
    out = []
    for row in combined:
        lifted = []
        for a in row:
            f = rational_reconstruct(int(a), m)
            if f is None:
                return None
            lifted.append(f)
        out.append(lifted)
    return out


def kernel_qq_candidates(build, ncols: int, min_primes: int = 2, max_primes: int = 48):
    """Candidate exact kernel basis of an integer matrix given mod p.

    `build(p)` must return the constraint matrix reduced mod p (int64
    2-D array with `ncols` columns; it may differ per prime only by the
    reduction).  Computes rrefs over an increasing set of ladder primes,
    keeps the group agreeing on the (max-rank, lex-min) pivot profile and
    reconstructs the free columns of the reduced matrix entrywise.

    Returns (vectors, rank, pivots, primes_used) where vectors is a list
    of Fraction lists in unit-free-column form.  Completeness is exact as
    soon as the caller verifies membership of each vector: the mod-p rank
    is a lower bound for the rank over Q, so `ncols - rank` independent
    verified kernel vectors span the whole kernel.
    """
    results = {}  # pivots tuple -> list of (prime, free-column block)
    used = []
    for p in PRIMES[:max_primes]:
        A = build(p)
        if A.shape[0] == 0 or A.shape[1] == 0 or not A.any():
            # zero constraint matrix: kernel is everything
            basis = []
            for j in range(ncols):
                v = [Fraction(0)] * ncols
                v[j] = Fraction(1)
                basis.append(v)
            return basis, 0, (), (p,)
        R, pivots = rref_mod(A, p)
        key = tuple(pivots)
        free = [j for j in range(ncols) if j not in set(pivots)]
        results.setdefault(key, []).append((p, R[:, free]))
        used.append(p)
        best = max(results, key=lambda k: (len(k), [-c for c in k]))
        if len(best) == ncols:
            return [], ncols, best, tuple(p for p, _ in results[best])
        group = results[best]
        if len(group) >= min_primes:
            primes = [q for q, _ in group]
            blocks = [B for _, B in group]
            lifted = reconstruct_matrix(blocks, primes)
            if lifted is not None:
                vectors = _kernel_from_lifted(lifted, list(best), ncols)
                return vectors, len(best), best, tuple(primes)
            min_primes += 1  # need more primes for this group
    raise ReconstructionFailed(
        f"no stable kernel after {len(used)} primes (pivot groups: {sorted(map(len, results.values()))})"
    )


def _kernel_from_lifted(free_block, pivots, ncols):
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    for fj, j in enumerate(free):
        v = [Fraction(0)] * ncols
        v[j] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -free_block[i][fj]
        basis.append(v)
    return basis


def fraction_matrix_to_mod(rows, p: int) -> np.ndarray:
    """Reduce a matrix of Fractions/ints mod p (denominators inverted)."""
    out = np.zeros((len(rows), len(rows[0]) if rows else 0), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if isinstance(x, Fraction):
                num = x.numerator % p
                den = x.denominator % p
                if den == 0:
                    raise ZeroDivisionError("denominator divisible by p")
                out[i, j] = num * pow(den, p - 2, p) % p
            else:
                out[i, j] = int(x) % p
    return out


def exact_mat_vec_is_zero(rows, v) -> bool:
    """Exact check that M v = 0 for integer/Fraction data."""
    for row in rows:
        s = 0
        for a, b in zip(row, v):
            if a and b:
                s += a * b
        if s != 0:
            return False
    return True
