import random
from fractions import Fraction

import numpy as np

from arrlog.fields import QQ, _is_prime
from arrlog.linalg import Matrix, kernel_basis
from arrlog.modular import (
    PRIMES,
    fraction_matrix_to_mod,
    kernel_mod,
    kernel_qq_candidates,
    rank_mod,
    rational_reconstruct,
    rref_mod,
)


def test_prime_ladder():
    assert len(set(PRIMES)) == len(PRIMES)
    for p in PRIMES:
        assert _is_prime(p)
        assert p < 1 << 28


def test_rational_reconstruct_roundtrip():
    rng = random.Random(1)
    m = PRIMES[0] * PRIMES[1]
    for _ in range(50):
        n = rng.randint(-10**6, 10**6)
        d = rng.randint(1, 10**6)
        from math import gcd

        g = gcd(abs(n), d)
        n, d = n // g, d // g
        r = n * pow(d, -1, m) % m
        assert rational_reconstruct(r, m) == Fraction(n, d)


def test_rref_mod_matches_exact():
    rng = random.Random(2)
    p = PRIMES[0]
    for _ in range(10):
        rows = [[rng.randint(-20, 20) for _ in range(7)] for _ in range(5)]
        A = np.array(rows, dtype=np.int64)
        R, pivots = rref_mod(A, p)
        _, pivots_exact, rk = __import__("arrlog.linalg", fromlist=["rref"]).rref(
            Matrix(QQ, rows)
        )
        assert pivots == pivots_exact
        assert len(pivots) == rk


def test_kernel_mod_annihilates():
    rng = random.Random(3)
    p = PRIMES[1]
    A = np.array([[rng.randint(0, p - 1) for _ in range(6)] for _ in range(3)], dtype=np.int64)
    K = kernel_mod(A, p)
    assert K.shape[0] == 6 - rank_mod(A, p)
    assert not ((A @ K.T) % p).any()


def test_kernel_qq_candidates_exact():
    rng = random.Random(4)
    for _ in range(8):
        rows = [[rng.randint(-30, 30) for _ in range(8)] for _ in range(5)]

        def build(p, rows=rows):
            return np.array(rows, dtype=np.int64) % p

        vectors, rk, pivots, primes = kernel_qq_candidates(build, 8)
        exact = kernel_basis(Matrix(QQ, rows))
        assert len(vectors) == len(exact)
        # candidates must annihilate the exact matrix
        for v in vectors:
            for row in rows:
                assert sum(a * b for a, b in zip(row, v)) == 0


def test_fraction_matrix_to_mod():
    p = PRIMES[0]
    M = fraction_matrix_to_mod([[Fraction(1, 2), 3]], p)
    assert (2 * M[0, 0]) % p == 1
    assert M[0, 1] == 3
