import random
from math import comb

import pytest

from arrlog.fields import GF, QQ
from arrlog.linalg import Matrix, kernel_basis
from arrlog.poly import (
    LinearForm,
    Poly,
    divide_by_linear,
    divisibility_constraints,
    divisible_by_linear_power,
    monomial_basis,
    poly_det,
    product,
    substitute_linear,
    wedge_numerators,
)


def P(terms, ell=2, field=QQ):
    return Poly(field, ell, {tuple(m): field.of(c) for m, c in terms.items()})


def test_monomial_basis_counts():
    assert monomial_basis(3, 0) == ((0, 0, 0),)
    assert len(monomial_basis(3, 2)) == 6  # C(4,2) by hand
    assert monomial_basis(2, -1) == ()
    for ell in range(1, 5):
        for d in range(6):
            assert len(monomial_basis(ell, d)) == comb(d + ell - 1, ell - 1)


def test_monomial_basis_order():
    basis = monomial_basis(2, 2)
    assert basis == ((2, 0), (1, 1), (0, 2))
    # strictly descending lex
    assert all(a > b for a, b in zip(basis, basis[1:]))


def test_poly_arithmetic_roundtrip():
    f = P({(1, 0): 2, (0, 1): -1})
    g = P({(1, 0): 1, (0, 1): 1})
    h = f * g
    assert h == P({(2, 0): 2, (1, 1): 1, (0, 2): -1})
    assert (f + g) - g == f
    assert f.scale(0).is_zero()


def test_substitute_linear_identity_and_swap():
    f = Poly.variable(QQ, 2, 0)
    assert substitute_linear(f, Matrix.identity(QQ, 2)) == f
    swap = Matrix(QQ, [[0, 1], [1, 0]])
    x1sq = P({(2, 0): 1})
    assert substitute_linear(x1sq, swap) == P({(0, 2): 1})


def test_substitute_linear_vs_sympy():
    import sympy

    x0, x1, x2 = sympy.symbols("x0 x1 x2")
    rng = random.Random(9)
    for _ in range(5):
        terms = {
            tuple(v): rng.randint(-3, 3)
            for v in [(2, 0, 0), (1, 1, 0), (0, 1, 1), (0, 0, 2)]
        }
        T = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        M = Matrix(QQ, T)
        from arrlog.linalg import rank

        if rank(M) != 3:
            continue
        f = Poly(QQ, 3, {m: QQ.of(c) for m, c in terms.items() if c})
        got = substitute_linear(f, M)
        sf = sum(
            c * x0**m[0] * x1**m[1] * x2**m[2] for m, c in terms.items()
        )
        subs = {
            x0: T[0][0] * x0 + T[0][1] * x1 + T[0][2] * x2,
            x1: T[1][0] * x0 + T[1][1] * x1 + T[1][2] * x2,
            x2: T[2][0] * x0 + T[2][1] * x1 + T[2][2] * x2,
        }
        expected = sympy.expand(sf.xreplace(subs))
        got_sym = sum(
            sympy.Rational(c) * x0**m[0] * x1**m[1] * x2**m[2]
            for m, c in got.terms.items()
        )
        assert sympy.expand(got_sym - expected) == 0


def test_substitute_roundtrip():
    T = Matrix(QQ, [[1, 1], [0, 1]])
    Tinv = Matrix(QQ, [[1, -1], [0, 1]])
    f = P({(3, 0): 2, (1, 2): -5})
    assert substitute_linear(substitute_linear(f, T), Tinv) == f


def test_substitute_singular_raises():
    with pytest.raises(ValueError):
        substitute_linear(P({(1, 0): 1}), Matrix(QQ, [[1, 1], [1, 1]]))


def test_divide_by_linear():
    alpha = LinearForm(QQ, [1, 1])  # x0 + x1
    f = P({(2, 0): 1, (0, 2): -1})  # x0^2 - x1^2 = (x0+x1)(x0-x1)
    q, r = divide_by_linear(f, alpha)
    assert r.is_zero()
    assert q == P({(1, 0): 1, (0, 1): -1})
    g = P({(2, 0): 1})
    q, r = divide_by_linear(g, alpha)
    assert q * alpha.as_poly() + r == g
    assert divisible_by_linear_power(f, alpha, 1)
    assert not divisible_by_linear_power(f, alpha, 2)


def test_divisibility_constraints_examples():
    # alpha = x1, m = 1, degree 1 in 2 vars: kernel spans {x1}
    alpha = LinearForm(QQ, [1, 0])
    M = divisibility_constraints(1, alpha, 1)
    ker = kernel_basis(M)
    assert len(ker) == 1
    f = Poly.from_vector(QQ, 2, 1, ker[0])
    assert divisible_by_linear_power(f, alpha, 1)

    # alpha = x0 + x1: only multiples of alpha among linear forms
    alpha = LinearForm(QQ, [1, 1])
    ker = kernel_basis(divisibility_constraints(1, alpha, 1))
    assert len(ker) == 1

    # no linear form is divisible by x0^2
    ker = kernel_basis(divisibility_constraints(1, LinearForm(QQ, [1, 0]), 2))
    assert ker == []


def test_divisibility_kernel_dimension_random():
    # divisibility by alpha^m is a free condition: kernel dim = dim S_{d-m}
    rng = random.Random(21)
    F = GF(10007)
    for _ in range(20):
        ell = rng.randint(2, 4)
        d = rng.randint(0, 6)
        m = rng.randint(1, min(3, d + 1))
        coeffs = [rng.randrange(10007) for _ in range(ell)]
        if not any(coeffs):
            coeffs[0] = 1
        alpha = LinearForm(F, coeffs)
        ker = kernel_basis(divisibility_constraints(d, alpha, m))
        expected = comb(d - m + ell - 1, ell - 1) if d >= m else 0
        assert len(ker) == expected
        for v in ker:
            f = Poly.from_vector(F, ell, d, v)
            assert divisible_by_linear_power(f, alpha, m)


def test_wedge_numerators():
    # f proportional to alpha's coefficients: all wedges vanish
    alpha = LinearForm(QQ, [2, 3])
    f = (P({(1, 0): 2}), P({(1, 0): 3}))
    g = wedge_numerators(f, alpha)
    assert all(p.is_zero() for p in g.values())

    x2 = P({(0, 1): 1})
    zero = Poly.zero(QQ, 2)
    alpha = LinearForm(QQ, [1, 0])
    assert wedge_numerators((x2, zero), alpha)[(0, 1)].is_zero()
    g = wedge_numerators((zero, x2), alpha)[(0, 1)]
    assert g == P({(0, 1): -1})
    assert not divisible_by_linear_power(g, alpha, 1)


def test_wedge_bilinearity():
    rng = random.Random(5)
    F = GF(101)
    for _ in range(5):
        ell = 3
        f = tuple(
            Poly(F, ell, {tuple(m): rng.randrange(101) for m in monomial_basis(ell, 2)})
            for _ in range(ell)
        )
        g = tuple(
            Poly(F, ell, {tuple(m): rng.randrange(101) for m in monomial_basis(ell, 2)})
            for _ in range(ell)
        )
        a = LinearForm(F, [1, rng.randrange(101), rng.randrange(101)])
        w_f = wedge_numerators(f, a)
        w_g = wedge_numerators(g, a)
        w_sum = wedge_numerators(tuple(p + q for p, q in zip(f, g)), a)
        for key in w_sum:
            assert w_sum[key] == w_f[key] + w_g[key]


def test_poly_det_and_product():
    x = Poly.variable(QQ, 2, 0)
    y = Poly.variable(QQ, 2, 1)
    det = poly_det([[x, y], [y, x]])
    assert det == x * x - y * y
    assert product([x, y]) == x * y
