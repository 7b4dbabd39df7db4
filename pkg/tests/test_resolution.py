import pytest

from arrlog.fields import GF, QQ
from arrlog.library import boolean, grr3, nine4d
from arrlog.poly import LinearForm
from arrlog.resolution import betti_table, spog_detect
from arrlog.solver import free_piece_dimension


def test_free_module_single_column():
    bt = betti_table(boolean(3), "O")
    assert bt.pd == 0
    assert bt.twist_multisets() == [[-1, -1, -1]]
    assert bt.certified_free_tail and bt.hilbert_ok
    assert spog_detect(bt) is None


def test_boolean_plus_hyperplane_spog():
    # deletion free with exponents (1,1,1): dual strongly-plus-one
    # generated with exponent magnitudes (1,1,1) and level -|A|+|A^H| = -1
    A = boolean(3).add_hyperplane(LinearForm(QQ, [1, 2, 3]))
    bt = betti_table(A, "O")
    assert bt.pd == 1
    assert bt.twist_multisets() == [[-1, -1, -1, -1], [0]]
    sp = spog_detect(bt)
    assert sp is not None
    assert sp.poexp == [1, 1, 1]
    assert sp.level == -1
    assert any(c for c in sp.alpha_coeffs)


def test_grr3_deletion_dual_spog():
    # the deletion of a free (1,4,4) arrangement: the refined statement
    # predicts exponent magnitudes (1,3,3) and a level element in degree
    # d2 + d3 - |A| + |A^H| = -3 (as a form degree)
    G = grr3(3, GF(7))
    bt = betti_table(G.delete(0), "O")
    assert bt.certified_free_tail
    assert bt.pd == 1
    assert bt.twist_multisets() == [[-3, -3, -3, -1], [-2]]
    sp = spog_detect(bt)
    assert sp is not None
    assert sp.poexp == [1, 3, 3]
    assert sp.level == -3


def test_hilbert_consistency_against_free_formula():
    A = boolean(3)
    bt = betti_table(A, "D")
    for d, dim in bt.dims.items():
        assert dim == free_piece_dimension(3, [1, 1, 1], d)


def test_nine4d_cut_betti():
    # restriction of the 9-hyperplane example to its generic hyperplane:
    # five generators in degrees {-1, -2, -2, -2, -3}
    N = nine4d()
    B = N.add_hyperplane(LinearForm(QQ, [1, 3, 5, 7]))
    from arrlog.arrangement import restrict

    AH = restrict(B, B.n - 1).restricted
    bt = betti_table(AH, "O")
    assert bt.certified_free_tail
    assert bt.columns[0].twists and sorted(set(bt.columns[0].twists)) == [-3, -2, -1]
    assert bt.pd >= 1  # five generators on a rank-3 module force relations
