"""Truncated highest-weight modules: Gram forms, actions, multiplicities."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkm.qfield import FieldElem
from qkm.rootdata import cartan_with_symmetrizers, fundamental, validate_cartan
from qkm.uqmod import (GramTable, ExactRing, TruncModule, TruncationError,
                       Vec, cross_defect, dual_basis, multiplicities_specialized,
                       pairing, serre_defect)

A1_AFF = validate_cartan([[2, -2], [-2, 2]])
HW0 = fundamental(A1_AFF, 0)


@pytest.fixture(scope="module")
def m_depth3():
    return TruncModule(A1_AFF, HW0, 3)


def test_known_small_multiplicities(m_depth3):
    # basic-representation weight multiplicities at small depth
    dims = m_depth3.dims()
    assert dims[(0, 0)] == 1
    assert dims[(1, 0)] == 1
    assert dims[(1, 1)] == 1
    assert dims[(2, 1)] == 1
    assert dims[(0, 1)] == 0  # alpha_1 is not below the highest weight


def test_gram_form_is_symmetric():
    table = GramTable(A1_AFF, HW0, ExactRing())
    words = [(0,), (0, 1), (1, 0)]
    for a in words:
        for b in words:
            assert table.pair(a, b) == table.pair(b, a)


def test_dual_basis_pairs_to_identity(m_depth3):
    for beta in sorted(m_depth3.betas):
        dim = m_depth3.dim(beta)
        duals = dual_basis(m_depth3, beta)
        assert len(duals) == dim
        for j, l in enumerate(duals):
            for k in range(dim):
                coords = [FieldElem.one() if t == k else FieldElem.zero()
                          for t in range(dim)]
                val = pairing(l, Vec(beta, coords))
                assert val.is_one() if j == k else val.is_zero()


def test_serre_and_cross_relations_exact(m_depth3):
    for i, j in ((0, 1), (1, 0)):
        rep = serre_defect(m_depth3, i, j)
        assert rep["E"]["nonzero_defects"] == 0
        assert rep["F"]["nonzero_defects"] == 0
        assert rep["E"]["vectors_checked"] > 0
    for i in A1_AFF.nodes:
        for j in A1_AFF.nodes:
            assert cross_defect(m_depth3, i, j)["nonzero_defects"] == 0


def test_string_end_is_exact_zero_not_truncation():
    # spin-1/2 module: F^2 annihilates genuinely, no truncation flag
    cd = cartan_with_symmetrizers([[2]], [1])
    m = TruncModule(cd, fundamental(cd, 0), 1)
    v0 = m.highest_vec()
    v1, trunc = m.act(("F", 0), v0)
    assert not trunc and not v1.is_zero()
    v2, trunc = m.act(("F", 0), v1)
    assert v2.is_zero() and not trunc


def test_truncation_boundary_is_flagged(m_depth3):
    # walking out of the depth window must flag, not silently vanish
    v = m_depth3.highest_vec()
    flagged = False
    for step in ((0,), (1,), (0,), (1,)):
        v, trunc = m_depth3.act(("F", step[0]), v)
        flagged = flagged or trunc
        if v.is_zero():
            break
    assert flagged
    with pytest.raises(TruncationError):
        v = m_depth3.highest_vec()
        for step in (0, 1, 0, 1):
            v, _ = m_depth3.act(("F", step), v, on_truncation="raise")


@given(st.integers(2, 40), st.integers(41, 90))
@settings(max_examples=8, deadline=None)
def test_multiplicity_oracle_matches_exact_path(num, den):
    q0 = Fraction(num, den)
    m = TruncModule(A1_AFF, HW0, 3)
    oracle = multiplicities_specialized(A1_AFF, HW0, 3, q0)
    for beta, dim in m.dims().items():
        assert oracle[beta] == dim
