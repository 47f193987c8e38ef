"""Observational coefficient algebra: products, commutation, filtration."""

from __future__ import annotations

import pytest

from qkm.coeffalg import (AElem, MatrixCoeff, all_words,
                          commutation_exponent, commutation_residual,
                          counit, evaluate, filtration_check,
                          filtration_level_duals, level_of,
                          resolution_identity_check, top_coeff,
                          triangular_rank_check)
from qkm.qfield import FieldElem
from qkm.rootdata import Weight, fundamental, validate_cartan
from qkm.uqmod import TruncModule, dual_basis

A1_AFF = validate_cartan([[2, -2], [-2, 2]])
HW0 = fundamental(A1_AFF, 0)
HW1 = fundamental(A1_AFF, 1)


@pytest.fixture(scope="module")
def m2():
    return TruncModule(A1_AFF, HW0, 2)


def test_counit_supported_on_toral_words():
    assert counit(()).is_one()
    assert counit((("K", 0, 1), ("K", 1, -1))).is_one()
    assert counit((("E", 0),)).is_zero()
    assert counit((("K", 0, 1), ("F", 1))).is_zero()


def test_unit_evaluates_as_counit(m2):
    one = AElem.one()
    for w in list(all_words(A1_AFF, 2))[:60]:
        assert evaluate(one, w) == counit(w)


def test_star_is_an_involution(m2):
    x = AElem.from_coeff(top_coeff(m2))
    y = x + x.star().scale(FieldElem.q_power(1))
    z = y.star().star()
    for w in list(all_words(A1_AFF, 2))[:60]:
        assert evaluate(z, w) == evaluate(y, w)


def test_observational_products_associate(m2):
    a = AElem.from_coeff(top_coeff(m2))
    b = a.star()
    c = AElem.one() + a
    lhs, rhs = (a * b) * c, a * (b * c)
    for w in list(all_words(A1_AFF, 3))[:80]:
        assert evaluate(lhs, w) == evaluate(rhs, w)


def test_triangular_rank_small(m2):
    m1 = TruncModule(A1_AFF, HW0, 1)
    rep = triangular_rank_check(m1, m1, maxlen=3)
    assert rep["status"] == "PASS"
    assert rep["witness"]["rank"] == rep["witness"]["products"]


def test_commutation_exponent_is_extension_independent():
    cd1 = validate_cartan([[2, -2], [-2, 2]], pin_value=1)
    for b_lam in ((0, 0), (1, 0), (1, 1)):
        for b_mu in ((1, 0), (1, 1)):
            e0 = commutation_exponent(A1_AFF, HW0, HW1, b_lam, b_mu, (0, 0))
            e1 = commutation_exponent(cd1, HW0, HW1, b_lam, b_mu, (0, 0))
            assert e0 == e1


def test_commutation_residual_vanishes(m2):
    l_lam = dual_basis(m2, (1, 0))[0]
    l_mu = dual_basis(m2, (1, 1))[0]
    rep = commutation_residual(m2, m2, l_lam, l_mu, m2.highest_vec(), maxlen=4)
    assert rep["status"] == "PASS"
    assert rep["residual_rank"] == 0


def test_resolution_of_identity_short_words(m2):
    for w in all_words(A1_AFF, 2):
        assert resolution_identity_check(m2, w).is_zero()


def test_filtration_congruence_and_negative_control():
    m3 = TruncModule(A1_AFF, HW0, 3)
    duals = filtration_level_duals(m3, 1)
    xi = next(l for l in duals if sum(l.beta) == 1)
    rep = filtration_check(m3, m3, xi, xi, 1, maxlen=4)
    assert rep["status"] == "PASS"
    assert rep["witness"]["min_correction_height"] > 1
    # a deliberately wrong commutation exponent must be caught
    wrong = rep["witness"]["exponent"] + 1
    bad = filtration_check(m3, m3, xi, xi, 1, maxlen=4,
                           exponent_override=wrong)
    assert bad["status"] == "FAIL"


def test_level_of_weights():
    assert level_of(A1_AFF, HW0) == 1
    assert level_of(A1_AFF, HW0 + HW1) == 2
    assert level_of(A1_AFF, Weight((0, 0))) == 0
