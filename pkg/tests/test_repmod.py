"""Tensor modules from elementary ladder factors: spectra and certificates."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from qkm.coeffalg import AElem, MatrixCoeff
from qkm.repmod import (CharacterData, RepError, build_Nw, character_eval,
                        check_factorization, check_unitarity, elementary_rep,
                        extremal_dual, psi_star_expand, rep_operator,
                        sl2_relations, spectra, weight_decomposition)
from qkm.rootdata import Weight, fundamental, validate_cartan, weyl_act
from qkm.uqmod import TruncModule, pairing

A1_AFF = validate_cartan([[2, -2], [-2, 2]])
HW0 = fundamental(A1_AFF, 0)
Q0 = Fraction(1, 2)


def test_derived_rank_one_relations_nonempty():
    rels = sl2_relations(1)
    assert len(rels) >= 6  # the defining quadratic relations at least


def test_elementary_rep_builds_and_ladder_spectrum():
    f = elementary_rep(A1_AFF, 0, K=8, q0=Q0)
    diag = np.abs(np.diag(f.gens["t21"]))
    expect = [float(Q0) ** k for k in range(8)]
    assert np.allclose(diag, expect, atol=1e-14)


def test_elementary_rep_rejects_bad_parameters():
    with pytest.raises(ValueError):
        elementary_rep(A1_AFF, 0, K=1, q0=Q0)
    with pytest.raises(ValueError):
        elementary_rep(A1_AFF, 0, K=4, q0=Fraction(3, 2))
    with pytest.raises(ValueError):
        elementary_rep(A1_AFF, 0, K=4, q0=Q0, twist=2.0)


def test_extremal_coefficient_restricts_to_single_generator():
    m = TruncModule(A1_AFF, HW0, 2)
    diff = HW0 - weyl_act(A1_AFF, (0,), HW0)
    beta = tuple(-b for b in diff.beta)
    C = MatrixCoeff(m, extremal_dual(m, beta), m.highest_vec())
    terms = [(c, mono) for c, mono in psi_star_expand(C, 0)
             if not c.is_zero()]
    assert len(terms) == 1
    c, mono = terms[0]
    assert mono == ("t21",) and c.is_one()


def test_empty_word_operator_is_the_pairing_scalar():
    rep = build_Nw(A1_AFF, (), 4, Q0)
    m = rep.module_for(HW0, 2)
    l = extremal_dual(m, (0, 0))
    C = MatrixCoeff(m, l, m.highest_vec())
    op = rep_operator(rep, C)
    assert op.shape == (1, 1)
    assert abs(op[0, 0] - complex(pairing(l, m.highest_vec())
                                  .eval_fraction(Q0))) < 1e-15


def test_factorization_and_swapped_negative_control():
    good = check_factorization(A1_AFF, 0, (1,), HW0, 6, Q0, 3)
    assert good["status"] == "PASS"
    assert good["witness"]["deviation"] <= 1e-10
    bad = check_factorization(A1_AFF, 0, (1,), HW0, 6, Q0, 3, swap=True)
    assert bad["status"] == "FAIL"


def test_factorization_requires_length_increase():
    with pytest.raises(RepError):
        check_factorization(A1_AFF, 0, (0, 1), HW0, 4, Q0, 2)


def test_single_leg_unitarity():
    rep = build_Nw(A1_AFF, (0,), 8, Q0)
    rep_report = check_unitarity(rep, HW0, 3)
    assert rep_report["status"] == "PASS"
    assert rep_report["witness"]["max_deviation"] <= 1e-9


def test_spectra_moduli_and_faithful_uniqueness():
    rep = build_Nw(A1_AFF, (0, 1), 6, Q0)
    sp = spectra(rep, Weight((1, 1)), 5)
    mods = [abs(e) for e, _ in sp]
    assert max(mods) <= 1 + 1e-9
    assert sum(1 for x in mods if abs(x - 1) <= 1e-8) == 1


def test_weight_decomposition_partitions_the_bulk():
    rep = build_Nw(A1_AFF, (0, 1), 6, Q0)
    wd = weight_decomposition(rep, [HW0, fundamental(A1_AFF, 1)], 4)
    sizes = [len(v) for v in wd.values()]
    assert sum(sizes) == 4 ** 2  # interior bulk of both legs
    assert len(wd.get((0, 0), [])) == 1


def test_characters():
    chd = CharacterData("chi_w", (0,), (1j, 1.0))
    assert abs(character_eval(A1_AFF, chd, AElem.one(), Q0) - 1) < 1e-15
    m = TruncModule(A1_AFF, HW0, 2)
    diff = HW0 - weyl_act(A1_AFF, (0,), HW0)
    beta = tuple(-b for b in diff.beta)
    ext = AElem.from_coeff(
        MatrixCoeff(m, extremal_dual(m, beta), m.highest_vec()))
    assert abs(character_eval(A1_AFF, chd, ext, Q0) - 1j) < 1e-15
    chd_n = CharacterData("n_infinity")
    assert character_eval(A1_AFF, chd_n, ext, Q0) == 0
    assert character_eval(A1_AFF, chd_n, AElem.one(), Q0) == 1
