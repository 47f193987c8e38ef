"""Cartan data, weights, the bilinear form, and Weyl group words."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkm.rootdata import (CartanError, Weight, bilinear, cartan_from_json,
                          cartan_to_json, fundamental, is_reduced,
                          pair_coroot, reduce_word, reflect, rho, simple_root,
                          validate_cartan, weight_from_json, weight_to_json,
                          weyl_act)

A1_AFF = validate_cartan([[2, -2], [-2, 2]])
A2_AFF = validate_cartan([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
A2_FIN = validate_cartan([[2, -1], [-1, 2]])

words_a1 = st.lists(st.integers(0, 1), max_size=6).map(tuple)
words_a2 = st.lists(st.integers(0, 2), max_size=6).map(tuple)
weights_a1 = st.tuples(st.integers(-2, 2), st.integers(-2, 2),
                       st.integers(-3, 3), st.integers(-3, 3)).map(
    lambda t: Weight(t[:2], t[2:]))


@pytest.mark.parametrize("bad", [
    [],
    [[2, -1]],
    [[2, 1], [1, 2]],
    [[3, -1], [-1, 2]],
    [[2, 0], [-1, 2]],
])
def test_invalid_cartan_matrices_rejected(bad):
    with pytest.raises(CartanError):
        validate_cartan(bad)


def test_affine_data():
    assert A1_AFF.affine and A1_AFF.marks == (1, 1) and A1_AFF.d == (1, 1)
    assert A2_AFF.affine and A2_AFF.marks == (1, 1, 1)
    assert not A2_FIN.affine and A2_FIN.marks is None


def test_fundamental_pairings():
    for cd in (A1_AFF, A2_AFF, A2_FIN):
        for i in cd.nodes:
            for j in cd.nodes:
                assert pair_coroot(cd, fundamental(cd, i), j) == (i == j)


def test_root_pairings_match_symmetrized_matrix():
    for cd in (A1_AFF, A2_AFF):
        for i in cd.nodes:
            for j in cd.nodes:
                val = bilinear(cd, simple_root(cd, i), simple_root(cd, j))
                assert val == Fraction(cd.d[i] * cd.a[i][j])


def test_rho_pairs_one_with_each_coroot():
    for cd in (A1_AFF, A2_AFF):
        r = rho(cd)
        for i in cd.nodes:
            assert pair_coroot(cd, r, i) == 1


def test_extension_independence_on_root_lattice():
    cd0 = validate_cartan([[2, -2], [-2, 2]], pin_value=0)
    cd1 = validate_cartan([[2, -2], [-2, 2]], pin_value=Fraction(3, 7))
    x = Weight((0, 0), (1, 2))
    hw = fundamental(cd0, 0)
    assert bilinear(cd0, x, x) == bilinear(cd1, x, x)
    assert bilinear(cd0, x, hw) == bilinear(cd1, x, hw)
    # only weight-weight pairings depend on the pin
    assert bilinear(cd0, hw, hw) != bilinear(cd1, hw, hw)


@given(words_a1, weights_a1, weights_a1)
@settings(max_examples=60, deadline=None)
def test_form_invariance_under_weyl_action(word, x, y):
    assert (bilinear(A1_AFF, weyl_act(A1_AFF, word, x),
                     weyl_act(A1_AFF, word, y))
            == bilinear(A1_AFF, x, y))


@given(words_a2)
@settings(max_examples=80, deadline=None)
def test_reduce_word_idempotent_and_reduced(word):
    red = reduce_word(A2_AFF, word)
    assert reduce_word(A2_AFF, red) == red
    assert is_reduced(A2_AFF, red)
    # same Weyl group element on probe weights
    for i in A2_AFF.nodes:
        p = fundamental(A2_AFF, i)
        assert weyl_act(A2_AFF, word, p) == weyl_act(A2_AFF, red, p)


def test_reflection_is_an_involution():
    x = Weight((1, 2), (1, 0))
    for i in A1_AFF.nodes:
        assert reflect(A1_AFF, reflect(A1_AFF, x, i), i) == x


def test_braid_and_square_relations():
    assert reduce_word(A2_FIN, (0, 0)) == ()
    # braid-equivalent reduced words stay reduced and agree as elements
    for word in ((0, 1, 0), (1, 0, 1)):
        assert reduce_word(A2_FIN, word) == word
    for i in A2_FIN.nodes:
        p = fundamental(A2_FIN, i)
        assert (weyl_act(A2_FIN, (0, 1, 0), p)
                == weyl_act(A2_FIN, (1, 0, 1), p))
    assert len(reduce_word(A2_AFF, (0, 1, 0))) == 3


def test_json_round_trips():
    assert cartan_from_json(cartan_to_json(A1_AFF)) == A1_AFF
    x = Weight((1, 0), (2, 1), Fraction(1, 2))
    assert weight_from_json(weight_to_json(x)) == x
