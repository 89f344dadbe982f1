from fractions import Fraction as F

import pytest

from grskit import RootSet, SymForm, check_grs_axioms, primitive_roots
from grskit.feasibility import (AbstractRootData, GramSpace, MultiplierMap, Witness,
                                check_parabolic8_structure, classify_groupoid, decide, expand,
                                forced_isotropy, forced_minimums, forced_orthogonality,
                                format_matrix, gram_equality_space, grid_values, isotropy_witnesses,
                                multiplier_caps, pair_row, rank2_feasibility, rank2_form,
                                search_certificate, sign_contradiction, verify_certificate,
                                verify_witness)

A2 = AbstractRootData(2, ((1, 0), (0, 1), (1, 1)), "A2")
B2 = AbstractRootData(2, ((1, 0), (0, 1), (1, 1), (1, 2)), "B2-like")
C2 = AbstractRootData(2, ((1, 0), (0, 1), (1, 1), (2, 1)), "C2")

G_3_6 = SymForm(((2, 0, F(-1, 2)), (0, 3, F(-3, 2)), (F(-1, 2), F(-3, 2), 1)))
G_3_8 = SymForm(((3, 0, -1), (0, 2, -1), (-1, -1, 1)))
G_3_9 = SymForm(((F(3, 4), 0, F(-1, 2)), (0, 2, -1), (F(-1, 2), -1, 1)))


def data(fixtures, label):
    return AbstractRootData.from_file(fixtures[label])


def test_abstract_data_validation():
    with pytest.raises(ValueError, match="unit vector"):
        AbstractRootData(2, ((1, 1), (0, 1)))
    with pytest.raises(ValueError, match="non-proportional"):
        AbstractRootData(2, ((1, 0), (0, 1), (2, 0)))
    with pytest.raises(ValueError):
        AbstractRootData(2, ())


def test_expand_counts(fixtures):
    d = data(fixtures, "(3,1)")
    ones = expand(d, MultiplierMap.ones(d))
    assert len(ones) == 2 * len(d.roots) + 1
    assert expand(d, MultiplierMap.from_dict(d, {(0, 0, 1): 2})).half_count == 11
    d20 = data(fixtures, "(3,20)")
    assert expand(d20, MultiplierMap.from_dict(d20, {(0, 0, 1): 3})).half_count == 21


def test_gram_space_full_without_pairs(fixtures):
    d = data(fixtures, "(3,9)")
    assert gram_equality_space(d, []).dim == 6


def test_gram_space_3_10_isotropic(fixtures):
    d = data(fixtures, "(3,10)")
    m = MultiplierMap.ones(d)
    space = gram_equality_space(d, forced_orthogonality(d, m))
    row = pair_row((0, 1, 3), (0, 1, 3))
    assert all(sum(a * b for a, b in zip(row, basis)) == 0 for basis in space.basis)


def test_gram_space_3_9_contains_certificate(fixtures):
    d = data(fixtures, "(3,9)")
    space = gram_equality_space(d, forced_orthogonality(d, MultiplierMap.ones(d)))
    assert space.contains(G_3_9)


def test_forced_isotropy_examples(fixtures):
    d10 = data(fixtures, "(3,10)")
    m = MultiplierMap.ones(d10)
    space = gram_equality_space(d10, forced_orthogonality(d10, m))
    expected = ((0, 1, 3), ((1, 0, 2), (1, 1, 2), (1, 2, 3)))
    w = forced_isotropy(d10, m, space, expected=expected)
    assert w.root == (0, 1, 3)
    assert verify_witness(d10, m, w)
    # without the expectation another valid witness comes first
    assert all(verify_witness(d10, m, x) for x in isotropy_witnesses(d10, m, space))
    d5 = data(fixtures, "(3,5)")
    m5 = MultiplierMap.ones(d5)
    w5 = forced_isotropy(d5, m5, gram_equality_space(d5, forced_orthogonality(d5, m5)))
    assert w5.root == (1, 0, 0)
    assert set(w5.orthogonal) == {(0, 1, 0), (1, 0, 2), (1, 1, 3)}
    ma = MultiplierMap.ones(A2)
    assert forced_isotropy(A2, ma, gram_equality_space(A2, forced_orthogonality(A2, ma))) is None


def test_witness_text():
    w = Witness("isotropy", (0, 1, 3), ((1, 0, 2), (1, 1, 2), (1, 2, 3)))
    assert str(w) == "(0,1,3) _|_ (1,0,2),(1,1,2),(1,2,3)"


def test_caps(fixtures):
    c9 = multiplier_caps(data(fixtures, "(3,9)"))
    assert sorted(c9.values()) == [1] * 6 + [2] * 7
    c13 = multiplier_caps(data(fixtures, "(3,13)"))
    assert c13[(0, 0, 1)] == 4
    rest = [k for v, k in c13.items() if v != (0, 0, 1)]
    assert sorted(rest) == [1] * 12 + [2] * 3
    c20 = multiplier_caps(data(fixtures, "(3,20)"))
    assert c20[(0, 0, 1)] == 4
    assert all(k == 1 for v, k in c20.items() if v != (0, 0, 1))


def test_forced_minimum_3_1(fixtures):
    d = data(fixtures, "(3,1)")
    assert forced_minimums(d, multiplier_caps(d)) == {(0, 0, 1): 2}


def test_parabolic8_structure():
    assert check_parabolic8_structure(C2, (1, 0))
    # DC-type parabolic {2b_i, 2b_j, b_i + b_j, b_i - b_j} with alpha = 2b_i
    assert not check_parabolic8_structure(C2, (2, 1))
    with pytest.raises(ValueError):
        check_parabolic8_structure(A2, (1, 0))


def test_verify_certificate_examples(fixtures):
    d8 = data(fixtures, "(3,8)")
    m8 = MultiplierMap((2, 1, 2, 1, 1, 1, 1, 1, 2, 1, 1, 1, 1))
    assert verify_certificate(d8, m8, G_3_8)
    d6 = data(fixtures, "(3,6)")
    assert verify_certificate(d6, MultiplierMap.ones(d6), G_3_6)
    m6 = MultiplierMap.from_dict(d6, {(1, 1, 2): 2})
    assert not verify_certificate(d6, m6, SymForm.standard(3))
    d9 = data(fixtures, "(3,9)")
    assert verify_certificate(d9, MultiplierMap.ones(d9), G_3_9)
    # wrong multipliers fail even with a correct form
    assert not verify_certificate(d9, MultiplierMap.from_dict(d9, {(0, 0, 1): 2}), G_3_9)


def test_search_certificate(fixtures):
    d9 = data(fixtures, "(3,9)")
    m = MultiplierMap.ones(d9)
    space = gram_equality_space(d9, forced_orthogonality(d9, m))
    g = search_certificate(d9, m, space)
    assert g is not None and verify_certificate(d9, m, g)
    r1 = AbstractRootData(1, ((1,),))
    m1 = MultiplierMap((2,))
    g1 = search_certificate(r1, m1, gram_equality_space(r1, []))
    assert g1 == SymForm(((1,),))


def test_grid_order():
    vals = grid_values()
    assert vals[:3] == [0, F(1, 3), F(-1, 3)]
    assert grid_values(1)[:3] == [0, 1, -1]
    assert len(vals) == len(set(vals))


def test_rank2_engine_examples():
    assert rank2_feasibility(A2, MultiplierMap.ones(A2))
    assert not rank2_feasibility(B2, MultiplierMap.from_dict(B2, {(1, 0): 2}))
    assert rank2_feasibility(B2, MultiplierMap.from_dict(B2, {(0, 1): 2}))
    assert not rank2_feasibility(A2, MultiplierMap.from_dict(A2, {(1, 1): 2}))
    with pytest.raises(ValueError):
        rank2_feasibility(AbstractRootData(1, ((1,),)), MultiplierMap((1,)))


def test_rank2_form_is_a_certificate():
    for k in (1, 2):
        m = MultiplierMap.from_dict(B2, {(0, 1): k})
        g = rank2_form(expand(B2, m))
        assert g is not None
        assert check_grs_axioms(expand(B2, m), g).valid


def test_sign_contradiction_absent_for_valid_system():
    m = MultiplierMap.ones(A2)
    space = gram_equality_space(A2, forced_orthogonality(A2, m))
    assert sign_contradiction(expand(A2, m), space) is None


def test_decide_rank2_contradiction():
    v = decide(B2, MultiplierMap.from_dict(B2, {(1, 0): 2}))
    assert v.outcome == "contradiction"
    assert v.witness is not None


def test_classify_examples(fixtures):
    r4 = classify_groupoid(data(fixtures, "(3,4)"))
    assert not r4.classes and not r4.undecided
    assert r4.summary().startswith("no GRS")
    r6 = classify_groupoid(data(fixtures, "(3,6)"))
    assert len(r6.classes) == 2
    r8 = classify_groupoid(data(fixtures, "(3,8)"))
    assert len(r8.classes) == 1
    assert r8.classes[0].assignment.assignment == (2, 1, 2, 1, 1, 1, 1, 1, 2, 1, 1, 1, 1)


def test_classify_3_10_summary(fixtures):
    r = classify_groupoid(data(fixtures, "(3,10)"))
    assert r.summary() == "no GRS: witness (0,1,3)"
    assert r.lines()[0].startswith("(3,10); ")


def test_classify_grid_only_for_3_1(fixtures):
    r = classify_groupoid(data(fixtures, "(3,1)"), use_bundled=False)
    assert r.assignment_count == 1
    v = r.classes[0]
    assert v.source == "grid"
    assert format_matrix(v.form) == "[[3,0,-1],[0,3,-1],[-1,-1,1]]"


def test_parallel_matches_serial(fixtures):
    d = data(fixtures, "(3,20)")
    a = classify_groupoid(d)
    b = classify_groupoid(d, jobs=2)
    assert a.lines() == b.lines()
