from __future__ import annotations

import pytest

from hktlab import exterior as ext
from hktlab.quaternionic import (
    TriState,
    check_balanced,
    check_hkt,
    check_invariant_slnh,
    check_qreal_qpositive,
    gram,
    lee_forms,
)
from hktlab.scalars import ONE, ZERO, parse_scalar

from conftest import complex_of, mono


def test_del_squared_and_del_j_squared_vanish(positive_name):
    c = complex_of(positive_name)
    for p in range(c.m - 1):
        assert (c.del_matrix(p + 1) @ c.del_matrix(p)).is_zero()
        if c.has_j:
            assert (c.del_j_matrix(p + 1) @ c.del_j_matrix(p)).is_zero()
            # del and del_J anticommute
            assert (c.del_matrix(p + 1) @ c.del_j_matrix(p) + c.del_j_matrix(p + 1) @ c.del_matrix(p)).is_zero()


def test_jop_squares_to_minus_one_on_one_forms(positive_name):
    c = complex_of(positive_name)
    if not c.has_j:
        pytest.skip("no J data")
    for p in range(c.m + 1):
        for k in range(c.dim(p)):
            v = tuple(ONE if i == k else ZERO for i in range(c.dim(p)))
            back = c.jop(c.jop(v, p), p)
            assert back == tuple(x * (-1) ** p for x in v)


def test_su3_hkt():
    c = complex_of("su3")
    half_del_z2 = ext.form_scale(parse_scalar("1/2"), c.del_form({mono(2): ONE}))
    assert half_del_z2 == c.omega
    assert check_qreal_qpositive(c) == (TriState.HOLDS, TriState.HOLDS)
    assert check_hkt(c) is TriState.HOLDS
    assert check_balanced(c) is TriState.UNKNOWN  # presentation without delbar data


@pytest.mark.parametrize(
    "name, hkt, balanced",
    [
        ("flat-torus-n2", TriState.HOLDS, TriState.HOLDS),
        ("nil-abelian", TriState.HOLDS, TriState.HOLDS),
        ("hopf", TriState.HOLDS, TriState.FAILS),
        ("hopf-product", TriState.HOLDS, TriState.FAILS),
        ("nilmanifold-lw", TriState.FAILS, TriState.HOLDS),
    ],
)
def test_structure_verdicts(name, hkt, balanced):
    c = complex_of(name)
    assert check_hkt(c) is hkt
    assert check_balanced(c) is balanced


def test_hopf_lee_form_nonzero():
    lee = lee_forms(complex_of("hopf"))
    assert any(lee.theta_bar)
    assert lee.theta == tuple(x.conjugate() for x in lee.theta_bar)


@pytest.mark.parametrize("name, verdict", [("solvmanifold", TriState.HOLDS), ("non-slnh", TriState.FAILS), ("su3", TriState.UNKNOWN)])
def test_slnh(name, verdict):
    assert check_invariant_slnh(complex_of(name)) is verdict


def test_gram_positive_and_hermitian():
    c = complex_of("nilmanifold-lw")
    for p in range(c.m + 1):
        g = gram(c, p)
        assert g.is_hermitian()


def test_presentation_with_nonzero_del_squared_rejected():
    from hktlab.lie import StructureError
    from hktlab.quaternionic import build_from_presentation

    # del^2 Z2 = del(Z34) = Z124
    with pytest.raises(StructureError):
        build_from_presentation(2, [{}, {mono(3, 4): ONE}, {mono(1, 2): ONE}, {}])
    # del Z2 = Z13, del Z3 = Z12 looks suspicious but squares to zero: Z1 ^ Z12 = Z1 ^ Z13 = 0
    c = build_from_presentation(2, [{}, {mono(1, 3): ONE}, {mono(1, 2): ONE}, {}])
    assert (c.del_matrix(2) @ c.del_matrix(1)).is_zero()


def test_empty_presentation_predicates_unknown():
    from hktlab.quaternionic import build_from_presentation

    c = build_from_presentation(2, [{}, {}, {}, {}])
    assert check_hkt(c) is TriState.UNKNOWN
    assert check_qreal_qpositive(c) == (TriState.UNKNOWN, TriState.UNKNOWN)
    assert check_balanced(c) is TriState.UNKNOWN


def test_su3_partial_omega_not_hkt():
    c = complex_of("su3").with_omega({mono(1, 2): ONE})
    assert c.del_form(c.omega) == {mono(1, 3, 4): parse_scalar("-2")}
    assert check_hkt(c) is TriState.FAILS


def test_indefinite_omega_not_q_positive():
    c = complex_of("flat-torus-n2").with_omega({mono(1, 2): ONE, mono(3, 4): -ONE})
    qreal, qpos = check_qreal_qpositive(c)
    assert qpos is TriState.FAILS


def test_nilmanifold_standard_metric():
    c = complex_of("nilmanifold-lw")
    assert check_qreal_qpositive(c) == (TriState.HOLDS, TriState.HOLDS)
    lee = lee_forms(c)
    assert not any(lee.theta_bar) and not any(lee.theta_j)
    top = ext.form_power(c.omega, 2)
    assert not c.delbar_form(top)
    # the e-basis is orthonormal; the unnormalised (1,0)-coframe has |phi^a|^2 = 2
    from hktlab.linalg import Matrix

    for p in range(c.m + 1):
        assert gram(c, p) == Matrix.identity(c.dim(p)).scale(parse_scalar(str(2**p)))


def test_flat_torus_lee_forms_vanish():
    lee = lee_forms(complex_of("flat-torus-n2"))
    assert not any(lee.theta_bar) and not any(lee.theta_j)


@pytest.mark.parametrize("name", ["nilmanifold-lw", "su3", "hopf-product", "nil-abelian"])
def test_jop_commutes_with_lefschetz_operator(name):
    from conftest import structure_of

    s = structure_of(name)
    assert (s.jop @ s.L).same(s.L @ s.jop)
