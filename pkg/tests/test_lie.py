from __future__ import annotations

import pytest

from hktlab import fixtures
from hktlab.document import lie_algebra
from hktlab.lie import (
    HypercomplexData,
    LieAlgebraData,
    StructureError,
    ce_operators,
    check_abelian,
    nijenhuis_violation,
    validate_hypercomplex,
    validate_lie,
)
from hktlab.scalars import ONE, parse_scalar

from conftest import lie_of, mono

HALF = parse_scalar("1/2")


def test_nilmanifold_structure_equations():
    _, lie, basis = lie_of("nilmanifold-lw")
    ce = ce_operators(lie, basis)
    m = basis.m
    assert ce.dgen[0] == {} and ce.dgen[1] == {}
    assert ce.dgen[2] == {(0, m): -HALF, (1, m + 1): -HALF}
    assert ce.dgen[3] == {mono(1, 2): ONE}
    assert ce.d_squared_violation() is None
    assert ce.off_bidegree() is None


def test_solvmanifold_classification():
    _, lie, basis = lie_of("solvmanifold")
    info = validate_lie(lie).info
    assert info["unimodular"] and info["solvable"]
    # the algebra is 2-step nilpotent even though it is presented as almost abelian
    assert info["nilpotency_step"] == 2
    ce = ce_operators(lie, basis)
    half_i = parse_scalar("i/2")
    assert ce.dgen[2] == {mono(1, 2): half_i, (1, basis.m): half_i}


def test_non_unimodular_detected():
    _, lie, _ = lie_of("non-slnh")
    assert validate_lie(lie).info["unimodular"] is False


def test_jacobi_failure_located():
    lie = lie_algebra(fixtures.load("broken-jacobi"))
    rep = validate_lie(lie)
    assert not rep.ok
    assert rep.failures[0].startswith("jacobi")


def test_nonintegrable_structure():
    doc = fixtures.load("nonintegrable")
    lie = lie_algebra(doc)
    assert validate_lie(lie).ok
    assert nijenhuis_violation(lie, doc.I) is not None
    assert not validate_hypercomplex(lie, HypercomplexData(doc.I, doc.J)).ok


@pytest.mark.parametrize("name", ["flat-torus-n1", "flat-torus-n2", "nilmanifold-lw", "hopf", "hopf-product", "nil-abelian"])
def test_hypercomplex_fixtures_validate(name):
    doc, lie, _ = lie_of(name)
    assert validate_lie(lie).ok
    assert validate_hypercomplex(lie, HypercomplexData(doc.I, doc.J, doc.K)).ok


def test_abelian_check():
    doc, lie, basis = lie_of("nil-abelian")
    assert check_abelian(lie, doc.I)
    doc, lie, _ = lie_of("nilmanifold-lw")
    assert not check_abelian(lie, doc.I)


def test_brackets_antisymmetric():
    lie = LieAlgebraData.from_brackets(3, [(0, 1, 2, 1)])
    assert lie.bracket_basis(1, 0) == tuple(-x for x in lie.bracket_basis(0, 1))
    with pytest.raises((StructureError, ValueError)):
        LieAlgebraData.from_brackets(3, [(0, 3, 1, 1)])


def test_coframe_sign_convention():
    from hktlab.scalars import I as IMAG

    _, _, basis = lie_of("nilmanifold-lw")
    e = lambda k: tuple(ONE if i == k - 1 else 0 * ONE for i in range(8))
    assert basis.coframe[0] == tuple(x - IMAG * y for x, y in zip(e(1), e(2)))
    _, _, flat = lie_of("flat-torus-n2")
    for a in range(1, 5):
        assert flat.coframe[a - 1] == tuple(x - IMAG * y for x, y in zip(e(2 * a - 1), e(2 * a)))


@pytest.mark.parametrize("name", ["nilmanifold-lw", "solvmanifold", "hopf", "flat-torus-n1"])
def test_coframe_is_type_one_zero(name):
    from hktlab.linalg import Matrix
    from hktlab.scalars import I as IMAG

    _, _, basis = lie_of(name)
    for phi in basis.coframe:
        assert (Matrix.from_rows([phi]) @ basis.I).row(0) == tuple(-IMAG * x for x in phi)


def test_anticommutation_failure_reported():
    doc, lie, _ = lie_of("nilmanifold-lw")
    rotated = doc.I @ doc.J @ doc.I @ doc.J @ doc.I  # equals I (sign aside), so it commutes with I
    rep = validate_hypercomplex(lie, HypercomplexData(doc.I, rotated))
    assert not rep.checks["anticommute"]


def test_supplied_k_must_equal_ij():
    doc, lie, _ = lie_of("nilmanifold-lw")
    rep = validate_hypercomplex(lie, HypercomplexData(doc.I, doc.J, -(doc.I @ doc.J)))
    assert not rep.checks["K_equals_IJ"]


def test_solvmanifold_abelian_by_brute_force():
    _, lie, basis = lie_of("solvmanifold")
    cols = basis.I.columns()
    pairs = [(i, j) for i in range(8) for j in range(i + 1, 8)]
    assert len(pairs) == 28
    brute = all(lie.bracket(cols[i], cols[j]) == lie.bracket_basis(i, j) for i, j in pairs)
    assert check_abelian(lie, basis.I) is brute


@pytest.mark.parametrize("name", ["flat-torus-n1", "flat-torus-n2", "nil-abelian", "nilmanifold-lw", "solvmanifold", "hopf", "hopf-product", "non-slnh"])
def test_abelian_iff_del_vanishes_on_one_forms(name):
    _, lie, basis = lie_of(name)
    ce = ce_operators(lie, basis)
    assert check_abelian(lie, basis.I) is ce.del_matrix(1).is_zero()
