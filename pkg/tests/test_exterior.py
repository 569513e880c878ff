from __future__ import annotations

from hypothesis import given, strategies as st

from hktlab import exterior as ext
from hktlab.linalg import Matrix
from hktlab.scalars import ONE, ZERO

from conftest import gaussians, mono


def test_wedge_sign():
    assert ext.wedge_monomials(mono(2), mono(1)) == (-1, mono(1, 2))
    assert ext.wedge_monomials(mono(1), mono(1))[1] is None
    assert ext.sort_sign([2, 0, 1]) == (1, (0, 1, 2))


def test_form_power_of_symplectic():
    omega = {mono(1, 2): ONE, mono(3, 4): ONE}
    assert ext.form_power(omega, 2) == {mono(1, 2, 3, 4): 2 * ONE}
    assert ext.form_power(omega, 3) == {}


def test_conjugation_uses_shifted_generators():
    sign, m = ext.conjugate_monomial(mono(1, 2), 4)
    assert m == mono(5, 6) and sign == 1
    assert ext.bidegree((0, 5), 4) == (1, 1)


def test_compound_of_identity():
    assert ext.compound_matrix(Matrix.identity(4), 2) == Matrix.identity(6)


def _forms(m, p):
    basis = ext.degree_basis(m, p)
    return st.lists(gaussians, min_size=len(basis), max_size=len(basis)).map(lambda v: ext.vector_to_form(v, basis))


@given(_forms(5, 1), _forms(5, 2), _forms(5, 2))
def test_wedge_graded_commutative_and_associative(a, b, c):
    assert ext.form_wedge(a, b) == ext.form_add(ext.form_wedge(b, a), {}, ONE)
    assert ext.form_wedge(ext.form_wedge(a, b), c) == ext.form_wedge(a, ext.form_wedge(b, c))
    assert ext.form_wedge(a, a) == {}


@given(_forms(4, 2))
def test_vector_round_trip(f):
    basis = ext.degree_basis(4, 2)
    assert ext.vector_to_form(ext.form_to_vector(f, basis), basis) == f
    assert ZERO not in f.values()
