from __future__ import annotations

from hypothesis import given, strategies as st

from hktlab.linalg import (
    Matrix,
    Subspace,
    column_space,
    determinant,
    is_positive_definite,
    nullspace,
    rank,
    solve,
    subspace_intersect,
    subspace_sum,
)
from hktlab.scalars import I, ONE, ZERO, GaussianRational

from conftest import matrices, vectors


def test_nullspace_small():
    m = Matrix.from_rows([[1, 2, 3], [2, 4, 6]])
    ns = nullspace(m)
    assert ns.dim == 2
    assert all(not any(m.apply(v)) for v in ns.vectors)


def test_solve_and_inconsistent():
    m = Matrix.from_rows([[1, I], [0, 0]])
    x = solve(m, (ONE + I, ZERO))
    assert m.apply(x) == (ONE + I, ZERO)
    assert solve(m, (ZERO, ONE)) is None


def test_inverse_and_determinant():
    m = Matrix.from_rows([[2, I], [-I, 3]])
    assert determinant(m) == GaussianRational(5)
    assert (m @ m.inverse()) == Matrix.identity(2)
    assert is_positive_definite(m)
    assert not is_positive_definite(Matrix.from_rows([[1, 2], [2, 1]]))


def test_subspace_complement_basis():
    big = Subspace.full(3)
    small = Subspace(3, [(ONE, ONE, ZERO)])
    comp = small.complement_basis(big)
    assert len(comp) == 2
    assert subspace_sum(small, Subspace(3, comp)) == big


@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(lambda c: matrices(r, c))))
def test_rank_nullity(m):
    assert rank(m) + nullspace(m).dim == m.cols
    assert column_space(m).dim == rank(m)


def _subspaces(n):
    return st.lists(vectors(n), min_size=0, max_size=4).map(lambda vs: Subspace(n, vs))


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(_subspaces(n), _subspaces(n))))
def test_modular_law(pair):
    a, b = pair
    s, t = subspace_sum(a, b), subspace_intersect(a, b)
    assert s.dim + t.dim == a.dim + b.dim
    assert t.is_subspace_of(a) and t.is_subspace_of(b)
    assert a.is_subspace_of(s) and b.is_subspace_of(s)


def test_minors_examples():
    from hktlab.linalg import LinalgError, leading_principal_minors

    assert leading_principal_minors(Matrix.identity(3)) == [ONE] * 3
    assert leading_principal_minors(Matrix.diagonal([ONE, -ONE])) == [ONE, -ONE]
    try:
        leading_principal_minors(Matrix.from_rows([[1, 2], [0, 1]]))
    except LinalgError:
        pass
    else:
        raise AssertionError("non-Hermitian input accepted")


def test_quotient_dim_requires_containment():
    import pytest

    from hktlab.linalg import LinalgError, quotient_dim

    with pytest.raises(LinalgError):
        quotient_dim(Subspace.zero(2), Subspace.full(2))
    assert quotient_dim(Subspace.full(2), Subspace.zero(2)) == 2


def test_fixture_examples():
    from hktlab.linalg import quotient_dim

    from conftest import complex_of

    assert rank(complex_of("solvmanifold").del_matrix(1)) == 1
    c = complex_of("nilmanifold-lw")
    assert nullspace(c.del_matrix(1)) == Subspace(4, [c.to_vector({(k,): ONE}, 1) for k in range(3)])
    assert quotient_dim(nullspace(c.del_matrix(2)), column_space(c.del_matrix(1))) == 4


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.lists(vectors(n), min_size=1, max_size=4), st.randoms())))
def test_subspace_canonical_under_shuffle(data):
    vecs, rnd = data
    shuffled = list(vecs)
    rnd.shuffle(shuffled)
    scaled = [tuple(x * (ONE + I) for x in v) for v in shuffled]
    n = len(vecs[0])
    assert Subspace(n, vecs).vectors == Subspace(n, shuffled).vectors == Subspace(n, scaled).vectors


@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: st.tuples(matrices(r, c), vectors(r)))))
def test_solve_reproduces_rhs(data):
    m, b = data
    x = solve(m, b)
    if x is None:
        assert not column_space(m).contains(b)
    else:
        assert m.apply(x) == b


@given(st.integers(1, 4).flatmap(lambda n: st.integers(0, 2).flatmap(lambda extra: matrices(n + extra, n))))
def test_gram_of_injective_is_positive(g):
    from hktlab.linalg import leading_principal_minors

    if rank(g) < g.cols:
        return
    minors = leading_principal_minors(g.H @ g)
    assert all(x.is_real() and x.re > 0 for x in minors)
