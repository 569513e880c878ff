from __future__ import annotations

import sys
from functools import lru_cache

import pytest
from hypothesis import settings, strategies as st

from hktlab import fixtures
from hktlab.document import bigraded_basis, build_complex, lie_algebra
from hktlab.lefschetz import from_complex
from hktlab.linalg import Matrix
from hktlab.scalars import ONE, ZERO, GaussianRational

settings.register_profile("hktlab", max_examples=100, deadline=None, derandomize=True)
settings.load_profile("hktlab")

POSITIVE = fixtures.POSITIVE
NEGATIVE = fixtures.NEGATIVE


@lru_cache(maxsize=None)
def complex_of(name: str):
    return build_complex(fixtures.load(name))


@lru_cache(maxsize=None)
def structure_of(name: str):
    return from_complex(complex_of(name))


@lru_cache(maxsize=None)
def lie_of(name: str):
    doc = fixtures.load(name)
    lie = lie_algebra(doc)
    return doc, lie, bigraded_basis(doc, lie)


def unit(k: int, n: int) -> tuple:
    return tuple(ONE if i == k else ZERO for i in range(n))


def vec_of(c, form: dict, p: int) -> tuple:
    return c.to_vector(form, p)


def mono(*idx: int) -> tuple:
    """Monomial from 1-based indices."""
    return tuple(i - 1 for i in idx)


small_ints = st.integers(min_value=-3, max_value=3)
gaussians = st.builds(
    GaussianRational,
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
)
sparse_gaussians = st.one_of(st.just(ZERO), st.just(ZERO), gaussians)


def vectors(n: int, elements=sparse_gaussians):
    return st.lists(elements, min_size=n, max_size=n).map(tuple)


def matrices(rows: int, cols: int, elements=sparse_gaussians):
    return st.lists(vectors(cols, elements), min_size=rows, max_size=rows).map(Matrix.from_rows)


@pytest.fixture(params=POSITIVE)
def positive_name(request):
    return request.param


@lru_cache(maxsize=None)
def hyper_of(name: str):
    from hktlab.lie import HypercomplexData

    doc, _, _ = lie_of(name)
    return HypercomplexData(doc.I, doc.J, doc.K)


def randomized_complex(name: str, coeffs):
    """Fixture complex with Omega replaced by the form of a random hyperhermitian metric."""
    from hktlab.quaternionic import omega_from_metric

    hyper = hyper_of(name)
    _, _, basis = lie_of(name)
    return complex_of(name).with_omega(omega_from_metric(basis, hyper, random_metric(hyper, coeffs)))


def random_metric(hyper, coeffs) -> Matrix:
    """Hyperhermitian metric Id + A^T A with A a combination of commutant generators."""
    basis = _commutant(id(hyper), hyper)
    n = hyper.I.rows
    a = Matrix.zeros(n, n)
    for k, x in zip(coeffs, basis):
        if k:
            a = a + x.scale(GaussianRational(k))
    return Matrix.identity(n) + a.transpose() @ a


_COMMUTANTS: dict = {}


def _commutant(key, hyper):
    from hktlab.quaternionic import hyperhermitian_commutant

    if key not in _COMMUTANTS:
        _COMMUTANTS[key] = hyperhermitian_commutant(hyper)
    return _COMMUTANTS[key]


commutant_coeffs = st.lists(st.integers(min_value=-2, max_value=2), min_size=16, max_size=16)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
