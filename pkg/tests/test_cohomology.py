from __future__ import annotations

import pytest

from hktlab import fixtures
from hktlab.cohomology import CohomologyError, check_ddj_lemma, compute, ddj_lemma_degrees, dimensions
from hktlab.linalg import Subspace
from hktlab.quaternionic import TriState
from hktlab.scalars import ONE

from conftest import complex_of, mono
from oracle import del_dimensions


@pytest.mark.parametrize(
    "name, expected",
    [
        ("nilmanifold-lw", {"del": [1, 3, 4, 3, 1], "del_j": [1, 3, 4, 3, 1], "bc": [1, 2, 5, 4, 1], "aeppli": [1, 4, 5, 2, 1]}),
        ("su3", {"del": [1, 1, 0, 0, 0], "del_j": [1, 1, 0, 0, 0], "bc": [1, 0, 1, 0, 0], "aeppli": [1, 2, 0, 0, 0]}),
        ("hopf-product", {"del": [1, 2, 1, 0, 0], "bc": [1, 0, 2, 2, 0], "aeppli": [1, 4, 3, 0, 0]}),
        ("flat-torus-n2", {t: [1, 4, 6, 4, 1] for t in ("del", "del_j", "bc", "aeppli")}),
    ],
)
def test_dimensions(name, expected):
    c = complex_of(name)
    for theory, dims in expected.items():
        assert dimensions(theory, c) == dims


@pytest.mark.parametrize("name", ["solvmanifold", "non-slnh"])
def test_del_dimensions_match_oracle(name):
    assert dimensions("del", complex_of(name)) == del_dimensions(fixtures.text(name))


def test_nilmanifold_representatives():
    c = complex_of("nilmanifold-lw")
    h1, h2 = compute("del", c, 1), compute("del", c, 2)
    expected1 = Subspace(c.dim(1), [c.to_vector({mono(k): ONE}, 1) for k in (1, 2, 3)])
    expected2 = Subspace(c.dim(2), [c.to_vector({mono(*ij): ONE}, 2) for ij in ((1, 3), (2, 3), (1, 4), (2, 4))])
    for group, exp in ((h1, expected1), (h2, expected2)):
        assert exp.is_subspace_of(group.cocycles)
        # the listed forms give a basis of the quotient
        assert Subspace(c.dim(group.degree), list(exp.vectors) + list(group.coboundaries.vectors)) == group.cocycles
        assert exp.dim == group.dim


def test_theory_without_j_data():
    with pytest.raises(CohomologyError):
        compute("bc", complex_of("solvmanifold"), 1)


def test_degree_out_of_range():
    with pytest.raises(CohomologyError):
        compute("del", complex_of("su3"), 5)


def test_bc_aeppli_duality_on_balanced():
    c = complex_of("nil-abelian")
    bc, ae = dimensions("bc", c), dimensions("aeppli", c)
    assert bc == bc[::-1] == ae


@pytest.mark.parametrize("name, verdict", [("flat-torus-n2", TriState.HOLDS), ("nil-abelian", TriState.HOLDS), ("nilmanifold-lw", TriState.FAILS), ("su3", TriState.FAILS)])
def test_ddj_lemma(name, verdict):
    assert check_ddj_lemma(complex_of(name)) is verdict


def test_ddj_lemma_unknown_without_j():
    assert check_ddj_lemma(complex_of("solvmanifold")) is TriState.UNKNOWN
    assert set(ddj_lemma_degrees(complex_of("flat-torus-n2")).values()) == {(True, True)}
