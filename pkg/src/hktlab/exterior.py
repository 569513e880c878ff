"""Exterior algebra on a finite set of generators.

A monomial is a strictly increasing tuple of generator indices and a form is a
``dict`` mapping monomials to nonzero :class:`GaussianRational` coefficients.
Bases of each degree are enumerated lexicographically (``itertools.combinations``
order), which fixes every sign convention in the package.

For bigraded work the generators are ``0..m-1`` for the (1,0)-coframe and
``m..2m-1`` for its conjugate, so the (p,q)-type of a monomial is the number
of indices below ``m`` and above.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Callable, Mapping, Optional, Sequence

from .linalg import Matrix, determinant
from .scalars import ONE, ZERO, GaussianRational

Monomial = tuple
Form = dict


def wedge_monomials(a: Monomial, b: Monomial) -> tuple[int, Optional[Monomial]]:
    """Return ``(sign, sorted)`` with ``a ^ b = sign * sorted``; sign 0 on overlap."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    sa = set(a)
    if any(x in sa for x in b):
        return 0, None
    inversions = 0
    for x in a:
        for y in b:
            if x > y:
                inversions += 1
    return (-1 if inversions & 1 else 1), tuple(sorted(a + b))


def sort_sign(indices: Sequence[int]) -> tuple[int, Optional[Monomial]]:
    """Sign of the permutation sorting ``indices`` (0 if any index repeats)."""
    if len(set(indices)) != len(indices):
        return 0, None
    inv = 0
    idx = list(indices)
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(idx))


def form_add(f: Mapping, g: Mapping, scale: GaussianRational = ONE) -> Form:
    out = dict(f)
    for mono, c in g.items():
        v = out.get(mono, ZERO) + scale * c
        if v:
            out[mono] = v
        else:
            out.pop(mono, None)
    return out


def form_scale(c: GaussianRational, f: Mapping) -> Form:
    if not c:
        return {}
    return {mono: c * x for mono, x in f.items()}


def form_wedge(f: Mapping, g: Mapping) -> Form:
    out: dict = {}
    for ma, ca in f.items():
        for mb, cb in g.items():
            s, mono = wedge_monomials(ma, mb)
            if not s:
                continue
            v = ca * cb
            if s < 0:
                v = -v
            cur = out.get(mono)
            out[mono] = v if cur is None else cur + v
    return {k: v for k, v in out.items() if v}


def form_power(f: Mapping, k: int) -> Form:
    out: Form = {(): ONE}
    for _ in range(k):
        out = form_wedge(out, f)
    return out


def monomial_form(mono: Monomial, c: GaussianRational = ONE) -> Form:
    s, m = sort_sign(mono)
    if not s:
        return {}
    return {m: c if s > 0 else -c}


def conjugate_monomial(mono: Monomial, m: int) -> tuple[int, Monomial]:
    """Swap (1,0) and (0,1) generators and re-sort."""
    swapped = [i + m if i < m else i - m for i in mono]
    s, out = sort_sign(swapped)
    return s, out


def conjugate_form(f: Mapping, m: int) -> Form:
    out: Form = {}
    for mono, c in f.items():
        s, cm = conjugate_monomial(mono, m)
        v = c.conjugate()
        out[cm] = v if s > 0 else -v
    return out


def bidegree(mono: Monomial, m: int) -> tuple[int, int]:
    p = sum(1 for i in mono if i < m)
    return p, len(mono) - p


def form_component(f: Mapping, m: int, p: int, q: int) -> Form:
    return {mono: c for mono, c in f.items() if bidegree(mono, m) == (p, q)}


def apply_derivation(dgen: Sequence[Optional[Mapping]], mono: Monomial) -> Form:
    """Extend generator images as an odd derivation: d(a1...ap) = sum (-1)^r a1..d(ar)..ap."""
    out: Form = {}
    for r, g in enumerate(mono):
        dg = dgen[g]
        if dg is None:
            raise KeyError(f"differential of generator {g} is unknown")
        if not dg:
            continue
        left = mono[:r]
        right = mono[r + 1:]
        sign = -1 if r & 1 else 1
        for dm, c in dg.items():
            s1, m1 = wedge_monomials(left, dm)
            if not s1:
                continue
            s2, m2 = wedge_monomials(m1, right)
            if not s2:
                continue
            v = c if s1 * s2 * sign > 0 else -c
            cur = out.get(m2)
            out[m2] = v if cur is None else cur + v
    return {k: v for k, v in out.items() if v}


def apply_to_form(op: Callable[[Monomial], Mapping], f: Mapping) -> Form:
    out: Form = {}
    for mono, c in f.items():
        out = form_add(out, op(mono), c)
    return out


@lru_cache(maxsize=None)
def degree_basis(ngens: int, degree: int) -> tuple[Monomial, ...]:
    return tuple(combinations(range(ngens), degree))


@lru_cache(maxsize=None)
def bidegree_basis(m: int, p: int, q: int) -> tuple[Monomial, ...]:
    """Lexicographic basis of (p,q)-monomials: holomorphic indices then shifted antiholomorphic."""
    out = []
    for a in combinations(range(m), p):
        for b in combinations(range(m, 2 * m), q):
            out.append(a + b)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def basis_index(ngens: int, degree: int) -> dict:
    return {mono: i for i, mono in enumerate(degree_basis(ngens, degree))}


def form_to_vector(f: Mapping, basis: Sequence[Monomial]) -> tuple:
    index = {mono: i for i, mono in enumerate(basis)}
    v = [ZERO] * len(basis)
    for mono, c in f.items():
        if mono not in index:
            raise KeyError(f"monomial {mono} outside the target basis")
        v[index[mono]] = c
    return tuple(v)


def vector_to_form(v: Sequence[GaussianRational], basis: Sequence[Monomial]) -> Form:
    return {mono: c for mono, c in zip(basis, v) if c}


def operator_matrix(op: Callable[[Monomial], Mapping], source: Sequence[Monomial], target: Sequence[Monomial]) -> Matrix:
    """Matrix of a linear map given on monomials (columns are images)."""
    index = {mono: i for i, mono in enumerate(target)}
    cols = []
    for mono in source:
        col = [ZERO] * len(target)
        for tm, c in op(mono).items():
            if tm not in index:
                raise KeyError(f"image monomial {tm} outside target basis")
            col[index[tm]] = c
        cols.append(col)
    return Matrix.from_columns(cols, len(target)) if source else Matrix.zeros(len(target), 0)


def compound_matrix(mat: Matrix, p: int) -> Matrix:
    """p-th exterior power of a square matrix acting on generators (columns are images)."""
    n = mat.rows
    basis = degree_basis(n, p)
    if p == 0:
        return Matrix.identity(1)
    rows = []
    for rows_idx in basis:
        row = []
        for cols_idx in basis:
            row.append(determinant(mat.submatrix(rows_idx, cols_idx)))
        rows.append(row)
    return Matrix.from_rows(rows, len(basis))


def inv_factorial(k: int) -> GaussianRational:
    return GaussianRational(Fraction(1, factorial(k)))


def format_form(f: Mapping, m: Optional[int] = None, names: str = "φ") -> str:
    """Human-readable rendering, e.g. ``-1/2 φ^{1 1̄} + φ^{12}`` (1-based indices)."""
    if not f:
        return "0"
    parts = []
    for mono in sorted(f):
        c = f[mono]
        if m is None:
            idx = "".join(str(i + 1) for i in mono)
        else:
            toks = [str(i + 1) if i < m else f"{i - m + 1}̄" for i in mono]
            idx = " ".join(toks) if any(i >= m for i in mono) else "".join(toks)
        coeff = str(c)
        if coeff == "1":
            coeff = ""
        elif coeff == "-1":
            coeff = "-"
        elif not coeff.lstrip("-").replace("/", "").isdigit():
            coeff = f"({coeff})"
        term = f"{coeff}{names}^{{{idx}}}" if mono else str(c)
        parts.append(term)
    return " + ".join(parts).replace("+ -", "- ")
