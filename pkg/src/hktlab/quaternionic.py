"""The quaternionic Dolbeault complex ``(A^{*,0}, del, del_J)`` and structure predicates.

Coordinates on ``A^{p,0}`` are taken in the lexicographic monomial basis of the
(1,0)-coframe.  The antilinear operator ``Jc`` (``alpha -> J alpha-bar``) is stored
by its matrix ``M`` on ``A^{1,0}``: ``Jc(x) = M conj(x)``; on ``A^{p,0}`` it acts
through the p-th compound of ``M``.  ``J`` acts on 1-forms by pullback,
``(J alpha)(X) = alpha(J X)``; with this choice the pairing ``a ^ *b`` built from
``Jc`` is positive definite (see :mod:`hktlab.lefschetz`).

``del_J`` is computed as ``Jc^{-1} del Jc`` which, on (p,0)-forms, is the same
operator as ``J^{-1} delbar J`` with ``J`` mapping (p,0) to (0,p)-forms.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Optional, Sequence

from . import exterior as ext
from .lie import (
    BigradedBasis,
    CEOperators,
    HypercomplexData,
    LieAlgebraData,
    StructureError,
    ce_operators,
    real_covector_in_psi,
)
from .linalg import Matrix, leading_principal_minors, nullspace
from .scalars import I as IMAG
from .scalars import ONE, ZERO, to_scalar

__all__ = [
    "TriState",
    "QDolbeaultComplex",
    "LeeForms",
    "ComplexInvariantError",
    "build_from_lie",
    "build_from_presentation",
    "check_hkt",
    "check_qreal_qpositive",
    "lee_forms",
    "check_balanced",
    "check_invariant_slnh",
    "hermitian_gram",
    "gram",
    "omega_from_metric",
    "hyperhermitian_commutant",
]


class TriState(enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNKNOWN = "Unknown"

    @classmethod
    def of(cls, flag: bool) -> TriState:
        return cls.HOLDS if flag else cls.FAILS

    def __str__(self) -> str:
        return self.value


class ComplexInvariantError(StructureError):
    """A build-time identity of the complex failed; carries degree and basis element."""

    def __init__(self, message: str, degree: Optional[int] = None, element: Optional[tuple] = None) -> None:
        super().__init__(message)
        self.degree = degree
        self.element = element


def _conj_matrix(m: Matrix) -> Matrix:
    return m.conj()


def _sign(p: int) -> int:
    return -1 if p & 1 else 1


@dataclass
class QDolbeaultComplex:
    n: int
    del_gen: tuple  # del phi^a as (2,0)-forms on generators 0..2n-1
    delbar_gen: Optional[tuple] = None  # delbar phi^a as (1,1)-forms, when known
    jmat: Optional[Matrix] = None
    omega: Optional[dict] = None
    source: str = "lie-derived"
    basis: Optional[BigradedBasis] = None
    lie: Optional[LieAlgebraData] = None
    hypercomplex: Optional[HypercomplexData] = None
    metric: Optional[Matrix] = None
    _cache: dict = field(default_factory=dict, repr=False)

    # -- shape ----------------------------------------------------------
    @property
    def m(self) -> int:
        return 2 * self.n

    def dim(self, p: int) -> int:
        return len(self.monomials(p))

    @property
    def dims(self) -> list[int]:
        return [self.dim(p) for p in range(self.m + 1)]

    def monomials(self, p: int) -> tuple:
        return ext.degree_basis(self.m, p) if 0 <= p <= self.m else ()

    def to_vector(self, form: Mapping, p: int) -> tuple:
        return ext.form_to_vector(form, self.monomials(p))

    def to_form(self, vec: Sequence, p: int) -> dict:
        return ext.vector_to_form(vec, self.monomials(p))

    @property
    def has_j(self) -> bool:
        return self.jmat is not None

    @property
    def has_delbar(self) -> bool:
        return self.delbar_gen is not None

    # -- operators ------------------------------------------------------
    def del_matrix(self, p: int) -> Matrix:
        key = ("del", p)
        if key not in self._cache:
            src, tgt = self.monomials(p), self.monomials(p + 1)
            gens = list(self.del_gen)
            self._cache[key] = ext.operator_matrix(lambda mono: ext.apply_derivation(gens, mono), src, tgt)
        return self._cache[key]

    def jop_matrix(self, p: int) -> Matrix:
        """Matrix C_p with Jc(x) = C_p conj(x) on A^{p,0}."""
        if self.jmat is None:
            raise LookupError("no J data available")
        key = ("jop", p)
        if key not in self._cache:
            self._cache[key] = ext.compound_matrix(self.jmat, p)
        return self._cache[key]

    def jop(self, vec: Sequence, p: int) -> tuple:
        return self.jop_matrix(p).apply(tuple(x.conjugate() for x in vec))

    def jop_inverse(self, vec: Sequence, p: int) -> tuple:
        out = self.jop(vec, p)
        return out if p % 2 == 0 else tuple(-x for x in out)

    def del_j_matrix(self, p: int) -> Matrix:
        if self.jmat is None:
            raise LookupError("del_J needs J data")
        key = ("delj", p)
        if key not in self._cache:
            c_p = self.jop_matrix(p)
            c_q = self.jop_matrix(p + 1)
            d_p = self.del_matrix(p)
            mat = c_q @ (d_p @ c_p).conj()
            if (p + 1) % 2:
                mat = -mat
            self._cache[key] = mat
        return self._cache[key]

    # -- full differential (needs delbar) -------------------------------
    def full_dgen(self) -> list:
        """d of all 4n complex generators (psi = (phi, phi-bar))."""
        if self.delbar_gen is None:
            raise LookupError("delbar data unavailable")
        if "dgen" not in self._cache:
            m = self.m
            dphi = [ext.form_add(a, b) for a, b in zip(self.del_gen, self.delbar_gen)]
            dbar = [ext.conjugate_form(f, m) for f in dphi]
            self._cache["dgen"] = dphi + dbar
        return self._cache["dgen"]

    def d_form(self, form: Mapping) -> dict:
        dgen = self.full_dgen()
        return ext.apply_to_form(lambda mono: ext.apply_derivation(dgen, mono), form)

    def delbar_form(self, form: Mapping) -> dict:
        """(p,q+1)-part of d applied to a form of pure type (p,q)."""
        out: dict = {}
        m = self.m
        for mono, c in form.items():
            p, q = ext.bidegree(mono, m)
            piece = ext.form_component(self.d_form({mono: c}), m, p, q + 1)
            out = ext.form_add(out, piece)
        return out

    def del_form(self, form: Mapping) -> dict:
        out: dict = {}
        m = self.m
        for mono, c in form.items():
            p, q = ext.bidegree(mono, m)
            if q == 0:
                piece = ext.apply_to_form(lambda mm: ext.apply_derivation(list(self.del_gen) + [None] * m, mm), {mono: c})
            else:
                piece = ext.form_component(self.d_form({mono: c}), m, p + 1, q)
            out = ext.form_add(out, piece)
        return out

    # -- omega ------------------------------------------------------------
    def omega_vector(self) -> Optional[tuple]:
        if self.omega is None:
            return None
        return self.to_vector(self.omega, 2)

    def omega_matrix(self) -> Matrix:
        """Antisymmetric coefficient matrix W with Omega = sum_{a<b} W[a,b] phi^{ab}."""
        if self.omega is None:
            raise LookupError("no omega")
        m = self.m
        rows = [[ZERO] * m for _ in range(m)]
        for (a, b), c in self.omega.items():
            rows[a][b] = c
            rows[b][a] = -c
        return Matrix.from_rows(rows, m)

    def with_omega(self, omega: Optional[Mapping]) -> QDolbeaultComplex:
        """Same complex with a different (2,0)-form; operator caches are shared."""
        if omega is not None:
            _check_omega_form(omega, self.m)
        out = QDolbeaultComplex(
            self.n, self.del_gen, self.delbar_gen, self.jmat, dict(omega) if omega is not None else None,
            self.source, self.basis, self.lie, self.hypercomplex, None,
        )
        out._cache = {k: v for k, v in self._cache.items() if k[0] in ("del", "jop", "delj") or k == "dgen"}
        return out


# ---------------------------------------------------------------------------
# construction


def _check_omega_form(omega: Mapping, m: int) -> None:
    for mono in omega:
        if len(mono) != 2 or any(not 0 <= i < m for i in mono):
            raise StructureError(f"omega term {mono} is not a (2,0) monomial")


def _verify_complex(c: QDolbeaultComplex) -> None:
    m = c.m
    for p in range(m - 1):
        prod = c.del_matrix(p + 1) @ c.del_matrix(p)
        if not prod.is_zero():
            col = next(j for j in range(prod.cols) if any(prod.column(j)))
            mono = c.monomials(p)[col]
            raise ComplexInvariantError(
                f"del^2 != 0 on {ext.format_form({mono: ONE}, None)} in degree {p}", p, mono
            )
    if c.jmat is None:
        return
    jm = c.jmat
    if jm @ jm.conj() != -Matrix.identity(m):
        raise ComplexInvariantError("Jc^2 != -1 on A^{1,0}", 1)
    for p in range(m):
        dj = c.del_j_matrix(p)
        if p + 1 < m:
            if not (c.del_j_matrix(p + 1) @ dj).is_zero():
                raise ComplexInvariantError(f"del_J^2 != 0 in degree {p}", p)
            anti = c.del_j_matrix(p + 1) @ c.del_matrix(p) + c.del_matrix(p + 1) @ dj
            if not anti.is_zero():
                col = next(j for j in range(anti.cols) if any(anti.column(j)))
                raise ComplexInvariantError(
                    f"del del_J + del_J del != 0 in degree {p}", p, c.monomials(p)[col]
                )


def j_matrix_from_lie(basis: BigradedBasis, j_matrix: Matrix) -> Matrix:
    """Matrix of Jc on A^{1,0}: column b holds the coordinates of J^* conj(phi^b)."""
    m = basis.m
    cols = []
    for phi in basis.coframe:
        bar = Matrix.from_rows([[x.conjugate() for x in phi]])
        pulled = (bar @ j_matrix).row(0)
        coords = real_covector_in_psi(basis, pulled)
        if any(coords[m:]):
            raise StructureError("J does not map (0,1)-forms to (1,0)-forms: J and I do not anticommute")
        cols.append(coords[:m])
    return Matrix.from_columns(cols, m)


def build_from_lie(
    lie: LieAlgebraData,
    basis: BigradedBasis,
    ce: Optional[CEOperators] = None,
    hypercomplex: Optional[HypercomplexData] = None,
    omega: Optional[Mapping] = None,
) -> QDolbeaultComplex:
    """Assemble the complex from a Lie algebra with complex structure (and optionally J).

    ``omega`` is a form over the (1,0)-coframe indices ``0..2n-1``.
    """
    if ce is None:
        ce = ce_operators(lie, basis)
    m = basis.m
    del_gen = tuple(ext.form_component(ce.dgen[a], m, 2, 0) for a in range(m))
    delbar_gen = tuple(ext.form_component(ce.dgen[a], m, 1, 1) for a in range(m))
    jmat = j_matrix_from_lie(basis, hypercomplex.J) if hypercomplex is not None else None
    if omega is not None:
        _check_omega_form(omega, m)
    c = QDolbeaultComplex(
        basis.n, del_gen, delbar_gen, jmat, dict(omega) if omega is not None else None,
        "lie-derived", basis, lie, hypercomplex,
    )
    _verify_complex(c)
    return c


def build_from_presentation(
    n: int,
    del_gen: Sequence[Mapping],
    delbar_gen: Optional[Sequence[Mapping]] = None,
    jmat: Optional[Matrix] = None,
    omega: Optional[Mapping] = None,
) -> QDolbeaultComplex:
    """Direct presentation: ``del phi^a`` as (2,0)-forms, optional delbar and Jc data."""
    m = 2 * n
    if len(del_gen) != m:
        raise StructureError(f"presentation needs del of {m} coframe elements, got {len(del_gen)}")
    dg = []
    for a, f in enumerate(del_gen):
        for mono in f:
            if len(mono) != 2 or any(not 0 <= i < m for i in mono):
                raise StructureError(f"del phi^{a + 1} has a term {mono} that is not of type (2,0)")
        dg.append({k: v for k, v in f.items() if v})
    dbg = None
    if delbar_gen is not None:
        if len(delbar_gen) != m:
            raise StructureError(f"delbar data must cover all {m} coframe elements")
        dbg = []
        for a, f in enumerate(delbar_gen):
            for mono in f:
                if ext.bidegree(mono, m) != (1, 1):
                    raise StructureError(f"delbar phi^{a + 1} has a term {mono} that is not of type (1,1)")
            dbg.append({k: v for k, v in f.items() if v})
        dbg = tuple(dbg)
    if jmat is not None and jmat.shape != (m, m):
        raise StructureError(f"J data must be a {m}x{m} matrix")
    if omega is not None:
        _check_omega_form(omega, m)
    c = QDolbeaultComplex(n, tuple(dg), dbg, jmat, dict(omega) if omega is not None else None, "direct-presentation")
    _verify_complex(c)
    if dbg is not None:
        dgen = c.full_dgen()
        for a, g in enumerate(dgen):
            if ext.apply_to_form(lambda mono: ext.apply_derivation(dgen, mono), g):
                raise ComplexInvariantError(f"d^2 != 0 on generator {a + 1} with the supplied delbar data", 1)
    return c


# ---------------------------------------------------------------------------
# predicates


def _omega_nondegenerate(c: QDolbeaultComplex) -> bool:
    return bool(ext.form_power(c.omega, c.n))


def check_qreal_qpositive(c: QDolbeaultComplex) -> tuple[TriState, TriState]:
    if c.omega is None:
        return TriState.UNKNOWN, TriState.UNKNOWN
    if c.jmat is None:
        return TriState.UNKNOWN, TriState.UNKNOWN
    w = c.omega_vector()
    qreal = TriState.of(c.jop(w, 2) == w)
    h = hermitian_gram(c)
    if not h.is_hermitian():
        return qreal, TriState.FAILS
    minors = leading_principal_minors(h)
    qpos = TriState.of(all(x.is_real() and x.re > 0 for x in minors))
    return qreal, qpos


def check_hkt(c: QDolbeaultComplex, require_hyperhermitian: bool = True) -> TriState:
    """Holds iff del Omega = 0 for a q-real, q-positive Omega."""
    if c.omega is None:
        return TriState.UNKNOWN
    if require_hyperhermitian:
        qr, qp = check_qreal_qpositive(c)
        if qr is TriState.FAILS or qp is TriState.FAILS:
            return TriState.FAILS
        if TriState.UNKNOWN in (qr, qp):
            return TriState.UNKNOWN
    d_omega = c.del_matrix(2).apply(c.omega_vector())
    return TriState.of(not any(d_omega))


def hermitian_gram(c: QDolbeaultComplex) -> Matrix:
    """H[a,b] = Omega(Z_a, J Z-bar_b) = (W M^H)[a,b]."""
    return c.omega_matrix() @ c.jmat.H


def gram(c: QDolbeaultComplex, p: int) -> Matrix:
    """Gram matrix G_p on A^{p,0} with G_p[b, a] = <phi^A, phi^B>.

    The product on 1-forms is H^{-1}; on p-forms it is the p-th compound.
    """
    key = ("gram", p)
    if key not in c._cache:
        if c.omega is None or c.jmat is None:
            raise LookupError("gram needs omega and J data")
        h = hermitian_gram(c)
        try:
            g1 = h.inverse()
        except ValueError as exc:
            raise StructureError("omega is degenerate") from exc
        c._cache[key] = ext.compound_matrix(g1, p)
    return c._cache[key]


@dataclass(frozen=True)
class LeeForms:
    theta_bar: tuple  # coordinates over phi-bar^1..phi-bar^{2n}
    theta: tuple  # conj(theta_bar), a (1,0)-form
    theta_j: tuple  # Jc(theta)


def lee_forms(c: QDolbeaultComplex) -> Optional[LeeForms]:
    """Solve delbar Omega^n = theta-bar ^ Omega^n; ``None`` when delbar data is missing."""
    if c.omega is None or c.delbar_gen is None:
        return None
    m = c.m
    top = ext.form_power(c.omega, c.n)
    if not top:
        raise StructureError("omega is degenerate (Omega^n = 0)")
    vol = top[tuple(range(m))]
    rhs = c.delbar_form(top)
    # theta-bar ^ phi^{top} = phi^{top} ^ theta-bar since the top form has even degree
    target = [ZERO] * m
    for mono, x in rhs.items():
        target[mono[-1] - m] = x
    theta_bar = tuple(x / vol for x in target)
    theta = tuple(x.conjugate() for x in theta_bar)
    theta_j = c.jop(theta, 1) if c.jmat is not None else None
    return LeeForms(theta_bar, theta, theta_j)


def del_omega_bar_power(c: QDolbeaultComplex) -> dict:
    """del of conj(Omega)^n computed in the full exterior algebra."""
    top = ext.form_power(c.omega, c.n)
    bar = ext.conjugate_form(top, c.m)
    return c.del_form(bar)


def check_balanced(c: QDolbeaultComplex) -> TriState:
    """Holds iff theta_J = 0; cross-checked against del conj(Omega)^n = 0.

    Unknown unless Omega comes from a metric (q-real and q-positive) and delbar data exists.
    """
    if c.omega is None or c.delbar_gen is None:
        return TriState.UNKNOWN
    if check_qreal_qpositive(c) != (TriState.HOLDS, TriState.HOLDS):
        return TriState.UNKNOWN
    lee = lee_forms(c)
    flag = not any(lee.theta_bar)
    other = not del_omega_bar_power(c)
    if flag != other:
        raise ComplexInvariantError("Lee-form and del conj(Omega)^n balanced tests disagree")
    return TriState.of(flag)


def check_invariant_slnh(c: QDolbeaultComplex) -> TriState:
    """Holds iff the invariant canonical generator phi^{1..2n} is delbar-closed."""
    if c.delbar_gen is None:
        return TriState.UNKNOWN
    top = {tuple(range(c.m)): ONE}
    return TriState.of(not c.delbar_form(top))


# ---------------------------------------------------------------------------
# metrics


def omega_from_metric(basis: BigradedBasis, hyper: HypercomplexData, g: Matrix) -> dict:
    """Omega = (g(J.,.) - i g(K.,.)) / 2 rewritten over the (1,0)-coframe.

    The sign of the K-term is the one making the form of type (2,0) under the
    package's 1-form convention.
    """
    N = g.rows
    J, K = hyper.J, hyper.K_derived
    wj = J.transpose() @ g
    wk = K.transpose() @ g
    half = to_scalar("1/2")
    real_form: dict = {}
    for i, j in combinations(range(N), 2):
        v = (wj[i, j] - IMAG * wk[i, j]) * half
        if v:
            real_form[(i, j)] = v
    Q = basis.Q  # e^k = sum_a Q[k, a] psi^a
    psi_of_e = [{(a,): Q[k, a] for a in range(N) if Q[k, a]} for k in range(N)]
    out: dict = {}
    for (i, j), v in real_form.items():
        out = ext.form_add(out, ext.form_wedge(psi_of_e[i], psi_of_e[j]), v)
    m = basis.m
    if any(ext.bidegree(mono, m) != (2, 0) for mono in out):
        raise StructureError("metric is not hyperhermitian: Omega has components outside (2,0)")
    return out


def hyperhermitian_commutant(hyper: HypercomplexData) -> list[Matrix]:
    """Basis of real matrices commuting with I and J."""
    I, J = hyper.I, hyper.J
    N = I.rows
    rows = []
    # unknown A[r, s] at index r*N + s; equations (AX - XA)[r, s] = 0 for X in {I, J}
    for X in (I, J):
        for r in range(N):
            for s in range(N):
                eq = [ZERO] * (N * N)
                for k in range(N):
                    if X[k, s]:
                        eq[r * N + k] = eq[r * N + k] + X[k, s]
                    if X[r, k]:
                        eq[k * N + s] = eq[k * N + s] - X[r, k]
                rows.append(eq)
    ns = nullspace(Matrix.from_rows(rows, N * N))
    return [Matrix(N, N, v) for v in ns.vectors]


def standard_hyperhermitian_metric(hyper: HypercomplexData) -> Matrix:
    """Average of the identity over I, J, K: (Id + I^T I + J^T J + K^T K) / 4."""
    N = hyper.I.rows
    acc = Matrix.identity(N)
    for X in (hyper.I, hyper.J, hyper.K_derived):
        acc = acc + X.transpose() @ X
    return acc.scale(to_scalar("1/4"))


def is_hyperhermitian(hyper: HypercomplexData, g: Matrix) -> bool:
    if g != g.transpose():
        return False
    for X in (hyper.I, hyper.J):
        if X.transpose() @ g @ X != g:
            return False
    minors = [m for m in leading_principal_minors(g)]
    return all(x.re > 0 for x in minors)
