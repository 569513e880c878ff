"""Lie algebras with (hyper)complex structure and their Chevalley-Eilenberg complex.

Conventions
-----------
* Brackets: ``[e_i, e_j] = sum_k c[i][j][k] e_k`` (0-based internally).
* An endomorphism ``A`` of the algebra is stored with columns as images,
  ``A e_j = sum_i A[i, j] e_i``; a covector is a row vector, so ``alpha o A`` is
  the row-vector product ``alpha @ A``.
* A complex structure acts on 1-forms by ``(I alpha)(X) = -alpha(I X)``; a
  (1,0)-form satisfies ``I phi = i phi``, i.e. ``phi o I = -i phi``.  With
  ``I e_1 = e_2`` this gives ``phi^1 = e^1 - i e^2``.
* ``d alpha (X, Y) = -alpha([X, Y])`` on 1-forms, extended as a derivation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from . import exterior as ext
from .linalg import Matrix, Subspace, nullspace, vec_add, vec_scale
from .scalars import I as IMAG
from .scalars import ONE, ZERO, GaussianRational, to_scalar

__all__ = [
    "LieAlgebraData",
    "HypercomplexData",
    "ValidationReport",
    "BigradedBasis",
    "CEOperators",
    "StructureError",
    "validate_lie",
    "validate_hypercomplex",
    "check_abelian",
    "nijenhuis_violation",
    "extract_coframe",
    "coframe_from_covectors",
    "ce_operators",
]


class StructureError(ValueError):
    """Input data does not define the structure it claims to."""


@dataclass(frozen=True)
class LieAlgebraData:
    dim: int
    structure: tuple  # structure[i][j] is the coordinate vector of [e_i, e_j]
    basis_names: tuple = ()

    @classmethod
    def from_brackets(
        cls, dim: int, brackets: Sequence[tuple], basis_names: Sequence[str] = ()
    ) -> LieAlgebraData:
        """Build from ``(i, j, k, coeff)`` entries meaning ``[e_i, e_j] += coeff e_k`` (0-based).

        Each unordered pair may be given in either order; the table is antisymmetrized.
        Entries with nonzero imaginary part are rejected.
        """
        table = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        given: dict = {}
        for i, j, k, c in brackets:
            c = to_scalar(c)
            if not c.is_real():
                raise StructureError(f"structure constant for [e{i + 1},e{j + 1}] is not real: {c}")
            for x in (i, j, k):
                if not 0 <= x < dim:
                    raise StructureError(f"basis index {x + 1} out of range 1..{dim}")
            if i == j:
                if c:
                    raise StructureError(f"[e{i + 1},e{i + 1}] must vanish")
                continue
            a, b, s = (i, j, c) if i < j else (j, i, -c)
            key = (a, b, k)
            if key in given and given[key] != s:
                raise StructureError(f"conflicting entries for [e{a + 1},e{b + 1}] along e{k + 1}")
            given[key] = s
        for (a, b, k), s in given.items():
            table[a][b][k] = s
            table[b][a][k] = -s
        names = tuple(basis_names) or tuple(f"e{i + 1}" for i in range(dim))
        return cls(dim, tuple(tuple(tuple(v) for v in row) for row in table), names)

    @classmethod
    def abelian(cls, dim: int) -> LieAlgebraData:
        return cls.from_brackets(dim, [])

    def bracket_basis(self, i: int, j: int) -> tuple:
        return self.structure[i][j]

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        out = [ZERO] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj or i == j:
                    continue
                c = xi * yj
                for k, s in enumerate(self.structure[i][j]):
                    if s:
                        out[k] = out[k] + c * s
        return tuple(out)

    def ad_matrix(self, i: int) -> Matrix:
        return Matrix.from_columns([self.structure[i][j] for j in range(self.dim)], self.dim)

    def differentials(self) -> list[dict]:
        """``d e^k`` for each k as a form over the real coframe."""
        out = []
        for k in range(self.dim):
            f = {}
            for i, j in combinations(range(self.dim), 2):
                c = self.structure[i][j][k]
                if c:
                    f[(i, j)] = -c
            out.append(f)
        return out

    def brackets_list(self) -> list[tuple]:
        out = []
        for i, j in combinations(range(self.dim), 2):
            for k, c in enumerate(self.structure[i][j]):
                if c:
                    out.append((i, j, k, c))
        return out


@dataclass(frozen=True)
class HypercomplexData:
    I: Matrix
    J: Matrix
    K: Optional[Matrix] = None

    @property
    def K_derived(self) -> Matrix:
        return self.I @ self.J


@dataclass
class ValidationReport:
    ok: bool = True
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def record(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks[name] = passed
        if not passed:
            self.ok = False
            self.failures.append(f"{name}: {detail}" if detail else name)


def _span(vectors, n: int) -> Subspace:
    return Subspace(n, vectors)


def _bracket_span(lie: LieAlgebraData, a: Subspace, b: Subspace) -> Subspace:
    vecs = []
    for x in a.vectors:
        for y in b.vectors:
            vecs.append(lie.bracket(x, y))
    return _span(vecs, lie.dim)


def validate_lie(lie: LieAlgebraData) -> ValidationReport:
    """Jacobi identity, nilpotent/solvable classification and unimodularity."""
    rep = ValidationReport()
    n = lie.dim
    rep.info["dim"] = n
    if n % 4:
        rep.record("dimension", False, f"dimension {n} is not a multiple of 4")
    else:
        rep.record("dimension", True)
    violation = None
    for i, j, k in combinations(range(n), 3):
        t = vec_add(
            vec_add(lie.bracket(lie.structure[i][j], _unit(k, n)), lie.bracket(lie.structure[j][k], _unit(i, n))),
            lie.bracket(lie.structure[k][i], _unit(j, n)),
        )
        if any(t):
            violation = (i + 1, j + 1, k + 1)
            break
    rep.record("jacobi", violation is None, f"fails on (e{violation[0]}, e{violation[1]}, e{violation[2]})" if violation else "")
    rep.info["jacobi_violation"] = violation
    if violation is not None:
        return rep

    full = Subspace.full(n)
    # lower central series
    cur = full
    steps = 0
    nilpotent = False
    for _ in range(n + 1):
        nxt = _bracket_span(lie, full, cur)
        if nxt.dim == 0:
            nilpotent = True
            steps += 1
            break
        if nxt == cur:
            break
        cur = nxt
        steps += 1
    # derived series
    cur = full
    solvable = False
    for _ in range(n + 1):
        nxt = _bracket_span(lie, cur, cur)
        if nxt.dim == 0:
            solvable = True
            break
        if nxt == cur:
            break
        cur = nxt
    rep.info["nilpotent"] = nilpotent
    rep.info["nilpotency_step"] = steps if nilpotent else None
    rep.info["solvable"] = solvable
    rep.info["abelian"] = all(not any(lie.structure[i][j]) for i, j in combinations(range(n), 2))
    traces = [sum((lie.structure[i][j][j] for j in range(n)), ZERO) for i in range(n)]
    unimodular = not any(traces)
    rep.info["unimodular"] = unimodular
    rep.info["ad_traces"] = [str(t) for t in traces]
    return rep


def _unit(i: int, n: int) -> tuple:
    return tuple(ONE if k == i else ZERO for k in range(n))


def nijenhuis_violation(lie: LieAlgebraData, a: Matrix) -> Optional[tuple]:
    """First basis pair (1-based) where N_a(X,Y) = [aX,aY] - a[aX,Y] - a[X,aY] - [X,Y] is nonzero."""
    n = lie.dim
    cols = a.columns()
    for i, j in combinations(range(n), 2):
        ax, ay = cols[i], cols[j]
        x, y = _unit(i, n), _unit(j, n)
        t1 = lie.bracket(ax, ay)
        t2 = a.apply(lie.bracket(ax, y))
        t3 = a.apply(lie.bracket(x, ay))
        t4 = lie.structure[i][j]
        if any(p - q - r - s for p, q, r, s in zip(t1, t2, t3, t4)):
            return (i + 1, j + 1)
    return None


def validate_hypercomplex(lie: LieAlgebraData, h: HypercomplexData) -> ValidationReport:
    """Quaternion relations, agreement of a supplied K with IJ, and integrability of I, J, K."""
    rep = ValidationReport()
    n = lie.dim
    minus_id = -Matrix.identity(n)
    I, J = h.I, h.J
    for name, m in (("I", I), ("J", J)):
        if m.shape != (n, n):
            rep.record(f"{name}_shape", False, f"{name} has shape {m.shape}, expected {(n, n)}")
            return rep
        if any(not x.is_real() for x in m.entries):
            rep.record(f"{name}_real", False, f"{name} has non-real entries")
    K = h.K_derived
    rep.record("I_squared", I @ I == minus_id, "I^2 != -Id")
    rep.record("J_squared", J @ J == minus_id, "J^2 != -Id")
    rep.record("K_squared", K @ K == minus_id, "K^2 != -Id")
    anti = I @ J + J @ I
    if anti.is_zero():
        rep.record("anticommute", True)
    else:
        bad = next((r, c) for r in range(n) for c in range(n) if anti[r, c])
        rep.record("anticommute", False, f"(IJ+JI) has nonzero entry at ({bad[0] + 1},{bad[1] + 1})")
    if h.K is not None:
        rep.record("K_equals_IJ", h.K == K, "supplied K differs from IJ")
    for name, m in (("I", I), ("J", J), ("K", K)):
        v = nijenhuis_violation(lie, m)
        rep.record(f"integrable_{name}", v is None, f"N_{name}(e{v[0]},e{v[1]}) != 0" if v else "")
    return rep


def check_abelian(lie: LieAlgebraData, a: Matrix) -> bool:
    """True iff [aX, aY] = [X, Y] for all basis pairs."""
    cols = a.columns()
    for i, j in combinations(range(lie.dim), 2):
        if lie.bracket(cols[i], cols[j]) != lie.structure[i][j]:
            return False
    return True


# ---------------------------------------------------------------------------
# coframes


@dataclass(frozen=True)
class BigradedBasis:
    """A (1,0)-coframe ``phi^1..phi^{2n}`` over the real coframe ``e^1..e^{4n}``.

    ``P`` stacks the coframe and its conjugate as rows (``psi = (phi, phi-bar)``)
    and ``Q = P^{-1}`` has as columns the dual complex frame ``Z_1..Z_{4n}``.
    """

    n: int
    coframe: tuple  # 2n covectors (rows over e^1..e^{4n})
    P: Matrix
    Q: Matrix
    I: Matrix

    @property
    def m(self) -> int:
        return 2 * self.n

    def basis(self, p: int, q: int) -> tuple:
        return ext.bidegree_basis(self.m, p, q)


def _is_minus_i_eigen(phi: Sequence, a: Matrix) -> bool:
    lhs = Matrix.from_rows([phi]) @ a
    return lhs.row(0) == vec_scale(-IMAG, phi)


def coframe_from_covectors(covectors: Sequence[Sequence], i_matrix: Optional[Matrix] = None) -> BigradedBasis:
    """Accept a user-designated coframe; derive I from it when not supplied, else verify it."""
    cov = [tuple(to_scalar(x) for x in v) for v in covectors]
    N = len(cov[0]) if cov else 0
    if N == 0 or N % 4 or len(cov) * 2 != N:
        raise StructureError(f"a coframe needs {N // 2} covectors of length {N} (N a multiple of 4)")
    rows = cov + [tuple(x.conjugate() for x in v) for v in cov]
    P = Matrix.from_rows(rows, N)
    try:
        Q = P.inverse()
    except ValueError as exc:
        raise StructureError("coframe together with its conjugate does not span the complexified dual") from exc
    D = Matrix.diagonal([-IMAG] * (N // 2) + [IMAG] * (N // 2))
    implied = Q @ D @ P
    if any(not x.is_real() for x in implied.entries):
        raise StructureError("implied complex structure is not real")
    if i_matrix is not None:
        for k, phi in enumerate(cov):
            if not _is_minus_i_eigen(phi, i_matrix):
                raise StructureError(f"coframe element {k + 1} is not of type (1,0) for the supplied I")
        if implied != i_matrix:
            raise StructureError("supplied I differs from the structure implied by the coframe")
    return BigradedBasis(N // 4, tuple(cov), P, Q, implied)


def extract_coframe(lie: LieAlgebraData, i_matrix: Matrix) -> BigradedBasis:
    """Greedy (1,0)-coframe: for the lowest unused index a take ``e^a + i (e^a o I)``.

    Falls back to the canonical echelon basis of the (1,0)-eigenspace when the
    greedy choice is degenerate.
    """
    n = lie.dim
    if i_matrix.shape != (n, n) or i_matrix @ i_matrix != -Matrix.identity(n):
        raise StructureError("I is not an almost-complex structure")
    used: set = set()
    cov = []
    for a in range(n):
        if a in used:
            continue
        row = i_matrix.row(a)
        phi = tuple((ONE if j == a else ZERO) + IMAG * row[j] for j in range(n))
        cov.append(phi)
        used.add(a)
        used.update(j for j, x in enumerate(row) if x)
    if len(cov) * 2 == n:
        try:
            return coframe_from_covectors(cov, i_matrix)
        except StructureError:
            pass
    # (1,0)-forms: left null vectors of I + i
    shifted = i_matrix + Matrix.diagonal([IMAG] * n)
    eig = nullspace(shifted.transpose())
    return coframe_from_covectors(list(eig.vectors), i_matrix)


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg operators


class CEOperators:
    """Differential of the complexified CE algebra in the basis ``psi = (phi, phi-bar)``.

    ``dgen[a]`` is ``d psi^a`` as a form; entries may be ``None`` when only part of
    the data is known (direct presentations without conjugate-side information).
    Generators ``0..m-1`` are (1,0), ``m..2m-1`` their conjugates.
    """

    def __init__(self, n: int, dgen: Sequence[Optional[dict]], full: bool = True) -> None:
        self.n = n
        self.m = 2 * n
        self.dgen = list(dgen)
        self.full = full
        self._cache: dict = {}

    def d(self, mono: tuple) -> dict:
        key = ("d", mono)
        if key not in self._cache:
            self._cache[key] = ext.apply_derivation(self.dgen, mono)
        return self._cache[key]

    def d_form(self, f: dict) -> dict:
        return ext.apply_to_form(self.d, f)

    def component_op(self, dp: int, dq: int):
        m = self.m

        def op(mono):
            p, q = ext.bidegree(mono, m)
            if not self.full:
                if q or dq:
                    raise KeyError("only the (1,0)-part of the differential is known")
                out = {}
                for r, g in enumerate(mono):
                    dg = ext.form_component(self.dgen[g], m, 2, 0)
                    out = ext.form_add(out, _place(mono, r, dg))
                return out
            return ext.form_component(self.d(mono), m, p + dp, q + dq)

        return op

    def del_matrix(self, p: int, q: int = 0) -> Matrix:
        """Matrix of the (p+1,q)-component of d on (p,q)-forms."""
        return ext.operator_matrix(self.component_op(1, 0), ext.bidegree_basis(self.m, p, q), ext.bidegree_basis(self.m, p + 1, q))

    def delbar_matrix(self, p: int, q: int = 0) -> Matrix:
        return ext.operator_matrix(self.component_op(0, 1), ext.bidegree_basis(self.m, p, q), ext.bidegree_basis(self.m, p, q + 1))

    def d_matrix(self, k: int) -> Matrix:
        ng = 2 * self.m
        return ext.operator_matrix(self.d, ext.degree_basis(ng, k), ext.degree_basis(ng, k + 1))

    def off_bidegree(self) -> Optional[tuple]:
        """First generator whose differential has a (0,2) or (2,0)-conjugate component."""
        m = self.m
        for a, dg in enumerate(self.dgen):
            if dg is None:
                continue
            bad = (0, 2) if a < m else (2, 0)
            comp = ext.form_component(dg, m, *bad)
            if comp:
                return a, bad
        return None

    def d_squared_violation(self) -> Optional[tuple]:
        """(degree, monomial) with d(d(mono)) != 0, checked over the whole algebra."""
        ng = 2 * self.m
        for k in range(ng):
            for mono in ext.degree_basis(ng, k):
                if self.d_form(self.d(mono)):
                    return k, mono
        return None


def _place(mono: tuple, r: int, dg: dict) -> dict:
    left, right = mono[:r], mono[r + 1:]
    sign = -1 if r & 1 else 1
    out: dict = {}
    for dm, c in dg.items():
        s1, m1 = ext.wedge_monomials(left, dm)
        if not s1:
            continue
        s2, m2 = ext.wedge_monomials(m1, right)
        if not s2:
            continue
        v = c if s1 * s2 * sign > 0 else -c
        out = ext.form_add(out, {m2: v})
    return out


def complex_structure_constants(lie: LieAlgebraData, basis: BigradedBasis) -> list[dict]:
    """``d psi^a = -sum_{b<c} psi^a([Z_b, Z_c]) psi^{bc}``."""
    N = lie.dim
    Z = basis.Q.columns()
    P = basis.P
    dgen: list[dict] = [dict() for _ in range(N)]
    for b, c in combinations(range(N), 2):
        br = lie.bracket(Z[b], Z[c])
        if not any(br):
            continue
        coords = P.apply(br)
        for a, x in enumerate(coords):
            if x:
                dgen[a][(b, c)] = -x
    return dgen


def ce_operators(lie: LieAlgebraData, basis: BigradedBasis) -> CEOperators:
    """CE differential in the complex coframe; raises if I is not integrable."""
    ops = CEOperators(basis.n, complex_structure_constants(lie, basis))
    bad = ops.off_bidegree()
    if bad is not None:
        a, bd = bad
        raise StructureError(f"d of coframe generator {a + 1} has a {bd} component: I is not integrable")
    return ops


def real_covector_in_psi(basis: BigradedBasis, covector: Sequence) -> tuple:
    """Coordinates of a (complex) covector over ``e^*`` in the basis ``psi``."""
    row = Matrix.from_rows([covector], basis.P.cols)
    return (row @ basis.Q).row(0)


def unit_vector(i: int, n: int) -> tuple:
    return _unit(i, n)


def scalar(x) -> GaussianRational:
    return to_scalar(x)
