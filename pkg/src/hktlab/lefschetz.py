"""Lefschetz spaces and complexes: primitive decomposition, star operators, adjoints, Laplacians.

Every operator acts on the whole graded space ``A = A^0 + ... + A^{2n}``
(coordinates concatenated by degree) and is represented by :class:`Op`, a
matrix together with its degree shift and an antilinearity flag.  Graded
commutators use the parity of the degree shift.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial
from typing import Callable, Optional, Sequence

from . import exterior as ext
from .linalg import (
    Matrix,
    Subspace,
    block_diagonal,
    column_space,
    nullspace,
    rank,
    subspace_intersect,
    subspace_sum,
)
from .quaternionic import QDolbeaultComplex, TriState, check_balanced, check_qreal_qpositive, gram, lee_forms
from .scalars import ONE, ZERO, GaussianRational

__all__ = [
    "adjoint_discrepancy",
    "Op",
    "LefschetzStructure",
    "LefschetzError",
    "IdentityReport",
    "HLCReport",
    "PrimitiveDecomposition",
    "build",
    "from_complex",
    "primitive_decompose",
    "star_l",
    "star",
    "verify_dgk",
    "verify_laplacian_identities",
    "harmonic_space",
    "check_hlc_cohomology",
    "check_dd_lambda_lemma",
    "check_hlc_on_lefschetz_harmonic",
    "LAPLACIAN_TAGS",
    "lefschetz_equivalences",
    "harmonic_representatives_exist",
    "dd_lambda_lemma_degrees",
    "check_hlc_on_harmonic",
    "bracket",
    "from_complex",
]


class LefschetzError(ValueError):
    def __init__(self, message: str, degree: Optional[int] = None) -> None:
        super().__init__(message)
        self.degree = degree


@dataclass(frozen=True)
class Op:
    """Graded operator ``x -> M x`` (or ``M conj(x)`` when antilinear)."""

    matrix: Matrix
    deg: int
    anti: bool = False

    def __matmul__(self, other: Op) -> Op:
        right = other.matrix.conj() if self.anti else other.matrix
        return Op(self.matrix @ right, self.deg + other.deg, self.anti != other.anti)

    def __add__(self, other: Op) -> Op:
        self._compatible(other)
        return Op(self.matrix + other.matrix, self.deg, self.anti or other.anti)

    def __sub__(self, other: Op) -> Op:
        self._compatible(other)
        return Op(self.matrix - other.matrix, self.deg, self.anti or other.anti)

    def __neg__(self) -> Op:
        return Op(-self.matrix, self.deg, self.anti)

    def scale(self, c) -> Op:
        return Op(self.matrix.scale(c), self.deg, self.anti)

    def _compatible(self, other: Op) -> None:
        if self.deg != other.deg:
            raise LefschetzError(f"adding operators of degrees {self.deg} and {other.deg}")
        if self.anti != other.anti and not (self.matrix.is_zero() or other.matrix.is_zero()):
            raise LefschetzError("adding a linear and an antilinear operator")

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def same(self, other: Op) -> bool:
        if self.deg != other.deg:
            return False
        if self.matrix.is_zero() and other.matrix.is_zero():
            return True
        return self.anti == other.anti and self.matrix == other.matrix

    def apply(self, vec: Sequence) -> tuple:
        if self.anti:
            vec = tuple(x.conjugate() for x in vec)
        return self.matrix.apply(vec)


def bracket(a: Op, b: Op) -> Op:
    """Graded commutator ``ab - (-1)^{|a||b|} ba``."""
    if (a.deg * b.deg) % 2:
        return a @ b + b @ a
    return a @ b - b @ a


@dataclass(frozen=True)
class PrimitiveDecomposition:
    degree: int
    components: dict  # k -> coordinate vector of alpha^k in A^{p-2k}


@dataclass
class IdentityReport:
    results: dict = field(default_factory=dict)  # name -> list of failing degrees (empty = pass)
    skipped: dict = field(default_factory=dict)  # name -> reason

    def record(self, name: str, failing: list) -> None:
        self.results[name] = failing

    @property
    def ok(self) -> bool:
        return all(not v for v in self.results.values())

    def passed(self, name: str) -> bool:
        return name in self.results and not self.results[name]


@dataclass
class HLCReport:
    theory: str
    per_degree: dict = field(default_factory=dict)  # p -> bool
    induced: bool = True

    @property
    def holds(self) -> bool:
        return self.induced and all(self.per_degree.values())

    @property
    def first_failure(self) -> Optional[int]:
        for p in sorted(self.per_degree):
            if not self.per_degree[p]:
                return p
        return None


LAPLACIAN_TAGS = ("d", "d_lambda", "bc_lambda", "bc_lambda_star", "del_j", "bc", "aeppli")


class LefschetzStructure:
    """Graded space with L satisfying the HLC, a differential d and optional extras."""

    def __init__(
        self,
        dims: Sequence[int],
        L_blocks: Sequence[Matrix],
        d_blocks: Optional[Sequence[Matrix]] = None,
        jop_blocks: Optional[Sequence[Matrix]] = None,
        gram_blocks: Optional[Sequence[Matrix]] = None,
        dj_blocks: Optional[Sequence[Matrix]] = None,
    ) -> None:
        if len(dims) % 2 == 0:
            raise LefschetzError("a Lefschetz space needs degrees 0..2n")
        self.dims = list(dims)
        self.n = (len(dims) - 1) // 2
        self.offsets = [sum(self.dims[:p]) for p in range(len(dims) + 1)]
        self.total = self.offsets[-1]
        self.L = self._assemble(L_blocks, 2)
        self.d = self._assemble(d_blocks, 1) if d_blocks is not None else Op(Matrix.zeros(self.total, self.total), 1)
        self.jop = self._assemble(jop_blocks, 0, anti=True) if jop_blocks is not None else None
        self.dj = self._assemble(dj_blocks, 1) if dj_blocks is not None else None
        self.gram = block_diagonal(list(gram_blocks)) if gram_blocks is not None else None
        self._gram_inv = None
        self._cache: dict = {}
        self._check_hlc()
        self._build_star_l()

    # -- assembly -------------------------------------------------------
    def _assemble(self, blocks: Sequence[Matrix], shift: int, anti: bool = False) -> Op:
        N = self.total
        rows = [[ZERO] * N for _ in range(N)]
        top = len(self.dims) - 1
        for p, blk in enumerate(blocks):
            q = p + shift
            if blk is None or q < 0 or q > top:
                continue
            if blk.shape != (self.dims[q], self.dims[p]):
                raise LefschetzError(f"block {p} has shape {blk.shape}, expected {(self.dims[q], self.dims[p])}", p)
            r0, c0 = self.offsets[q], self.offsets[p]
            for i in range(blk.rows):
                row = blk.row(i)
                target = rows[r0 + i]
                for j, x in enumerate(row):
                    if x:
                        target[c0 + j] = x
        return Op(Matrix.from_rows(rows, N) if N else Matrix.zeros(0, 0), shift, anti)

    def block(self, op: Op, p: int) -> Matrix:
        """Component of ``op`` from A^p to A^{p+deg}."""
        q = p + op.deg
        if not 0 <= q < len(self.dims):
            return Matrix.zeros(0, self.dims[p])
        rows = range(self.offsets[q], self.offsets[q + 1])
        cols = range(self.offsets[p], self.offsets[p + 1])
        return op.matrix.submatrix(list(rows), list(cols))

    def embed(self, vec: Sequence, p: int) -> tuple:
        out = [ZERO] * self.total
        out[self.offsets[p]:self.offsets[p + 1]] = list(vec)
        return tuple(out)

    def restrict(self, vec: Sequence, p: int) -> tuple:
        return tuple(vec[self.offsets[p]:self.offsets[p + 1]])

    def identity(self) -> Op:
        return Op(Matrix.identity(self.total), 0)

    def degree_sign(self, f: Callable[[int], int]) -> Op:
        vals = []
        for p, dp in enumerate(self.dims):
            vals.extend([GaussianRational(f(p))] * dp)
        return Op(Matrix.diagonal(vals), 0)

    def power(self, op: Op, k: int) -> Op:
        out = self.identity()
        for _ in range(k):
            out = op @ out
        return out

    # -- HLC and *_L ------------------------------------------------------
    def _check_hlc(self) -> None:
        n = self.n
        for p in range(n + 1):
            blk = self.block(self.power(self.L, n - p), p)
            if blk.rows != blk.cols or rank(blk) != blk.cols:
                raise LefschetzError(f"hard Lefschetz condition fails: L^{n - p} is not invertible on degree {p}", p)

    def primitive_space(self, p: int) -> Subspace:
        n = self.n
        if p > n:
            return Subspace.zero(self.dims[p])
        return nullspace(self.block(self.power(self.L, n - p + 1), p))

    def _build_star_l(self) -> None:
        n = self.n
        src_cols: list = []
        img_cols: list = []
        labels: list = []
        Lpow = [self.power(self.L, k) for k in range(n + 1)]
        for p in range(n + 1):
            prim = self.primitive_space(p)
            sign = -1 if (p * (p + 1) // 2) % 2 else 1
            for idx, beta in enumerate(prim.vectors):
                full = self.embed(beta, p)
                for k in range(n - p + 1):
                    src = Lpow[k].apply(full)
                    src_cols.append(tuple(x * GaussianRational(1) / factorial(k) for x in src))
                    img = Lpow[n - p - k].apply(full)
                    img_cols.append(tuple(x * sign / factorial(n - p - k) for x in img))
                    labels.append((p, idx, k))
        if len(src_cols) != self.total:
            raise LefschetzError("primitive decomposition does not span the space")
        S = Matrix.from_columns(src_cols, self.total)
        T = Matrix.from_columns(img_cols, self.total)
        self._S_inv = S.inverse()
        self._labels = labels
        self._prim_bases = {p: self.primitive_space(p).vectors for p in range(n + 1)}
        self.star_l = Op(T @ self._S_inv, 0)
        # star_l maps A^p to A^{2n-p}: it is not homogeneous, so deg is meaningless; keep 0
        # and rely on block-aware compositions below.

    # -- primitive decomposition ------------------------------------------
    def primitive_decompose(self, vec: Sequence, p: int) -> PrimitiveDecomposition:
        coords = self._S_inv.apply(self.embed(vec, p))
        comps: dict = {}
        for c, (q, idx, k) in zip(coords, self._labels):
            if not c:
                continue
            if q + 2 * k != p:
                raise LefschetzError("decomposition leaked into another degree")
            beta = self._prim_bases[q][idx]
            cur = comps.get(k, (ZERO,) * self.dims[q])
            comps[k] = tuple(a + c * b for a, b in zip(cur, beta))
        return PrimitiveDecomposition(p, comps)

    def reconstruct(self, dec: PrimitiveDecomposition) -> tuple:
        total = (ZERO,) * self.dims[dec.degree]
        for k, comp in dec.components.items():
            q = dec.degree - 2 * k
            full = self.power(self.L, k).apply(self.embed(comp, q))
            part = self.restrict(full, dec.degree)
            total = tuple(a + b / factorial(k) for a, b in zip(total, part))
        return total

    def is_primitive(self, vec: Sequence, p: int) -> bool:
        if p > self.n:
            return not any(vec)
        return not any(self.power(self.L, self.n - p + 1).apply(self.embed(vec, p)))

    # -- derived operators --------------------------------------------------
    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def Lam(self) -> Op:
        return self._memo("Lam", lambda: Op((self.star_l @ self.L @ self.star_l).matrix, -2))

    @property
    def d_lambda(self) -> Op:
        def make():
            raw = self.star_l @ self.d @ self.star_l
            sign = self.degree_sign(lambda p: -1 if p % 2 == 0 else 1)  # (-1)^{p+1}
            return Op((raw @ sign).matrix, -1)

        return self._memo("dL", make)

    @property
    def star(self) -> Op:
        if self.jop is None:
            raise LefschetzError("the twisted star needs the antilinear operator Jc")
        return self._memo("star", lambda: Op((self.jop @ self.star_l).matrix, 0, True))

    def star_adjoint(self, op: Op) -> Op:
        """Twisted-star adjoint of a degree +1 or -1 operator.

        ``-* op *`` for degree +1 and ``+* op *`` for degree -1; with these signs
        ``d* = [Lam, d^L*]`` holds and both agree with the Gram adjoint on
        balanced data.
        """
        if op.deg not in (1, -1):
            raise LefschetzError("star adjoints are defined for operators of degree +1 or -1")
        s = self.star
        m = (s @ op @ s).matrix
        return Op(-m if op.deg == 1 else m, -op.deg, op.anti)

    def gram_adjoint(self, op: Op) -> Op:
        if self.gram is None:
            raise LefschetzError("no Gram pairing available")
        if op.anti:
            raise LefschetzError("Gram adjoint of an antilinear operator is not supported")
        if self._gram_inv is None:
            self._gram_inv = self.gram.inverse()
        return Op(self._gram_inv @ op.matrix.H @ self.gram, -op.deg)

    def adjoint(self, op: Op, mode: Optional[str] = None) -> Op:
        mode = mode or self.default_mode
        return self.gram_adjoint(op) if mode == "gram" else self.star_adjoint(op)

    @property
    def default_mode(self) -> str:
        return "gram" if self.gram is not None else "star"

    # -- Laplacians ----------------------------------------------------------
    def laplacian(self, tag: str, mode: Optional[str] = None) -> Op:
        mode = mode or self.default_mode
        return self._memo(("lap", tag, mode), lambda: self._laplacian(tag, mode))

    def _laplacian(self, tag: str, mode: str) -> Op:
        d = self.d
        ds = self.adjoint(d, mode)
        if tag == "d":
            return d @ ds + ds @ d
        dl = self.d_lambda
        dls = self.adjoint(dl, mode)
        if tag == "d_lambda":
            return dl @ dls + dls @ dl
        if tag == "bc_lambda":
            return (
                ds @ d + dls @ dl + d @ dl @ dls @ ds + dls @ d @ ds @ dl
                + ds @ dl @ dls @ d + dls @ ds @ d @ dl
            )
        if tag == "bc_lambda_star":
            return (
                ds @ d + dl @ dls + d @ dls @ dl @ ds + dl @ d @ ds @ dls
                + ds @ dls @ dl @ d + dl @ ds @ d @ dls
            )
        if self.dj is None:
            raise LefschetzError(f"Laplacian {tag!r} needs the second differential del_J")
        dj = self.dj
        djs = self.adjoint(dj, mode)
        if tag == "del_j":
            return dj @ djs + djs @ dj
        if tag == "bc":
            return (
                ds @ d + djs @ dj + d @ dj @ djs @ ds + djs @ ds @ d @ dj
                + djs @ d @ ds @ dj + ds @ dj @ djs @ d
            )
        if tag == "aeppli":
            return (
                d @ ds + dj @ djs + d @ dj @ djs @ ds + djs @ ds @ d @ dj
                + d @ djs @ dj @ ds + dj @ ds @ d @ djs
            )
        raise LefschetzError(f"unknown Laplacian tag {tag!r}")

    # -- subspaces -------------------------------------------------------------
    def kernel(self, op: Op, p: int) -> Subspace:
        if op.anti:
            # conj is a bijection, so ker(M conj) = conj(ker M)
            ker = nullspace(self.block(op, p))
            return Subspace(self.dims[p], [tuple(x.conjugate() for x in v) for v in ker.vectors])
        return nullspace(self.block(op, p))

    def image_into(self, op: Op, p: int) -> Subspace:
        """Image of ``op`` restricted to the degree landing in A^p."""
        src = p - op.deg
        if not 0 <= src < len(self.dims):
            return Subspace.zero(self.dims[p])
        return column_space(self.block(op, src))


# ---------------------------------------------------------------------------
# construction


def build(
    dims: Sequence[int],
    L_blocks: Sequence[Matrix],
    d_blocks: Optional[Sequence[Matrix]] = None,
    jop_blocks: Optional[Sequence[Matrix]] = None,
    gram_blocks: Optional[Sequence[Matrix]] = None,
    dj_blocks: Optional[Sequence[Matrix]] = None,
) -> LefschetzStructure:
    return LefschetzStructure(dims, L_blocks, d_blocks, jop_blocks, gram_blocks, dj_blocks)


def wedge_blocks(m: int, form: dict, left: bool = True) -> list[Matrix]:
    """Blocks of ``x -> form ^ x`` on the (p,0)-monomial bases of m generators."""
    k = len(next(iter(form))) if form else 0
    out = []
    for p in range(m + 1):
        src = ext.degree_basis(m, p)
        tgt = ext.degree_basis(m, p + k) if p + k <= m else ()

        def op(mono, form=form):
            return ext.form_wedge(form, {mono: ONE}) if left else ext.form_wedge({mono: ONE}, form)

        out.append(ext.operator_matrix(op, src, tgt) if p + k <= m else Matrix.zeros(0, len(src)))
    return out


def from_complex(
    c: QDolbeaultComplex,
    omega: Optional[dict] = None,
    use_gram: Optional[bool] = None,
) -> LefschetzStructure:
    """Lefschetz complex ``(A^{*,0}, L = Omega ^ -, del)`` with all data the complex provides.

    ``use_gram`` defaults to True exactly when Omega is q-real and q-positive.
    """
    if omega is not None:
        c = c.with_omega(omega)
    if c.omega is None:
        raise LefschetzError("a Lefschetz structure needs a (2,0)-form")
    m = c.m
    dims = [comb(m, p) for p in range(m + 1)]
    L_blocks = wedge_blocks(m, c.omega)
    d_blocks = [c.del_matrix(p) for p in range(m + 1)]
    jop_blocks = dj_blocks = gram_blocks = None
    if c.jmat is not None:
        jop_blocks = [c.jop_matrix(p) for p in range(m + 1)]
        dj_blocks = [c.del_j_matrix(p) for p in range(m + 1)]
        if use_gram is None:
            qr, qp = check_qreal_qpositive(c)
            use_gram = qr is TriState.HOLDS and qp is TriState.HOLDS
        if use_gram:
            gram_blocks = [gram(c, p) for p in range(m + 1)]
    s = LefschetzStructure(dims, L_blocks, d_blocks, jop_blocks, gram_blocks, dj_blocks)
    s.complex = c
    return s


# ---------------------------------------------------------------------------
# user-facing operations


def primitive_decompose(s: LefschetzStructure, vec: Sequence, p: int) -> PrimitiveDecomposition:
    return s.primitive_decompose(vec, p)


def star_l(s: LefschetzStructure, vec: Sequence, p: int) -> tuple:
    """Coordinates of ``*_L vec`` in degree ``2n - p``."""
    return s.restrict(s.star_l.apply(s.embed(vec, p)), len(s.dims) - 1 - p)


def star(s: LefschetzStructure, vec: Sequence, p: int) -> tuple:
    """Coordinates of ``* vec`` in degree ``2n - p``."""
    return s.restrict(s.star.apply(s.embed(vec, p)), len(s.dims) - 1 - p)


def _failing_degrees(s: LefschetzStructure, a: Op, b: Op) -> list:
    if a.same(b):
        return []
    bad = []
    for p in range(len(s.dims)):
        if s.block(a, p) != s.block(b, p) or a.anti != b.anti and not (s.block(a, p).is_zero() and s.block(b, p).is_zero()):
            bad.append(p)
    return bad or [-1]


def verify_dgk(s: LefschetzStructure) -> IdentityReport:
    """Generalized Demailly-Griffiths-Kaehler identities."""
    rep = IdentityReport()
    L, d, Lam, dl = s.L, s.d, s.Lam, s.d_lambda
    dL = bracket(d, L)
    pre = bracket(L, dL)
    if not pre.is_zero():
        rep.skipped["dgk"] = "[L,[d,L]] != 0"
        rep.record("precondition [L,[d,L]]=0", _failing_degrees(s, pre, Op(Matrix.zeros(s.total, s.total), pre.deg)))
        return rep
    rep.record("[d^L,L] = d + [Lam,[d,L]]", _failing_degrees(s, bracket(dl, L), d + bracket(Lam, dL)))
    rep.record("[d,Lam] = d^L + [[Lam,d^L],L]", _failing_degrees(s, bracket(d, Lam), dl + bracket(bracket(Lam, dl), L)))
    if dL.is_zero():
        rep.record("d^L = [d,Lam]", _failing_degrees(s, dl, bracket(d, Lam)))
        rep.record("[d,d^L] = 0", _failing_degrees(s, bracket(d, dl), Op(Matrix.zeros(s.total, s.total), 0)))
        rep.record("d = [d^L,L]", _failing_degrees(s, d, bracket(dl, L)))
    else:
        rep.skipped["[d,L]=0 consequences"] = "[d,L] != 0"
    return rep


def _zero(s: LefschetzStructure, deg: int) -> Op:
    return Op(Matrix.zeros(s.total, s.total), deg)


def theta_operators(s: LefschetzStructure) -> Optional[tuple[Op, Op]]:
    """``psi = theta ^ -`` and ``tau = theta_J ^ -`` from the Lee forms of the underlying complex."""
    c = getattr(s, "complex", None)
    if c is None:
        return None
    lee = lee_forms(c)
    if lee is None or lee.theta_j is None:
        return None
    m = c.m
    theta = {(a,): x for a, x in enumerate(lee.theta) if x}
    theta_j = {(a,): x for a, x in enumerate(lee.theta_j) if x}
    psi = s._assemble(wedge_blocks(m, theta) if theta else [None] * (m + 1), 1)
    tau = s._assemble(wedge_blocks(m, theta_j) if theta_j else [None] * (m + 1), 1)
    return psi, tau


def adjoint_discrepancy(s: LefschetzStructure) -> Optional[dict]:
    """Degrees where the twisted-star adjoint and the Gram adjoint differ, per operator."""
    if s.gram is None or s.jop is None:
        return None
    ops = {"del": s.d} if s.dj is None else {"del": s.d, "del_J": s.dj}
    return {name: _failing_degrees(s, s.star_adjoint(op), s.gram_adjoint(op)) for name, op in ops.items()}


def verify_laplacian_identities(s: LefschetzStructure, balanced: Optional[TriState] = None, mode: Optional[str] = None) -> IdentityReport:
    """Laplacian identities of a Lefschetz complex, plus the HKT ones when the data allows.

    The abstract identities need ``[d,L] = 0`` and use the twisted-star adjoints.
    The quaternionic ones need an HKT form (``[del,L] = 0`` with a Gram pairing);
    ``balanced`` defaults to the check on the underlying complex.
    """
    rep = IdentityReport()
    d, dl, Lam, L = s.d, s.d_lambda, s.Lam, s.L
    closed = bracket(d, L).is_zero()
    if not closed:
        rep.skipped["abstract"] = "[d,L] != 0, not a Lefschetz complex"
    elif s.jop is None:
        rep.skipped["abstract"] = "no Jc data, star adjoints unavailable"
    else:
        dls = s.star_adjoint(dl)
        ds = s.star_adjoint(d)
        comm = bracket(d, dls)
        rep.record(
            "Delta_d = Delta_dL - [Lam,[d,d^L*]]",
            _failing_degrees(s, s.laplacian("d", "star"), s.laplacian("d_lambda", "star") - bracket(Lam, comm)),
        )
        if comm.is_zero():
            D = s.laplacian("d_lambda", "star")
            rep.record(
                "BC_dL = Delta_dL^2 + d*d + d^L* d^L",
                _failing_degrees(s, s.laplacian("bc_lambda", "star"), D @ D + ds @ d + dls @ dl),
            )
            rep.record(
                "BC_dL = BC_dL* + d^L* d^L - d^L d^L*",
                _failing_degrees(s, s.laplacian("bc_lambda", "star"), s.laplacian("bc_lambda_star", "star") + dls @ dl - dl @ dls),
            )
            rep.record("Delta_d = Delta_dL", _failing_degrees(s, s.laplacian("d", "star"), D))
        else:
            rep.skipped["[d,d^L*]=0 consequences"] = "[d,d^L*] != 0"
    if s.dj is None:
        rep.skipped["quaternionic"] = "no del_J"
        return rep
    if not closed or s.gram is None:
        rep.skipped["quaternionic"] = "Omega is not HKT"
        return rep
    if balanced is None:
        c = getattr(s, "complex", None)
        balanced = check_balanced(c) if c is not None else TriState.UNKNOWN
    qmode = mode or s.default_mode
    dj = s.dj
    ds = s.adjoint(d, qmode)
    djs = s.adjoint(dj, qmode)
    if balanced is TriState.HOLDS:
        agree = s.star_adjoint(d).same(s.gram_adjoint(d)) and s.star_adjoint(dj).same(s.gram_adjoint(dj))
        rep.results["star adjoint = Gram adjoint"] = [] if agree else [-1]
        rep.record("[del*,L] = -del_J", _failing_degrees(s, bracket(ds, L), -dj))
        rep.record("d^L = del_J*", _failing_degrees(s, dl, djs))
        rep.record("[L,del_J*] = -del", _failing_degrees(s, bracket(L, djs), -d))
        rep.record("[Lam,del_J] = del*", _failing_degrees(s, bracket(Lam, dj), ds))
        D = s.laplacian("d", qmode)
        rep.record("Delta_del = Delta_delJ", _failing_degrees(s, D, s.laplacian("del_j", qmode)))
        rep.record("Delta_BC = Delta_del^2 + del*del + del_J*del_J", _failing_degrees(s, s.laplacian("bc", qmode), D @ D + ds @ d + djs @ dj))
    elif balanced is TriState.FAILS:
        ops = theta_operators(s)
        if ops is None:
            rep.skipped["non-balanced"] = "Lee forms unavailable"
        else:
            psi, tau = ops
            psis, taus = s.gram_adjoint(psi), s.gram_adjoint(tau)
            rep.record("[del*,L] = -del_J + theta_J^", _failing_degrees(s, bracket(ds, L), -dj + tau))
            rep.record("d^L = del_J* - tau*", _failing_degrees(s, dl, djs - taus))
            rep.record(
                "Delta_delJ = Delta_del + [psi*,del] + [del_J,tau*]",
                _failing_degrees(s, s.laplacian("del_j", qmode), s.laplacian("d", qmode) + bracket(psis, d) + bracket(dj, taus)),
            )
    else:
        rep.skipped["quaternionic"] = "balanced condition unknown"
    return rep


def harmonic_space(s: LefschetzStructure, which: str, p: int, mode: Optional[str] = None) -> Subspace:
    """Kernel of the chosen Laplacian on A^p; 'lefschetz' is Ker d & Ker d^L."""
    if not 0 <= p < len(s.dims):
        raise LefschetzError(f"degree {p} outside 0..{len(s.dims) - 1}", p)
    mode = mode or s.default_mode
    if which == "lefschetz":
        return subspace_intersect(s.kernel(s.d, p), s.kernel(s.d_lambda, p))
    if which in ("del", "d"):
        return s.kernel(s.laplacian("d", mode), p)
    if which == "d_lambda":
        return s.kernel(s.laplacian("d_lambda", mode), p)
    if which in ("del_j", "delj"):
        return s.kernel(s.laplacian("del_j", mode), p)
    if which in ("bc", "aeppli"):
        if s.dj is None:
            raise LefschetzError("Bott-Chern and Aeppli spaces need del_J")
        d, dj = s.d, s.dj
        ds, djs = s.adjoint(d, mode), s.adjoint(dj, mode)
        if which == "bc":
            parts = [s.kernel(d, p), s.kernel(dj, p), s.kernel(djs @ ds, p)]
        else:
            parts = [s.kernel(ds, p), s.kernel(djs, p), s.kernel(d @ dj, p)]
        out = parts[0]
        for q in parts[1:]:
            out = subspace_intersect(out, q)
        return out
    if which in ("bc_full", "aeppli_full"):
        return s.kernel(s.laplacian(which[:-5] if which == "bc_full" else "aeppli", mode), p)
    raise LefschetzError(f"unknown harmonic tag {which!r}")


# ---------------------------------------------------------------------------
# cohomology-level Lefschetz checks


def _cohomology(s: LefschetzStructure, theory: str, p: int) -> tuple[Subspace, Subspace]:
    d = s.d
    if theory in ("del", "d"):
        return s.kernel(d, p), s.image_into(d, p)
    if theory == "d_lambda":
        return s.kernel(s.d_lambda, p), s.image_into(s.d_lambda, p)
    if s.dj is None:
        raise LefschetzError(f"theory {theory!r} needs del_J")
    dj = s.dj
    if theory in ("del_j", "delj"):
        return s.kernel(dj, p), s.image_into(dj, p)
    if theory == "bc":
        return subspace_intersect(s.kernel(d, p), s.kernel(dj, p)), s.image_into(d @ dj, p)
    if theory == "aeppli":
        return s.kernel(d @ dj, p), subspace_sum(s.image_into(d, p), s.image_into(dj, p))
    raise LefschetzError(f"unknown theory {theory!r}")


def _induced_bijective(s: LefschetzStructure, op: Op, src: tuple, tgt: tuple, p: int, q: int) -> tuple[bool, bool]:
    """(well defined, bijective) for the map induced by ``op`` from Z^p/B^p to Z^q/B^q."""
    zp, bp = src
    zq, bq = tgt
    images_z = [s.restrict(op.apply(s.embed(v, p)), q) for v in zp.vectors]
    images_b = [s.restrict(op.apply(s.embed(v, p)), q) for v in bp.vectors]
    induced = all(zq.contains(v) for v in images_z) and all(bq.contains(v) for v in images_b)
    if not induced:
        return False, False
    hp = zp.dim - bp.dim
    hq = zq.dim - bq.dim
    if hp != hq:
        return True, False
    span = Subspace(s.dims[q], list(bq.vectors) + images_z)
    return True, span.dim - bq.dim == hq


def check_hlc_cohomology(s: LefschetzStructure, theory: str = "del") -> HLCReport:
    """HLC for the induced L^{n-p} (or Lam^{n-p} for the d^L theory) on cohomology."""
    rep = HLCReport(theory)
    n = s.n
    for p in range(n + 1):
        q = 2 * n - p
        if theory == "d_lambda":
            op = s.power(s.Lam, n - p)
            ok_ind, ok = _induced_bijective(s, op, _cohomology(s, theory, q), _cohomology(s, theory, p), q, p)
        else:
            op = s.power(s.L, n - p)
            ok_ind, ok = _induced_bijective(s, op, _cohomology(s, theory, p), _cohomology(s, theory, q), p, q)
        rep.induced = rep.induced and ok_ind
        rep.per_degree[p] = ok
    return rep


def check_hlc_on_harmonic(s: LefschetzStructure, which: str, use_lambda: bool = False) -> HLCReport:
    rep = HLCReport(f"harmonic:{which}")
    n = s.n
    zero = lambda p: Subspace.zero(s.dims[p])
    for p in range(n + 1):
        q = 2 * n - p
        if use_lambda:
            op = s.power(s.Lam, n - p)
            src = (harmonic_space(s, which, q), zero(q))
            tgt = (harmonic_space(s, which, p), zero(p))
            ok_ind, ok = _induced_bijective(s, op, src, tgt, q, p)
        else:
            op = s.power(s.L, n - p)
            src = (harmonic_space(s, which, p), zero(p))
            tgt = (harmonic_space(s, which, q), zero(q))
            ok_ind, ok = _induced_bijective(s, op, src, tgt, p, q)
        rep.induced = rep.induced and ok_ind
        rep.per_degree[p] = ok
    return rep


def check_hlc_on_lefschetz_harmonic(s: LefschetzStructure) -> tuple[HLCReport, HLCReport]:
    """HLC for (H_L, L) and (H_L, Lam) on Lefschetz harmonic forms."""
    return check_hlc_on_harmonic(s, "lefschetz"), check_hlc_on_harmonic(s, "lefschetz", use_lambda=True)


def dd_lambda_lemma_degrees(s: LefschetzStructure) -> dict:
    out = {}
    d, dl = s.d, s.d_lambda
    for p in range(len(s.dims)):
        left = subspace_intersect(subspace_intersect(s.kernel(d, p), s.kernel(dl, p)),
                                  subspace_sum(s.image_into(d, p), s.image_into(dl, p)))
        right = s.image_into(d @ dl, p)
        out[p] = left == right
    return out


def check_dd_lambda_lemma(s: LefschetzStructure) -> TriState:
    return TriState.of(all(dd_lambda_lemma_degrees(s).values()))


def harmonic_representatives_exist(s: LefschetzStructure) -> bool:
    """Every d-class has a representative in Ker d & Ker d^L."""
    for p in range(len(s.dims)):
        z, b = _cohomology(s, "del", p)
        h = harmonic_space(s, "lefschetz", p)
        if not z.is_subspace_of(subspace_sum(h, b)):
            return False
    return True


def lefschetz_equivalences(s: LefschetzStructure) -> dict:
    """The four equivalent conditions for a Lefschetz complex with [d,L] = 0."""
    return {
        "dd_lambda_lemma": check_dd_lambda_lemma(s) is TriState.HOLDS,
        "harmonic_representatives": harmonic_representatives_exist(s),
        "hlc_H_d": check_hlc_cohomology(s, "del").holds,
        "hlc_H_dlambda": check_hlc_cohomology(s, "d_lambda").holds,
    }
