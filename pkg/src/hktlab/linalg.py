"""Exact dense linear algebra over the Gaussian rationals.

Matrices are immutable row-major containers of :class:`GaussianRational`;
vectors are plain tuples.  Elimination always pivots on the first nonzero
entry in column order, so every echelon form (and hence every
:class:`Subspace`) is canonical.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .scalars import ONE, ZERO, GaussianRational, to_scalar

__all__ = [
    "Matrix",
    "Subspace",
    "LinalgError",
    "rank",
    "nullspace",
    "column_space",
    "solve",
    "subspace_sum",
    "subspace_intersect",
    "member",
    "quotient_dim",
    "leading_principal_minors",
    "determinant",
    "rref",
]

Vector = tuple


class LinalgError(ValueError):
    pass


def _vec(values: Iterable) -> tuple:
    return tuple(v if isinstance(v, GaussianRational) else to_scalar(v) for v in values)


def zero_vector(n: int) -> tuple:
    return (ZERO,) * n


def vec_is_zero(v: Sequence[GaussianRational]) -> bool:
    return not any(v)


def vec_add(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v) -> tuple:
    c = to_scalar(c)
    if not c:
        return zero_vector(len(v))
    return tuple(c * a for a in v)


def vec_conj(v) -> tuple:
    return tuple(a.conjugate() for a in v)


class Matrix:
    """Immutable dense matrix; ``entries`` is row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()) -> None:
        data = _vec(entries)
        if len(data) != rows * cols:
            raise LinalgError(f"expected {rows * cols} entries, got {len(data)}")
        self.rows = rows
        self.cols = cols
        self._data = tuple(data[r * cols:(r + 1) * cols] for r in range(rows))

    @classmethod
    def _from_tuples(cls, rows: int, cols: int, data) -> Matrix:
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._data = tuple(tuple(r) for r in data)
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> Matrix:
        rows = [_vec(r) for r in rows]
        if cols is None:
            if not rows:
                raise LinalgError("cannot infer column count of an empty row list")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise LinalgError("ragged rows")
        return cls._from_tuples(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> Matrix:
        columns = [_vec(c) for c in columns]
        return cls._from_tuples(rows, len(columns), [tuple(c[r] for c in columns) for r in range(rows)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        row = (ZERO,) * cols
        return cls._from_tuples(rows, cols, [row] * rows)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls._from_tuples(n, n, [tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence) -> Matrix:
        values = _vec(values)
        n = len(values)
        return cls._from_tuples(n, n, [tuple(values[i] if i == j else ZERO for j in range(n)) for i in range(n)])

    # -- access ----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple:
        return tuple(x for row in self._data for x in row)

    def __getitem__(self, idx):
        r, c = idx
        return self._data[r][c]

    def row(self, r: int) -> tuple:
        return self._data[r]

    def column(self, c: int) -> tuple:
        return tuple(row[c] for row in self._data)

    def row_list(self) -> list[tuple]:
        return list(self._data)

    def columns(self) -> list[tuple]:
        return [self.column(c) for c in range(self.cols)]

    # -- algebra ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def _check_same(self, other: Matrix) -> None:
        if self.shape != other.shape:
            raise LinalgError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix._from_tuples(self.rows, self.cols, [vec_add(a, b) for a, b in zip(self._data, other._data)])

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix._from_tuples(self.rows, self.cols, [vec_sub(a, b) for a, b in zip(self._data, other._data)])

    def __neg__(self) -> Matrix:
        return Matrix._from_tuples(self.rows, self.cols, [tuple(-x for x in r) for r in self._data])

    def scale(self, c) -> Matrix:
        c = to_scalar(c)
        return Matrix._from_tuples(self.rows, self.cols, [vec_scale(c, r) for r in self._data])

    def __rmul__(self, c) -> Matrix:
        return self.scale(c)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise LinalgError(f"cannot multiply {self.shape} by {other.shape}")
            sparse_b = [[(j, x) for j, x in enumerate(row) if x] for row in other._data]
            out = []
            ncols = other.cols
            for row in self._data:
                acc: dict[int, GaussianRational] = {}
                for k, a in enumerate(row):
                    if not a:
                        continue
                    for j, b in sparse_b[k]:
                        prod = a * b
                        cur = acc.get(j)
                        acc[j] = prod if cur is None else cur + prod
                out.append(tuple(acc.get(j, ZERO) for j in range(ncols)))
            return Matrix._from_tuples(self.rows, ncols, out)
        return self.apply(other)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise LinalgError(f"vector of length {len(v)} for {self.shape} matrix")
        nz = [(k, x) for k, x in enumerate(v) if x]
        out = []
        for row in self._data:
            acc = ZERO
            for k, x in nz:
                a = row[k]
                if a:
                    acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def transpose(self) -> Matrix:
        return Matrix._from_tuples(self.cols, self.rows, list(zip(*self._data)) if self.rows else [()] * self.cols)

    @property
    def T(self) -> Matrix:
        return self.transpose()

    def conj(self) -> Matrix:
        return Matrix._from_tuples(self.rows, self.cols, [vec_conj(r) for r in self._data])

    @property
    def H(self) -> Matrix:
        """Conjugate transpose."""
        return self.conj().transpose()

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_hermitian(self) -> bool:
        return self.is_square() and self == self.H

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix._from_tuples(len(rows), len(cols), [tuple(self._data[r][c] for c in cols) for r in rows])

    def inverse(self) -> Matrix:
        if not self.is_square():
            raise LinalgError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(self._data[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        red, pivots = _rref_rows(aug, n)
        if pivots != list(range(n)):
            raise LinalgError("matrix is singular")
        return Matrix._from_tuples(n, n, [tuple(r[n:]) for r in red[:n]])

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def block_diagonal(blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = []
    c0 = 0
    for b in blocks:
        for r in b.row_list():
            out.append((ZERO,) * c0 + r + (ZERO,) * (cols - c0 - b.cols))
        c0 += b.cols
    return Matrix._from_tuples(rows, cols, out)


def hstack(mats: Sequence[Matrix]) -> Matrix:
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise LinalgError("hstack row mismatch")
    return Matrix._from_tuples(rows, sum(m.cols for m in mats), [sum((m.row(r) for m in mats), ()) for r in range(rows)])


def vstack(mats: Sequence[Matrix]) -> Matrix:
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise LinalgError("vstack column mismatch")
    return Matrix._from_tuples(sum(m.rows for m in mats), cols, [r for m in mats for r in m.row_list()])


# ---------------------------------------------------------------------------
# elimination


def _rref_rows(rows: list[list], ncols: Optional[int] = None) -> tuple[list[list], list[int]]:
    """In-place Gauss-Jordan on a list of mutable rows.

    Pivot search is restricted to the first ``ncols`` columns (augmented
    columns beyond that are carried along).  Returns ``(rows, pivots)``.
    """
    if not rows:
        return rows, []
    width = len(rows[0])
    if ncols is None:
        ncols = width
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        piv = prow[c]
        if piv != ONE:
            inv = piv.inverse()
            prow = [x * inv if x else x for x in prow]
            rows[r] = prow
        nz = [(j, prow[j]) for j in range(c, width) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if not f:
                continue
            row_i = rows[i]
            for j, x in nz:
                row_i[j] = row_i[j] - f * x
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and pivot columns."""
    rows, pivots = _rref_rows([list(r) for r in m.row_list()], m.cols)
    return Matrix._from_tuples(m.rows, m.cols, rows), pivots


def rank(m: Matrix) -> int:
    return len(_rref_rows([list(r) for r in m.row_list()], m.cols)[1])


def _canonical_basis(vectors: Iterable[Sequence], n: int) -> tuple:
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return ()
    red, pivots = _rref_rows(rows, n)
    return tuple(tuple(red[i]) for i in range(len(pivots)))


class Subspace:
    """A subspace of ``K^ambient_dim`` stored by its canonical RREF basis."""

    __slots__ = ("ambient_dim", "_basis", "_pivots")

    def __init__(self, ambient_dim: int, spanning: Iterable[Sequence] = ()) -> None:
        self.ambient_dim = ambient_dim
        vecs = [_vec(v) for v in spanning]
        for v in vecs:
            if len(v) != ambient_dim:
                raise LinalgError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        self._basis = _canonical_basis(vecs, ambient_dim)
        self._pivots = tuple(next(j for j, x in enumerate(r) if x) for r in self._basis)

    @classmethod
    def zero(cls, n: int) -> Subspace:
        return cls(n)

    @classmethod
    def full(cls, n: int) -> Subspace:
        return cls(n, Matrix.identity(n).row_list())

    @property
    def basis(self) -> Matrix:
        return Matrix._from_tuples(len(self._basis), self.ambient_dim, self._basis)

    @property
    def vectors(self) -> tuple:
        return self._basis

    @property
    def dim(self) -> int:
        return len(self._basis)

    def __len__(self) -> int:
        return len(self._basis)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self._basis == other._basis
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self._basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def contains(self, v: Sequence) -> bool:
        v = _vec(v)
        if len(v) != self.ambient_dim:
            raise LinalgError("ambient dimension mismatch")
        residual = list(v)
        for row, p in zip(self._basis, self._pivots):
            f = residual[p]
            if f:
                residual = [a - f * b if b else a for a, b in zip(residual, row)]
        return not any(residual)

    def reduce(self, v: Sequence) -> tuple:
        """Canonical representative of ``v`` modulo this subspace."""
        residual = list(_vec(v))
        for row, p in zip(self._basis, self._pivots):
            f = residual[p]
            if f:
                residual = [a - f * b if b else a for a, b in zip(residual, row)]
        return tuple(residual)

    def is_subspace_of(self, other: Subspace) -> bool:
        return all(other.contains(v) for v in self._basis)

    def __add__(self, other: Subspace) -> Subspace:
        return subspace_sum(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return subspace_intersect(self, other)

    def __le__(self, other: Subspace) -> bool:
        return self.is_subspace_of(other)

    def annihilator(self) -> Subspace:
        """``{w : sum_i w_i v_i = 0 for all v in self}`` (bilinear, no conjugation)."""
        if not self._basis:
            return Subspace.full(self.ambient_dim)
        return nullspace(self.basis)

    def complement_basis(self, within: Subspace) -> list[tuple]:
        """Vectors of ``within``'s basis extending this subspace's basis (greedy, in order)."""
        if not self.is_subspace_of(within):
            raise LinalgError("subspace is not contained in the target")
        current = self
        extra = []
        for v in within.vectors:
            if not current.contains(v):
                extra.append(v)
                current = Subspace(self.ambient_dim, current.vectors + (v,))
        return extra


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise LinalgError(f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")


def nullspace(m: Matrix) -> Subspace:
    """Canonical basis of ``{x : m x = 0}``; dimension is ``cols - rank``."""
    n = m.cols
    rows, pivots = _rref_rows([list(r) for r in m.row_list()], n)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for i, p in enumerate(pivots):
            c = rows[i][f]
            if c:
                v[p] = -c
        basis.append(v)
    return Subspace(n, basis)


def column_space(m: Matrix) -> Subspace:
    return Subspace(m.rows, m.columns())


def image(m: Matrix) -> Subspace:
    return column_space(m)


def solve(m: Matrix, b: Sequence) -> Optional[tuple]:
    """A particular solution of ``m x = b`` with free variables set to zero, or None."""
    b = _vec(b)
    if len(b) != m.rows:
        raise LinalgError("right-hand side length mismatch")
    n = m.cols
    aug = [list(r) + [b[i]] for i, r in enumerate(m.row_list())]
    rows, pivots = _rref_rows(aug, n)
    for i in range(len(pivots), len(rows)):
        if rows[i][n]:
            return None
    x = [ZERO] * n
    for i, p in enumerate(pivots):
        x[p] = rows[i][n]
    return tuple(x)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return Subspace(a.ambient_dim, a.vectors + b.vectors)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    return subspace_sum(a.annihilator(), b.annihilator()).annihilator()


def member(v: Sequence, s: Subspace) -> bool:
    return s.contains(v)


def quotient_dim(big: Subspace, small: Subspace) -> int:
    _check_ambient(big, small)
    if not small.is_subspace_of(big):
        raise LinalgError("quotient_dim: small is not contained in big")
    return big.dim - small.dim


def determinant(m: Matrix) -> GaussianRational:
    if not m.is_square():
        raise LinalgError("determinant of a non-square matrix")
    rows = [list(r) for r in m.row_list()]
    n = m.rows
    det = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        piv = rows[c][c]
        det = det * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                f = f * inv
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], rows[c])]
    return det


def leading_principal_minors(h: Matrix) -> list[GaussianRational]:
    """Leading principal minors of a Hermitian matrix (all real for Hermitian input)."""
    if not h.is_hermitian():
        raise LinalgError("leading_principal_minors requires a Hermitian matrix")
    n = h.rows
    return [determinant(h.submatrix(range(k), range(k))) for k in range(1, n + 1)]


def is_positive_definite(h: Matrix) -> bool:
    return all(m.is_real() and m.re > 0 for m in leading_principal_minors(h))
