"""Invariant quaternionic cohomologies, the del-delJ lemma and triple del-Massey products.

All groups are computed on invariant (p,0)-forms of a :class:`QDolbeaultComplex`:

* ``del``    Ker del / Im del
* ``del_j``  Ker del_J / Im del_J
* ``bc``     Ker del & Ker del_J / Im del del_J
* ``aeppli`` Ker del del_J / (Im del + Im del_J)
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

from . import exterior as ext
from .linalg import (
    Matrix,
    Subspace,
    column_space,
    nullspace,
    solve,
    subspace_intersect,
    subspace_sum,
)
from .quaternionic import QDolbeaultComplex, TriState, check_invariant_slnh
from .scalars import ZERO

__all__ = [
    "THEORIES",
    "CohomologyGroup",
    "MasseyResult",
    "MasseyScan",
    "compute",
    "dimensions",
    "check_ddj_lemma",
    "ddj_lemma_degrees",
    "cup",
    "massey_triple",
    "massey_scan",
]

THEORIES = ("del", "del_j", "bc", "aeppli")


class CohomologyError(ValueError):
    pass


@dataclass(frozen=True)
class CohomologyGroup:
    theory: str
    degree: int
    cocycles: Subspace
    coboundaries: Subspace
    representatives: tuple

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def is_zero_class(self, vec: Sequence) -> bool:
        return self.coboundaries.contains(vec)


def _zero_space(n: int) -> Subspace:
    return Subspace.zero(n)


def _del(c: QDolbeaultComplex, p: int) -> Optional[Matrix]:
    """del: A^p -> A^{p+1}, or None outside the range."""
    if not 0 <= p < c.m:
        return None
    return c.del_matrix(p)


def _del_j(c: QDolbeaultComplex, p: int) -> Optional[Matrix]:
    if not 0 <= p < c.m:
        return None
    return c.del_j_matrix(p)


def _kernel(mat: Optional[Matrix], dim: int) -> Subspace:
    return Subspace.full(dim) if mat is None else nullspace(mat)


def _image(mat: Optional[Matrix], dim: int) -> Subspace:
    return _zero_space(dim) if mat is None else column_space(mat)


def _compose(a: Optional[Matrix], b: Optional[Matrix]) -> Optional[Matrix]:
    if a is None or b is None:
        return None
    return a @ b


def _spaces(theory: str, c: QDolbeaultComplex, p: int) -> tuple[Subspace, Subspace]:
    if not 0 <= p <= c.m:
        raise CohomologyError(f"degree {p} outside 0..{c.m}")
    dim = c.dim(p)
    if theory == "del":
        return _kernel(_del(c, p), dim), _image(_del(c, p - 1), dim)
    if theory in ("del_j", "bc", "aeppli") and c.jmat is None:
        raise CohomologyError(f"the {theory} cohomology needs J data")
    if theory == "del_j":
        return _kernel(_del_j(c, p), dim), _image(_del_j(c, p - 1), dim)
    if theory == "bc":
        z = subspace_intersect(_kernel(_del(c, p), dim), _kernel(_del_j(c, p), dim))
        return z, _image(_compose(_del(c, p - 1), _del_j(c, p - 2)), dim)
    if theory == "aeppli":
        z = _kernel(_compose(_del(c, p + 1), _del_j(c, p)), dim)
        return z, subspace_sum(_image(_del(c, p - 1), dim), _image(_del_j(c, p - 1), dim))
    raise CohomologyError(f"unknown theory {theory!r}")


def compute(theory: str, c: QDolbeaultComplex, p: int) -> CohomologyGroup:
    z, b = _spaces(theory, c, p)
    if not b.is_subspace_of(z):
        raise CohomologyError(f"coboundaries not contained in cocycles for {theory} in degree {p}")
    reps = tuple(b.complement_basis(z))
    return CohomologyGroup(theory, p, z, b, reps)


def dimensions(theory: str, c: QDolbeaultComplex) -> list[int]:
    return [compute(theory, c, p).dim for p in range(c.m + 1)]


# ---------------------------------------------------------------------------
# del-delJ lemma


def ddj_lemma_degrees(c: QDolbeaultComplex) -> dict:
    """Per degree: (Ker delJ & Im del == Im del delJ, Im delJ & Ker del == Im delJ del)."""
    out = {}
    for p in range(c.m + 1):
        dim = c.dim(p)
        im_del = _image(_del(c, p - 1), dim)
        im_dj = _image(_del_j(c, p - 1), dim)
        ddj = _image(_compose(_del(c, p - 1), _del_j(c, p - 2)), dim)
        djd = _image(_compose(_del_j(c, p - 1), _del(c, p - 2)), dim)
        first = subspace_intersect(_kernel(_del_j(c, p), dim), im_del) == ddj
        second = subspace_intersect(im_dj, _kernel(_del(c, p), dim)) == djd
        out[p] = (first, second)
    return out


def check_ddj_lemma(c: QDolbeaultComplex) -> TriState:
    if c.jmat is None:
        return TriState.UNKNOWN
    return TriState.of(all(a and b for a, b in ddj_lemma_degrees(c).values()))


# ---------------------------------------------------------------------------
# products


def wedge_vectors(c: QDolbeaultComplex, u: Sequence, p: int, v: Sequence, q: int) -> tuple:
    if p + q > c.m:
        return ()
    f = ext.form_wedge(c.to_form(u, p), c.to_form(v, q))
    return c.to_vector(f, p + q)


def cup(c: QDolbeaultComplex, u: Sequence, p: int, v: Sequence, q: int) -> tuple:
    """Representative of [u] cup [v] in del cohomology."""
    return wedge_vectors(c, u, p, v, q)


@dataclass(frozen=True)
class MasseyResult:
    degrees: tuple  # (p, q, r)
    classes: tuple  # (alpha, beta, gamma) coordinate vectors
    lam: Optional[tuple]
    mu: Optional[tuple]
    product_rep: Optional[tuple]
    indeterminacy: dict  # denominator -> Subspace of A^{p+q+r-1} (coboundaries included)
    verdicts: dict  # denominator -> "trivial" | "nontrivial" | "undefined"
    denominator: str = "full"
    witness: str = ""

    @property
    def verdict(self) -> str:
        return self.verdicts[self.denominator]

    @property
    def target_degree(self) -> int:
        p, q, r = self.degrees
        return p + q + r - 1


def _check_closed(c: QDolbeaultComplex, vec: Sequence, p: int, name: str) -> None:
    d = _del(c, p)
    if len(vec) != c.dim(p):
        raise CohomologyError(f"class {name} has {len(vec)} coordinates, expected {c.dim(p)} in degree {p}")
    if d is not None and any(d.apply(vec)):
        raise CohomologyError(f"class {name} is not del-closed")


def _cup_span(c: QDolbeaultComplex, left: Sequence, p: int, right: Sequence, q: int, target: int) -> list:
    return [wedge_vectors(c, u, p, v, q) for u in left for v in right] if p + q == target else []


def massey_triple(
    c: QDolbeaultComplex,
    a: tuple,
    b: tuple,
    cc: tuple,
    denominator: str = "full",
    perturb: Optional[tuple] = None,
) -> MasseyResult:
    """Triple del-Massey product of classes given as ``(degree, vector)`` pairs.

    ``perturb`` optionally adds fixed del-closed forms to (lambda, mu); the
    verdict must not change.
    """
    if denominator not in ("full", "pointed"):
        raise CohomologyError(f"unknown denominator {denominator!r}")
    (p, alpha), (q, beta), (r, gamma) = a, b, cc
    alpha, beta, gamma = tuple(alpha), tuple(beta), tuple(gamma)
    for name, (deg, vec) in zip("abc", ((p, alpha), (q, beta), (r, gamma))):
        _check_closed(c, vec, deg, name)
    N = p + q + r - 1
    degrees = (p, q, r)
    classes = (alpha, beta, gamma)
    if N > c.m:
        return MasseyResult(degrees, classes, None, None, None, {}, {"full": "trivial", "pointed": "trivial"},
                            denominator, "target degree exceeds top degree")
    ab = wedge_vectors(c, alpha, p, beta, q) if p + q <= c.m else ()
    bc = wedge_vectors(c, beta, q, gamma, r) if q + r <= c.m else ()
    lam = _primitive(c, ab, p + q)
    mu = _primitive(c, bc, q + r)
    if lam is None or mu is None:
        which = "a cup b" if lam is None else "b cup c"
        return MasseyResult(degrees, classes, lam, mu, None, {}, {"full": "undefined", "pointed": "undefined"},
                            denominator, f"{which} is a nonzero class")
    if perturb is not None:
        dl, dm = perturb
        lam = tuple(x + y for x, y in zip(lam, dl))
        mu = tuple(x + y for x, y in zip(mu, dm))
    first = wedge_vectors(c, lam, p + q - 1, gamma, r)
    second = wedge_vectors(c, alpha, p, mu, q + r - 1)
    sign = -1 if p % 2 else 1
    rep = tuple(x - sign * y for x, y in zip(first, second))
    d = _del(c, N)
    if d is not None and any(d.apply(rep)):
        raise CohomologyError("Massey representative is not del-closed")
    exact = compute("del", c, N).coboundaries
    h_pq1 = compute("del", c, p + q - 1).representatives
    h_qr1 = compute("del", c, q + r - 1).representatives
    h_p = compute("del", c, p).representatives
    h_r = compute("del", c, r).representatives
    dim = c.dim(N)
    full = Subspace(dim, list(exact.vectors)
                     + _cup_span(c, h_pq1, p + q - 1, h_r, r, N)
                     + _cup_span(c, h_p, p, h_qr1, q + r - 1, N))
    pointed = Subspace(dim, list(exact.vectors)
                       + _cup_span(c, [alpha], p, h_qr1, q + r - 1, N)
                       + _cup_span(c, h_pq1, p + q - 1, [gamma], r, N))
    indet = {"full": full, "pointed": pointed}
    verdicts = {k: "trivial" if s.contains(rep) else "nontrivial" for k, s in indet.items()}
    return MasseyResult(degrees, classes, lam, mu, rep, indet, verdicts, denominator)


def _primitive(c: QDolbeaultComplex, target: Sequence, deg: int) -> Optional[tuple]:
    """Deterministic lambda with del lambda = target in A^deg (zero for a zero target)."""
    if not any(target):
        return (ZERO,) * c.dim(deg - 1) if deg >= 1 else ()
    if deg == 0:
        return None
    return solve(c.del_matrix(deg - 1), target)


@dataclass
class MasseyScan:
    results: list = field(default_factory=list)
    slnh: TriState = TriState.UNKNOWN
    certificate: Optional[str] = None
    truncated: bool = False

    @property
    def nontrivial(self) -> list:
        return [r for r in self.results if r.verdict == "nontrivial"]


def _basis_classes(c: QDolbeaultComplex, span: bool = False) -> list:
    out = []
    for p in range(1, c.m + 1):
        reps = compute("del", c, p).representatives
        out.extend((p, v) for v in reps)
        if span:
            out.extend((p, tuple(x + y for x, y in zip(u, v))) for i, u in enumerate(reps) for v in reps[i + 1:])
    return out


def massey_scan(
    c: QDolbeaultComplex,
    denominator: str = "full",
    threads: int = 1,
    span: bool = False,
    budget: Optional[int] = None,
) -> MasseyScan:
    """All defined triple products of basis classes of positive degree.

    ``span`` also scans sums of two basis classes of equal degree; ``budget``
    caps the number of triples examined (the scan is then marked truncated).
    """
    classes = _basis_classes(c, span)
    triples = [t for t in product(classes, repeat=3) if t[0][0] + t[1][0] + t[2][0] - 1 <= c.m]
    truncated = budget is not None and len(triples) > budget
    if truncated:
        triples = triples[:budget]

    def run(t):
        return massey_triple(c, t[0], t[1], t[2], denominator)

    if threads > 1 and len(triples) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, triples))
    else:
        results = [run(t) for t in triples]
    defined = [r for r in results if r.verdict != "undefined"]
    slnh = check_invariant_slnh(c)
    scan = MasseyScan(defined, slnh, truncated=truncated)
    if scan.nontrivial and slnh is TriState.HOLDS:
        scan.certificate = (
            f"no invariant HKT SL({c.n},H)-structure: nontrivial triple del-Massey product "
            f"with holomorphically trivial invariant canonical bundle"
        )
    return scan
