"""Input documents: parsing with located errors, canonical emission, and assembly.

A document is JSON.  Scalars are always strings in the exact grammar
(``"1/2"``, ``"-i"``, ``"1+3i"``); indices are 1-based.

``lie_algebra`` mode::

    {"mode": "lie_algebra", "dim": 8,
     "brackets": [[i, j, k, "c"], ...],      # [e_i, e_j] gets c e_k
     "I": [[...], ...], "J": [[...], ...],   # dense rows; column j is the image of e_j
     "K": optional, "coframe": optional list of 2n covectors,
     "omega": optional [[a, b, "c"], ...]}   # c phi^{ab}

``presentation`` mode::

    {"mode": "presentation", "n": 2,
     "partial": {"2": [[1, 2, "2"], [3, 4, "2"]], ...},   # del phi^a
     "partial_bar": optional {"a": [[b, c, "x"], ...]},   # x phi^b ^ conj(phi^c)
     "J": optional {"a": [[b, "x"], ...]},                # Jc phi^a = sum x phi^b
     "omega": optional}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional

from .lie import (
    BigradedBasis,
    HypercomplexData,
    LieAlgebraData,
    coframe_from_covectors,
    extract_coframe,
)
from .linalg import Matrix
from .quaternionic import QDolbeaultComplex, build_from_lie, build_from_presentation
from .scalars import GaussianRational, ScalarParseError, parse_scalar

__all__ = ["DocumentError", "InputDocument", "parse_text", "parse_path", "emit_document", "build_complex"]


class DocumentError(ValueError):
    """Parse-level error with an optional 1-based line/column location."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None) -> None:
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class InputDocument:
    mode: str
    name: str = ""
    description: str = ""
    dim: int = 0
    brackets: tuple = ()  # 0-based (i, j, k, scalar)
    I: Optional[Matrix] = None
    J: Optional[Matrix] = None
    K: Optional[Matrix] = None
    coframe: Optional[tuple] = None
    n: int = 0
    partial: tuple = ()  # per coframe index: dict of 0-based (a, b) -> scalar
    partial_bar: Optional[tuple] = None  # per index: dict of (a, m + b) -> scalar
    jop: Optional[Matrix] = None
    omega: Optional[dict] = None  # 0-based (a, b) -> scalar


def _locate(raw: str, needle: str) -> tuple[Optional[int], Optional[int]]:
    pos = raw.find(needle)
    if pos < 0:
        return None, None
    line = raw.count("\n", 0, pos) + 1
    col = pos - (raw.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Reader:
    def __init__(self, raw: str) -> None:
        self.raw = raw

    def scalar(self, value: Any, where: str) -> GaussianRational:
        if not isinstance(value, str):
            text = json.dumps(value)
            line, col = _locate(self.raw, text)
            raise DocumentError(f"{where}: scalars must be strings in the exact grammar, got {text}", line, col)
        try:
            return parse_scalar(value)
        except ScalarParseError as exc:
            line, col = _locate(self.raw, json.dumps(value))
            raise DocumentError(f"{where}: malformed scalar {value!r} ({exc})", line, col) from exc

    def index(self, value: Any, upper: int, where: str) -> int:
        if isinstance(value, bool) or not isinstance(value, int) or not 1 <= value <= upper:
            raise DocumentError(f"{where}: index {value!r} outside 1..{upper}")
        return value - 1

    def matrix(self, value: Any, size: int, where: str) -> Matrix:
        if not isinstance(value, list) or len(value) != size or any(not isinstance(r, list) or len(r) != size for r in value):
            raise DocumentError(f"{where}: expected a {size}x{size} matrix of scalar strings")
        return Matrix.from_rows([[self.scalar(x, where) for x in row] for row in value], size)

    def omega(self, value: Any, m: int) -> dict:
        if not isinstance(value, list):
            raise DocumentError("omega: expected a list of [a, b, coefficient]")
        out: dict = {}
        for term in value:
            if not isinstance(term, list) or len(term) != 3:
                raise DocumentError("omega: each term is [a, b, coefficient]")
            a = self.index(term[0], m, "omega")
            b = self.index(term[1], m, "omega")
            c = self.scalar(term[2], "omega")
            if a == b:
                raise DocumentError(f"omega: repeated index {a + 1}")
            if a > b:
                a, b, c = b, a, -c
            out[(a, b)] = out.get((a, b), GaussianRational(0)) + c
        return {k: v for k, v in out.items() if v}


def _require(doc: dict, key: str, kind: type) -> Any:
    if key not in doc:
        raise DocumentError(f"missing field {key!r}")
    value = doc[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise DocumentError(f"field {key!r} must be an integer")
    if kind is not int and not isinstance(value, kind):
        raise DocumentError(f"field {key!r} has the wrong type")
    return value


def parse_text(raw: str) -> InputDocument:
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict):
        raise DocumentError("the document must be a JSON object")
    rd = _Reader(raw)
    mode = doc.get("mode")
    name = str(doc.get("name", ""))
    description = str(doc.get("description", ""))
    if mode == "lie_algebra":
        return _parse_lie(doc, rd, name, description)
    if mode == "presentation":
        return _parse_presentation(doc, rd, name, description)
    raise DocumentError(f"unknown mode {mode!r}; expected 'lie_algebra' or 'presentation'")


def parse_path(path: str) -> InputDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_text(raw)


def _parse_lie(doc: dict, rd: _Reader, name: str, description: str) -> InputDocument:
    dim = _require(doc, "dim", int)
    if dim <= 0 or dim % 4:
        raise DocumentError(f"dim must be a positive multiple of 4, got {dim}")
    brackets = []
    seen: dict = {}
    for entry in _require(doc, "brackets", list):
        if not isinstance(entry, list) or len(entry) != 4:
            raise DocumentError("brackets: each entry is [i, j, k, coefficient]")
        i = rd.index(entry[0], dim, "brackets")
        j = rd.index(entry[1], dim, "brackets")
        k = rd.index(entry[2], dim, "brackets")
        c = rd.scalar(entry[3], "brackets")
        if not c.is_real():
            raise DocumentError(f"brackets: structure constant {entry[3]!r} is not real")
        if i == j:
            if c:
                raise DocumentError(f"brackets: [e{i + 1}, e{i + 1}] must vanish")
            continue
        if i > j:
            i, j, c = j, i, -c
        key = (i, j, k)
        if key in seen and seen[key] != c:
            raise DocumentError(f"brackets: conflicting entries for [e{i + 1}, e{j + 1}] along e{k + 1}")
        seen[key] = c
    brackets = tuple((i, j, k, c) for (i, j, k), c in sorted(seen.items()) if c)
    mats = {}
    for key in ("I", "J", "K"):
        if doc.get(key) is not None:
            mats[key] = rd.matrix(doc[key], dim, key)
    coframe = None
    if doc.get("coframe") is not None:
        cf = doc["coframe"]
        if not isinstance(cf, list) or len(cf) != dim // 2 or any(not isinstance(v, list) or len(v) != dim for v in cf):
            raise DocumentError(f"coframe: expected {dim // 2} covectors of length {dim}")
        coframe = tuple(tuple(rd.scalar(x, "coframe") for x in v) for v in cf)
    if "I" not in mats and coframe is None:
        raise DocumentError("a lie_algebra document needs I or an explicit coframe")
    if "J" not in mats and "K" in mats:
        raise DocumentError("K given without J")
    omega = rd.omega(doc["omega"], dim // 2) if doc.get("omega") is not None else None
    return InputDocument(
        "lie_algebra", name, description, dim=dim, brackets=brackets,
        I=mats.get("I"), J=mats.get("J"), K=mats.get("K"), coframe=coframe, n=dim // 4, omega=omega,
    )


def _parse_presentation(doc: dict, rd: _Reader, name: str, description: str) -> InputDocument:
    n = _require(doc, "n", int)
    if n <= 0:
        raise DocumentError("n must be positive")
    m = 2 * n

    def keyed(section: str) -> dict:
        value = doc[section]
        if not isinstance(value, dict):
            raise DocumentError(f"{section}: expected an object keyed by coframe index")
        out = {}
        for k, terms in value.items():
            try:
                idx = int(k)
            except ValueError:
                raise DocumentError(f"{section}: key {k!r} is not an index") from None
            idx = rd.index(idx, m, section)
            if not isinstance(terms, list):
                raise DocumentError(f"{section}: terms for {k} must be a list")
            out[idx] = terms
        return out

    partial = [dict() for _ in range(m)]
    for a, terms in keyed("partial").items() if "partial" in doc else ():
        form: dict = {}
        for t in terms:
            if not isinstance(t, list) or len(t) != 3:
                raise DocumentError("partial: each term is [b, c, coefficient]")
            b = rd.index(t[0], m, "partial")
            cc = rd.index(t[1], m, "partial")
            x = rd.scalar(t[2], "partial")
            if b == cc:
                raise DocumentError(f"partial: repeated index {b + 1}")
            if b > cc:
                b, cc, x = cc, b, -x
            form[(b, cc)] = form.get((b, cc), GaussianRational(0)) + x
        partial[a] = {k: v for k, v in form.items() if v}
    partial_bar = None
    if doc.get("partial_bar") is not None:
        partial_bar = [dict() for _ in range(m)]
        for a, terms in keyed("partial_bar").items():
            form = {}
            for t in terms:
                if not isinstance(t, list) or len(t) != 3:
                    raise DocumentError("partial_bar: each term is [b, c, coefficient]")
                b = rd.index(t[0], m, "partial_bar")
                cc = rd.index(t[1], m, "partial_bar") + m
                x = rd.scalar(t[2], "partial_bar")
                form[(b, cc)] = form.get((b, cc), GaussianRational(0)) + x
            partial_bar[a] = {k: v for k, v in form.items() if v}
        partial_bar = tuple(partial_bar)
    jop = None
    if doc.get("J") is not None:
        cols = [[GaussianRational(0)] * m for _ in range(m)]
        given = keyed("J")
        if len(given) != m:
            raise DocumentError(f"J: the action on all {m} coframe elements is required")
        for a, terms in given.items():
            for t in terms:
                if not isinstance(t, list) or len(t) != 2:
                    raise DocumentError("J: each term is [b, coefficient]")
                b = rd.index(t[0], m, "J")
                cols[a][b] = cols[a][b] + rd.scalar(t[1], "J")
        jop = Matrix.from_columns(cols, m)
    omega = rd.omega(doc["omega"], m) if doc.get("omega") is not None else None
    return InputDocument(
        "presentation", name, description, n=n, partial=tuple(partial), partial_bar=partial_bar, jop=jop, omega=omega,
    )


# ---------------------------------------------------------------------------
# emission


def _s(x: GaussianRational) -> str:
    return str(x)


def _omega_terms(omega: Optional[dict]) -> Optional[list]:
    if omega is None:
        return None
    return [[a + 1, b + 1, _s(c)] for (a, b), c in sorted(omega.items())]


def document_dict(doc: InputDocument) -> dict:
    out: dict = {"mode": doc.mode}
    if doc.name:
        out["name"] = doc.name
    if doc.description:
        out["description"] = doc.description
    if doc.mode == "lie_algebra":
        out["dim"] = doc.dim
        out["brackets"] = [[i + 1, j + 1, k + 1, _s(c)] for i, j, k, c in doc.brackets]
        for key in ("I", "J", "K"):
            mat = getattr(doc, key)
            if mat is not None:
                out[key] = [[_s(x) for x in row] for row in mat.row_list()]
        if doc.coframe is not None:
            out["coframe"] = [[_s(x) for x in v] for v in doc.coframe]
    else:
        m = 2 * doc.n
        out["n"] = doc.n
        out["partial"] = {
            str(a + 1): [[b + 1, c + 1, _s(x)] for (b, c), x in sorted(f.items())]
            for a, f in enumerate(doc.partial) if f
        }
        if doc.partial_bar is not None:
            out["partial_bar"] = {
                str(a + 1): [[b + 1, c - m + 1, _s(x)] for (b, c), x in sorted(f.items())]
                for a, f in enumerate(doc.partial_bar) if f
            }
        if doc.jop is not None:
            out["J"] = {
                str(a + 1): [[b + 1, _s(x)] for b, x in enumerate(doc.jop.column(a)) if x]
                for a in range(m)
            }
    if doc.omega is not None:
        out["omega"] = _omega_terms(doc.omega)
    return out


def _compact(value: Any) -> str:
    return json.dumps(value, ensure_ascii=False, separators=(", ", ": "))


def _emit_value(value: Any, indent: str) -> str:
    inner = indent + "  "
    if isinstance(value, list) and value and all(isinstance(x, list) for x in value):
        return "[\n" + ",\n".join(inner + _compact(x) for x in value) + "\n" + indent + "]"
    if isinstance(value, dict) and value:
        items = [f"{inner}{_compact(k)}: {_emit_value(v, inner)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + indent + "}"
    return _compact(value)


def emit_document(doc: InputDocument) -> str:
    """Canonical JSON text: one row or term per line."""
    return _emit_value(document_dict(doc), "") + "\n"


# ---------------------------------------------------------------------------
# assembly


def lie_algebra(doc: InputDocument) -> LieAlgebraData:
    return LieAlgebraData.from_brackets(doc.dim, [(i, j, k, c) for i, j, k, c in doc.brackets])


def bigraded_basis(doc: InputDocument, lie: LieAlgebraData) -> BigradedBasis:
    if doc.coframe is not None:
        return coframe_from_covectors(doc.coframe, doc.I)
    return extract_coframe(lie, doc.I)


def build_complex(doc: InputDocument, lie: Optional[LieAlgebraData] = None, basis: Optional[BigradedBasis] = None,
                  hyper: Optional[HypercomplexData] = None) -> QDolbeaultComplex:
    """Complex of the document (structure errors propagate as StructureError)."""
    if doc.mode == "presentation":
        return build_from_presentation(
            doc.n, list(doc.partial),
            list(doc.partial_bar) if doc.partial_bar is not None else None,
            doc.jop, doc.omega,
        )
    lie = lie or lie_algebra(doc)
    basis = basis or bigraded_basis(doc, lie)
    if hyper is None and doc.J is not None:
        hyper = HypercomplexData(basis.I, doc.J, doc.K)
    return build_from_lie(lie, basis, hypercomplex=hyper, omega=doc.omega)
