"""Analysis pipeline behind the command line: validate, build, analyse, render.

A :class:`Report` holds an ordered ``dict`` of plain values (strings, ints,
lists, dicts) so that the text and machine renderings carry identical facts.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import exterior as ext
from .cohomology import THEORIES, CohomologyError, check_ddj_lemma, compute, massey_scan, massey_triple
from .document import InputDocument, bigraded_basis, lie_algebra
from .lefschetz import (
    adjoint_discrepancy,
    LefschetzError,
    check_dd_lambda_lemma,
    check_hlc_cohomology,
    check_hlc_on_lefschetz_harmonic,
    from_complex,
    harmonic_space,
    lefschetz_equivalences,
    verify_dgk,
    verify_laplacian_identities,
)
from .lie import (
    HypercomplexData,
    StructureError,
    check_abelian,
    nijenhuis_violation,
    validate_hypercomplex,
    validate_lie,
)
from .quaternionic import (
    QDolbeaultComplex,
    TriState,
    build_from_lie,
    build_from_presentation,
    check_balanced,
    check_hkt,
    check_invariant_slnh,
    check_qreal_qpositive,
    lee_forms,
)

__all__ = ["Report", "Analysis", "analyse", "run", "render", "EXIT_OK", "EXIT_STRUCTURE", "EXIT_PARSE", "EXIT_DATA"]

EXIT_OK = 0
EXIT_STRUCTURE = 1
EXIT_PARSE = 2
EXIT_DATA = 3

HARMONIC_TAGS = ("d", "del_j", "d_lambda", "bc", "aeppli", "lefschetz")
CHECKS = ("hkt", "balanced", "abelian", "slnh", "hlc", "ddj-lemma", "ddlambda-lemma", "identities")


@dataclass
class Report:
    data: dict = field(default_factory=dict)
    status: int = EXIT_OK

    def fail(self, code: int) -> None:
        self.status = max(self.status, code) if self.status != EXIT_PARSE else self.status


def thread_count() -> int:
    raw = os.environ.get("HKTLAB_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        return 1
    return value if value > 0 else 1


def _form(c: QDolbeaultComplex, vec, p: int) -> str:
    return ext.format_form(c.to_form(vec, p))


# ---------------------------------------------------------------------------
# structure


@dataclass
class Analysis:
    """Validated objects for one document; ``failures`` non-empty means structural failure."""

    doc: InputDocument
    structure: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    complex: Optional[QDolbeaultComplex] = None
    equations: dict = field(default_factory=dict)
    _lefschetz: object = None
    _lef_error: str = ""

    @property
    def ok(self) -> bool:
        return not self.failures and self.complex is not None

    def lefschetz(self):
        if self._lefschetz is None and not self._lef_error:
            c = self.complex
            if c is None or c.omega is None:
                self._lef_error = "no omega"
            else:
                try:
                    self._lefschetz = from_complex(c)
                except LefschetzError as exc:
                    self._lef_error = str(exc)
        return self._lefschetz


def analyse(doc: InputDocument) -> Analysis:
    a = Analysis(doc)
    st = a.structure
    for key in ("jacobi", "unimodular", "nilpotent", "solvable", "integrable", "hypercomplex", "abelian"):
        st[key] = str(TriState.UNKNOWN)
    if doc.mode == "lie_algebra":
        _analyse_lie(a)
    else:
        _analyse_presentation(a)
    c = a.complex
    if c is not None:
        abelian = not any(any(f) for f in c.del_gen)
        if st["abelian"] == str(TriState.UNKNOWN):
            st["abelian"] = str(TriState.of(abelian))
        elif st["abelian"] != str(TriState.of(abelian)):
            a.failures.append("abelian check disagrees with del on invariant (1,0)-forms")
        _omega_checks(a)
    return a


def _analyse_lie(a: Analysis) -> None:
    doc, st = a.doc, a.structure
    lie = lie_algebra(doc)
    rep = validate_lie(lie)
    st["jacobi"] = str(TriState.of(rep.checks.get("jacobi", rep.ok)))
    if not rep.ok:
        a.failures.extend(rep.failures)
        return
    st["unimodular"] = str(TriState.of(rep.info["unimodular"]))
    st["nilpotent"] = str(TriState.of(rep.info["nilpotent"]))
    st["solvable"] = str(TriState.of(rep.info["solvable"]))
    try:
        basis = bigraded_basis(doc, lie)
    except StructureError as exc:
        st["integrable"] = str(TriState.FAILS)
        a.failures.append(str(exc))
        return
    bad = nijenhuis_violation(lie, basis.I)
    if bad is not None:
        st["integrable"] = str(TriState.FAILS)
        a.failures.append(f"integrable_I: N_I(e{bad[0]},e{bad[1]}) != 0")
        return
    st["integrable"] = str(TriState.HOLDS)
    hyper = None
    if doc.J is not None:
        hyper = HypercomplexData(basis.I, doc.J, doc.K)
        hrep = validate_hypercomplex(lie, hyper)
        st["hypercomplex"] = str(TriState.of(hrep.ok))
        if not hrep.ok:
            if any(f.startswith("integrable") for f in hrep.failures):
                st["integrable"] = str(TriState.FAILS)
            a.failures.extend(hrep.failures)
            return
    st["abelian"] = str(TriState.of(check_abelian(lie, basis.I)))
    try:
        c = build_from_lie(lie, basis, hypercomplex=hyper, omega=doc.omega)
    except StructureError as exc:
        a.failures.append(str(exc))
        return
    a.complex = c
    m = basis.m
    dgen = [ext.form_add(x, y) for x, y in zip(c.del_gen, c.delbar_gen)]
    a.equations = {f"dphi{k + 1}": ext.format_form(dgen[k], m) for k in range(m)}


def _analyse_presentation(a: Analysis) -> None:
    doc = a.doc
    try:
        c = build_from_presentation(
            doc.n, list(doc.partial),
            list(doc.partial_bar) if doc.partial_bar is not None else None,
            doc.jop, doc.omega,
        )
    except StructureError as exc:
        a.failures.append(str(exc))
        return
    a.complex = c
    m = c.m
    a.equations = {f"del phi{k + 1}": ext.format_form(c.del_gen[k], m) for k in range(m)}


def _omega_checks(a: Analysis) -> None:
    c, st = a.complex, a.structure
    if c.omega is not None and not ext.form_power(c.omega, c.n):
        a.failures.append("omega is degenerate (Omega^n = 0)")
        st["omega_nondegenerate"] = str(TriState.FAILS)
        for key in ("q_real", "q_positive", "hkt", "balanced"):
            st[key] = str(TriState.UNKNOWN)
        st["slnh"] = str(check_invariant_slnh(c))
        return
    if c.omega is not None:
        st["omega_nondegenerate"] = str(TriState.HOLDS)
    qr, qp = check_qreal_qpositive(c)
    st["q_real"] = str(qr)
    st["q_positive"] = str(qp)
    st["hkt"] = str(check_hkt(c))
    st["balanced"] = str(check_balanced(c)) if c.omega is not None else str(TriState.UNKNOWN)
    st["slnh"] = str(check_invariant_slnh(c))


# ---------------------------------------------------------------------------
# sections


def section_structure(a: Analysis) -> dict:
    out = {"verdicts": dict(a.structure)}
    if a.equations:
        out["equations"] = dict(a.equations)
    c = a.complex
    if c is not None and c.omega is not None:
        out["omega"] = ext.format_form(c.omega)
        lee = lee_forms(c) if c.delbar_gen is not None and a.structure.get("omega_nondegenerate") == "Holds" else None
        if lee is not None:
            out["theta_bar"] = [str(x) for x in lee.theta_bar]
            if lee.theta_j is not None:
                out["theta_J"] = [str(x) for x in lee.theta_j]
    if a.failures:
        out["failures"] = list(a.failures)
    return out


def available_theories(c: QDolbeaultComplex) -> tuple:
    return THEORIES if c.jmat is not None else ("del",)


def section_cohomology(a: Analysis, theories=None, degree: Optional[int] = None) -> dict:
    c = a.complex
    theories = theories or available_theories(c)
    degrees = [degree] if degree is not None else list(range(c.m + 1))
    out: dict = {}
    for t in theories:
        groups = [compute(t, c, p) for p in degrees]
        entry = {"dims": [g.dim for g in groups]}
        if t == "del":
            entry["representatives"] = {str(g.degree): [_form(c, v, g.degree) for v in g.representatives] for g in groups}
        out[t] = entry
    if degree is not None:
        out["degree"] = degree
    return out


def section_lemmas(a: Analysis) -> dict:
    out = {"ddj_lemma": str(check_ddj_lemma(a.complex))}
    s = a.lefschetz()
    out["dd_lambda_lemma"] = str(check_dd_lambda_lemma(s)) if s is not None else str(TriState.UNKNOWN)
    return out


def _identity_entry(rep) -> dict:
    out = {}
    for name, bad in rep.results.items():
        out[name] = "pass" if not bad else "fail at degrees " + ",".join(str(p) for p in bad)
    for name, reason in rep.skipped.items():
        out[name] = f"skipped: {reason}"
    return out


def section_lefschetz(a: Analysis) -> dict:
    s = a.lefschetz()
    if s is None:
        return {"available": False, "reason": a._lef_error}
    c = a.complex
    out: dict = {"available": True, "adjoints": s.default_mode}
    diff = adjoint_discrepancy(s)
    if diff is not None:
        out["star_vs_gram_adjoint"] = {k: "equal" if not v else f"differ in degrees {v}" for k, v in diff.items()}
    out["dgk"] = _identity_entry(verify_dgk(s))
    out["laplacian_identities"] = _identity_entry(verify_laplacian_identities(s, check_balanced(c)))
    hlc = {}
    for t in ("del",) + (("del_j", "bc", "aeppli") if s.dj is not None else ()) + ("d_lambda",):
        rep = check_hlc_cohomology(s, t)
        hlc[t] = "Holds" if rep.holds else (
            "not induced" if not rep.induced else f"Fails at p={rep.first_failure}")
    out["hlc_cohomology"] = hlc
    if s.jop is not None:
        lh, ll = check_hlc_on_lefschetz_harmonic(s)
        out["hlc_lefschetz_harmonic"] = {"L": str(TriState.of(lh.holds)), "Lambda": str(TriState.of(ll.holds))}
        out["harmonic_dims"] = {t: [harmonic_space(s, t, p).dim for p in range(len(s.dims))] for t in HARMONIC_TAGS
                                if t not in ("del_j", "bc", "aeppli") or s.dj is not None}
    eq = lefschetz_equivalences(s) if bracket_free(s) else None
    if eq is not None:
        out["equivalences"] = {k: str(TriState.of(v)) for k, v in eq.items()}
    return out


def bracket_free(s) -> bool:
    from .lefschetz import bracket

    return bracket(s.d, s.L).is_zero()


def _massey_entry(c: QDolbeaultComplex, r) -> dict:
    p, q, rr = r.degrees
    out = {
        "degrees": [p, q, rr],
        "classes": [_form(c, v, d) for v, d in zip(r.classes, r.degrees)],
        "verdicts": dict(r.verdicts),
    }
    if r.lam is not None:
        out["lambda"] = _form(c, r.lam, p + q - 1)
        out["mu"] = _form(c, r.mu, q + rr - 1)
    if r.product_rep is not None:
        out["representative"] = _form(c, r.product_rep, r.target_degree)
    if r.witness:
        out["witness"] = r.witness
    return out


def section_massey(a: Analysis, denominator: str = "full", threads: int = 1, span: bool = False,
                   budget: Optional[int] = None) -> dict:
    c = a.complex
    scan = massey_scan(c, denominator, threads, span, budget)
    out = {
        "denominator": denominator,
        "scope": "basis and pairwise sums" if span else "basis classes",
        "defined_triples": len(scan.results),
        "nontrivial": [_massey_entry(c, r) for r in scan.nontrivial],
        "slnh": str(scan.slnh),
        "certificate": scan.certificate,
    }
    if scan.truncated:
        out["truncated_at"] = budget
    return out


def section_massey_triple(a: Analysis, triple, denominator: str = "full") -> dict:
    """``triple`` holds three ``(degree, form)`` pairs of (p,0)-forms."""
    c = a.complex
    vecs = []
    for deg, form in triple:
        if deg > c.m or any(i >= c.m for mono in form for i in mono):
            raise CohomologyError(f"class {ext.format_form(form)} does not live on {c.m} generators")
        vecs.append((deg, c.to_vector(form, deg)))
    r = massey_triple(c, *vecs, denominator=denominator)
    entry = _massey_entry(c, r)
    entry["verdict"] = r.verdict
    return {"denominator": denominator, "triple": entry}


def section_harmonic(a: Analysis, tag: str, degree: Optional[int] = None) -> dict:
    s = a.lefschetz()
    if s is None:
        raise LefschetzError(f"harmonic spaces need a non-degenerate omega ({a._lef_error})")
    degrees = [degree] if degree is not None else list(range(len(s.dims)))
    c = a.complex
    out = {"laplacian": tag, "adjoints": s.default_mode, "dims": [], "bases": {}}
    for p in degrees:
        h = harmonic_space(s, tag, p)
        out["dims"].append(h.dim)
        out["bases"][str(p)] = [_form(c, v, p) for v in h.vectors]
    return out


def check_verdict(a: Analysis, name: str, theory: str = "del") -> str:
    c = a.complex
    st = a.structure
    if name in ("hkt", "balanced", "abelian", "slnh"):
        return st[name]
    if name == "ddj-lemma":
        return str(check_ddj_lemma(c))
    s = a.lefschetz()
    if s is None:
        return str(TriState.UNKNOWN)
    if name == "ddlambda-lemma":
        return str(check_dd_lambda_lemma(s))
    if name == "hlc":
        return str(TriState.of(check_hlc_cohomology(s, theory).holds))
    if name == "identities":
        reps = [verify_dgk(s), verify_laplacian_identities(s, check_balanced(c))]
        return str(TriState.of(all(r.ok for r in reps)))
    raise ValueError(f"unknown check {name!r}")


# ---------------------------------------------------------------------------
# driver


def run(doc: InputDocument, command: str = "report", options: Optional[dict] = None) -> Report:
    """Execute ``command`` on a parsed document; options mirror the CLI flags."""
    opts = dict(options or {})
    report = Report()
    timing = opts.get("timing", False)
    threads = opts.get("threads") or thread_count()
    t0 = time.perf_counter()
    a = analyse(doc)
    data = report.data
    data["input"] = {"name": doc.name, "mode": doc.mode}
    data["structure"] = section_structure(a)
    times = {"structure": time.perf_counter() - t0}
    if not a.ok:
        report.fail(EXIT_STRUCTURE)
        if timing:
            data["timing"] = _fmt_times(times)
        return report
    if command == "validate":
        pass
    elif command == "report":
        jobs: dict[str, Callable[[], dict]] = {
            "cohomology": lambda: section_cohomology(a),
            "lemmas": lambda: section_lemmas(a),
            "lefschetz": lambda: section_lefschetz(a),
            "massey": lambda: section_massey(a, opts.get("denominator", "full")),
        }
        a.lefschetz()  # build once before fanning out
        results = _run_jobs(jobs, threads, times)
        for key in jobs:
            data[key] = results[key]
    elif command == "cohomology":
        theory = opts.get("theory")
        try:
            data["cohomology"] = section_cohomology(a, [theory] if theory else None, opts.get("degree"))
        except CohomologyError as exc:
            data["error"] = str(exc)
            report.fail(EXIT_DATA)
    elif command == "harmonic":
        try:
            data["harmonic"] = section_harmonic(a, opts.get("laplacian", "d"), opts.get("degree"))
        except LefschetzError as exc:
            data["error"] = str(exc)
            report.fail(EXIT_DATA)
    elif command == "massey":
        denominator = opts.get("denominator", "full")
        if opts.get("triple"):
            try:
                data["massey"] = section_massey_triple(a, opts["triple"], denominator)
            except CohomologyError as exc:
                data["error"] = str(exc)
                report.fail(EXIT_DATA)
        else:
            data["massey"] = section_massey(a, denominator, threads, opts.get("span", False), opts.get("budget"))
    elif command == "check":
        name = opts["check"]
        verdict = check_verdict(a, name, opts.get("theory") or "del")
        data["check"] = {"name": name, "verdict": verdict}
        if verdict == str(TriState.UNKNOWN):
            report.fail(EXIT_DATA)
    else:
        raise ValueError(f"unknown command {command!r}")
    if timing:
        times["total"] = time.perf_counter() - t0
        data["timing"] = _fmt_times(times)
    return report


def _run_jobs(jobs: dict, threads: int, times: dict) -> dict:
    def timed(key):
        t = time.perf_counter()
        value = jobs[key]()
        return key, value, time.perf_counter() - t

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            done = list(pool.map(timed, list(jobs)))
    else:
        done = [timed(k) for k in jobs]
    out = {}
    for key, value, dt in done:
        out[key] = value
        times[key] = dt
    return out


def _fmt_times(times: dict) -> dict:
    return {k: f"{v:.3f}s" for k, v in times.items()}


# ---------------------------------------------------------------------------
# rendering


def render(report: Report, fmt: str = "text") -> str:
    if fmt == "machine":
        return json.dumps(report.data, indent=2, ensure_ascii=False) + "\n"
    lines: list[str] = []
    _render_text(report.data, 0, lines)
    return "\n".join(lines) + "\n"


def _render_text(value, indent: int, lines: list) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _is_flat_list(v):
                lines.append(f"{pad}{k}:")
                _render_text(v, indent + 1, lines)
            else:
                lines.append(f"{pad}{k}: {_scalar_text(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and not _is_flat_list(item):
                lines.append(f"{pad}-")
                _render_text(item, indent + 1, lines)
            else:
                lines.append(f"{pad}- {_scalar_text(item)}")


def _is_flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar_text(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar_text(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    if v is None:
        return "none"
    return str(v)
