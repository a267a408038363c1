"""Command line front-end: ``kforms analyze``, ``kforms catalog list``, ``kforms hecke``, ``kforms export``.

Exit codes: 0 every check passed (or --report-only), 1 a check failed,
2 usage or parse error, 3 the memory budget was exceeded.
"""
from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass, field as dc_field

from . import catalog, io
from .algebra import Presentation, check_budget, default_cutoff, dims, get_budget_mb, set_budget_mb
from .errors import (
    BadParameters,
    BadRoot,
    DegreeOverflow,
    KFormsError,
    NoSolution,
    NotFound,
    NotPreregular,
    NotQuadratic,
    ParseError,
    ShapeError,
    ShapeMismatch,
    SingularMatrix,
)
from .hecke import (
    build_R,
    hecke_parameter,
    hecke_roots,
    relation_space_from_R,
    standard_K,
    standard_hecke,
    verify_eqYB,
    verify_hecke,
    verify_yang_baxter,
)
from .hochschild import volume_cycle_check
from .koszul import koszulity_check, pskn_check
from .regularity import (
    FIELD_CAVEAT,
    aprime_algebra,
    algebra_from_form,
    check_koszul_gorenstein,
    dim2_analyze,
    frobenius_quotient_F,
    gorenstein_from_presentation,
    orbit_consistency,
    three_regular_equivalence,
)
from .scalar import FieldSpec
from .tensor import (
    MultilinearForm,
    field_of_matrix,
    infinitesimal_twist,
    is_3_regular,
    is_invertible,
    is_preregular,
    matrix,
    satisfies_iii_prime,
)

CHECKS = ["3regular", "dim2", "frobenius", "gorenstein", "infinitesimal", "koszul", "orbit", "preregular", "volume-cycle"]
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(KFormsError):
    pass


@dataclass
class JobSpec:
    input: str | None = None
    catalog: str | None = None
    field: str | None = None
    checks: list = dc_field(default_factory=lambda: ["preregular"])
    N: int | None = None
    D: int | None = None
    max_degree: int | None = None
    emit: str = "text"
    budget_mb: float | None = None
    report_only: bool = False
    orbit_matrix: str | None = None


@dataclass
class Subject:
    label: str
    field: FieldSpec
    obj: MultilinearForm | Presentation
    N: int | None
    D: int | None


def _mat(M, F: FieldSpec) -> dict:
    doc = io.matrix_to_json(M, F)
    return {k: doc[k] for k in ("nrows", "ncols", "triplets")}


def _resolve(job: JobSpec) -> Subject:
    if (job.input is None) == (job.catalog is None):
        raise UsageError("give exactly one of --input and --catalog")
    F = FieldSpec.parse(job.field) if job.field else None
    N, D = job.N, job.D
    if job.catalog is not None:
        entry = catalog.build(job.catalog, field=F)
        exp = entry.expected
        if exp is not None:
            N = exp.N if N is None else N
            D = exp.D if D is None else D
        return Subject(entry.ref(), entry.field, entry.obj, N, D)
    obj = io.load(job.input, F)
    if not isinstance(obj, (MultilinearForm, Presentation)):
        raise ParseError("input must be a form or a presentation", position="$.kind")
    if isinstance(obj, Presentation) and N is None:
        N = obj.N
    return Subject(job.input, obj.field, obj, N, D)


def _require_form(s: Subject, check: str) -> MultilinearForm:
    if not isinstance(s.obj, MultilinearForm):
        raise UsageError(f"check {check} needs a multilinear form, not a presentation")
    return s.obj


def _require_N(s: Subject, check: str) -> int:
    if s.N is None:
        raise UsageError(f"check {check} needs the hypothesis N (use --hypothesis N=<n>)")
    return s.N


def _presentation(s: Subject, check: str) -> Presentation:
    if isinstance(s.obj, Presentation):
        return s.obj
    return algebra_from_form(s.obj, _require_N(s, check))


def _chain_terms(terms) -> list:
    if not terms:
        return []
    return [{"coefficient": c, "left": l, "tensor": v, "right": r} for c, l, v, r in terms]


# ---------------------------------------------------------------- checks


def check_preregular(s: Subject, t_max: int) -> dict:
    w = _require_form(s, "preregular")
    res = is_preregular(w)
    out = {"ok": res.ok, "verdict": "preregular" if res.ok else f"not preregular: condition ({res.failed_condition}) fails"}
    if res.ok:
        out["Q"] = _mat(res.Q, s.field)
        out["unique"] = res.unique
    else:
        out["failed_condition"] = res.failed_condition
        out["reason"] = res.reason
        if res.witness is not None:
            out["slot_witness"] = [s.field.literal(x) for x in res.witness]
    return out


def check_3regular(s: Subject, t_max: int) -> dict:
    w = _require_form(s, "3regular")
    N = s.N if s.N is not None else w.m - 1
    reg = is_3_regular(w, N)
    eq = three_regular_equivalence(w, N)
    out = {
        "ok": reg.ok and eq.agree,
        "verdict": "3-regular" if reg.ok else "not 3-regular",
        "solution_dim": reg.solution_dim,
        "iii_prime": satisfies_iii_prime(w, N),
        "dual_component_is_line": eq.cond_a,
        "agree": eq.agree,
        "note": FIELD_CAVEAT,
    }
    if reg.witness is not None:
        out["witness"] = {"L0": [[s.field.literal(x) for x in r] for r in reg.witness[0]],
                          "L1": [[s.field.literal(x) for x in r] for r in reg.witness[1]]}
    return out


def check_koszul(s: Subject, t_max: int) -> dict:
    P = _presentation(s, "koszul")
    rep = koszulity_check(P, t_max)
    ps = pskn_check(P, t_max)
    out = {
        "ok": rep.ok,
        "verdict": rep.verdict(),
        "cutoff": t_max,
        "series_identity": ps.ok,
        "series_product": ps.residual,
    }
    if not rep.ok:
        t, k = rep.first_failure
        out["first_failure"] = {"total_degree": t, "position": k}
        out["witness"] = _chain_terms(rep.witness_terms)
    return out


def check_gorenstein(s: Subject, t_max: int) -> dict:
    N = _require_N(s, "gorenstein")
    if s.D is None:
        raise UsageError("check gorenstein needs the hypothesis D (use --hypothesis N=<n>,D=<d>)")
    if isinstance(s.obj, Presentation):
        r = gorenstein_from_presentation(s.obj, s.D, t_max)
        out = {
            "ok": r.gorenstein,
            "verdict": ("Koszul and Gorenstein" if r.gorenstein else "not certified: " + r.reason),
            "koszul": r.koszul.ok,
            "resolution_ranks": r.resolution_dims,
            "resolution_length_ok": r.length_ok,
            "ranks_symmetric": r.symmetric,
        }
        v = r.verdict
    else:
        v = check_koszul_gorenstein(s.obj, N, s.D, t_max)
        out = {"ok": v.ok, "verdict": v.summary()}
    if v is not None:
        out.update(
            {
                "cutoff": v.cutoff,
                "w_equals_dual": {str(k): b for k, b in sorted(v.w_equals_dual.items())},
                "dual_vanishes_above": v.top_vanishes,
                "aprime_frobenius": v.aprime_frobenius,
                "aprime_reasons": v.aprime_reasons,
                "cwd_homology": {f"{t},{k}": h for (t, k), h in sorted(v.cwd.table.items()) if h},
            }
        )
        if v.cwd.first_failure is not None:
            t, k = v.cwd.first_failure
            out["first_failure"] = {"total_degree": t, "position": k}
            out["witness"] = _chain_terms(v.cwd.witness_terms)
    out["hypothesis"] = {"N": N, "D": s.D}
    return out


def check_frobenius(s: Subject, t_max: int) -> dict:
    w = _require_form(s, "frobenius")
    N = _require_N(s, "frobenius")
    fd = frobenius_quotient_F(w, N)
    out = {
        "ok": fd.nondegenerate and fd.twisted_cyclic and fd.sigma_preserves,
        "dual_dims": fd.dual_dims,
        "quotient_dims": fd.quotient_dims,
        "pairing_nondegenerate": fd.nondegenerate,
        "twisted_cyclic": fd.twisted_cyclic,
        "twist_preserves_dual": fd.sigma_preserves,
    }
    try:
        ap = aprime_algebra(w, N)
        out["aprime_dims"] = ap.dims
        out["aprime_frobenius"] = ap.frobenius
        out["aprime_quotient_dims"] = ap.quotient_dims
    except ShapeError as exc:
        out["aprime"] = str(exc)
    out["verdict"] = "Frobenius quotient" if out["ok"] else "Frobenius quotient check failed"
    return out


def check_dim2(s: Subject, t_max: int) -> dict:
    w = _require_form(s, "dim2")
    r = dim2_analyze(w, t_max)
    return {
        "ok": r.regular and r.series_match,
        "verdict": ("regular of global dimension 2" if r.regular else "degenerate: " + r.branch),
        "regular": r.regular,
        "series_match": r.series_match,
        "dims": r.dims,
        "classification": r.classification,
        "symmetric_rank": r.symmetric_rank,
        "charpoly": r.charpoly,
        "branch": r.branch,
        "koszul": r.koszul,
    }


def _orbit_matrix(s: Subject, path: str | None):
    if path:
        return io.load(path, s.field)
    rng = random.Random(0)
    g = s.obj.g
    while True:
        L = matrix(s.field, [[s.field(rng.randint(-3, 3)) for _ in range(g)] for _ in range(g)])
        if is_invertible(L):
            return L


def make_orbit_check(path: str | None):
    def check_orbit(s: Subject, t_max: int) -> dict:
        w = _require_form(s, "orbit")
        N = _require_N(s, "orbit")
        L = _orbit_matrix(s, path)
        r = orbit_consistency(w, L, t_max, N)
        return {
            "ok": r.ok,
            "verdict": "orbit consistent" if r.ok else "orbit mismatch",
            "L": _mat(L, s.field),
            "dims": r.dims,
            "transformed_dims": r.transformed_dims,
            "Q_conjugated": r.q_conjugated,
        }

    return check_orbit


def check_infinitesimal(s: Subject, t_max: int) -> dict:
    w = _require_form(s, "infinitesimal")
    try:
        r = infinitesimal_twist(w)
    except NoSolution as exc:
        return {"ok": False, "verdict": str(exc)}
    return {
        "ok": r.traceless,
        "verdict": "traceless first-order twist" if r.traceless else "first-order twist has nonzero trace",
        "Qdot": _mat(r.Qdot, s.field),
        "traceless": r.traceless,
    }


def check_volume_cycle(s: Subject, t_max: int) -> dict:
    w = _require_form(s, "volume-cycle")
    r = volume_cycle_check(w, s.N if s.N is not None else 2)
    return {
        "ok": bool(r),
        "verdict": "1 (x) w is a nontrivial Hochschild cycle" if r else "not a nontrivial Hochschild cycle",
        "cycle": r.cycle,
        "nontrivial": r.nontrivial,
        "normalized_chains": r.normalized,
    }


CHECK_FUNCS = {
    "preregular": check_preregular,
    "3regular": check_3regular,
    "koszul": check_koszul,
    "gorenstein": check_gorenstein,
    "frobenius": check_frobenius,
    "dim2": check_dim2,
    "infinitesimal": check_infinitesimal,
    "volume-cycle": check_volume_cycle,
}

_PASSTHROUGH = (NotPreregular, ShapeMismatch, NotQuadratic, SingularMatrix, NoSolution)


def run(job: JobSpec) -> tuple[dict, int]:
    """Run a job; returns (report, exit code).  Usage and budget errors propagate."""
    previous = get_budget_mb()
    if job.budget_mb is not None:
        set_budget_mb(job.budget_mb)
    try:
        return _run(job)
    finally:
        set_budget_mb(previous)


def _run(job: JobSpec) -> tuple[dict, int]:
    unknown = [c for c in job.checks if c not in CHECKS]
    if unknown:
        raise UsageError(f"unknown check(s) {', '.join(unknown)}; choose from {', '.join(CHECKS)}")
    s = _resolve(job)
    t_max = job.max_degree if job.max_degree is not None else default_cutoff(s.obj.g)
    if t_max < 0:
        raise UsageError("--max-degree must be nonnegative")
    check_budget(s.obj.g, max(t_max, getattr(s.obj, "m", 0)))
    report = {
        "schema": io.SCHEMA,
        "subject": s.label,
        "kind": "form" if isinstance(s.obj, MultilinearForm) else "presentation",
        "field": str(s.field),
        "g": s.obj.g,
        "max_degree": t_max,
        "hypothesis": {"N": s.N, "D": s.D},
        "checks": {},
    }
    timings = {}
    if s.N is not None or isinstance(s.obj, Presentation):
        try:
            report["dims"] = list(dims(_presentation(s, "dims"), t_max))
        except (NotPreregular, ShapeError) as exc:
            report["dims"] = None
            report["dims_error"] = str(exc)
    funcs = dict(CHECK_FUNCS)
    funcs["orbit"] = make_orbit_check(job.orbit_matrix)
    for name in sorted(set(job.checks)):
        t0 = time.perf_counter()
        try:
            block = funcs[name](s, t_max)
        except _PASSTHROUGH as exc:
            block = {"ok": False, "verdict": f"{type(exc).__name__}: {exc}"}
        report["checks"][name] = block
        timings[name] = round(time.perf_counter() - t0, 4)
    report["ok"] = all(b["ok"] for b in report["checks"].values())
    report["timings"] = timings
    code = EXIT_OK if report["ok"] or job.report_only else EXIT_FAIL
    return report, code


def render_text(report: dict) -> str:
    lines = [f"subject {report['subject']} ({report['kind']}, field {report['field']}, g = {report['g']})"]
    if report.get("dims") is not None:
        lines.append(f"dims up to degree {report['max_degree']}: {report['dims']}")
    for name, b in report["checks"].items():
        lines.append(f"[{'PASS' if b['ok'] else 'FAIL'}] {name}: {b.get('verdict', '')}")
        ff = b.get("first_failure")
        if ff:
            lines.append(f"    first failure at position {ff['position']}, total degree {ff['total_degree']}")
        for term in b.get("witness", []) if isinstance(b.get("witness"), list) else []:
            lines.append(f"    witness term {term['coefficient']} * {term['left']} (x) {term['tensor']}")
        if "slot_witness" in b:
            lines.append(f"    slot witness X = {b['slot_witness']}")
    lines.append("overall: " + ("PASS" if report["ok"] else "FAIL"))
    return "\n".join(lines) + "\n"


def emit_report(report: dict, fmt: str) -> str:
    return io.dumps(report) if fmt == "json" else render_text(report)


# ---------------------------------------------------------------- hecke


def run_hecke(B_path: str, K_path: str | None, q_text: str | None, field: str | None) -> tuple[dict, int]:
    F = FieldSpec.parse(field) if field else None
    B = io.load(B_path, F)
    Fb = field_of_matrix(B)
    report: dict = {"schema": io.SCHEMA, "kind": "hecke", "field": str(Fb)}
    if K_path and q_text:
        raise UsageError("give at most one of --K and --standard-q")
    if K_path:
        K = io.load(K_path, Fb)
    else:
        if q_text is None:
            report["roots"] = [Fb.literal(r) for r in hecke_roots(B)]
            q = Fb.parse_literal(report["roots"][0])
        else:
            q = Fb.parse_literal(q_text)
        standard_hecke(B, q)
        K = standard_K(B, q)
        report["q"] = Fb.literal(q)
    R = build_R(B, K)
    eq = verify_eqYB(B, K)
    yb = verify_yang_baxter(R)
    hk = verify_hecke(R, B, K)
    rel = relation_space_from_R(R, B)
    report.update(
        {
            "eqYB": eq,
            "yang_baxter": yb,
            "hecke": hk,
            "second_eigenvalue": Fb.literal(hecke_parameter(B, K)),
            "relation_equivalent": rel.equivalent,
            "relation_dim": rel.space.dim,
            "R": io.matrix_to_json(R.M, Fb),
        }
    )
    report["ok"] = eq and yb and hk and rel.equivalent
    return report, EXIT_OK if report["ok"] else EXIT_FAIL


# ---------------------------------------------------------------- argument parsing


def _parse_hypothesis(text: str) -> dict:
    out = {}
    for part in text.split(","):
        key, eq, val = part.partition("=")
        key = key.strip().upper()
        if not eq or key not in ("N", "D"):
            raise UsageError(f"bad hypothesis {part!r}; expected N=<n> or D=<d>")
        try:
            out[key] = int(val)
        except ValueError:
            raise UsageError(f"bad hypothesis value {val!r}") from None
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kforms", description="Exact checks for algebras defined by multilinear forms.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="run checks on a form or a presentation")
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="form or presentation JSON file")
    src.add_argument("--catalog", help="catalog entry, e.g. sklyanin3:p=1/2,q=2")
    a.add_argument("--field", help="q or fp:<p>")
    a.add_argument("--check", default="preregular", help="comma separated: " + ",".join(CHECKS))
    a.add_argument("--hypothesis", default="", help="N=<n>,D=<d>")
    a.add_argument("--max-degree", type=int)
    a.add_argument("--emit", choices=["json", "text"], default="text")
    a.add_argument("--budget-mb", type=float)
    a.add_argument("--report-only", action="store_true", help="exit 0 even when checks fail")
    a.add_argument("--orbit-matrix", help="matrix JSON file used by the orbit check")
    a.add_argument("--output", help="write the report here instead of stdout")

    c = sub.add_parser("catalog", help="catalog operations")
    c.add_argument("action", choices=["list"])

    h = sub.add_parser("hecke", help="Hecke symmetry checks for a bilinear form")
    h.add_argument("--B", required=True, help="matrix JSON file")
    h.add_argument("--K", help="matrix JSON file")
    h.add_argument("--standard-q", help="scalar literal")
    h.add_argument("--field", help="q or fp:<p>")
    h.add_argument("--emit", choices=["json", "text"], default="json")

    e = sub.add_parser("export", help="write a catalog entry as a JSON file")
    e.add_argument("--catalog", required=True)
    e.add_argument("--field")
    e.add_argument("--output")
    return p


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "catalog":
            _write("\n".join(catalog.listing()) + "\n", None)
            return EXIT_OK
        if args.command == "export":
            entry = catalog.build(args.catalog, field=args.field)
            _write(io.dumps(io.to_json(entry.obj)), args.output)
            return EXIT_OK
        if args.command == "hecke":
            report, code = run_hecke(args.B, args.K, args.standard_q, args.field)
            if args.emit == "json":
                _write(io.dumps(report), None)
            else:
                lines = [f"{k}: {report[k]}" for k in ("eqYB", "yang_baxter", "hecke", "relation_equivalent")]
                _write("\n".join(lines) + "\n", None)
            return code
        hyp = _parse_hypothesis(args.hypothesis) if args.hypothesis else {}
        job = JobSpec(
            input=args.input,
            catalog=args.catalog,
            field=args.field,
            checks=[c.strip() for c in args.check.split(",") if c.strip()],
            N=hyp.get("N"),
            D=hyp.get("D"),
            max_degree=args.max_degree,
            emit=args.emit,
            budget_mb=args.budget_mb,
            report_only=args.report_only,
            orbit_matrix=args.orbit_matrix,
        )
        report, code = run(job)
        _write(emit_report(report, job.emit), args.output)
        return code
    except DegreeOverflow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ParseError, BadParameters, NotFound, ShapeError, BadRoot, SingularMatrix) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KFormsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
