"""JSON files for forms, presentations and matrices (schema ``kf/1``, 1-based indices)."""
from __future__ import annotations

import json
from typing import Any

from .algebra import Presentation
from .errors import KFormsError, ParseError
from .scalar import FieldSpec
from .tensor import MultilinearForm, Subspace, enc1, dec1, matrix

SCHEMA = "kf/1"


def _lit(F: FieldSpec, x) -> str:
    return F.literal(x)


def _value(F: FieldSpec, v: Any, where: str):
    try:
        if isinstance(v, bool):
            raise ParseError("boolean is not a scalar", position=where)
        if isinstance(v, int):
            return F(v)
        if isinstance(v, str):
            return F.parse_literal(v)
    except ParseError as exc:
        raise ParseError(str(exc), position=where) from None
    except (ZeroDivisionError, ArithmeticError) as exc:
        raise ParseError(str(exc), position=where) from None
    raise ParseError(f"expected an integer or a string literal, got {type(v).__name__}", position=where)


def _int(v: Any, where: str, lo: int = 1) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < lo:
        raise ParseError(f"expected an integer >= {lo}", position=where)
    return v


def _header(doc: dict, kind: str) -> FieldSpec:
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", position="$")
    if doc.get("schema") != SCHEMA:
        raise ParseError(f"schema must be {SCHEMA!r}", position="$.schema")
    if doc.get("kind") != kind:
        raise ParseError(f"kind must be {kind!r}, got {doc.get('kind')!r}", position="$.kind")
    try:
        return FieldSpec.parse(str(doc.get("field", "q")))
    except ParseError as exc:
        raise ParseError(str(exc), position="$.field") from None


def loads(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", position=exc.pos) from None


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------- forms


def form_to_json(w: MultilinearForm) -> dict:
    F = w.field
    return {
        "schema": SCHEMA,
        "kind": "form",
        "field": str(F),
        "g": w.g,
        "m": w.m,
        "entries": [[*dec1(k, w.g, w.m), _lit(F, v)] for k, v in w.components.items()],
    }


def form_from_json(doc: dict, field: FieldSpec | None = None) -> MultilinearForm:
    F = _header(doc, "form")
    if field is not None:
        F = field
    g = _int(doc.get("g"), "$.g", 1)
    m = _int(doc.get("m"), "$.m", 1)
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise ParseError("entries must be a list", position="$.entries")
    comps: dict = {}
    for n, e in enumerate(entries):
        where = f"$.entries[{n}]"
        if not isinstance(e, list) or len(e) != m + 1:
            raise ParseError(f"expected {m} indices and a value", position=where)
        digits = [_int(d, f"{where}[{j}]") for j, d in enumerate(e[:m])]
        if any(d > g for d in digits):
            raise ParseError(f"index exceeds g = {g}", position=where)
        k = enc1(digits, g)
        comps[k] = comps.get(k, F.zero) + _value(F, e[m], f"{where}[{m}]")
    return MultilinearForm(F, g, m, comps)


# ---------------------------------------------------------------- presentations


def presentation_to_json(P: Presentation) -> dict:
    F = P.field
    rels = []
    for n in sorted(P.relations):
        R = P.relations[n]
        for row in R.rows:
            rels.append({"degree": n, "terms": [[_lit(F, c), list(dec1(k, P.g, n))] for k, c in sorted(row.items())]})
    doc = {"schema": SCHEMA, "kind": "presentation", "field": str(F), "g": P.g, "relations": rels}
    if P.label:
        doc["label"] = P.label
    return doc


def presentation_from_json(doc: dict, field: FieldSpec | None = None) -> Presentation:
    F = _header(doc, "presentation")
    if field is not None:
        F = field
    g = _int(doc.get("g"), "$.g", 1)
    rels = doc.get("relations")
    if not isinstance(rels, list):
        raise ParseError("relations must be a list", position="$.relations")
    by_degree: dict[int, list[dict]] = {}
    for n, r in enumerate(rels):
        where = f"$.relations[{n}]"
        if not isinstance(r, dict) or not isinstance(r.get("terms"), list):
            raise ParseError("expected an object with 'terms'", position=where)
        terms = r["terms"]
        deg = r.get("degree")
        vec: dict = {}
        for j, t in enumerate(terms):
            tw = f"{where}.terms[{j}]"
            if not isinstance(t, list) or len(t) != 2 or not isinstance(t[1], list):
                raise ParseError("expected [coefficient, [letters]]", position=tw)
            word = [_int(d, f"{tw}[1]") for d in t[1]]
            if any(d > g for d in word):
                raise ParseError(f"letter exceeds g = {g}", position=tw)
            if deg is None:
                deg = len(word)
            if len(word) != deg:
                raise ParseError(f"word length {len(word)} differs from degree {deg}", position=tw)
            k = enc1(word, g)
            c = vec.get(k, F.zero) + _value(F, t[0], f"{tw}[0]")
            if c:
                vec[k] = c
            else:
                vec.pop(k, None)
        if deg is None:
            raise ParseError("empty relation without a degree", position=where)
        by_degree.setdefault(_int(deg, f"{where}.degree"), []).append(vec)
    relations = {n: Subspace.span(F, g, n, vecs) for n, vecs in by_degree.items()}
    return Presentation(F, g, relations, str(doc.get("label", "")))


# ---------------------------------------------------------------- matrices


def matrix_to_json(M, field: FieldSpec) -> dict:
    trip = []
    for i in range(M.nrows()):
        for j in range(M.ncols()):
            x = M[i, j]
            if x:
                trip.append([i + 1, j + 1, _lit(field, x)])
    return {
        "schema": SCHEMA,
        "kind": "matrix",
        "field": str(field),
        "nrows": M.nrows(),
        "ncols": M.ncols(),
        "triplets": trip,
    }


def matrix_from_json(doc: dict, field: FieldSpec | None = None):
    """Accepts sparse triplets or a dense ``rows`` list."""
    F = _header(doc, "matrix")
    if field is not None:
        F = field
    if "rows" in doc:
        rows = doc["rows"]
        if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
            raise ParseError("rows must be a non-empty list of lists", position="$.rows")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ParseError("rows have different lengths", position="$.rows")
        return matrix(F, [[_value(F, x, f"$.rows[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)])
    nr = _int(doc.get("nrows"), "$.nrows")
    nc = _int(doc.get("ncols"), "$.ncols")
    dense = [[F.zero] * nc for _ in range(nr)]
    trip = doc.get("triplets", [])
    if not isinstance(trip, list):
        raise ParseError("triplets must be a list", position="$.triplets")
    for n, t in enumerate(trip):
        where = f"$.triplets[{n}]"
        if not isinstance(t, list) or len(t) != 3:
            raise ParseError("expected [row, column, value]", position=where)
        i, j = _int(t[0], f"{where}[0]"), _int(t[1], f"{where}[1]")
        if i > nr or j > nc:
            raise ParseError("index out of range", position=where)
        dense[i - 1][j - 1] += _value(F, t[2], f"{where}[2]")
    return matrix(F, dense)


def sparse_triplets(columns, nrows: int, ncols: int, field: FieldSpec) -> dict:
    """Export a column-stored sparse matrix (list of dict columns)."""
    trip = sorted((i + 1, j + 1, _lit(field, x)) for j, col in enumerate(columns) for i, x in col.items())
    return {"nrows": nrows, "ncols": ncols, "triplets": [list(t) for t in trip]}


# ---------------------------------------------------------------- files


def load(path: str, field: FieldSpec | None = None):
    """Read a form, presentation or matrix file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", position=0) from None
    doc = loads(text)
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind == "form":
        return form_from_json(doc, field)
    if kind == "presentation":
        return presentation_from_json(doc, field)
    if kind == "matrix":
        return matrix_from_json(doc, field)
    raise ParseError(f"unknown kind {kind!r}", position="$.kind")


def to_json(obj) -> dict:
    if isinstance(obj, MultilinearForm):
        return form_to_json(obj)
    if isinstance(obj, Presentation):
        return presentation_to_json(obj)
    raise KFormsError(f"cannot export {type(obj).__name__}")
