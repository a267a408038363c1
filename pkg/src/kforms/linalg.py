"""Sparse exact linear algebra on dict vectors ``{column: raw scalar}``.

Every routine is field-agnostic: values only need ring operations, truth
testing for zero, and division by a nonzero value.  Rows are kept fully
reduced with the smallest column of each row as its pivot, so the result of
:func:`rref` is the canonical reduced row-echelon form.
"""
from __future__ import annotations

from typing import Iterable

Vec = dict


class Echelon:
    """Incrementally maintained fully reduced row-echelon basis."""

    def __init__(self, one):
        self.one = one
        self.rows: dict[int, Vec] = {}
        # column -> set of pivots whose row has a nonzero entry there (off-pivot)
        self._where: dict[int, set[int]] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: Vec) -> Vec:
        """Return v minus its projection on the current rows (a fresh dict)."""
        v = {k: x for k, x in v.items() if x}
        rows = self.rows
        for c in [c for c in v if c in rows]:
            f = v.get(c)
            if not f:
                continue
            for k, x in rows[c].items():
                y = v.get(k)
                y = -f * x if y is None else y - f * x
                if y:
                    v[k] = y
                else:
                    del v[k]
        return v

    def add(self, v: Vec) -> int | None:
        """Insert v; returns the new pivot column, or None if v was dependent."""
        v = self.reduce(v)
        if not v:
            return None
        p = min(v)
        inv = self.one / v[p]
        v = {k: x * inv for k, x in v.items()}
        rows, where = self.rows, self._where
        for q in list(where.get(p, ())):
            r = rows[q]
            f = r[p]
            for k, x in v.items():
                y = r.get(k)
                y = -f * x if y is None else y - f * x
                if y:
                    if k not in r and k != q:
                        where.setdefault(k, set()).add(q)
                    r[k] = y
                else:
                    del r[k]
                    where[k].discard(q)
        where.pop(p, None)
        rows[p] = v
        for k in v:
            if k != p:
                where.setdefault(k, set()).add(p)
        return p

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def sorted_rows(self) -> list[Vec]:
        return [self.rows[p] for p in sorted(self.rows)]


def rref(vectors: Iterable[Vec], one) -> tuple[list[Vec], list[int]]:
    """Canonical RREF of the span of ``vectors``: (rows, pivot columns), pivots ascending."""
    e = Echelon(one)
    for v in vectors:
        e.add(v)
    piv = e.pivots()
    return [e.rows[p] for p in piv], piv


def rank(vectors: Iterable[Vec], one) -> int:
    e = Echelon(one)
    for v in vectors:
        e.add(v)
    return len(e)


def nullspace(rows: list[Vec], pivots: list[int], ncols: int, one) -> list[Vec]:
    """Basis of {x : <r, x> = 0 for every row r}, given rows in RREF with their pivots.

    One vector per free column f: x_f = 1 and x_{pivot(r)} = -r[f].
    """
    pivset = set(pivots)
    by_free: dict[int, list[tuple[int, object]]] = {}
    for p, r in zip(pivots, rows):
        for k, x in r.items():
            if k != p:
                by_free.setdefault(k, []).append((p, x))
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: one}
        for p, x in by_free.get(f, ()):
            v[p] = -x
        out.append(v)
    return out


def transpose(columns: list[Vec]) -> dict[int, Vec]:
    """Rows of the matrix whose j-th column is ``columns[j]``."""
    rows: dict[int, Vec] = {}
    for j, col in enumerate(columns):
        for i, x in col.items():
            rows.setdefault(i, {})[j] = x
    return rows


def kernel(columns: list[Vec], one) -> list[Vec]:
    """Basis of {x : sum_j x_j columns[j] = 0}."""
    rows, piv = rref(transpose(columns).values(), one)
    return nullspace(rows, piv, len(columns), one)


def apply(columns: list[Vec], x: Vec) -> Vec:
    """Matrix-vector product for a matrix stored by columns."""
    out: Vec = {}
    for j, c in x.items():
        for i, y in columns[j].items():
            z = out.get(i)
            z = c * y if z is None else z + c * y
            if z:
                out[i] = z
            else:
                out.pop(i, None)
    return out


def axpy(out: Vec, c, v: Vec) -> None:
    """out += c * v, in place, dropping zeros."""
    for k, x in v.items():
        y = out.get(k)
        y = c * x if y is None else y + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)


def solve(equations: list[tuple[Vec, object]], nvars: int, one):
    """Solve the affine system sum_j a_j x_j = b for each (a, b).

    Returns (particular solution, homogeneous basis) or None if inconsistent.
    """
    aug = []
    for a, b in equations:
        v = {j: x for j, x in a.items() if x}
        if b:
            v[nvars] = b
        if v:
            aug.append(v)
    rows, piv = rref(aug, one)
    if piv and piv[-1] == nvars:
        return None
    particular = {}
    for p, r in zip(piv, rows):
        b = r.get(nvars)
        if b:
            particular[p] = b
    clean = [{k: x for k, x in r.items() if k != nvars} for r in rows]
    return particular, nullspace(clean, piv, nvars, one)
