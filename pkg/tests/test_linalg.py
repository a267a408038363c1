from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from kforms import QQ, FieldSpec
from kforms import linalg
from oracles import dense_rank

F5 = FieldSpec.prime(5)


def _vecs(field, rows):
    return [{j: field(x) for j, x in enumerate(r) if x} for r in rows]


matrices = st.integers(1, 6).flatmap(
    lambda ncols: st.lists(st.lists(st.integers(-3, 3), min_size=ncols, max_size=ncols), max_size=7)
)


@settings(max_examples=150, deadline=None)
@given(matrices, st.sampled_from([None, 2, 5, 101]))
def test_rank_matches_dense_oracle(rows, p):
    F = QQ if p is None else FieldSpec.prime(p)
    assert linalg.rank(_vecs(F, rows), F.one) == dense_rank(rows, p)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rref_is_canonical_and_reduced(rows):
    vecs = _vecs(QQ, rows)
    R, piv = linalg.rref(vecs, QQ.one)
    assert piv == sorted(piv)
    for p, r in zip(piv, R):
        assert min(r) == p and r[p] == 1
        assert all(p2 == p or p2 not in r for p2 in piv)
    # any reordering of the input gives the same form
    R2, piv2 = linalg.rref(list(reversed(vecs)), QQ.one)
    assert (R2, piv2) == (R, piv)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_kernel_of_columns(rows):
    if not rows:
        return
    ncols = len(rows[0])
    columns = [{i: F5(rows[i][j]) for i in range(len(rows)) if rows[i][j] % 5} for j in range(ncols)]
    ker = linalg.kernel(columns, F5.one)
    assert len(ker) == ncols - dense_rank(rows, 5)
    for v in ker:
        assert linalg.apply(columns, v) == {}


def test_solve_affine_system():
    one = QQ.one
    # x0 + x1 = 3, x1 - x2 = 1
    eqs = [({0: one, 1: one}, QQ(3)), ({1: one, 2: -one}, one)]
    part, null = linalg.solve(eqs, 3, one)
    assert part == {0: QQ(2), 1: QQ(1)}
    assert len(null) == 1
    assert linalg.solve([({0: one}, one), ({0: one}, QQ(2))], 1, one) is None


def test_echelon_ignores_explicit_zeros():
    e = linalg.Echelon(F5.one)
    assert e.add({0: F5(5), 1: F5(1)}) == 1
    assert e.contains({1: F5(3), 2: F5(0)})
