from __future__ import annotations

import random

import pytest

from kforms import QQ, FieldSpec, MultilinearForm, catalog
from kforms.algebra import Presentation, reference_series
from kforms.errors import NotBilinear, ShapeError, SingularMatrix
from kforms.regularity import (
    FIELD_CAVEAT,
    algebra_from_form,
    aprime_algebra,
    check_koszul_gorenstein,
    derived_dimension,
    dim2_analyze,
    frobenius_quotient_F,
    gorenstein_from_presentation,
    kgd_shape_validate,
    orbit_consistency,
    three_regular_equivalence,
    w_spaces,
)
from kforms.tensor import epsilon_form, inverse, is_invertible, matrix

F101 = FieldSpec.prime(101)


def test_shape_validation():
    assert kgd_shape_validate(3, 2, 3)
    assert kgd_shape_validate(4, 3, 3)
    assert kgd_shape_validate(7, 3, 5)
    for m, N, D in ((3, 2, 4), (5, 3, 3), (4, 3, 5), (3, 1, 3)):
        with pytest.raises(ShapeError):
            kgd_shape_validate(m, N, D)
    assert derived_dimension(4, 2) == 4 and derived_dimension(7, 3) == 5
    with pytest.raises(ShapeError):
        derived_dimension(5, 3)


def test_algebra_from_form_checks():
    w = epsilon_form(QQ, 3)
    with pytest.raises(ShapeError):
        algebra_from_form(w, 4)
    P = algebra_from_form(w, 2)
    assert P.relations[2].dim == 3
    assert w_spaces(w, 2).dims() == [1, 3, 3, 1]


def test_counterexample_witness_terms():
    v = check_koszul_gorenstein(catalog.build("counterexample_d").obj, 2, 3, 5)
    assert not v.ok
    assert v.cwd.first_failure == (4, 2)
    assert v.cwd.witness_terms == [("1", [2, 3], [1, 1], None)]
    assert "position 2" in v.summary()
    assert FIELD_CAVEAT in v.notes


def test_sklyanin_certificate():
    v = check_koszul_gorenstein(catalog.build("sklyanin3", field=F101).obj, 2, 3, 7)
    assert v.ok and v.top_vanishes and v.aprime_frobenius
    assert all(v.w_equals_dual.values())
    assert v.summary().startswith("Koszul of global dimension 3 and Gorenstein")


def test_frobenius_data_of_sklyanin():
    data = frobenius_quotient_F(catalog.build("sklyanin3").obj, 2)
    assert data.dual_dims == [1, 3, 3, 1] == data.quotient_dims
    assert data.nondegenerate and data.twisted_cyclic and data.sigma_preserves


def test_aprime_dimensions():
    ym = aprime_algebra(catalog.build("yang_mills").obj, 3)
    assert ym.dims == [1, 4, 4, 1, 0] and ym.frobenius
    eps = aprime_algebra(epsilon_form(QQ, 4), 3)
    assert eps.frobenius and eps.dims[0] == 1


def test_three_regular_equivalence_on_a_failing_form():
    diag3 = MultilinearForm.from_entries(QQ, 3, 3, [(i, i, i, 1) for i in (1, 2, 3)])
    eq = three_regular_equivalence(diag3, 2)
    assert not eq.cond_a and not eq.cond_c and eq.agree


def test_gorenstein_from_presentation():
    S = Presentation.from_words(F101, 3, [[(1, (a, b)), (-1, (b, a))] for a, b in ((0, 1), (0, 2), (1, 2))])
    G = gorenstein_from_presentation(S, 3, 5)
    assert G.gorenstein and G.resolution_dims == [1, 3, 3, 1, 0]
    assert G.form is not None and G.verdict.ok

    SD = catalog.build("self_duality", field=F101).obj
    G = gorenstein_from_presentation(SD, 2, 5)
    assert G.koszul.ok and not G.gorenstein
    assert G.resolution_dims == [1, 4, 3, 0]
    assert not G.symmetric


@pytest.mark.parametrize(
    "ref,cls",
    [("jordan_plane", "Jordanian"), ("manin_plane", "Manin"), ("polynomial_plane", "polynomial")],
)
def test_dim2_classification(ref, cls):
    b = catalog.build(ref).obj
    r = dim2_analyze(b)
    assert r.regular and r.series_match and r.koszul
    assert r.classification == cls
    assert r.dims == list(reference_series(2, 2, 2, 8))


def test_dim2_manin_charpoly():
    # B = [[0,-1],[q,0]] gives Q_b = diag(-q, -1/q) and det(x - Q_b) = 1 + (q + 1/q) x + x^2
    r = dim2_analyze(catalog.build("manin_plane:q=3").obj)
    assert r.charpoly == ["1", "10/3", "1"]


def test_dim2_degenerate_branches():
    rank_one = MultilinearForm.from_entries(QQ, 2, 2, [(1, 1, 1)])
    r = dim2_analyze(rank_one, 6)
    assert not r.regular and r.classification is None
    assert r.branch.startswith("D=infinity") and r.dual_nonvanishing
    nilpotent = MultilinearForm.from_entries(QQ, 2, 2, [(1, 2, 1)])
    r = dim2_analyze(nilpotent, 6)
    assert r.branch == "D=2, not Gorenstein" and r.dual_nonvanishing is False  # A^!_3 = 0
    with pytest.raises(NotBilinear):
        dim2_analyze(epsilon_form(QQ, 3))


def test_orbit_consistency_with_random_changes_of_basis():
    rng = random.Random(7)
    for ref, N in (("sklyanin3", 2), ("qdef3", 2), ("yang_mills", 3)):
        w = catalog.build(ref, field=F101).obj
        for _ in range(3):
            L = matrix(F101, [[rng.randrange(101) for _ in range(w.g)] for _ in range(w.g)])
            if not is_invertible(L):
                continue
            res = orbit_consistency(w, L, 4, N)
            assert res.ok and res.q_conjugated and res.dims == res.transformed_dims
    with pytest.raises(SingularMatrix):
        orbit_consistency(epsilon_form(QQ, 3), matrix(QQ, [[1, 0, 0], [0, 0, 0], [0, 0, 1]]), 3, 2)
    assert inverse(matrix(QQ, [[2]])) == matrix(QQ, [[QQ(1) / 2]])
