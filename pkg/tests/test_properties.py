"""Randomized invariants.  Each property runs at least 100 hypothesis cases.

Run standalone with ``pytest tests/test_properties.py``.
"""
from __future__ import annotations

from collections import Counter
from functools import lru_cache

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from kforms import catalog
from kforms.algebra import Presentation, koszul_dual
from kforms.koszul import bimodule_koszul_slice, koszul_ncomplex_slice
from kforms.scalar import FieldSpec
from kforms.tensor import MultilinearForm, Subspace, gl_action, inverse, is_invertible, matrix, solve_twisting

CASES: Counter = Counter()
MIN_CASES = 100

PROPERTY_SETTINGS = settings(
    max_examples=MIN_CASES,
    deadline=None,
    database=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)

F101 = FieldSpec.prime(101)


@lru_cache(maxsize=None)
def _orbit_fixtures():
    return [
        catalog.build("sklyanin3", field="fp:101").obj,
        catalog.build("qdef3", field="fp:101").obj,
        catalog.build("counterexample_d", field="fp:101").obj,
        catalog.build("epsilon_algebra:g=3,N=2", field="fp:101").obj,
        catalog.build("yang_mills", field="fp:101").obj,
        catalog.build("manin_plane:q=3", field="fp:101").obj,
        catalog.build("typeE").obj,
    ]


def _square(field: FieldSpec, g: int, data) -> object:
    return matrix(field, [[field(data[i * g + j]) for j in range(g)] for i in range(g)])


entries = st.integers(min_value=-6, max_value=6)


@st.composite
def invertible(draw, field: FieldSpec, g: int):
    M = _square(field, g, draw(st.lists(entries, min_size=g * g, max_size=g * g)))
    assume(is_invertible(M))
    return M


@st.composite
def random_form(draw, field: FieldSpec):
    g = draw(st.integers(2, 3))
    m = draw(st.integers(1, 3))
    data = draw(st.lists(entries, min_size=g**m, max_size=g**m))
    return MultilinearForm(field, g, m, {k: field(v) for k, v in enumerate(data) if v})


@st.composite
def random_presentation(draw, Ns=(2, 3)):
    g = draw(st.integers(2, 3))
    N = draw(st.sampled_from(Ns))
    k = draw(st.integers(1, 3))
    vecs = []
    for _ in range(k):
        support = draw(st.lists(st.integers(0, g**N - 1), min_size=1, max_size=4, unique=True))
        coefs = draw(st.lists(st.integers(1, 100), min_size=len(support), max_size=len(support)))
        vecs.append({s: F101(c) for s, c in zip(support, coefs)})
    return Presentation(F101, g, {N: Subspace.span(F101, g, N, vecs)})


@st.composite
def subspace_pair(draw):
    field = draw(st.sampled_from([FieldSpec.rationals(), F101, FieldSpec.prime(2)]))
    g, n = draw(st.integers(1, 3)), draw(st.integers(1, 2))
    dim = g**n

    def one():
        k = draw(st.integers(0, dim + 1))
        return Subspace.span(
            field, g, n, [{j: field(x) for j, x in enumerate(draw(st.lists(entries, min_size=dim, max_size=dim))) if x} for _ in range(k)]
        )

    return one(), one()


@PROPERTY_SETTINGS
@given(st.data())
def test_orbit_covariance(data):
    w = data.draw(st.sampled_from(_orbit_fixtures()))
    L = data.draw(invertible(w.field, w.g))
    Q = solve_twisting(w).Q
    assert solve_twisting(gl_action(w, L)).Q == inverse(L) * Q * L
    CASES["orbit covariance"] += 1


@PROPERTY_SETTINGS
@given(st.data())
def test_gl_action_functorial(data):
    field = data.draw(st.sampled_from([FieldSpec.rationals(), F101]))
    w = data.draw(random_form(field))
    L = _square(field, w.g, data.draw(st.lists(entries, min_size=w.g**2, max_size=w.g**2)))
    M = _square(field, w.g, data.draw(st.lists(entries, min_size=w.g**2, max_size=w.g**2)))
    assert gl_action(w, L * M) == gl_action(gl_action(w, L), M)
    CASES["GL-action functoriality"] += 1


@PROPERTY_SETTINGS
@given(random_presentation(), st.integers(0, 5))
def test_ncomplex_d_to_the_N_vanishes(P, t):
    sl = koszul_ncomplex_slice(P, t)
    assert sl.law == P.N
    assert sl.composite_vanishes()
    CASES["d^N = 0"] += 1


@PROPERTY_SETTINGS
@given(random_presentation(), st.integers(0, 4))
def test_bimodule_differential_squares_to_zero(P, t):
    assert bimodule_koszul_slice(P, t).composite_vanishes()
    CASES["delta'^2 = 0"] += 1


@PROPERTY_SETTINGS
@given(random_presentation(Ns=(2, 3, 4)))
def test_koszul_dual_involution(P):
    back = koszul_dual(koszul_dual(P))
    assert back.relations[P.N] == P.relations[P.N]
    CASES["Koszul-dual involution"] += 1


@PROPERTY_SETTINGS
@given(subspace_pair())
def test_grassmann_identity(pair):
    a, b = pair
    assert a.dim + b.dim == a.sum(b).dim + a.intersect(b).dim
    CASES["Grassmann identity"] += 1


PROPERTIES = [
    ("orbit covariance", test_orbit_covariance),
    ("GL-action functoriality", test_gl_action_functorial),
    ("d^N = 0", test_ncomplex_d_to_the_N_vanishes),
    ("delta'^2 = 0", test_bimodule_differential_squares_to_zero),
    ("Koszul-dual involution", test_koszul_dual_involution),
    ("Grassmann identity", test_grassmann_identity),
]
