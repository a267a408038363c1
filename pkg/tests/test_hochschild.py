from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kforms import catalog
from kforms.errors import DegreeOverflow, NotQuadratic
from kforms.hochschild import TwistedBimodule, form_chain, hochschild_boundary, is_volume_cycle, volume_cycle_check
from kforms.regularity import algebra_from_form


def _module(ref, truncation):
    w = catalog.build(ref).obj
    return TwistedBimodule(w, algebra_from_form(w, 2), truncation)


@pytest.mark.parametrize(
    "ref", ["manin_plane", "manin_plane:q=-5", "jordan_plane", "polynomial_plane", "sklyanin3", "extended_sklyanin"]
)
def test_volume_cycles(ref):
    res = volume_cycle_check(catalog.build(ref).obj)
    assert res.cycle and res.nontrivial and res.normalized
    assert res.boundary == {}


@pytest.mark.parametrize("ref", ["manin_plane:q=3", "jordan_plane", "epsilon_algebra:g=3,N=2"])
def test_unnormalized_check_agrees(ref):
    res = volume_cycle_check(catalog.build(ref).obj, normalized=False)
    assert res and not res.normalized and res.preimage_dim > 0


def test_only_quadratic():
    with pytest.raises(NotQuadratic):
        is_volume_cycle(catalog.build("yang_mills").obj, 3)


def test_untwisted_action_breaks_the_cycle():
    M = _module("manin_plane:q=3", 2)
    c = form_chain(M.w, M.B)
    assert hochschild_boundary(M, c) == {}
    M.sigma_inverse = lambda a, n: a  # plain bimodule A instead of the twisted one
    assert hochschild_boundary(M, c) != {}


def test_truncation_is_enforced():
    M = _module("manin_plane", 2)
    with pytest.raises(DegreeOverflow):
        hochschild_boundary(M, {((2, 0), (1, 0)): M.B.one})


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(["manin_plane:q=3", "jordan_plane", "sklyanin3", "extended_sklyanin"]), st.integers(0, 2**32))
def test_boundary_squares_to_zero(ref, seed):
    M = _module(ref, 4)
    rng = random.Random(seed)
    chain = {}
    for _ in range(rng.randint(1, 3)):
        n = rng.randint(1, 4)
        degs = [0] * (n + 1)
        for _ in range(rng.randint(0, 4)):
            degs[rng.randrange(n + 1)] += 1
        key = tuple((d, rng.randrange(M.B.dim(d))) for d in degs)
        chain[key] = M.P.field(rng.randint(1, 5))
    assert hochschild_boundary(M, hochschild_boundary(M, chain)) == {}
