from __future__ import annotations

from math import prod

import pytest

from kforms import QQ, FieldSpec, MultilinearForm, catalog
from kforms.algebra import dims, growth_class
from kforms.errors import BadParameters, NotFound, ParseError
from kforms.koszul import koszulity_check
from kforms.regularity import algebra_from_form, check_koszul_gorenstein, gorenstein_from_presentation
from kforms.tensor import diag, solve_twisting

ALL = catalog.names()


def test_registry_contents():
    assert ALL == sorted(
        [
            "counterexample_d",
            "epsilon_algebra",
            "extended_sklyanin",
            "jordan_plane",
            "manin_plane",
            "polynomial_plane",
            "qdef3",
            "qdefD",
            "self_duality",
            "sklyanin3",
            "super_self_duality",
            "super_yang_mills",
            "typeE",
            "yang_mills",
        ]
    )
    assert len(catalog.listing()) == len(ALL)


def _presentation(entry):
    if isinstance(entry.obj, MultilinearForm):
        return algebra_from_form(entry.obj, entry.expected.N)
    return entry.obj


@pytest.mark.parametrize("name", ALL)
def test_expected_record_is_reproduced(name):
    entry = catalog.build(name)
    exp = entry.expected
    assert exp is not None
    P = _presentation(entry)
    if exp.dims:
        assert list(dims(P, len(exp.dims) - 1)) == exp.dims
    if exp.Q is not None:
        assert solve_twisting(entry.obj).Q == exp.Q
    if exp.koszul is not None:
        assert koszulity_check(P, 5, witness=False).ok == exp.koszul
    if exp.gorenstein is not None and exp.D is not None:
        if entry.is_form:
            assert check_koszul_gorenstein(entry.obj, exp.N, exp.D, 5).ok == exp.gorenstein
        else:
            assert gorenstein_from_presentation(P, exp.D, 5).gorenstein == exp.gorenstein
    if exp.growth is not None and exp.D in (2, 3):
        assert exp.growth == growth_class(exp.D, entry.g, exp.N)


def test_refs_and_params():
    assert catalog.parse_ref("qdef3:q=3, a=1/2") == ("qdef3", {"q": "3", "a": "1/2"})
    e = catalog.build("manin_plane:q=5")
    assert e.params == {"q": "5"} and e.ref() == "manin_plane:q=5"
    assert catalog.build("jordan_plane").ref() == "jordan_plane"
    assert catalog.build("manin_plane", {"q": "7"}, "fp:11").field == FieldSpec.prime(11)
    with pytest.raises(ParseError) as err:
        catalog.parse_ref("qdef3:q=3,a")
    assert err.value.position == "position 10"
    with pytest.raises(NotFound):
        catalog.build("nope")


@pytest.mark.parametrize(
    "ref,field",
    [
        ("manin_plane:q=1", None),
        ("manin_plane:r=2", None),
        ("sklyanin3:p=0,q=0", None),
        ("sklyanin3:p=-1,q=-1", None),
        ("qdef3:a=2", None),
        ("qdef3:q=0,a=1,b=1,c=1", None),
        ("typeE:zeta=2", None),
        ("typeE:p=23", None),
        ("epsilon_algebra:g=3,N=4", None),
        ("qdefD:q12=0", None),
        ("qdefD:q21=3", None),
        ("yang_mills:g=3,signature=4", None),
        ("yang_mills:g=x", None),
        ("self_duality:epsilon=2", None),
        ("super_self_duality", "fp:7"),
        ("extended_sklyanin", "q"),
        ("extended_sklyanin:c1=0,s1=0,c2=0,s2=0,c3=0,s3=0", None),
        ("extended_sklyanin:c1=1,s1=0", None),
        ("extended_sklyanin:u1=0", None),
        ("manin_plane:q=1/101", "fp:101"),
    ],
)
def test_bad_parameters(ref, field):
    with pytest.raises(BadParameters):
        catalog.build(ref, field=field)


def test_qdef3_twist_follows_the_cyclicity_convention():
    a, b, c = QQ(3), QQ(5), QQ(1) / 15
    assert solve_twisting(catalog.build("qdef3").obj).Q == diag(QQ, [c / b, a / c, b / a])


def _qdefD_quoted(qm, D):
    # prod over lambda != mu of (-q^{lambda mu})
    return [QQ.one * prod(-qm[lam][mu] for lam in range(D) if lam != mu) for mu in range(D)]


def _qdefD_matrix():
    q = {(0, 1): QQ(2), (0, 2): QQ(3), (1, 2): QQ(5)}
    qm = [[QQ.one] * 3 for _ in range(3)]
    for (m, n), v in q.items():
        qm[m][n], qm[n][m] = v, 1 / v
    return qm


def test_qdefD_twist_follows_the_cyclicity_convention():
    qm = _qdefD_matrix()
    expect = [QQ.one * prod(-qm[mu][lam] for lam in range(3) if lam != mu) for mu in range(3)]
    assert solve_twisting(catalog.build("qdefD").obj).Q == diag(QQ, expect)


@pytest.mark.xfail(strict=True, reason="the quoted product over -q^{lambda mu} is the inverse of the solved twist")
def test_qdefD_quoted_twist():
    qm = _qdefD_matrix()
    assert solve_twisting(catalog.build("qdefD").obj).Q == diag(QQ, _qdefD_quoted(qm, 3))


def test_typeE_field_and_default_zeta():
    e = catalog.build("typeE:p=37,zeta=%d" % catalog.default_zeta(37))
    assert e.field == FieldSpec.prime(37)
    z = e.field(e.params["zeta"])
    assert z**9 == e.field.one and z**3 != e.field.one


def test_extended_sklyanin_form_presents_the_relations():
    e = catalog.build("extended_sklyanin")
    assert algebra_from_form(e.obj, 2).relations[2] == catalog.extended_sklyanin_presentation(e).relations[2]
    f = catalog.build("extended_sklyanin:u1=2,u2=5,u3=13")
    assert algebra_from_form(f.obj, 2).relations[2] == catalog.extended_sklyanin_presentation(f).relations[2]
