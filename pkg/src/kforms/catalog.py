"""Named forms and presentations with their expected-property records.

Entries are addressed as ``name`` or ``name:key=value,key=value``.  Parameter
values are scalar literals in the entry's field (``3``, ``-1/2``).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import permutations
from math import comb
from typing import Callable

from . import linalg
from .algebra import HilbertSeries, Presentation, growth_class, reference_series
from .errors import BadParameters, NotFound, ParseError
from .scalar import FieldSpec, nth_root_of_unity
from .tensor import MultilinearForm, _perm_sign, diag, epsilon_form, identity, inverse, matrix

# smallest prime above 10^6 with a square root of -1
DEFAULT_I_FIELD = "fp:1000033"


@dataclass
class Expected:
    N: int
    D: int | None
    Q: object | None = None  # flint matrix, or None when the entry is a presentation
    dims: list | None = None
    koszul: bool | None = None
    gorenstein: bool | None = None
    growth: str | None = None
    notes: list = dc_field(default_factory=list)


@dataclass
class CatalogEntry:
    name: str
    field: FieldSpec
    params: dict
    obj: MultilinearForm | Presentation
    expected: Expected | None

    @property
    def is_form(self) -> bool:
        return isinstance(self.obj, MultilinearForm)

    @property
    def g(self) -> int:
        return self.obj.g

    def ref(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v}" for k, v in self.params.items())


@dataclass
class EntrySpec:
    name: str
    summary: str
    defaults: dict
    constraints: str
    default_field: str
    builder: Callable


_REGISTRY: dict[str, EntrySpec] = {}


def _entry(name, summary, defaults, constraints, default_field="q"):
    def deco(fn):
        _REGISTRY[name] = EntrySpec(name, summary, defaults, constraints, default_field, fn)
        return fn

    return deco


def names() -> list[str]:
    return sorted(_REGISTRY)


def spec(name: str) -> EntrySpec:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise NotFound(f"unknown catalog entry {name!r}; known: {', '.join(names())}") from None


def parse_ref(ref: str) -> tuple[str, dict]:
    """'name:a=1,b=2/3' -> ('name', {'a': '1', 'b': '2/3'})."""
    name, _, rest = ref.strip().partition(":")
    params = {}
    if rest:
        pos = len(name) + 1
        for part in rest.split(","):
            key, eq, value = part.partition("=")
            if not eq or not key.strip() or not value.strip():
                raise ParseError(f"bad parameter {part!r}", position=f"position {pos}")
            params[key.strip()] = value.strip()
            pos += len(part) + 1
    return name.strip(), params


def build(name: str, params: dict | None = None, field: FieldSpec | str | None = None) -> CatalogEntry:
    """Build an entry; ``name`` may carry inline parameters."""
    base, inline = parse_ref(name)
    sp = spec(base)
    given = dict(inline)
    given.update({k: str(v) for k, v in (params or {}).items()})
    unknown = set(given) - set(sp.defaults)
    if unknown:
        raise BadParameters(f"{base}: unknown parameter(s) {', '.join(sorted(unknown))}")
    merged = {k: given.get(k, v) for k, v in sp.defaults.items()}
    merged = {k: v for k, v in merged.items() if v is not None}
    if isinstance(field, str):
        field = FieldSpec.parse(field)
    if field is None:
        field = FieldSpec.parse(sp.default_field)
    obj, expected, shown = sp.builder(field, merged)
    return CatalogEntry(base, obj.field, shown, obj, expected)


def listing() -> list[str]:
    out = []
    for n in names():
        sp = _REGISTRY[n]
        ps = ",".join(f"{k}={v}" for k, v in sp.defaults.items() if v is not None) or "-"
        out.append(f"{n:20s} field={sp.default_field:12s} params={ps:28s} {sp.summary}; {sp.constraints}")
    return out


# ---------------------------------------------------------------- helpers


def _scalar(F: FieldSpec, params: dict, key: str):
    try:
        return F.parse_literal(params[key])
    except (ZeroDivisionError, ArithmeticError) as exc:
        raise BadParameters(f"parameter {key}={params[key]} is not defined in {F}: {exc}") from None


def _int(params: dict, key: str, lo: int | None = None) -> int:
    try:
        v = int(params[key])
    except ValueError:
        raise BadParameters(f"parameter {key} must be an integer, got {params[key]!r}") from None
    if lo is not None and v < lo:
        raise BadParameters(f"parameter {key} must be at least {lo}, got {v}")
    return v


def _flag(params: dict, key: str) -> bool:
    v = params.get(key, "0").lower()
    if v in ("1", "true", "yes"):
        return True
    if v in ("0", "false", "no"):
        return False
    raise BadParameters(f"parameter {key} must be a boolean, got {v!r}")


def _sqrt_minus_one(F: FieldSpec, who: str):
    i = F.sqrt(-F.one)
    if i is None:
        raise BadParameters(f"{who} needs a square root of -1, which {F} lacks (use fp:p with p = 1 mod 4)")
    return i


def _series_from_ranks(terms: dict[int, int], nmax: int) -> HilbertSeries:
    """Expansion of 1 / sum_d terms[d] t^d."""
    a: list[int] = []
    for n in range(nmax + 1):
        s = 1 if n == 0 else 0
        for k, c in terms.items():
            if k and k <= n:
                s -= c * a[n - k]
        a.append(s)
    return HilbertSeries(a)


def _metric(F: FieldSpec, g: int, params: dict):
    """Diagonal metric with `signature` entries equal to -1 (the rest +1)."""
    s = _int(params, "signature", 0)
    if s > g:
        raise BadParameters(f"signature {s} exceeds g = {g}")
    return [-F.one if k < s else F.one for k in range(g)]


def _bilinear(F: FieldSpec, rows) -> MultilinearForm:
    g = len(rows)
    return MultilinearForm(F, g, 2, {i * g + j: F(rows[i][j]) for i in range(g) for j in range(g) if F(rows[i][j])})


def _twist_of_bilinear(F: FieldSpec, rows):
    B = matrix(F, rows)
    return inverse(B).transpose() * B


# ---------------------------------------------------------------- dimension 2


@_entry("manin_plane", "x^1 x^2 = q x^2 x^1 from B = [[0,-1],[q,0]]", {"q": "2"}, "q^2 - q != 0")
def _manin(F, params):
    q = _scalar(F, params, "q")
    if q * q - q == F.zero:
        raise BadParameters("manin_plane: q^2 - q != 0 is violated")
    rows = [[F.zero, -F.one], [q, F.zero]]
    exp = Expected(2, 2, diag(F, [-q, -F.one / q]), list(reference_series(2, 2, 2, 8)), True, True, "Polynomial")
    return _bilinear(F, rows), exp, params


@_entry("jordan_plane", "x^1 x^2 - x^2 x^1 - (x^2)^2 = 0 from B = [[0,-1],[1,1]]", {}, "none")
def _jordan(F, params):
    rows = [[F.zero, -F.one], [F.one, F.one]]
    exp = Expected(
        2, 2, _twist_of_bilinear(F, rows), list(reference_series(2, 2, 2, 8)), True, True, "Polynomial"
    )
    return _bilinear(F, rows), exp, params


@_entry("polynomial_plane", "commutative K[x^1, x^2] from B = [[0,-1],[1,0]]", {}, "none")
def _polyplane(F, params):
    rows = [[F.zero, -F.one], [F.one, F.zero]]
    exp = Expected(2, 2, -identity(F, 2), list(reference_series(2, 2, 2, 8)), True, True, "Polynomial")
    return _bilinear(F, rows), exp, params


# ---------------------------------------------------------------- dimension 3, quadratic


@_entry(
    "sklyanin3",
    "xy - q yx = p z^2 and cyclic",
    {"p": "1/2", "q": "2"},
    "(p,q) != (0,0) and (p^3+1, q^3+1) != (0,0)",
)
def _sklyanin(F, params):
    p, q = _scalar(F, params, "p"), _scalar(F, params, "q")
    if p == F.zero and q == F.zero:
        raise BadParameters("sklyanin3: (p,q) != (0,0) is violated")
    if p**3 + F.one == F.zero and q**3 + F.one == F.zero:
        raise BadParameters("sklyanin3: (p^3+1, q^3+1) != (0,0) is violated")
    x, y, z = 0, 1, 2
    terms = [(F.one, (x, y, z)), (F.one, (y, z, x)), (F.one, (z, x, y))]
    terms += [(-q, (x, z, y)), (-q, (y, x, z)), (-q, (z, y, x))]
    terms += [(-p, (x, x, x)), (-p, (y, y, y)), (-p, (z, z, z))]
    w = MultilinearForm.from_words(F, 3, terms)
    exp = Expected(2, 3, identity(F, 3), [1, 3, 6, 10, 15, 21], True, True, growth_class(3, 3, 2))
    return w, exp, params


@_entry(
    "qdef3",
    "xy = qc yx, yz = qa zy, zx = qb xz",
    {"q": "2", "a": "3", "b": "5", "c": "1/15"},
    "abc = 1 and q != 0",
)
def _qdef3(F, params):
    q, a, b, c = (_scalar(F, params, k) for k in ("q", "a", "b", "c"))
    if a * b * c != F.one:
        raise BadParameters("qdef3: abc = 1 is violated")
    if q == F.zero:
        raise BadParameters("qdef3: q != 0 is violated")
    x, y, z = 0, 1, 2
    terms = [(b, (x, y, z)), (c, (y, z, x)), (a, (z, x, y))]
    terms += [(-q * a * b, (x, z, y)), (-q * b * c, (y, x, z)), (-q * c * a, (z, y, x))]
    w = MultilinearForm.from_words(F, 3, terms)
    exp = Expected(
        2,
        3,
        diag(F, [c / b, a / c, b / a]),
        [1, 3, 6, 10, 15, 21],
        True,
        True,
        growth_class(3, 3, 2),
        ["twist follows w(X_1..X_m) = w(Q X_m, X_1..X_{m-1}); the inverse diag(b/c, c/a, a/b) is often quoted"],
    )
    return w, exp, params


@_entry(
    "typeE",
    "x^2 + z^-1 yz + z zy = 0 and cyclic (z of order 9)",
    {"p": "19", "zeta": "4"},
    "zeta of order 9 in F_p; the field is always F_p",
    "fp:19",
)
def _typeE(F, params):
    p = _int(params, "p", 2)
    try:
        F = FieldSpec(p)
    except ValueError as exc:
        raise BadParameters(f"typeE: {exc}") from None
    zeta = _scalar(F, params, "zeta")
    if (p - 1) % 9:
        raise BadParameters(f"typeE: F_{p} has no element of order 9")
    if zeta**9 != F.one or zeta**3 == F.one:
        raise BadParameters(f"typeE: zeta = {params['zeta']} is not a primitive 9th root of unity in F_{p}")
    zi = F.one / zeta
    x, y, z = 0, 1, 2
    terms = [(F.one, (x, z, x)), (F.one, (y, x, y)), (F.one, (z, y, z))]
    terms += [(zeta, (z, x, x)), (zi, (x, x, z))]
    terms += [(zeta**4, (x, y, y)), (zi**4, (y, y, x))]
    terms += [(zeta**7, (y, z, z)), (zi**7, (z, z, y))]
    w = MultilinearForm.from_words(F, 3, terms)
    exp = Expected(
        2,
        3,
        diag(F, [zeta, zeta**4, zeta**7]),
        [1, 3, 6, 10, 15, 21],
        True,
        True,
        growth_class(3, 3, 2),
        ["det Q_w = zeta^3 != 1"],
    )
    return w, exp, {"p": str(p), "zeta": params["zeta"]}


def default_zeta(p: int) -> int:
    return int(nth_root_of_unity(p, 9).value)


@_entry("counterexample_d", "x^2 + yz = 0, y^2 + zx = 0, xy = 0", {}, "none")
def _cex(F, params):
    x, y, z = 0, 1, 2
    terms = [(F.one, (x, x, x)), (F.one, (y, y, y)), (F.one, (x, y, z)), (F.one, (y, z, x)), (F.one, (z, x, y))]
    w = MultilinearForm.from_words(F, 3, terms)
    exp = Expected(
        2,
        None,
        identity(F, 3),
        [1, 3, 6, 10, 17, 30, 52],
        False,
        False,
        None,
        ["3-regular but not regular of global dimension 3"],
    )
    return w, exp, params


# ---------------------------------------------------------------- cubic


def _ym_form(F, g, metric, sign):
    def G(i, j):
        return metric[i] if i == j else F.zero

    comps = {}
    for a1 in range(g):
        for a2 in range(g):
            for a3 in range(g):
                for a4 in range(g):
                    if sign > 0:
                        v = G(a1, a2) * G(a3, a4) + G(a2, a3) * G(a4, a1) - F(2) * G(a1, a3) * G(a2, a4)
                    else:
                        v = G(a2, a3) * G(a4, a1) - G(a1, a2) * G(a3, a4)
                    if v:
                        comps[((a1 * g + a2) * g + a3) * g + a4] = v
    return MultilinearForm(F, g, 4, comps)


@_entry("yang_mills", "g^{lm}[x_l,[x_m,x_n]] = 0", {"g": "4", "signature": "0"}, "g >= 2, 0 <= signature <= g")
def _ym(F, params):
    g = _int(params, "g", 2)
    w = _ym_form(F, g, _metric(F, g, params), +1)
    exp = Expected(3, 3, identity(F, g), list(reference_series(3, g, 3, 6)), True, True, growth_class(3, g, 3))
    return w, exp, params


@_entry("super_yang_mills", "g^{lm}[S_l,[S_m,S_n]_+] = 0", {"g": "4", "signature": "0"}, "g >= 2, 0 <= signature <= g")
def _sym(F, params):
    g = _int(params, "g", 2)
    w = _ym_form(F, g, _metric(F, g, params), -1)
    exp = Expected(
        3,
        3,
        -identity(F, g),
        list(reference_series(3, g, 3, 6)),
        True,
        True,
        growth_class(3, g, 3),
        ["g^{mn} S_m S_n is central"],
    )
    return w, exp, params


def central_element(F: FieldSpec, g: int, metric=None) -> dict:
    """g^{mn} x_m x_n as a vector of E^(x)2."""
    metric = metric or [F.one] * g
    return {m * g + m: metric[m] for m in range(g)}


# ---------------------------------------------------------------- quadratic, g = 4, D = 2


_CYCLIC = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]


def _sd_series(nmax):
    return [(3 ** (n + 1) - 1) // 2 for n in range(nmax + 1)]


@_entry("self_duality", "[x_4,x_k] = e[x_l,x_m] for cyclic (k,l,m)", {"epsilon": "1"}, "epsilon = +1 or -1")
def _sd(F, params):
    e = _scalar(F, params, "epsilon")
    if e not in (F.one, -F.one):
        raise BadParameters("self_duality: epsilon must be +1 or -1")
    rels = [[(F.one, (3, k)), (-F.one, (k, 3)), (-e, (l, m)), (e, (m, l))] for k, l, m in _CYCLIC]
    P = Presentation.from_words(F, 4, rels, "self_duality")
    exp = Expected(2, 2, None, _sd_series(5), True, False, "Exponential", ["Koszul resolution ranks 1, 4, 3"])
    return P, exp, params


@_entry(
    "super_self_duality",
    "i[S_4,S_k]_+ = e[S_l,S_m] for cyclic (k,l,m)",
    {"epsilon": "1"},
    "epsilon = +1 or -1; field contains i",
    DEFAULT_I_FIELD,
)
def _ssd(F, params):
    e = _scalar(F, params, "epsilon")
    if e not in (F.one, -F.one):
        raise BadParameters("super_self_duality: epsilon must be +1 or -1")
    i = _sqrt_minus_one(F, "super_self_duality")
    rels = [[(i, (3, k)), (i, (k, 3)), (-e, (l, m)), (e, (m, l))] for k, l, m in _CYCLIC]
    P = Presentation.from_words(F, 4, rels, "super_self_duality")
    exp = Expected(2, 2, None, _sd_series(5), True, False, "Exponential")
    return P, exp, params


# ---------------------------------------------------------------- arbitrary D


def epsilon_dimension(g: int, N: int) -> int | None:
    if N == 2:
        return g
    if (g - 1) % N == 0 and g > N:
        return 2 * ((g - 1) // N) + 1
    return None


@_entry("epsilon_algebra", "relations from the antisymmetric g-form", {"g": "4", "N": "3"}, "g >= N >= 2")
def _eps(F, params):
    g, N = _int(params, "g", 2), _int(params, "N", 2)
    if N > g:
        raise BadParameters("epsilon_algebra: g >= N is violated")
    w = epsilon_form(F, g)
    Q = identity(F, g) if g % 2 else -identity(F, g)
    D = epsilon_dimension(g, N)
    exp = Expected(N, D, Q)
    if D is not None:
        nu = [N * (k // 2) + (k % 2) for k in range(D + 1)]
        ranks = {d: (-1) ** k * comb(g, d) for k, d in enumerate(nu)}
        exp.dims = list(_series_from_ranks(ranks, 6))
        exp.koszul, exp.gorenstein = True, True
    return w, exp, params


@_entry(
    "qdefD",
    "x^m x^n = q^{mn} x^n x^m, D generators",
    {"D": "3", "q12": "2", "q13": "3", "q23": "5"},
    "q^{mn} q^{nm} = 1, q^{mn} != 0; give qMN for M < N (missing ones default to 1)",
)
def _qdefD(F, params):
    D = _int(params, "D", 2)
    if D > 9 and any(k.startswith("q") for k in params):
        raise BadParameters("qdefD: qMN addressing supports D <= 9")
    qm = [[F.one] * D for _ in range(D)]
    for key, val in params.items():
        if key == "D":
            continue
        if len(key) != 3 or not key[1:].isdigit():
            raise BadParameters(f"qdefD: bad parameter {key}")
        mu, nu = int(key[1]) - 1, int(key[2]) - 1
        if not (0 <= mu < nu < D):
            if 0 <= nu < mu < D or mu == nu:
                raise BadParameters(f"qdefD: give q{mu + 1}{nu + 1} with first index smaller")
            continue  # defaults beyond D are ignored
        q = _scalar(F, params, key)
        if q == F.zero:
            raise BadParameters(f"qdefD: {key} must be nonzero")
        qm[mu][nu], qm[nu][mu] = q, F.one / q
    terms = []
    for perm in permutations(range(D)):
        chi = F.one
        for a in range(D):
            for b in range(a + 1, D):
                hi, lo = perm[a], perm[b]
                if hi > lo:  # inversion of the pair lo < hi
                    chi *= -qm[lo][hi]
        terms.append((chi, perm))
    w = MultilinearForm.from_words(F, D, terms)
    Q = [F.one] * D
    for mu in range(D):
        for lam in range(D):
            if lam != mu:
                Q[mu] *= -qm[mu][lam]
    growth = "Polynomial"
    exp = Expected(2, D, diag(F, Q), [comb(n + D - 1, D - 1) for n in range(7)], True, True, growth)
    shown = {"D": str(D)}
    shown.update({k: v for k, v in params.items() if k != "D" and int(k[1]) <= D and int(k[2]) <= D})
    return w, exp, shown


# ---------------------------------------------------------------- extended Sklyanin


def _torus_angle(F, u, i):
    """(cos, sin) of the angle t with u = e^{it}: ((u + 1/u)/2, (u - 1/u)/(2i))."""
    if u == F.zero:
        raise BadParameters("extended_sklyanin: torus coordinates must be nonzero")
    two = F(2)
    return ((u + F.one / u) / two, (u - F.one / u) / (two * i))


def _diff(a, b):
    (ca, sa), (cb, sb) = a, b
    return (ca * cb + sa * sb, sa * cb - ca * sb)


def _plus(a, b):
    (ca, sa), (cb, sb) = a, b
    return (ca * cb - sa * sb, sa * cb + ca * sb)


def extended_sklyanin_relations(F, angles, i) -> list:
    """The six relations as word lists (coefficient, 0-based word)."""
    rels = []
    for k, l, m in [(1, 2, 3), (2, 3, 1), (3, 1, 2)]:
        c0k, clm = _diff(angles[0], angles[k]), _diff(angles[l], angles[m])
        rels.append([(c0k[0], (0, k)), (-c0k[0], (k, 0)), (-i * clm[1], (l, m)), (-i * clm[1], (m, l))])
        rels.append([(clm[0], (l, m)), (-clm[0], (m, l)), (-i * c0k[1], (0, k)), (-i * c0k[1], (k, 0))])
    return rels


@_entry(
    "extended_sklyanin",
    "cos(f0-fk)[x0,xk] = i sin(fl-fm)[xl,xm]_+ and its partner",
    {"u1": "3", "u2": "7", "u3": "11", "c1": None, "s1": None, "c2": None, "s2": None, "c3": None, "s3": None, "trig": None},
    "give u1,u2,u3 (nonzero torus coordinates) or c1,s1,c2,s2,c3,s3; the six relations must be independent; trig=1 asserts c^2+s^2=1",
    DEFAULT_I_FIELD,
)
def _esk(F, params):
    i = _sqrt_minus_one(F, "extended_sklyanin")
    cs_keys = ["c1", "s1", "c2", "s2", "c3", "s3"]
    given_cs = [k for k in cs_keys if k in params]
    if given_cs:
        if len(given_cs) != 6:
            raise BadParameters("extended_sklyanin: give all six of c1,s1,c2,s2,c3,s3")
        angles = [(F.one, F.zero)] + [(_scalar(F, params, f"c{k}"), _scalar(F, params, f"s{k}")) for k in (1, 2, 3)]
        shown = {k: params[k] for k in cs_keys}
        trig = _flag(params, "trig")
    else:
        angles = [(F.one, F.zero)] + [_torus_angle(F, _scalar(F, params, f"u{k}"), i) for k in (1, 2, 3)]
        shown = {f"u{k}": params[f"u{k}"] for k in (1, 2, 3)}
        trig = True
    if "trig" in params:
        shown["trig"] = params["trig"]
    if trig and any(c * c + s * s != F.one for c, s in angles):
        raise BadParameters("extended_sklyanin: trig=1 but cos^2 + sin^2 = 1 fails")
    rels = extended_sklyanin_relations(F, angles, i)
    vecs = []
    for r in rels:
        v = {}
        for c, (a, b) in r:
            linalg.axpy(v, c, {a * 4 + b: F.one})
        if not v:
            raise BadParameters("extended_sklyanin: one of the six relations is trivial")
        vecs.append(v)
    if linalg.rank(vecs, F.one) != 6:
        raise BadParameters("extended_sklyanin: the six relations are not independent")
    terms = []
    for perm in permutations(range(4)):
        a, b, c, d = perm
        cos_ = _plus(_diff(angles[a], angles[b]), _diff(angles[c], angles[d]))[0]
        terms.append((-F(_perm_sign(perm)) * cos_, perm))
    for mu in range(4):
        for nu in range(4):
            if mu != nu:
                c, s = _diff(angles[mu], angles[nu])
                terms.append((i * F(2) * s * c, (mu, nu, mu, nu)))
    w = MultilinearForm.from_words(F, 4, terms)
    if trig:
        exp = Expected(2, 4, -identity(F, 4), [comb(n + 3, 3) for n in range(7)], True, True, "Polynomial")
    else:
        exp = Expected(2, 4, None, notes=["no expected record without trig=1"])
    return w, exp, shown


def extended_sklyanin_presentation(entry: CatalogEntry) -> Presentation:
    """The relation presentation of an extended_sklyanin entry, built independently of its form."""
    F = entry.field
    i = _sqrt_minus_one(F, "extended_sklyanin")
    p = entry.params
    if "c1" in p:
        angles = [(F.one, F.zero)] + [(F.parse_literal(p[f"c{k}"]), F.parse_literal(p[f"s{k}"])) for k in (1, 2, 3)]
    else:
        angles = [(F.one, F.zero)] + [_torus_angle(F, F.parse_literal(p[f"u{k}"]), i) for k in (1, 2, 3)]
    return Presentation.from_words(F, 4, extended_sklyanin_relations(F, angles, i), "extended_sklyanin")
