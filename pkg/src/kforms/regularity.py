"""Algebras A(w, N) from multilinear forms and their degree-truncated
Koszul-Gorenstein certification.

A basis of A^!_n is given by the classes of the dual monomials e*_p at the
pivot words p of A^!*_n (the RREF rows of A^!*_n are the dual basis), so the
class of any e*_u has coordinates (v_i[u])_i over the rows v_i.  With this
choice omega_w(e*_u e*_v) = W[uv].
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import linalg
from .algebra import Presentation, dims, reference_series
from .errors import NotBilinear, NotPreregular, ShapeError, ShapeMismatch, SingularMatrix
from .koszul import (
    ComplexSlice,
    _contraction_from_spaces,
    describe_chain,
    dual_component,
    koszulity_check,
    nu,
)
from .tensor import (
    MultilinearForm,
    Subspace,
    entries,
    gl_action,
    inverse,
    is_3_regular,
    is_invertible,
    is_preregular,
    matrix,
    require_preregular,
    solve_twisting,
)

FIELD_CAVEAT = "3-regularity is tested over the given field, not its algebraic closure"


def algebra_from_form(w: MultilinearForm, N: int, label: str = "") -> Presentation:
    """Relations W[l_1..l_{m-N} mu_1..mu_N] x^mu_1 ... x^mu_N = 0."""
    if not 2 <= N <= w.m:
        raise ShapeError(f"need 2 <= N <= m, got N={N}, m={w.m}")
    require_preregular(w)
    R = Subspace.span(w.field, w.g, N, w.flattening(w.m - N, 0).values())
    if w.m == N + 1 and R.dim != w.g:
        raise NotPreregular(f"dim R = {R.dim} != g = {w.g}")
    return Presentation(w.field, w.g, {N: R}, label)


@dataclass
class WSpaces:
    N: int
    m: int
    spaces: dict

    def __getitem__(self, n: int) -> Subspace:
        return self.spaces[n]

    def dims(self) -> list[int]:
        return [self.spaces[n].dim for n in range(self.m + 1)]


def w_spaces(w: MultilinearForm, N: int) -> WSpaces:
    require_preregular(w)
    out = {}
    for n in range(w.m + 1):
        if n < N:
            out[n] = Subspace.full(w.field, w.g, n)
        else:
            out[n] = Subspace.span(w.field, w.g, n, w.flattening(w.m - n, 0).values())
    return WSpaces(N, w.m, out)


def kgd_shape_validate(m: int, N: int, D: int) -> bool:
    if N < 2:
        raise ShapeError(f"N = {N} must be at least 2")
    if N == 2:
        if m != D:
            raise ShapeError(f"for N = 2 the degree m = {m} must equal D = {D}")
        return True
    if (m - 1) % N or m < N + 1:
        raise ShapeError(f"for N = {N} >= 3 the degree m = {m} must be N p + 1 with p >= 1")
    p = (m - 1) // N
    if D != 2 * p + 1:
        raise ShapeError(f"for m = {N}*{p}+1 the global dimension must be D = {2 * p + 1}, not {D}")
    return True


def derived_dimension(m: int, N: int) -> int:
    """The only D compatible with (m, N)."""
    if N == 2:
        return m
    if N < 2 or (m - 1) % N or m < N + 1:
        raise ShapeError(f"no global dimension fits m = {m}, N = {N}")
    return 2 * ((m - 1) // N) + 1


# ---------------------------------------------------------------- the W complex


@dataclass
class CWDResult:
    N: int
    D: int
    cutoff: int
    slices: list
    table: dict  # (t, k) -> homology dim, k >= 1
    cokernel: dict  # t -> dim of the position-0 homology
    ok: bool
    first_failure: tuple | None = None
    witness: dict | None = None
    witness_terms: list | None = None


def cwd_slice(P: Presentation, W: WSpaces, D: int, t: int, check: bool = False) -> ComplexSlice:
    degs = [d for d in (nu(k, W.N) for k in range(D + 1)) if d <= t]
    return _contraction_from_spaces(P, degs, t, lambda n: W[n], check)


def cwd_complex(w: MultilinearForm, N: int, D: int, t_max: int, check: bool = False) -> CWDResult:
    kgd_shape_validate(w.m, N, D)
    P = algebra_from_form(w, N)
    W = w_spaces(w, N)
    res = CWDResult(N, D, t_max, [], {}, {}, True)
    for t in range(t_max + 1):
        sl = cwd_slice(P, W, D, t, check)
        res.slices.append(sl)
        h = sl.homology()
        res.cokernel[t] = h[0]
        for k in range(1, len(h)):
            res.table[(t, k)] = h[k]
            if h[k] and res.ok:
                res.ok = False
                res.first_failure = (t, k)
                res.witness = sl.kernel_not_image(k)
                res.witness_terms = describe_chain(P, sl.spaces[k], res.witness)
        if t > 0 and h[0] and res.ok:
            res.ok = False
            res.first_failure = (t, 0)
    return res


# ---------------------------------------------------------------- Frobenius data


def _gram(w: MultilinearForm, U: Subspace, V: Subspace) -> list[list]:
    """G[i][j] = W[p_i p'_j] for pivot words p_i of U and p'_j of V."""
    shift = w.g**V.n
    comps, zero = w.components, w.field.zero
    return [[comps.get(p * shift + q, zero) for q in V.pivots] for p in U.pivots]


def _rank(rows: list[list], one) -> int:
    return linalg.rank(({j: x for j, x in enumerate(r) if x} for r in rows), one)


def _col_kernel(rows: list[list], ncols: int, one) -> Subspace | list:
    sparse = [{j: x for j, x in enumerate(r) if x} for r in rows]
    rr, piv = linalg.rref(sparse, one)
    return rr, piv, linalg.nullspace(rr, piv, ncols, one)


def _kernel_space(rows: list[list], ncols: int, field) -> tuple:
    _, _, null = _col_kernel(rows, ncols, field.one)
    rr, piv = linalg.rref(null, field.one)
    return tuple(piv), tuple(tuple(sorted(r.items())) for r in rr)


def _transpose(rows: list[list], ncols: int) -> list[list]:
    return [[r[j] for r in rows] for j in range(ncols)]


def _induced_pairing_invertible(G: list[list], field) -> tuple[bool, int]:
    """Restrict G to a maximal set of independent rows and columns; check the square block is invertible."""
    one = field.one
    if not G or not G[0]:
        return True, 0
    rowsel = _independent(G, one)
    colsel = _independent(_transpose(G, len(G[0])), one)
    if len(rowsel) != len(colsel):
        return False, len(rowsel)
    if not rowsel:
        return True, 0
    sub = matrix(field, [[G[i][j] for j in colsel] for i in rowsel])
    return is_invertible(sub), len(rowsel)


def _independent(rows: list[list], one) -> list[int]:
    e = linalg.Echelon(one)
    out = []
    for i, r in enumerate(rows):
        if e.add({j: x for j, x in enumerate(r) if x}) is not None:
            out.append(i)
    return out


def sigma_matrices(w: MultilinearForm, Q, P: Presentation, degrees) -> dict:
    """Matrix of sigma_w on A^!_n in the dual-monomial basis: S[i][j] = ((Q^T)^(x)n v_i)[p_j]."""
    out = {}
    QT = Q.transpose()
    for n in degrees:
        V = dual_component(P, n)
        imgs = V.apply_tensor_power(QT)
        zero = w.field.zero
        out[n] = [[u.get(p, zero) for p in V.pivots] for u in imgs]
    return out


def sigma_preserves_dual(w: MultilinearForm, Q, P: Presentation, degrees) -> bool:
    QT = Q.transpose()
    for n in degrees:
        V = dual_component(P, n)
        if not all(V.contains(u) for u in V.apply_tensor_power(QT)):
            return False
    return True


@dataclass
class FrobeniusData:
    m: int
    dual_dims: list
    quotient_dims: list
    grams: dict  # n -> Gram matrix A^!_n x A^!_{m-n}
    nondegenerate: bool
    sigma: dict
    sigma_preserves: bool
    twisted_cyclic: bool
    ideal_two_sided: bool
    notes: list = dc_field(default_factory=list)


def frobenius_quotient_F(w: MultilinearForm, N: int) -> FrobeniusData:
    Q = require_preregular(w)
    P = algebra_from_form(w, N)
    m, F = w.m, w.field
    V = [dual_component(P, n) for n in range(m + 1)]
    grams = {n: _gram(w, V[n], V[m - n]) for n in range(m + 1)}
    # I_n = column kernel of G_{m-n}; its left counterpart is the row kernel of G_n
    qdims, two_sided, nondeg = [], True, True
    for n in range(m + 1):
        G = grams[m - n]
        r = _rank(G, F.one)
        qdims.append(r)
        right = _kernel_space(G, V[n].dim, F)
        left = _kernel_space(_transpose(grams[n], V[m - n].dim), V[n].dim, F)
        if right != left:
            two_sided = False
        ok, _ = _induced_pairing_invertible(grams[n], F)
        nondeg = nondeg and ok
    for n in range(m + 1):
        if qdims[n] != qdims[m - n]:
            nondeg = False
    sigma = sigma_matrices(w, Q, P, range(m + 1))
    preserves = sigma_preserves_dual(w, Q, P, range(m + 1))
    cyclic = True
    for n in range(m + 1):
        G_n, G_c, S = grams[n], grams[m - n], sigma[m - n]
        for i in range(V[n].dim):
            for j in range(V[m - n].dim):
                rhs = F.zero
                for k in range(V[m - n].dim):
                    s = S[k][j]
                    if s:
                        rhs += s * G_c[k][i]
                if rhs != G_n[i][j]:
                    cyclic = False
    return FrobeniusData(
        m,
        [v.dim for v in V],
        qdims,
        grams,
        nondeg and two_sided,
        sigma,
        preserves,
        cyclic,
        two_sided,
    )


# ---------------------------------------------------------------- the A' algebra


@dataclass
class APrimeData:
    D: int
    N: int
    dims: list  # A'_n for n = 0..D+1
    products: dict  # (i, j) -> list over basis pairs of coordinate dicts
    frobenius: bool
    quotient_dims: list
    reasons: list = dc_field(default_factory=list)


def aprime_algebra(w: MultilinearForm, N: int) -> APrimeData:
    require_preregular(w)
    D = derived_dimension(w.m, N)
    P = algebra_from_form(w, N)
    F = w.field
    degs = [nu(n, N) for n in range(D + 2)]
    V = [dual_component(P, d) for d in degs]
    dims_ = [v.dim for v in V]
    products = {}
    for i in range(D + 1):
        for j in range(D + 1 - i):
            if degs[i] + degs[j] != degs[i + j]:
                products[(i, j)] = None  # identically zero
                continue
            tgt = V[i + j]
            shift = w.g ** V[j].n
            table = []
            for u in V[i].pivots:
                row = []
                for v in V[j].pivots:
                    code = u * shift + v
                    row.append({k: r[code] for k, r in enumerate(tgt.rows) if code in r})
                table.append(row)
            products[(i, j)] = table
    reasons = []
    if dims_[D + 1]:
        reasons.append(f"A'_{D + 1} = A^!_{degs[D + 1]} is nonzero")
    if dims_[D] != 1:
        reasons.append(f"top component A'_{D} has dimension {dims_[D]}")
    qdims = []
    for n in range(D + 1):
        G = _gram(w, V[n], V[D - n])
        ok, size = _induced_pairing_invertible(G, F)
        if len(G) != dims_[n] or size != dims_[n] or dims_[n] != dims_[D - n] or not ok:
            reasons.append(f"pairing A'_{n} x A'_{D - n} is degenerate")
        qdims.append(_rank(_gram(w, V[D - n], V[n]), F.one))
    return APrimeData(D, N, dims_, products, not reasons, qdims, reasons)


# ---------------------------------------------------------------- certification


@dataclass
class RegularityVerdict:
    N: int
    D: int
    cutoff: int
    shape_ok: bool
    cwd: CWDResult | None
    w_equals_dual: dict  # nu(n) -> bool, n = 0..D
    top_vanishes: bool  # A^!*_{nu(D+1)} = 0
    aprime_frobenius: bool
    aprime_reasons: list
    ok: bool
    notes: list = dc_field(default_factory=list)

    def summary(self) -> str:
        if self.ok:
            return f"Koszul of global dimension {self.D} and Gorenstein, certified up to total degree {self.cutoff}"
        parts = []
        if self.cwd and not self.cwd.ok:
            t, k = self.cwd.first_failure
            parts.append(f"W-complex not exact at position {k} in total degree {t}")
        if not all(self.w_equals_dual.values()) or not self.top_vanishes:
            parts.append("W spaces differ from the Koszul dual components")
        if not self.aprime_frobenius:
            parts.append("A' is not Frobenius")
        return "; ".join(parts) or "failed"


def check_koszul_gorenstein(w: MultilinearForm, N: int, D: int, t_max: int) -> RegularityVerdict:
    kgd_shape_validate(w.m, N, D)
    require_preregular(w)
    P = algebra_from_form(w, N)
    W = w_spaces(w, N)
    cwd = cwd_complex(w, N, D, t_max)
    comp = {}
    for n in range(D + 1):
        d = nu(n, N)
        comp[d] = W[d] == dual_component(P, d)
    top = dual_component(P, nu(D + 1, N)).dim == 0
    ap = aprime_algebra(w, N)
    ok = cwd.ok and all(comp.values()) and top and ap.frobenius
    return RegularityVerdict(N, D, t_max, True, cwd, comp, top, ap.frobenius, ap.reasons, ok, [FIELD_CAVEAT])


@dataclass
class ThreeRegularEquivalence:
    cond_a: bool
    cond_c: bool

    @property
    def agree(self) -> bool:
        return self.cond_a == self.cond_c


def three_regular_equivalence(w: MultilinearForm, N: int) -> ThreeRegularEquivalence:
    if w.m != N + 1:
        raise ShapeMismatch(f"m = {w.m} but N + 1 = {N + 1}")
    require_preregular(w)
    P = algebra_from_form(w, N)
    line = Subspace.span(w.field, w.g, N + 1, [w.vector()])
    a = dual_component(P, N + 1) == line
    c = is_3_regular(w, N, check_preregular=False).ok
    return ThreeRegularEquivalence(a, c)


@dataclass
class PresentationGorenstein:
    koszul: object
    resolution_dims: list
    length_ok: bool
    symmetric: bool
    form: MultilinearForm | None
    verdict: RegularityVerdict | None
    gorenstein: bool
    reason: str


def gorenstein_from_presentation(P: Presentation, D: int, t_max: int) -> PresentationGorenstein:
    """Koszul up to t_max with resolution length D, plus Gorenstein via the top dual component.

    Gorenstein with a Koszul resolution forces dim A^!*_{nu(k)} = dim A^!*_{nu(D-k)};
    when that symmetry holds and the top component is a line K w, the form w is
    run through the full certification.
    """
    N = P.require_homogeneous()
    kz = koszulity_check(P, t_max)
    res = [dual_component(P, nu(k, N)).dim for k in range(D + 2)]
    length_ok = res[D] > 0 and res[D + 1] == 0
    symmetric = all(res[k] == res[D - k] for k in range(D + 1))
    if not kz.ok:
        return PresentationGorenstein(kz, res, length_ok, symmetric, None, None, False, kz.verdict())
    if not length_ok:
        return PresentationGorenstein(kz, res, False, symmetric, None, None, False, f"resolution length is not {D}")
    if not symmetric:
        return PresentationGorenstein(
            kz, res, True, False, None, None, False, f"resolution ranks {res[: D + 1]} are not symmetric"
        )
    top = dual_component(P, nu(D, N))
    if top.dim != 1:
        return PresentationGorenstein(kz, res, True, True, None, None, False, "top dual component is not a line")
    w = MultilinearForm(P.field, P.g, top.n, top.rows[0])
    if not is_preregular(w).ok or algebra_from_form(w, N) != P:
        return PresentationGorenstein(kz, res, True, True, w, None, False, "top form does not present the algebra")
    v = check_koszul_gorenstein(w, N, D, t_max)
    return PresentationGorenstein(kz, res, True, True, w, v, v.ok, v.summary())


# ---------------------------------------------------------------- dimension 2


@dataclass
class Dim2Result:
    regular: bool
    series_match: bool
    dims: list
    classification: str | None
    symmetric_rank: int
    charpoly: list | None  # coefficients of det(x - Q_b), constant term first
    branch: str
    koszul: bool
    dual_nonvanishing: bool | None = None


def dim2_analyze(b: MultilinearForm, t_max: int | None = None) -> Dim2Result:
    if b.m != 2:
        raise NotBilinear(f"form has degree {b.m}")
    if b.is_zero():
        raise NotBilinear("zero form")
    g, F = b.g, b.field
    t_max = t_max if t_max is not None else (8 if g <= 3 else 6)
    B = matrix(F, [[b[(i, j)] for j in range(g)] for i in range(g)])
    regular = is_invertible(B)
    P = Presentation(F, g, {2: Subspace.span(F, g, 2, [b.vector()])})
    d = dims(P, t_max)
    match = list(d) == list(reference_series(2, g, 2, t_max))
    S = B + B.transpose()
    srank = S.rank()
    symmetric = B == B.transpose()
    charpoly = None
    cls = None
    if g == 2 and regular:
        cls = {0: "polynomial", 1: "Jordanian", 2: "Manin"}[srank]
        if regular and cls == "Manin":
            Qb = inverse(B).transpose() * B
            cp = Qb.charpoly()
            charpoly = [F.literal(F(c)) for c in cp.coeffs()]
    kz = koszulity_check(P, t_max, witness=False).ok
    if regular:
        branch = "D=2, Gorenstein"
        nonvan = None
    elif symmetric and B.rank() == 1:
        branch = "D=infinity (symmetric of rank 1)"
        nonvan = all(dual_component(P, n).dim > 0 for n in range(t_max + 1))
    else:
        branch = "D=2, not Gorenstein"
        nonvan = dual_component(P, 3).dim > 0
    return Dim2Result(regular, match, list(d), cls, srank, charpoly, branch, kz, nonvan)


# ---------------------------------------------------------------- orbits


@dataclass
class OrbitResult:
    ok: bool
    dims_match: bool
    q_conjugated: bool
    dims: list
    transformed_dims: list


def orbit_consistency(w: MultilinearForm, L, t_max: int, N: int) -> OrbitResult:
    if not is_invertible(L):
        raise SingularMatrix("L is not invertible")
    Q = require_preregular(w)
    w2 = gl_action(w, L)
    Q2 = solve_twisting(w2).Q
    conj = Q2 == inverse(L) * Q * L
    d1 = dims(algebra_from_form(w, N), t_max)
    d2 = dims(algebra_from_form(w2, N), t_max)
    return OrbitResult(conj and d1 == d2, d1 == d2, conj, list(d1), list(d2))


def twist_entries(Q) -> list[list]:
    return entries(Q)
