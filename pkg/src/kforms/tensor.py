"""Tensors on E^(x)n: multi-indices, subspaces in canonical form, multilinear
forms, the GL action, twisting matrices and the nondegeneracy conditions.

Digits are 0-based internally; the encoding of a word (l_1, ..., l_n) is
sum_k l_k g^(n-k), leftmost slot most significant.  Public helpers that take
1-based digits say so.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable

import flint

from . import linalg
from .errors import (
    AmbientMismatch,
    CharacteristicDividesDegree,
    NoSolution,
    NotInvariant,
    NotPreregular,
    ShapeMismatch,
    SingularMatrix,
)
from .scalar import FieldSpec

# ---------------------------------------------------------------- indices


def enc(digits: Iterable[int], g: int) -> int:
    """Encode 0-based digits."""
    i = 0
    for d in digits:
        i = i * g + d
    return i


def dec(index: int, g: int, n: int) -> tuple[int, ...]:
    """Decode to 0-based digits of length n."""
    out = [0] * n
    for k in range(n - 1, -1, -1):
        index, out[k] = divmod(index, g)
    return tuple(out)


def enc1(digits: Iterable[int], g: int) -> int:
    """Encode 1-based digits (the external convention)."""
    return enc((d - 1 for d in digits), g)


def dec1(index: int, g: int, n: int) -> tuple[int, ...]:
    return tuple(d + 1 for d in dec(index, g, n))


def words(g: int, n: int):
    return itertools.product(range(g), repeat=n)


# ---------------------------------------------------------------- matrices


def matrix(field: FieldSpec, rows) -> "flint.fmpq_mat | flint.nmod_mat":
    """A dense exact matrix (python-flint) from nested rows of coercible scalars."""
    rows = [[field(x) for x in r] for r in rows]
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    flat = [x for r in rows for x in r]
    if field.p is None:
        return flint.fmpq_mat(nr, nc, flat)
    return flint.nmod_mat(nr, nc, [int(x) for x in flat], field.p)


def identity(field: FieldSpec, g: int):
    return matrix(field, [[1 if i == j else 0 for j in range(g)] for i in range(g)])


def diag(field: FieldSpec, values):
    g = len(values)
    return matrix(field, [[values[i] if i == j else 0 for j in range(g)] for i in range(g)])


def zeros(field: FieldSpec, nr: int, nc: int):
    return matrix(field, [[0] * nc for _ in range(nr)])


def entries(M) -> list[list]:
    """Rows of a flint matrix as raw scalars."""
    return [[M[i, j] for j in range(M.ncols())] for i in range(M.nrows())]


def is_invertible(M) -> bool:
    return M.nrows() == M.ncols() and bool(M.det())


def inverse(M):
    try:
        return M.inv()
    except ZeroDivisionError:
        raise SingularMatrix("matrix is singular") from None


def field_of_matrix(M) -> FieldSpec:
    if isinstance(M, flint.nmod_mat):
        return FieldSpec(M.modulus())
    return FieldSpec(None)


# ---------------------------------------------------------------- subspaces


class Subspace:
    """Subspace of E^(x)n (dim E = g) held as its canonical RREF."""

    __slots__ = ("field", "g", "n", "rows", "pivots")

    def __init__(self, field: FieldSpec, g: int, n: int, rows, pivots):
        self.field = field
        self.g = g
        self.n = n
        self.rows = tuple(rows)
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, field: FieldSpec, g: int, n: int, vectors: Iterable[dict]) -> "Subspace":
        rows, piv = linalg.rref(vectors, field.one)
        return cls(field, g, n, rows, piv)

    @classmethod
    def zero(cls, field: FieldSpec, g: int, n: int) -> "Subspace":
        return cls(field, g, n, (), ())

    @classmethod
    def full(cls, field: FieldSpec, g: int, n: int) -> "Subspace":
        one = field.one
        return cls(field, g, n, ({i: one} for i in range(g**n)), range(g**n))

    @property
    def ambient_dim(self) -> int:
        return self.g**self.n

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def _check(self, other: "Subspace"):
        if (self.g, self.n) != (other.g, other.n) or self.field != other.field:
            raise AmbientMismatch(
                f"ambients differ: (g={self.g}, n={self.n}, {self.field}) vs (g={other.g}, n={other.n}, {other.field})"
            )

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            (self.g, self.n, self.field) == (other.g, other.n, other.field)
            and self.pivots == other.pivots
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.g, self.n, self.pivots))

    def __repr__(self):
        return f"Subspace(g={self.g}, n={self.n}, dim={self.dim})"

    def echelon(self) -> linalg.Echelon:
        e = linalg.Echelon(self.field.one)
        for p, r in zip(self.pivots, self.rows):
            e.rows[p] = r
            for k in r:
                if k != p:
                    e._where.setdefault(k, set()).add(p)
        return e

    def reduce(self, v: dict) -> dict:
        return self.echelon().reduce(v)

    def contains(self, other) -> bool:
        """Membership of a vector (dict) or containment of a subspace."""
        if isinstance(other, Subspace):
            self._check(other)
            if other.dim > self.dim:
                return False
            e = self.echelon()
            return all(e.contains(r) for r in other.rows)
        return not self.reduce(other)

    def coordinates(self, v: dict) -> list:
        """Coordinates of v (assumed to lie in the subspace) in the RREF basis."""
        zero = self.field.zero
        return [v.get(p, zero) for p in self.pivots]

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, self.g, self.n, itertools.chain(self.rows, other.rows))

    __add__ = sum

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: echelonize [a | a] and [b | 0]; rows with zero left half span a meet b."""
        self._check(other)
        if not self.dim or not other.dim:
            return Subspace.zero(self.field, self.g, self.n)
        D = self.ambient_dim
        vecs = [{**r, **{k + D: x for k, x in r.items()}} for r in self.rows]
        vecs.extend(other.rows)
        rows, piv = linalg.rref(vecs, self.field.one)
        meet = [{k - D: x for k, x in r.items()} for p, r in zip(piv, rows) if p >= D]
        return Subspace.span(self.field, self.g, self.n, meet)

    def annihilator(self) -> "Subspace":
        """Orthogonal complement for the standard pairing of E^(x)n with its dual."""
        null = linalg.nullspace(list(self.rows), list(self.pivots), self.ambient_dim, self.field.one)
        return Subspace.span(self.field, self.g, self.n, null)

    def left_tensor(self, k: int) -> "Subspace":
        """E^(x)k (x) S, already in canonical form."""
        if k == 0:
            return self
        shift = self.g**self.n
        rows, piv = [], []
        for pre in range(self.g**k):
            base = pre * shift
            for p, r in zip(self.pivots, self.rows):
                rows.append({base + c: x for c, x in r.items()})
                piv.append(base + p)
        return Subspace(self.field, self.g, self.n + k, rows, piv)

    def right_tensor(self, k: int) -> "Subspace":
        """S (x) E^(x)k, already in canonical form."""
        if k == 0:
            return self
        gk = self.g**k
        entries_ = sorted(
            (p * gk + s, {c * gk + s: x for c, x in r.items()})
            for p, r in zip(self.pivots, self.rows)
            for s in range(gk)
        )
        return Subspace(self.field, self.g, self.n + k, [r for _, r in entries_], [p for p, _ in entries_])

    def dense(self) -> list[list]:
        zero = self.field.zero
        return [[r.get(c, zero) for c in range(self.ambient_dim)] for r in self.rows]

    def apply_tensor_power(self, A) -> list[dict]:
        """Images of the basis rows under A^(x)n."""
        cols = _columns(A)
        return [tensor_power_apply(r, self.g, self.n, cols) for r in self.rows]


def subspace_ops(a: Subspace, b: Subspace, op: str):
    """Dispatch for {sum, intersect, equals, contains}; contains(a, b) asks whether b is inside a."""
    a._check(b)
    if op == "sum":
        return a.sum(b)
    if op == "intersect":
        return a.intersect(b)
    if op == "equals":
        return a == b
    if op == "contains":
        return a.contains(b)
    raise ValueError(f"unknown subspace operation {op!r}")


# ---------------------------------------------------------------- slot actions


def _columns(A) -> list[list[tuple[int, object]]]:
    """Nonzero entries of each column of a square matrix: cols[c] = [(b, A[b, c]), ...]."""
    g = A.nrows()
    return [[(b, A[b, c]) for b in range(g) if A[b, c]] for c in range(g)]


def apply_slot(vec: dict, g: int, n: int, slot: int, cols) -> dict:
    """Apply a g x g matrix (given by _columns) to one tensor slot: e_c -> sum_b A[b, c] e_b."""
    w = g ** (n - 1 - slot)
    out: dict = {}
    for idx, val in vec.items():
        c = (idx // w) % g
        base = idx - c * w
        for b, a in cols[c]:
            k = base + b * w
            y = out.get(k)
            y = a * val if y is None else y + a * val
            if y:
                out[k] = y
            else:
                del out[k]
    return out


def tensor_power_apply(vec: dict, g: int, n: int, cols, slots: Iterable[int] | None = None) -> dict:
    for s in range(n) if slots is None else slots:
        vec = apply_slot(vec, g, n, s, cols)
    return vec


def rotate_right(vec: dict, g: int, n: int, j: int) -> dict:
    """Move the last j slots to the front: component (l_{n-j+1..n}, l_{1..n-j}) <- (l_1..l_n)."""
    if j % n == 0:
        return dict(vec)
    w = g**j
    hi = g ** (n - j)
    return {(idx % w) * hi + idx // w: val for idx, val in vec.items()}


# ---------------------------------------------------------------- forms


@dataclass(frozen=True, eq=False)
class MultilinearForm:
    """An m-linear form on K^g with sparse components keyed by encoded index."""

    field: FieldSpec
    g: int
    m: int
    components: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.g < 1 or self.m < 1:
            raise ValueError("g and m must be positive")
        clean = {int(k): self.field(v) for k, v in self.components.items()}
        object.__setattr__(self, "components", {k: v for k, v in sorted(clean.items()) if v})

    @classmethod
    def from_entries(cls, field: FieldSpec, g: int, m: int, entries_) -> "MultilinearForm":
        """From [(l_1, ..., l_m, value), ...] with 1-based digits; repeated indices add."""
        comps: dict = {}
        for e in entries_:
            *digits, val = e
            if len(digits) != m or any(not 1 <= d <= g for d in digits):
                raise ValueError(f"bad multi-index {digits} for g={g}, m={m}")
            k = enc1(digits, g)
            comps[k] = comps.get(k, field.zero) + field(val)
        return cls(field, g, m, comps)

    @classmethod
    def from_function(cls, field: FieldSpec, g: int, m: int, f: Callable) -> "MultilinearForm":
        """Components W[l] = f(l) for 0-based words l."""
        comps = {}
        for i, word in enumerate(words(g, m)):
            v = f(word)
            if v:
                comps[i] = v
        return cls(field, g, m, comps)

    @classmethod
    def from_words(cls, field: FieldSpec, g: int, terms) -> "MultilinearForm":
        """From [(coefficient, 0-based word), ...]."""
        terms = list(terms)
        m = len(terms[0][1])
        comps: dict = {}
        for c, word in terms:
            k = enc(word, g)
            comps[k] = comps.get(k, field.zero) + field(c)
        return cls(field, g, m, comps)

    def __getitem__(self, digits) -> object:
        """Component at 0-based digits (tuple) or encoded index (int)."""
        k = digits if isinstance(digits, int) else enc(digits, self.g)
        return self.components.get(k, self.field.zero)

    def component(self, *digits1) -> object:
        """Component at 1-based digits."""
        return self.components.get(enc1(digits1, self.g), self.field.zero)

    def vector(self) -> dict:
        return dict(self.components)

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other):
        if not isinstance(other, MultilinearForm):
            return NotImplemented
        return (self.field, self.g, self.m) == (other.field, other.g, other.m) and self.components == other.components

    def __hash__(self):
        return hash((self.g, self.m, tuple(self.components)))

    def __repr__(self):
        return f"MultilinearForm(g={self.g}, m={self.m}, nnz={len(self.components)}, field={self.field})"

    def __add__(self, other: "MultilinearForm") -> "MultilinearForm":
        out = dict(self.components)
        linalg.axpy(out, self.field.one, other.components)
        return MultilinearForm(self.field, self.g, self.m, out)

    def scale(self, c) -> "MultilinearForm":
        c = self.field(c)
        return MultilinearForm(self.field, self.g, self.m, {k: c * v for k, v in self.components.items()})

    def entries(self) -> list[tuple]:
        """[(l_1, ..., l_m, raw value)] with 1-based digits, sorted by index."""
        return [(*dec1(k, self.g, self.m), v) for k, v in self.components.items()]

    def flattening(self, slots: int = 1, position: int = 0) -> dict[int, dict]:
        """Rows indexed by the digits in slots [position, position+slots), columns by the rest."""
        g, m = self.g, self.m
        rows: dict[int, dict] = {}
        for k, v in self.components.items():
            d = dec(k, g, m)
            r = enc(d[position : position + slots], g)
            c = enc(d[:position] + d[position + slots :], g)
            rows.setdefault(r, {})[c] = v
        return rows


def gl_action(w: MultilinearForm, L) -> MultilinearForm:
    """(w o L)_l = sum_mu W_mu L[mu_1, l_1] ... L[mu_m, l_m]."""
    cols = _columns(L.transpose())
    return MultilinearForm(w.field, w.g, w.m, tensor_power_apply(w.vector(), w.g, w.m, cols))


@dataclass(frozen=True)
class TwistSolution:
    Q: object
    unique: bool
    solution_dim: int


def _matrix_from_vars(field: FieldSpec, g: int, x: dict):
    zero = field.zero
    return matrix(field, [[x.get(mu * g + lam, zero) for lam in range(g)] for mu in range(g)])


def solve_twisting(w: MultilinearForm) -> TwistSolution:
    """Solve W[l_1..l_m] = sum_mu Q[mu, l_m] W[mu, l_1..l_{m-1}] for Q (unknown mu*g + l)."""
    if w.is_zero():
        raise NoSolution("zero form", solution_dim=-1)
    g, m, F = w.g, w.m, w.field
    gm1 = g ** (m - 1)
    eqs = []
    for idx in range(g**m):
        head, last = divmod(idx, g)
        coeffs = {}
        for mu in range(g):
            c = w.components.get(mu * gm1 + head)
            if c:
                coeffs[mu * g + last] = c
        rhs = w.components.get(idx, F.zero)
        if coeffs or rhs:
            eqs.append((coeffs, rhs))
    sol = linalg.solve(eqs, g * g, F.one)
    if sol is None:
        raise NoSolution("twisting equations are inconsistent", solution_dim=-1)
    part, null = sol
    candidates = [part]
    candidates += [_add(part, v, F.one) for v in null]
    if null:
        total = dict(part)
        for v in null:
            total = _add(total, v, F.one)
        candidates.append(total)
    for x in candidates:
        Q = _matrix_from_vars(F, g, x)
        if is_invertible(Q):
            return TwistSolution(Q, not null, len(null))
    raise NoSolution("no invertible solution found", solution_dim=len(null))


def _add(a: dict, b: dict, c) -> dict:
    out = dict(a)
    linalg.axpy(out, c, b)
    return out


def one_site_nondegenerate(w: MultilinearForm) -> list[bool]:
    """Slot k passes iff the g x g^(m-1) flattening isolating slot k has rank g."""
    one = w.field.one
    return [linalg.rank(w.flattening(1, k).values(), one) == w.g for k in range(w.m)]


@dataclass
class PreregularResult:
    ok: bool
    Q: object = None
    unique: bool = False
    failed_condition: str | None = None
    witness: list | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def first_slot_witness(w: MultilinearForm) -> list | None:
    """A nonzero X with w(X, ...) = 0, or None when slot 1 is nondegenerate."""
    rows = w.flattening(1, 0)
    cols = [rows.get(lam, {}) for lam in range(w.g)]
    ker = linalg.kernel(cols, w.field.one)
    if not ker:
        return None
    return [ker[0].get(i, w.field.zero) for i in range(w.g)]


def is_preregular(w: MultilinearForm) -> PreregularResult:
    X = first_slot_witness(w)
    if X is not None:
        return PreregularResult(False, failed_condition="i", witness=X, reason="w(X, ...) = 0 for a nonzero X")
    try:
        sol = solve_twisting(w)
    except NoSolution as exc:
        return PreregularResult(False, failed_condition="ii", reason=str(exc))
    if gl_action(w, sol.Q) != w:
        return PreregularResult(False, Q=sol.Q, failed_condition="ii", reason="w o Q_w != w")
    return PreregularResult(True, Q=sol.Q, unique=sol.unique)


def require_preregular(w: MultilinearForm):
    res = is_preregular(w)
    if not res.ok:
        raise NotPreregular(f"condition ({res.failed_condition}) fails: {res.reason}")
    return res.Q


def pi_Q(w: MultilinearForm, Q) -> MultilinearForm:
    """(1/m) sum_k w(Q X_k, ..., Q X_m, X_1, ..., X_{k-1})."""
    g, m, F = w.g, w.m, w.field
    if F.characteristic and m % F.characteristic == 0:
        raise CharacteristicDividesDegree(f"characteristic {F.characteristic} divides m = {m}")
    if gl_action(w, Q) != w:
        raise NotInvariant("w is not Q-invariant")
    cols = _columns(Q.transpose())
    total: dict = {}
    for j in range(1, m + 1):
        t = tensor_power_apply(w.vector(), g, m, cols, range(j))
        # component at (l_1..l_m) of term j is t at (l_{m-j+1..m}, l_{1..m-j})
        linalg.axpy(total, F.one, rotate_right(t, g, m, m - j))
    inv_m = F.one / F(m)
    return MultilinearForm(F, g, m, {k: v * inv_m for k, v in total.items()})


def is_q_cyclic(w: MultilinearForm, Q) -> bool:
    """W[l_1..l_m] == sum_mu Q[mu, l_m] W[mu, l_1..l_{m-1}]."""
    t = apply_slot(w.vector(), w.g, w.m, 0, _columns(Q.transpose()))
    return rotate_right(t, w.g, w.m, w.m - 1) == w.components


@dataclass
class RegularityCheck:
    ok: bool
    solution_dim: int
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def is_3_regular(w: MultilinearForm, N: int, check_preregular: bool = True) -> RegularityCheck:
    """Solutions (L0, L1) of w(L0 X0, X1, ...) = w(X0, L1 X1, ...) form exactly the line K(1, 1)."""
    if w.m != N + 1:
        raise ShapeMismatch(f"m = {w.m} but N + 1 = {N + 1}")
    if check_preregular:
        require_preregular(w)
    g, m, F = w.g, w.m, w.field
    # unknown L0[mu, lam] -> mu*g + lam, L1[mu, lam] -> g^2 + mu*g + lam
    eqs: dict[int, dict] = {}
    for k, v in w.components.items():
        d = dec(k, g, m)
        mu0, mu1 = d[0], d[1]
        # contributes to equations whose index differs in slot 0 (L0 side) or slot 1 (L1 side)
        for lam in range(g):
            e0 = enc((lam,) + d[1:], g)
            row = eqs.setdefault(e0, {})
            key = mu0 * g + lam
            row[key] = row.get(key, F.zero) + v
            e1 = enc((d[0], lam) + d[2:], g)
            row = eqs.setdefault(e1, {})
            key = g * g + mu1 * g + lam
            row[key] = row.get(key, F.zero) - v
    rows = [{k: x for k, x in r.items() if x} for r in eqs.values()]
    rr, piv = linalg.rref([r for r in rows if r], F.one)
    null = linalg.nullspace(rr, piv, 2 * g * g, F.one)
    if len(null) == 1:
        return RegularityCheck(True, 1)
    witness = None
    ident = {mu * g + mu: F.one for mu in range(g)}
    ident.update({g * g + mu * g + mu: F.one for mu in range(g)})
    for v in null:
        if not _proportional(v, ident):
            z = F.zero
            L0 = [[v.get(mu * g + lam, z) for lam in range(g)] for mu in range(g)]
            L1 = [[v.get(g * g + mu * g + lam, z) for lam in range(g)] for mu in range(g)]
            witness = (L0, L1)
            break
    return RegularityCheck(False, len(null), witness)


def _proportional(a: dict, b: dict) -> bool:
    if set(a) != set(b):
        return False
    k0 = next(iter(b))
    r = a[k0] / b[k0]
    return all(a[k] == r * b[k] for k in b)


def satisfies_iii_prime(w: MultilinearForm, N: int) -> bool:
    """The g^2 x g^(N-1) flattening on the first two slots has rank g^2."""
    if w.m != N + 1:
        raise ShapeMismatch(f"m = {w.m} but N + 1 = {N + 1}")
    return linalg.rank(w.flattening(2, 0).values(), w.field.one) == w.g**2


def epsilon_form(field: FieldSpec, g: int) -> MultilinearForm:
    """The completely antisymmetric g-linear form on K^g with eps_{1..g} = 1."""
    comps = {}
    for perm in itertools.permutations(range(g)):
        comps[enc(perm, g)] = field(_perm_sign(perm))
    return MultilinearForm(field, g, g, comps)


def _perm_sign(perm) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


@dataclass(frozen=True)
class InfinitesimalTwist:
    Qdot: object
    traceless: bool


def infinitesimal_twist(wdot: MultilinearForm) -> InfinitesimalTwist:
    """Solve Wdot[l] = Qdot[mu, l_g] eps[mu, l_1..l_{g-1}] + (-1)^(g-1) Wdot[l_g, l_1..l_{g-1}]."""
    g, F = wdot.g, wdot.field
    if wdot.m != g:
        raise ShapeMismatch(f"degree {wdot.m} differs from g = {g}")
    eps = epsilon_form(F, g)
    sign = F(-1) ** (g - 1)
    rot = rotate_right(wdot.vector(), g, g, 1)  # component at l is Wdot[l_g, l_1..l_{g-1}]
    gm1 = g ** (g - 1)
    eqs = []
    for idx in range(g**g):
        head, last = divmod(idx, g)
        coeffs = {}
        for mu in range(g):
            c = eps.components.get(mu * gm1 + head)
            if c:
                coeffs[mu * g + last] = c
        rhs = wdot.components.get(idx, F.zero) - sign * rot.get(idx, F.zero)
        if coeffs or rhs:
            eqs.append((coeffs, rhs))
    sol = linalg.solve(eqs, g * g, F.one)
    if sol is None:
        raise NoSolution("wdot is not a first-order preregular direction at eps", solution_dim=-1)
    Qdot = _matrix_from_vars(F, g, sol[0])
    trace = F.zero
    for i in range(g):
        trace += Qdot[i, i]
    return InfinitesimalTwist(Qdot, not trace)
