"""Graded algebras T(E)/[R] given by homogeneous relations.

The quotient is built degree by degree.  Degree-n elements are represented
in coordinates of A_{n-1} (x) E (column ``i*g + lam`` for the basis monomial i
of degree n-1 times the generator lam); the image of the ideal there is
spanned by ``NF(b w') (x) w_last`` for standard monomials b and relation words
w = w' w_last.  Non-pivot columns of its canonical echelon form are the
standard monomials of degree n, and pivot rows give the normal forms.  This
agrees with taking non-pivot columns of the RREF of the full ideal component
in E^(x)n, because standard monomials are closed under taking prefixes.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import (
    DegreeOverflow,
    IndependenceViolation,
    NotHomogeneous,
    SingularMatrix,
    UnsupportedDimension,
)
from .scalar import FieldSpec
from .tensor import Subspace, dec, enc, is_invertible

BYTES_PER_COORDINATE = 64
_budget_mb = 512


def set_budget_mb(mb: float) -> None:
    """Memory budget used to reject degrees whose ambient dimension g^n is too large."""
    global _budget_mb
    _budget_mb = mb


def get_budget_mb() -> float:
    return _budget_mb


def check_budget(g: int, n: int) -> None:
    if g**n * BYTES_PER_COORDINATE > _budget_mb * 2**20:
        raise DegreeOverflow(f"g^n = {g}^{n} coordinates exceed the {_budget_mb} MB budget")


def default_cutoff(g: int) -> int:
    if g <= 3:
        return 8
    if g == 4:
        return 6
    return 5 if g <= 6 else 4


class HilbertSeries(list):
    """Coefficients a_0, a_1, ... of a truncated Hilbert series."""


class Presentation:
    """Generators x^1..x^g and one relation subspace per degree."""

    def __init__(self, field: FieldSpec, g: int, relations: dict[int, Subspace], label: str = ""):
        for n, R in relations.items():
            if n < 2:
                raise ValueError(f"relation degree {n} < 2")
            if (R.g, R.n, R.field) != (g, n, field):
                raise ValueError(f"relation space for degree {n} has the wrong ambient")
        self.field = field
        self.g = g
        self.relations = dict(sorted(relations.items()))
        self.label = label
        self._basis: GradedBasis | None = None
        self._dual: dict[int, Subspace] = {}

    @classmethod
    def from_vectors(cls, field: FieldSpec, g: int, relations: dict[int, list], label: str = "") -> "Presentation":
        spaces = {}
        for n, vecs in relations.items():
            spaces[n] = Subspace.span(field, g, n, [{k: field(v) for k, v in vec.items()} for vec in vecs])
        return cls(field, g, spaces, label)

    @classmethod
    def from_words(cls, field: FieldSpec, g: int, relations: list[list[tuple]], label: str = "") -> "Presentation":
        """Relations as lists of (coefficient, 0-based word) terms; degrees inferred."""
        by_deg: dict[int, list[dict]] = {}
        for rel in relations:
            n = len(rel[0][1])
            vec: dict = {}
            for c, word in rel:
                if len(word) != n:
                    raise ValueError("relation is not homogeneous")
                linalg.axpy(vec, field.one, {enc(word, g): field(c)})
            by_deg.setdefault(n, []).append(vec)
        return cls.from_vectors(field, g, by_deg, label)

    @property
    def degrees(self) -> list[int]:
        return list(self.relations)

    @property
    def N(self) -> int | None:
        """The common relation degree, or None for a multi-degree presentation."""
        return self.degrees[0] if len(self.relations) == 1 else None

    def require_homogeneous(self) -> int:
        if self.N is None:
            raise NotHomogeneous(f"relations live in degrees {self.degrees}")
        return self.N

    def relation(self, n: int) -> Subspace:
        return self.relations.get(n) or Subspace.zero(self.field, self.g, n)

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        mine = {n: R for n, R in self.relations.items() if R.dim}
        theirs = {n: R for n, R in other.relations.items() if R.dim}
        return (self.field, self.g) == (other.field, other.g) and mine == theirs

    def __hash__(self):
        return hash((self.g, tuple(self.relations)))

    def __repr__(self):
        dims = {n: R.dim for n, R in self.relations.items()}
        return f"Presentation({self.label or 'unnamed'}, g={self.g}, relations={dims}, field={self.field})"

    def graded_basis(self, nmax: int = 0) -> "GradedBasis":
        if self._basis is None:
            self._basis = GradedBasis(self)
        self._basis.extend(nmax)
        return self._basis


class GradedBasis:
    """Standard monomials, normal forms and multiplication tables, grown on demand."""

    def __init__(self, P: Presentation):
        self.P = P
        self.g = P.g
        self.field = P.field
        self.one = P.field.one
        self.words: list[list[tuple]] = [[()]]
        self.index: list[dict[tuple, int]] = [{(): 0}]
        # mult[n][i*g + lam] = normal form of basis(n)[i] * x^lam, as a vector over basis(n+1)
        self.mult: list[list[dict]] = []
        # kernel[n] = echelon rows spanning ker(A_{n-1} (x) E -> A_n)
        self.kernel: list[list[dict]] = [[]]
        self._left: dict[int, list[dict]] = {}

    @property
    def top(self) -> int:
        return len(self.words) - 1

    def extend(self, nmax: int) -> None:
        while self.top < nmax:
            self._grow()

    def _grow(self) -> None:
        n = self.top + 1
        g, one = self.g, self.one
        check_budget(g, n)
        prev = self.words[n - 1]
        ech = linalg.Echelon(one)
        for N, R in self.P.relations.items():
            if N > n or not R.dim:
                continue
            for b in range(len(self.words[n - N])):
                cache: dict[int, dict] = {}
                for row in R.rows:
                    vec: dict = {}
                    for w, c in row.items():
                        head, last = divmod(w, g)
                        u = cache.get(head)
                        if u is None:
                            u = self._mul_encoded({b: one}, n - N, head, N - 1)
                            cache[head] = u
                        for i, x in u.items():
                            k = i * g + last
                            y = vec.get(k)
                            y = c * x if y is None else y + c * x
                            if y:
                                vec[k] = y
                            else:
                                del vec[k]
                    ech.add(vec)
        piv = ech.rows
        ncols = len(prev) * g
        new_words, pos = [], {}
        for c in range(ncols):
            if c not in piv:
                pos[c] = len(new_words)
                new_words.append(prev[c // g] + (c % g,))
        table = []
        for c in range(ncols):
            if c in pos:
                table.append({pos[c]: one})
            else:
                table.append({pos[k]: -x for k, x in piv[c].items() if k != c})
        self.mult.append(table)
        self.words.append(new_words)
        self.index.append({w: i for i, w in enumerate(new_words)})
        self.kernel.append(ech.sorted_rows())

    # -- arithmetic on coordinate vectors

    def dim(self, n: int) -> int:
        if n < 0:
            return 0
        self.extend(n)
        return len(self.words[n])

    def right_mul(self, vec: dict, n: int, lam: int) -> dict:
        """vec (degree n) times x^lam."""
        self.extend(n + 1)
        table, g = self.mult[n], self.g
        out: dict = {}
        for i, c in vec.items():
            for k, x in table[i * g + lam].items():
                y = out.get(k)
                y = c * x if y is None else y + c * x
                if y:
                    out[k] = y
                else:
                    out.pop(k, None)
        return out

    def mul_word(self, vec: dict, n: int, word) -> dict:
        for lam in word:
            vec = self.right_mul(vec, n, lam)
            n += 1
            if not vec:
                break
        return vec

    def _mul_encoded(self, vec: dict, n: int, code: int, length: int) -> dict:
        return self.mul_word(vec, n, dec(code, self.g, length))

    def normal_form(self, word) -> dict:
        """Normal form of a monomial (0-based word) over basis(len(word))."""
        return self.mul_word({0: self.one}, 0, word)

    def normal_form_vector(self, vec: dict, n: int) -> dict:
        """Normal form of an element of E^(x)n given by encoded coordinates."""
        out: dict = {}
        for k, c in vec.items():
            linalg.axpy(out, c, self.normal_form(dec(k, self.g, n)))
        return out

    def multiply(self, u: dict, i: int, v: dict, j: int) -> dict:
        """Product of u in A_i and v in A_j."""
        out: dict = {}
        words_j = self.words[j] if j <= self.top else self.words_of(j)
        for b, c in v.items():
            linalg.axpy(out, c, self.mul_word(u, i, words_j[b]))
        return out

    def words_of(self, n: int) -> list[tuple]:
        self.extend(n)
        return self.words[n]

    def left_table(self, n: int) -> list[dict]:
        """left[lam*dim + b] = normal form of x^lam times basis(n)[b]."""
        t = self._left.get(n)
        if t is None:
            ws = self.words_of(n)
            t = [self.normal_form((lam,) + w) for lam in range(self.g) for w in ws]
            self._left[n] = t
        return t

    def left_mul(self, lam: int, vec: dict, n: int) -> dict:
        t = self.left_table(n)
        d = len(self.words[n])
        out: dict = {}
        for b, c in vec.items():
            linalg.axpy(out, c, t[lam * d + b])
        return out

    def left_mul_word(self, word, vec: dict, n: int) -> dict:
        for lam in reversed(word):
            vec = self.left_mul(lam, vec, n)
            n += 1
            if not vec:
                break
        return vec

    def projection(self, n: int) -> list[dict]:
        """Normal forms of every monomial of degree n, indexed by encoding."""
        check_budget(self.g, n)
        self.extend(n)
        nfs = [{0: self.one}]
        for d in range(n):
            nxt = []
            for u in nfs:
                for lam in range(self.g):
                    nxt.append(self.right_mul(u, d, lam) if u else {})
            nfs = nxt
        return nfs


# ---------------------------------------------------------------- operations


def validate_presentation(P: Presentation) -> bool:
    """Raise IndependenceViolation if some R_n meets the ideal of the lower-degree relations."""
    degs = [n for n in P.degrees if P.relation(n).dim]
    for idx, n in enumerate(degs):
        if idx == 0:
            continue
        lower = Presentation(P.field, P.g, {m: P.relations[m] for m in degs[:idx]})
        B = lower.graded_basis(n)
        R = P.relations[n]
        images = [B.normal_form_vector(r, n) for r in R.rows]
        ker = linalg.kernel(images, P.field.one)
        if ker:
            witness: dict = {}
            for i, c in ker[0].items():
                linalg.axpy(witness, c, R.rows[i])
            raise IndependenceViolation(n, witness)
    return True


def ideal_component(P: Presentation, n: int) -> Subspace:
    """The degree-n component of the two-sided ideal, as a canonical subspace of E^(x)n."""
    B = P.graded_basis(n)
    nfs = B.projection(n)
    basis_codes = [enc(w, P.g) for w in B.words[n]]
    standard = set(basis_codes)
    one = P.field.one
    rows, piv = [], []
    for code, nf in enumerate(nfs):
        if code in standard:
            continue
        row = {code: one}
        for k, c in nf.items():
            row[basis_codes[k]] = -c
        rows.append(row)
        piv.append(code)
    return Subspace(P.field, P.g, n, rows, piv)


def dims(P: Presentation, nmax: int) -> HilbertSeries:
    B = P.graded_basis(nmax)
    return HilbertSeries(len(B.words[n]) for n in range(nmax + 1))


def monomial_basis(P: Presentation, nmax: int) -> GradedBasis:
    return P.graded_basis(nmax)


@dataclass
class SparseMatrix:
    """Matrix stored by columns; columns[j] maps row index to value."""

    nrows: int
    ncols: int
    columns: list

    def triplets(self) -> list[tuple[int, int, object]]:
        return sorted((i, j, x) for j, col in enumerate(self.columns) for i, x in col.items())

    def rank(self, one) -> int:
        return linalg.rank(self.columns, one)

    def dense(self, zero) -> list[list]:
        out = [[zero] * self.ncols for _ in range(self.nrows)]
        for i, j, x in self.triplets():
            out[i][j] = x
        return out


def multiplication_matrix(P: Presentation, n: int) -> SparseMatrix:
    """A_n (x) E -> A_{n+1}; column i*g + lam is the normal form of basis(n)[i] x^lam."""
    B = P.graded_basis(n + 1)
    return SparseMatrix(len(B.words[n + 1]), len(B.words[n]) * P.g, [dict(c) for c in B.mult[n]])


def koszul_dual(P: Presentation) -> Presentation:
    """A(E*, R^perp) for an N-homogeneous presentation."""
    N = P.require_homogeneous()
    label = P.label[:-2] if P.label.endswith("^!") else (P.label + "^!" if P.label else "")
    return Presentation(P.field, P.g, {N: P.relations[N].annihilator()}, label)


def is_graded_automorphism(P: Presentation, L) -> bool:
    """True iff L^(x)n maps every relation space R_n into itself."""
    if not is_invertible(L):
        raise SingularMatrix("L is not invertible")
    return all(R.contains(v) for R in P.relations.values() for v in R.apply_tensor_power(L))


def reference_series(D: int, g: int, N: int, nmax: int) -> HilbertSeries:
    """Expansion of 1/(1 - g t + t^2) (D=2) or 1/(1 - g t + g t^N - t^(N+1)) (D=3)."""
    if D == 2:
        den = {0: 1, 1: -g, 2: 1}
    elif D == 3:
        den = {0: 1, 1: -g}
        den[N] = den.get(N, 0) + g
        den[N + 1] = den.get(N + 1, 0) - 1
    else:
        raise UnsupportedDimension(f"no closed form for D = {D}")
    a: list[int] = []
    for n in range(nmax + 1):
        s = 1 if n == 0 else 0
        for k, c in den.items():
            if k and k <= n:
                s -= c * a[n - k]
        a.append(s)
    return HilbertSeries(a)


def growth_class(D: int, g: int, N: int = 2) -> str:
    if D == 2:
        return "Polynomial" if g == 2 else "Exponential"
    if D == 3:
        return "Polynomial" if (g, N) in ((3, 2), (2, 3)) else "Exponential"
    raise UnsupportedDimension(f"no growth statement for D = {D}")

