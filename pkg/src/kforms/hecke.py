"""Braid operators R = 1 + K (x) B built from a bilinear form and the Hecke relation."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import BadRoot, ShapeError, SingularMatrix
from .scalar import FieldSpec
from .tensor import MultilinearForm, Subspace, field_of_matrix, identity, inverse, is_invertible, matrix, zeros


@dataclass
class BraidOperator:
    """g^2 x g^2 matrix; row enc(mu, nu), column enc(lam, rho)."""

    field: FieldSpec
    g: int
    M: object

    def __eq__(self, other):
        return isinstance(other, BraidOperator) and self.g == other.g and self.M == other.M

    def __hash__(self):
        return hash((self.g, str(self.M)))

    def component(self, mu: int, nu: int, lam: int, rho: int):
        """R^{mu nu}_{lam rho}, 0-based."""
        g = self.g
        return self.M[mu * g + nu, lam * g + rho]


def _trace(M):
    n = M.nrows()
    t = M[0, 0] - M[0, 0]
    for i in range(n):
        t += M[i, i]
    return t


def _square(M, name: str) -> int:
    if M.nrows() != M.ncols():
        raise ShapeError(f"{name} is not square")
    return M.nrows()


def build_R(B, K) -> BraidOperator:
    g = _square(B, "B")
    if _square(K, "K") != g:
        raise ShapeError("B and K have different sizes")
    F = field_of_matrix(B)
    rows = []
    for mu in range(g):
        for nu in range(g):
            k = K[mu, nu]
            row = []
            for lam in range(g):
                for rho in range(g):
                    d = F.one if (mu == lam and nu == rho) else F.zero
                    row.append(d + k * B[lam, rho])
            rows.append(row)
    return BraidOperator(F, g, matrix(F, rows))


def hecke_parameter(B, K):
    """1 + tr(K B^t), the second eigenvalue of R."""
    F = field_of_matrix(B)
    return F.one + _trace(K * B.transpose())


def verify_eqYB(B, K) -> bool:
    g = _square(B, "B")
    F = field_of_matrix(B)
    c = hecke_parameter(B, K)
    target = zeros(F, g, g)
    cI = identity(F, g) * c
    first = K * B * K.transpose() * B.transpose() + cI
    second = K.transpose() * B.transpose() * K * B + cI
    return first == target and second == target


def _kron_identity_left(R: BraidOperator):
    """I (x) R on E^(x)3."""
    g, F = R.g, R.field
    n = g**3
    rows = [[F.zero] * n for _ in range(n)]
    g2 = g * g
    for a in range(g):
        for i in range(g2):
            for j in range(g2):
                x = R.M[i, j]
                if x:
                    rows[a * g2 + i][a * g2 + j] = x
    return matrix(F, rows)


def _kron_identity_right(R: BraidOperator):
    """R (x) I on E^(x)3."""
    g, F = R.g, R.field
    n = g**3
    rows = [[F.zero] * n for _ in range(n)]
    g2 = g * g
    for i in range(g2):
        for j in range(g2):
            x = R.M[i, j]
            if x:
                for a in range(g):
                    rows[i * g + a][j * g + a] = x
    return matrix(F, rows)


def verify_yang_baxter(R: BraidOperator) -> bool:
    R23 = _kron_identity_left(R)
    R12 = _kron_identity_right(R)
    return R23 * R12 * R23 == R12 * R23 * R12


def verify_hecke(R: BraidOperator, B, K) -> bool:
    F, g2 = R.field, R.g * R.g
    I = identity(F, g2)
    c = hecke_parameter(B, K)
    return (R.M - I) * (R.M - I * c) == zeros(F, g2, g2)


def hecke_trace(B):
    """tr(B^-1 B^t); raises SingularMatrix for degenerate B."""
    return _trace(inverse(B) * B.transpose())


def hecke_roots(B) -> list:
    """Roots in the field of x^2 + tr(B^-1 B^t) x + 1, smallest representation first.

    Raises BadRoot carrying the discriminant when neither root lies in the field.
    """
    F = field_of_matrix(B)
    t = hecke_trace(B)
    disc = t * t - F(4)
    if F.characteristic == 2:
        roots = [F(x) for x in range(2) if F(x) * F(x) + t * F(x) + F.one == F.zero]
    else:
        s = F.sqrt(disc)
        if s is None:
            raise BadRoot(f"discriminant {F.literal(disc)} is not a square in {F}", discriminant=disc)
        half = F.one / F(2)
        roots = [(-t + s) * half, (-t - s) * half]
    out = []
    for r in roots:
        if r not in out:
            out.append(r)
    if not out:
        raise BadRoot(f"no root in {F}", discriminant=disc)
    return sorted(out, key=lambda r: F.literal(r))


def standard_hecke(B, q) -> BraidOperator:
    """R built from K = q B^-1, after checking q + 1/q + tr(B^-1 B^t) = 0."""
    if not is_invertible(B):
        raise SingularMatrix("B is degenerate")
    F = field_of_matrix(B)
    q = F(q)
    t = hecke_trace(B)
    if not q or q + F.one / q + t != F.zero:
        raise BadRoot(f"q = {F.literal(q)} does not satisfy q + 1/q + tr(B^-1 B^t) = 0", discriminant=t * t - F(4))
    return build_R(B, inverse(B) * q)


def standard_K(B, q):
    return inverse(B) * field_of_matrix(B)(q)


@dataclass
class RelationEquivalence:
    space: Subspace
    equivalent: bool


def relation_space_from_R(R: BraidOperator, B) -> RelationEquivalence:
    """Span of x^mu x^nu - R^{mu nu}_{lam rho} x^lam x^rho compared with the line K b."""
    F, g = R.field, R.g
    g2 = g * g
    rows = []
    for i in range(g2):
        v = {}
        for j in range(g2):
            x = (F.one if i == j else F.zero) - R.M[i, j]
            if x:
                v[j] = x
        rows.append(v)
    space = Subspace.span(F, g, 2, rows)
    b = bilinear_form(B)
    line = Subspace.span(F, g, 2, [b.vector()])
    return RelationEquivalence(space, space == line)


def bilinear_form(B) -> MultilinearForm:
    F = field_of_matrix(B)
    g = B.nrows()
    return MultilinearForm(F, g, 2, {i * g + j: B[i, j] for i in range(g) for j in range(g) if B[i, j]})


def form_matrix(b: MultilinearForm):
    if b.m != 2:
        raise ShapeError("form is not bilinear")
    return matrix(b.field, [[b[(i, j)] for j in range(b.g)] for i in range(b.g)])
