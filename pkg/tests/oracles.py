"""Independent reference computations used to cross-check the package.

Nothing here imports kforms: ranks are dense Gaussian elimination over
Fraction or plain ints mod p, and series come from power-series division.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product


def dense_rank(rows, p: int | None = None) -> int:
    """Rank of a list of equal-length rows over Q (p=None) or F_p."""
    if p is None:
        M = [[Fraction(x) for x in r] for r in rows]
    else:
        M = [[int(x) % p for x in r] for r in rows]
    if not M:
        return 0
    rank, ncols = 0, len(M[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = 1 / M[rank][c] if p is None else pow(M[rank][c], p - 2, p)
        M[rank] = [x * inv if p is None else x * inv % p for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c]
                if p is None:
                    M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
                else:
                    M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def ideal_dims(g: int, relations: list[dict], nmax: int, p: int | None = None) -> list[int]:
    """dim A_n = g^n - rank{u r v} for relations given as {0-based word tuple: int coefficient}."""
    out = []
    for n in range(nmax + 1):
        rows = []
        index = {w: i for i, w in enumerate(product(range(g), repeat=n))}
        for r in relations:
            d = len(next(iter(r)))
            if d > n:
                continue
            for k in range(n - d + 1):
                for u in product(range(g), repeat=k):
                    for v in product(range(g), repeat=n - d - k):
                        row = [0] * len(index)
                        for word, c in r.items():
                            row[index[u + word + v]] += c
                        rows.append(row)
        out.append(len(index) - dense_rank(rows, p))
    return out


def series_inverse(den: dict[int, int], nmax: int) -> list[int]:
    """Coefficients of 1 / sum_k den[k] t^k (den[0] = 1) up to t^nmax."""
    a: list[Fraction] = []
    for n in range(nmax + 1):
        s = Fraction(1 if n == 0 else 0)
        for k in range(1, n + 1):
            s -= den.get(k, 0) * a[n - k]
        a.append(s)
    assert all(x.denominator == 1 for x in a)
    return [int(x) for x in a]


def roots_mod_p(t: int, p: int) -> list[int]:
    """All x in F_p with x^2 + t x + 1 = 0, by brute force."""
    return [x for x in range(p) if (x * x + t * x + 1) % p == 0]


def mat_mul(A, B, p: int | None = None):
    n, k, m = len(A), len(B), len(B[0])
    out = [[sum(A[i][l] * B[l][j] for l in range(k)) for j in range(m)] for i in range(n)]
    if p is not None:
        out = [[x % p for x in r] for r in out]
    return out


def form_value(comps: dict, g: int, m: int, vectors) -> Fraction:
    """w(X_1, ..., X_m) = sum W[l] X_1^l1 ... X_m^lm, components keyed by 0-based tuples."""
    total = Fraction(0)
    for word, c in comps.items():
        term = Fraction(c)
        for X, l in zip(vectors, word):
            term *= X[l]
        total += term
    return total
