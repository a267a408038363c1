"""Hochschild chains with coefficients in the twisted bimodule ^wA.

A chain is a dict mapping a tuple ((d_0, i_0), ..., (d_n, i_n)) of basis
elements (degree, index into the standard monomials) to a coefficient; the
first factor lives in ^wA and the others in A.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import linalg
from .algebra import GradedBasis, Presentation, check_budget
from .errors import DegreeOverflow, NotQuadratic
from .regularity import algebra_from_form
from .tensor import MultilinearForm, _columns, dec, inverse, require_preregular, tensor_power_apply

Chain = dict


class TwistedBimodule:
    """A with right action by multiplication and left action
    a . xi = (-1)^((m-1) deg a) (sigma^w)^-1(a) xi.

    sigma^w is the automorphism induced by Q_w^t on generators, so its inverse
    sends x^c to sum_b (Q_w^t)^-1[b, c] x^b.
    """

    def __init__(self, w: MultilinearForm, P: Presentation, truncation: int):
        Q = require_preregular(w)
        self.w = w
        self.P = P
        self.m = w.m
        self.truncation = truncation
        self.B: GradedBasis = P.graded_basis(truncation)
        self._inv_cols = _columns(inverse(Q.transpose()))
        self._sigma_inv: dict[int, list[dict]] = {}

    def _check(self, n: int) -> None:
        if n > self.truncation:
            raise DegreeOverflow(f"degree {n} exceeds the truncation {self.truncation}")

    def sigma_inverse_table(self, n: int) -> list[dict]:
        t = self._sigma_inv.get(n)
        if t is None:
            self._check(n)
            check_budget(self.P.g, n)
            g = self.P.g
            t = []
            for word in self.B.words_of(n):
                code = 0
                for c in word:
                    code = code * g + c
                img = tensor_power_apply({code: self.B.one}, g, n, self._inv_cols)
                t.append(self.B.normal_form_vector(img, n))
            self._sigma_inv[n] = t
        return t

    def sigma_inverse(self, a: dict, n: int) -> dict:
        t = self.sigma_inverse_table(n)
        out: dict = {}
        for i, c in a.items():
            linalg.axpy(out, c, t[i])
        return out

    def left_action(self, a: dict, da: int, xi: dict, dx: int) -> dict:
        self._check(da + dx)
        out = self.B.multiply(self.sigma_inverse(a, da), da, xi, dx)
        if ((self.m - 1) * da) % 2:
            out = {k: -v for k, v in out.items()}
        return out

    def right_action(self, xi: dict, dx: int, a: dict, da: int) -> dict:
        self._check(da + dx)
        return self.B.multiply(xi, dx, a, da)


def _add_term(out: Chain, key: tuple, c) -> None:
    y = out.get(key)
    y = c if y is None else y + c
    if y:
        out[key] = y
    else:
        out.pop(key, None)


def hochschild_boundary(M: TwistedBimodule, chain: Chain) -> Chain:
    """b(a_0 (x) ... (x) a_n) = sum_{i<n} (-1)^i (.. a_i a_{i+1} ..) + (-1)^n (a_n . a_0) (x) a_1 .. a_{n-1}."""
    B, one = M.B, M.B.one
    out: Chain = {}
    for key, c in chain.items():
        n = len(key) - 1
        if n < 1:
            continue
        for d, _ in key:
            M._check(d)
        for i in range(n):
            (di, ii), (dj, ij) = key[i], key[i + 1]
            if i == 0:
                prod = M.right_action({ii: one}, di, {ij: one}, dj)
            else:
                M._check(di + dj)
                prod = B.multiply({ii: one}, di, {ij: one}, dj)
            s = c if i % 2 == 0 else -c
            for k, x in prod.items():
                _add_term(out, key[:i] + ((di + dj, k),) + key[i + 2 :], s * x)
        (dn, iN), (d0, i0) = key[n], key[0]
        prod = M.left_action({iN: one}, dn, {i0: one}, d0)
        s = c if n % 2 == 0 else -c
        for k, x in prod.items():
            _add_term(out, ((d0 + dn, k),) + key[1:n], s * x)
    return out


def form_chain(w: MultilinearForm, B: GradedBasis) -> Chain:
    """1 (x) w as a Hochschild m-chain, each generator a degree-1 basis element."""
    B.extend(1)
    idx = B.index[1]
    out: Chain = {}
    for code, c in w.components.items():
        digits = dec(code, w.g, w.m)
        key = ((0, 0),) + tuple((1, idx[(lam,)]) for lam in digits)
        out[key] = c
    return out


@dataclass
class VolumeCycleResult:
    cycle: bool
    nontrivial: bool
    normalized: bool
    boundary: Chain
    preimage_dim: int

    def __bool__(self):
        return self.cycle and self.nontrivial


def _chain_basis(B: GradedBasis, length: int, total: int, positive: bool):
    """All basis chains with `length` factors after a_0 and total internal degree `total`."""
    lo = 1 if positive else 0
    for degs in product(range(total + 1), repeat=length):
        if any(d < lo for d in degs):
            continue
        rest = total - sum(degs)
        if rest < 0:
            continue
        all_degs = (rest,) + degs
        for idxs in product(*(range(B.dim(d)) for d in all_degs)):
            yield tuple(zip(all_degs, idxs))


def _normalize(chain: Chain) -> Chain:
    """Drop terms with a unit among a_1..a_n (projection onto normalized chains)."""
    return {k: v for k, v in chain.items() if all(d > 0 for d, _ in k[1:])}


def volume_cycle_check(w: MultilinearForm, N: int = 2, normalized: bool = True) -> VolumeCycleResult:
    """Check that 1 (x) w is a ^wA-valued Hochschild m-cycle and not a boundary in internal degree m.

    With normalized chains the (m+1)-chains of internal degree m all vanish,
    so non-triviality reduces to the chain being nonzero.  With
    ``normalized=False`` the boundary image of all unnormalized
    (m+1)-chains of internal degree m is computed explicitly.
    """
    if N != 2:
        raise NotQuadratic(f"the volume cycle is only defined here for N = 2, got N = {N}")
    P = algebra_from_form(w, N)
    M = TwistedBimodule(w, P, w.m)
    c = form_chain(w, M.B)
    bd = hochschild_boundary(M, c)
    if normalized:
        preimage = list(_chain_basis(M.B, w.m + 1, w.m, True))
        images = [_normalize(hochschild_boundary(M, {k: M.B.one})) for k in preimage]
        target = _normalize(c)
    else:
        preimage = list(_chain_basis(M.B, w.m + 1, w.m, False))
        images = [hochschild_boundary(M, {k: M.B.one}) for k in preimage]
        target = c
    keys: dict = {}
    for v in images + [target]:
        for k in v:
            keys.setdefault(k, len(keys))
    ech = linalg.Echelon(M.B.one)
    for v in images:
        ech.add({keys[k]: x for k, x in v.items()})
    nontrivial = bool(ech.reduce({keys[k]: x for k, x in target.items()}))
    return VolumeCycleResult(not bd, nontrivial, normalized, bd, len(preimage))


def is_volume_cycle(w: MultilinearForm, N: int = 2) -> bool:
    return bool(volume_cycle_check(w, N))
