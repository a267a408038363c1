"""Koszul dual components, the Koszul N-complex, its contractions, the
bimodule and small Hochschild complexes, and truncated Koszulity checks.

Chain spaces are direct sums of blocks A_i (x) V (x) A_j with V a subspace of
E^(x)k held in canonical form; the coordinate of a basis element of V is the
position of its pivot.  A map that drops letters from a basis vector of V is
projected onto the pivot coordinates of the target subspace, which is exact
whenever the image lies in that subspace (true for every complex built here;
``check=True`` verifies it).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import linalg
from .algebra import GradedBasis, Presentation, SparseMatrix, check_budget, dims, koszul_dual
from .errors import BadContractionIndices, KFormsError
from .tensor import Subspace, dec


def dual_component(P: Presentation, n: int) -> Subspace:
    """A^!*_n: the intersection of E^r (x) R (x) E^s over r + s = n - N."""
    N = P.require_homogeneous()
    cached = P._dual.get(n)
    if cached is not None:
        return cached
    check_budget(P.g, n)
    if n < N:
        out = Subspace.full(P.field, P.g, n)
    elif n == N:
        out = P.relations[N]
    else:
        out = dual_component(P, n - 1).right_tensor(1).intersect(P.relations[N].left_tensor(n - N))
    P._dual[n] = out
    return out


def nu(k: int, N: int) -> int:
    """Degree of the k-th term of the Koszul complex: N*(k/2) or N*((k-1)/2) + 1."""
    return N * (k // 2) + (k % 2)


# ---------------------------------------------------------------- chain spaces


@dataclass
class Block:
    left: int  # degree of the left algebra factor
    V: Subspace
    right: int | None  # degree of the right algebra factor (None for one-sided spaces)
    offset: int
    size: int


@dataclass
class ChainSpace:
    label: str
    blocks: list = dc_field(default_factory=list)

    @property
    def dim(self) -> int:
        return sum(b.size for b in self.blocks)

    def block(self, left: int) -> Block | None:
        for b in self.blocks:
            if b.left == left:
                return b
        return None


def one_sided_space(B: GradedBasis, deg: int, V: Subspace, label: str) -> ChainSpace:
    sp = ChainSpace(label)
    if deg >= 0:
        size = B.dim(deg) * V.dim
        sp.blocks.append(Block(deg, V, None, 0, size))
    return sp


def two_sided_space(B: GradedBasis, total: int, V: Subspace, label: str) -> ChainSpace:
    sp = ChainSpace(label)
    off = 0
    for i in range(total + 1):
        j = total - i
        size = B.dim(i) * V.dim * B.dim(j)
        sp.blocks.append(Block(i, V, j, off, size))
        off += size
    return sp


@dataclass
class ComplexSlice:
    """Fixed total degree t: spaces C_0..C_L and maps[k-1] : C_k -> C_{k-1}."""

    t: int
    spaces: list
    maps: list
    law: int = 2  # composites of `law` consecutive maps vanish
    one: object = None

    @property
    def dims(self) -> list[int]:
        return [s.dim for s in self.spaces]

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.spaces]

    def ranks(self) -> list[int]:
        return [m.rank(self.one) for m in self.maps]

    def homology(self) -> list[int]:
        """Homology dimension at every position (position 0 is the cokernel)."""
        if self.law != 2:
            raise KFormsError("homology of an N-complex slice needs a contraction")
        r = self.ranks()
        out = []
        for k, d in enumerate(self.dims):
            out.append(d - (r[k - 1] if k >= 1 else 0) - (r[k] if k < len(r) else 0))
        return out

    def composite_vanishes(self) -> bool:
        """Every composite of `law` consecutive maps is zero."""
        L = len(self.maps)
        for top in range(self.law, L + 1):
            for j in range(self.maps[top - 1].ncols):
                v = self.maps[top - 1].columns[j]
                for k in range(top - 1, top - self.law, -1):
                    if not v:
                        break
                    v = linalg.apply(self.maps[k - 1].columns, v)
                if v:
                    return False
        return True

    def kernel_not_image(self, k: int):
        """A vector in ker(C_k -> C_{k-1}) outside im(C_{k+1} -> C_k), or None."""
        if k >= 1:
            ker = linalg.kernel(self.maps[k - 1].columns, self.one)
        else:
            ker = [{i: self.one} for i in range(self.dims[0])]
        img = linalg.Echelon(self.one)
        if k < len(self.maps):
            for c in self.maps[k].columns:
                img.add(c)
        for v in ker:
            r = img.reduce(v)
            if r:
                return r
        return None

    def in_kernel(self, k: int, v: dict) -> bool:
        return k == 0 or not linalg.apply(self.maps[k - 1].columns, v)

    def in_image(self, k: int, v: dict) -> bool:
        if k >= len(self.maps):
            return not v
        img = linalg.Echelon(self.one)
        for c in self.maps[k].columns:
            img.add(c)
        return img.contains(v)


def _tail_positions(V: Subspace) -> dict[int, int]:
    return {p: i for i, p in enumerate(V.pivots)}


def drop_map(
    B: GradedBasis,
    src: ChainSpace,
    tgt: ChainSpace,
    terms: list[tuple[int, int, object]],
    check: bool = False,
) -> SparseMatrix:
    """Map removing letters from V-basis vectors: a (x) e_w (x) b -> c a w[:p] (x) e_mid (x) w[len-q:] b.

    ``terms`` is a list of (p, q, coefficient).  Two-sided spaces use both
    factors; one-sided spaces only support q = 0 (letters go to the left factor).
    """
    g = B.g
    cols: list[dict] = [dict() for _ in range(src.dim)]
    tblocks = {b.left: b for b in tgt.blocks}
    for sb in src.blocks:
        V = sb.V
        k = V.n
        for p, q, coef in terms:
            mid_len = k - p - q
            tb = tblocks.get(sb.left + p)
            if tb is None:
                continue
            if sb.right is not None and tb.right != sb.right + q:
                continue
            W = tb.V
            if W.n != mid_len:
                raise KFormsError("target subspace has the wrong tensor degree")
            tpos = _tail_positions(W)
            dimW = W.dim
            dl = B.dim(sb.left)
            dr = 1 if sb.right is None else B.dim(sb.right)
            tdr = 1 if tb.right is None else B.dim(tb.right)
            gmid, gq = g**mid_len, g**q
            # split every basis vector of V into (prefix, middle, suffix) pieces
            split = []
            for row in V.rows:
                pieces = []
                for code, c in row.items():
                    rest, suf = divmod(code, gq)
                    pre, mid = divmod(rest, gmid)
                    pieces.append((pre, mid, suf, c))
                split.append(pieces)
            if check:
                _check_projection(B, V, W, p, q, sb, split)
            left_cache: dict[tuple[int, int], dict] = {}
            right_cache: dict[tuple[int, int], dict] = {}
            for a in range(dl):
                for s, pieces in enumerate(split):
                    for b in range(dr):
                        col = cols[sb.offset + (a * V.dim + s) * dr + b]
                        for pre, mid, suf, c in pieces:
                            t = tpos.get(mid)
                            if t is None:
                                continue
                            lv = left_cache.get((a, pre))
                            if lv is None:
                                lv = B.mul_word({a: B.one}, sb.left, dec(pre, g, p))
                                left_cache[(a, pre)] = lv
                            if not lv:
                                continue
                            if sb.right is None:
                                rv = {0: B.one}
                            else:
                                rv = right_cache.get((suf, b))
                                if rv is None:
                                    rv = B.left_mul_word(dec(suf, g, q), {b: B.one}, sb.right)
                                    right_cache[(suf, b)] = rv
                                if not rv:
                                    continue
                            cc = coef * c
                            for ia, xa in lv.items():
                                base = tb.offset + (ia * dimW + t) * tdr
                                for ib, xb in rv.items():
                                    key = base + ib
                                    y = col.get(key)
                                    y = cc * xa * xb if y is None else y + cc * xa * xb
                                    if y:
                                        col[key] = y
                                    else:
                                        del col[key]
    return SparseMatrix(tgt.dim, src.dim, cols)


def _check_projection(B, V, W, p, q, sb, split):
    """Verify that dropping letters maps V into A (x) W (x) A, i.e. the projection is exact."""
    g = B.g
    for a in range(B.dim(sb.left)):
        for pieces in split:
            acc: dict[tuple, dict] = {}
            for pre, mid, suf, c in pieces:
                lv = B.mul_word({a: B.one}, sb.left, dec(pre, g, p))
                for ia, xa in lv.items():
                    key = (ia, suf)
                    linalg.axpy(acc.setdefault(key, {}), c * xa, {mid: B.one})
            for key, vec in acc.items():
                if vec and not W.contains(vec):
                    raise KFormsError("image leaves the target subspace")


# ---------------------------------------------------------------- complexes


def koszul_ncomplex_slice(P: Presentation, t: int, check: bool = False) -> ComplexSlice:
    """Positions n = 0..t with C_n = A_{t-n} (x) A^!*_n and d(a (x) e_0..e_n) = a e_0 (x) e_1..e_n."""
    N = P.require_homogeneous()
    B = P.graded_basis(max(t, 0))
    if t < 0:
        return ComplexSlice(t, [], [], N, P.field.one)
    spaces = [one_sided_space(B, t - n, dual_component(P, n), f"A_{t - n}*K_{n}") for n in range(t + 1)]
    maps = [drop_map(B, spaces[n], spaces[n - 1], [(1, 0, P.field.one)], check) for n in range(1, t + 1)]
    return ComplexSlice(t, spaces, maps, N, P.field.one)


def contraction_degrees(N: int, p: int, r: int, t: int) -> list[int]:
    """Tensor degrees of the positions of C_{p,r}: Ni + r at 2i, N(i+1) + r - p at 2i+1, up to t."""
    out = []
    k = 0
    while True:
        i, odd = divmod(k, 2)
        d = N * (i + 1) + r - p if odd else N * i + r
        if d > t:
            return out
        out.append(d)
        k += 1


def contraction(P: Presentation, p: int, r: int, t: int, check: bool = False) -> ComplexSlice:
    N = P.require_homogeneous()
    if not 0 <= r < p <= N - 1:
        raise BadContractionIndices(f"need 0 <= r < p <= N-1, got p={p}, r={r}, N={N}")
    return _contraction_from_spaces(P, contraction_degrees(N, p, r, t), t, lambda n: dual_component(P, n), check)


def _contraction_from_spaces(P, degs, t, space_of, check=False) -> ComplexSlice:
    B = P.graded_basis(max(t, 0))
    spaces = [one_sided_space(B, t - d, space_of(d), f"A_{t - d}*K_{d}") for d in degs]
    one = P.field.one
    maps = []
    for k in range(1, len(degs)):
        j = degs[k] - degs[k - 1]
        maps.append(drop_map(B, spaces[k], spaces[k - 1], [(j, 0, one)], check))
    return ComplexSlice(t, spaces, maps, 2, one)


def koszul_complex_slice(P: Presentation, t: int, check: bool = False) -> ComplexSlice:
    """The contraction (N-1, 0); for N = 2 the N-complex itself."""
    N = P.require_homogeneous()
    degs = [d for d in (nu(k, N) for k in range(2 * t + 2)) if d <= t]
    return _contraction_from_spaces(P, degs, t, lambda n: dual_component(P, n), check)


@dataclass
class KoszulityReport:
    cutoff: int
    table: dict  # (t, k) -> homology dimension for k >= 1
    ok: bool
    first_failure: tuple | None = None
    witness: dict | None = None
    witness_terms: list | None = None

    def verdict(self) -> str:
        if self.ok:
            return f"Koszul up to degree {self.cutoff}"
        t, k = self.first_failure
        return f"not Koszul: homology at position {k} in total degree {t}"


def koszulity_check(P: Presentation, t_max: int, witness: bool = True) -> KoszulityReport:
    table = {}
    for t in range(t_max + 1):
        sl = koszul_complex_slice(P, t)
        h = sl.homology()
        for k in range(1, len(h)):
            table[(t, k)] = h[k]
            if h[k]:
                rep = KoszulityReport(t_max, table, False, (t, k))
                if witness:
                    rep.witness = sl.kernel_not_image(k)
                    rep.witness_terms = describe_chain(P, sl.spaces[k], rep.witness)
                return rep
    return KoszulityReport(t_max, table, True)


def describe_chain(P: Presentation, space: ChainSpace, vec: dict) -> list:
    """Readable terms [(coefficient literal, left word, V pivot word, right word)] with 1-based letters."""
    B = P.graded_basis()
    g = P.g
    out = []
    for key in sorted(vec):
        for blk in space.blocks:
            if blk.offset <= key < blk.offset + blk.size:
                rel = key - blk.offset
                dr = 1 if blk.right is None else B.dim(blk.right)
                rest, b = divmod(rel, dr)
                a, s = divmod(rest, blk.V.dim)
                left = [x + 1 for x in B.words_of(blk.left)[a]]
                mid = [x + 1 for x in dec(blk.V.pivots[s], g, blk.V.n)]
                right = None if blk.right is None else [x + 1 for x in B.words_of(blk.right)[b]]
                out.append((P.field.literal(vec[key]), left, mid, right))
                break
    return out


@dataclass
class PSKNResult:
    ok: bool
    residual: list
    P_series: list
    Q_series: list


def pskn_check(P: Presentation, t_max: int) -> PSKNResult:
    """Truncated product P_A(t) Q_A(t) with Q_A = sum dim A^!_{Nn} t^{Nn} - dim A^!_{Nn+1} t^{Nn+1}."""
    N = P.require_homogeneous()
    a = dims(P, t_max)
    ad = dims(koszul_dual(P), t_max)
    q = [0] * (t_max + 1)
    for n in range(t_max + 1):
        if n % N == 0:
            q[n] = ad[n]
        elif n % N == 1:
            q[n] = -ad[n]
    prod = [sum(a[i] * q[n - i] for i in range(n + 1)) for n in range(t_max + 1)]
    ok = prod == [1] + [0] * t_max
    return PSKNResult(ok, prod, list(a), q)


def bimodule_koszul_slice(P: Presentation, t: int, check: bool = False) -> ComplexSlice:
    """Components of A (x) A^!*_nu (x) A in total degree t with the differential delta'."""
    N = P.require_homogeneous()
    B = P.graded_basis(max(t, 0))
    one = P.field.one
    degs = [d for d in (nu(k, N) for k in range(2 * t + 2)) if d <= t]
    spaces = [two_sided_space(B, t - d, dual_component(P, d), f"A*K_{d}*A") for d in degs]
    maps = []
    for k in range(1, len(degs)):
        if k % 2:
            terms = [(1, 0, one), (0, 1, -one)]
        else:
            terms = [(p, N - 1 - p, one) for p in range(N)]
        maps.append(drop_map(B, spaces[k], spaces[k - 1], terms, check))
    return ComplexSlice(t, spaces, maps, 2, one)


def small_complex_slice(P: Presentation, t: int) -> ComplexSlice:
    """A (x) A^!*_nu with m (x) e_w -> m w_1 (x) e_.. - w_last m (x) e_.. (odd) and the N-1 letter sum (even)."""
    N = P.require_homogeneous()
    B = P.graded_basis(max(t, 0))
    one = P.field.one
    g = P.g
    degs = [d for d in (nu(k, N) for k in range(2 * t + 2)) if d <= t]
    spaces = [one_sided_space(B, t - d, dual_component(P, d), f"A*K_{d}") for d in degs]
    maps = []
    for k in range(1, len(degs)):
        src, tgt = spaces[k], spaces[k - 1]
        terms = [(1, 0, one), (0, 1, -one)] if k % 2 else [(p, N - 1 - p, one) for p in range(N)]
        cols = [dict() for _ in range(src.dim)]
        if src.blocks and tgt.blocks:
            sb, tb = src.blocks[0], tgt.blocks[0]
            V, W = sb.V, tb.V
            tpos = _tail_positions(W)
            for pl, ql, coef in terms:
                gmid, gq = g ** (V.n - pl - ql), g**ql
                for s, row in enumerate(V.rows):
                    for a in range(B.dim(sb.left)):
                        col = cols[a * V.dim + s]
                        for code, c in row.items():
                            rest, suf = divmod(code, gq)
                            pre, mid = divmod(rest, gmid)
                            tt = tpos.get(mid)
                            if tt is None:
                                continue
                            v = B.left_mul_word(dec(suf, g, ql), {a: one}, sb.left)
                            v = B.mul_word(v, sb.left + ql, dec(pre, g, pl)) if v else v
                            for ia, x in v.items():
                                linalg.axpy(col, coef * c, {ia * W.dim + tt: x})
        maps.append(SparseMatrix(tgt.dim, src.dim, cols))
    return ComplexSlice(t, spaces, maps, 2, one)


def chain_element(P: Presentation, space: ChainSpace, left, v: dict) -> dict:
    """Coordinates of (left word) (x) v in a one-sided chain space; v must lie in the block's subspace."""
    left = tuple(left)
    B = P.graded_basis(len(left))
    blk = space.block(len(left))
    if blk is None:
        raise KFormsError(f"no block with left degree {len(left)}")
    a = B.normal_form(left)
    coords = blk.V.coordinates(v)
    if blk.V.reduce(v):
        raise KFormsError("vector is not in the block subspace")
    out: dict = {}
    for i, x in a.items():
        for s, y in enumerate(coords):
            if y:
                out[blk.offset + i * blk.V.dim + s] = x * y
    return out
