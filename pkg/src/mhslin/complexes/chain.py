"""Finite cochain complexes and the cube complexes built from commuting nilpotents.

Every cube complex is stored as a subcomplex of the Koszul complex: the
degree ``p`` term is a subspace of ``⊕_{|J|=p} L`` (blocks ordered by
``itertools.combinations``), and ``d`` is written in the echelon bases of
those subspaces.  Two constructions that produce the same subspaces
therefore produce identical objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

from ..exactlin.filtration import IncFiltration
from ..exactlin.matrix import Matrix, ZERO
from ..exactlin.subspace import Quotient, Subspace, image, kernel
from ..filtration_ops import star, shriek, one_based
from ..monodromy import NilpotentFamily, validate_family
from ..report import InternalInvariantError, Report


@dataclass
class ChainComplex:
    """``C^lo -> ... -> C^hi``; ``d[p]`` maps degree ``lo + p`` to ``lo + p + 1``."""

    dims: list
    d: list
    lo: int = 0
    embedding: list | None = None

    def __post_init__(self):
        if len(self.d) != max(len(self.dims) - 1, 0):
            raise ValueError("need one differential between consecutive terms")
        for p, m in enumerate(self.d):
            if m.shape != (self.dims[p + 1], self.dims[p]):
                raise ValueError(f"differential {p} has shape {m.shape}")

    @property
    def degrees(self) -> range:
        return range(self.lo, self.lo + len(self.dims))

    def dim(self, n: int) -> int:
        p = n - self.lo
        return self.dims[p] if 0 <= p < len(self.dims) else 0

    def diff(self, n: int) -> Matrix:
        """``d^n: C^n -> C^{n+1}`` (zero matrix outside the support)."""
        p = n - self.lo
        if 0 <= p < len(self.d):
            return self.d[p]
        return Matrix.zeros(self.dim(n + 1), self.dim(n))

    def d_squared_zero(self) -> bool:
        return all((self.d[p + 1] @ self.d[p]).is_zero() for p in range(len(self.d) - 1))

    def cycles(self, n: int) -> Subspace:
        return kernel(self.diff(n))

    def boundaries(self, n: int) -> Subspace:
        return image(self.diff(n - 1)) if self.dim(n) else Subspace.zero(0)

    def cohomology(self, n: int) -> Quotient:
        return Quotient(self.cycles(n), self.boundaries(n))

    def cohomology_dims(self) -> list[int]:
        out = []
        for n in self.degrees:
            rk_out = self.diff(n).rank()
            rk_in = self.diff(n - 1).rank()
            out.append(self.dim(n) - rk_out - rk_in)
        return out

    def euler(self) -> int:
        return sum((-1) ** n * self.dim(n) for n in self.degrees)

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return (self.dims == other.dims and self.d == other.d and self.lo == other.lo
                and self.embedding == other.embedding)


def subsets(m: int, p: int) -> list[tuple]:
    return list(combinations(range(m), p))


def koszul_sign(J: Sequence[int], i: int) -> int:
    return -1 if sum(1 for j in J if j < i) % 2 else 1


def _koszul_full(n: int, fam: NilpotentFamily) -> list[Matrix]:
    m = fam.m
    out = []
    for p in range(m):
        src, dst = subsets(m, p), subsets(m, p + 1)
        pos = {J: a for a, J in enumerate(dst)}
        rows = [[ZERO] * (n * len(src)) for _ in range(n * len(dst))]
        for a, J in enumerate(src):
            for i in range(m):
                if i in J:
                    continue
                K = tuple(sorted(J + (i,)))
                b = pos[K]
                s = koszul_sign(J, i)
                N = fam[i]
                for r in range(n):
                    for c in range(n):
                        if N[r, c]:
                            rows[b * n + r][a * n + c] += s * N[r, c]
        out.append(Matrix(rows, n * len(src)))
    return out


def _check_family(fam: NilpotentFamily):
    rep = validate_family(fam)
    if not rep.ok:
        raise ValueError(f"invalid nilpotent family: {rep.failures()}")


def cube(n: int, fam: NilpotentFamily, term: Callable[[tuple], Subspace]) -> ChainComplex:
    """Subcomplex of the Koszul complex with ``term(J) ⊆ L`` at cube position ``J``."""
    _check_family(fam)
    m = fam.m
    full = _koszul_full(n, fam)
    emb = []
    for p in range(m + 1):
        vecs = []
        Js = subsets(m, p)
        for a, J in enumerate(Js):
            s = term(J)
            for v in s.basis:
                vecs.append((ZERO,) * (a * n) + v + (ZERO,) * ((len(Js) - a - 1) * n))
        emb.append(Subspace(n * len(Js), vecs))
    d = []
    for p in range(m):
        src, dst = emb[p], emb[p + 1]
        cols = []
        for v in src.basis:
            w = full[p].apply(v)
            if not dst.contains(w):
                raise ValueError(f"cube terms are not stable under the differential in degree {p}")
            cols.append(dst.coords(w))
        d.append(Matrix.from_columns(cols, dst.dim) if cols else Matrix.zeros(dst.dim, 0))
    cx = ChainComplex([e.dim for e in emb], d, 0, emb)
    if not cx.d_squared_zero():
        raise InternalInvariantError("d∘d is not zero on a cube complex")
    return cx


def koszul(n: int, fam: NilpotentFamily) -> ChainComplex:
    return cube(n, fam, lambda J: Subspace.full(n))


def ic(n: int, fam: NilpotentFamily) -> ChainComplex:
    return cube(n, fam, lambda J: image(fam.product(J)))


def omega_partial(n: int, fam: NilpotentFamily, axes: Sequence[int]) -> ChainComplex:
    """Terms ``N_{J ∩ M2} L`` where ``M2`` is the complement of ``axes`` (0-based)."""
    axes = set(axes)
    if any(a < 0 or a >= fam.m for a in axes):
        raise ValueError(f"axes {sorted(axes)} out of range for {fam.m} operators")
    return cube(n, fam, lambda J: image(fam.product([j for j in J if j not in axes])))


def is_subcomplex(a: ChainComplex, b: ChainComplex) -> bool:
    """Both are cube complexes over the same Koszul complex and ``a`` sits inside ``b``."""
    if a.embedding is None or b.embedding is None or len(a.dims) != len(b.dims):
        return False
    return all(x <= y for x, y in zip(a.embedding, b.embedding))


# filtered complexes ----------------------------------------------------------------------

@dataclass
class FilteredComplex:
    complex: ChainComplex
    filtrations: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict, compare=False)

    def filtration(self, name: str) -> list:
        if name not in self.filtrations:
            raise KeyError(f"no filtration named {name!r}")
        return self.filtrations[name]

    def stability_failures(self, name: str) -> list:
        """``[degree, index]`` pairs where ``d`` does not preserve the filtration."""
        cx = self.complex
        fl = self.filtration(name)
        bad = []
        for p in range(len(cx.d)):
            src, dst = fl[p], fl[p + 1]
            for k, s in src.jumps:
                if not s.image(cx.d[p]) <= dst[k]:
                    bad.append([cx.lo + p, k])
        return bad


def wj_all(fam: NilpotentFamily, W: IncFiltration, mode: str = "star") -> dict:
    """``W^J`` for every ``J`` (computed along sorted ``J``, one star at a time)."""
    out = {(): W}
    for p in range(1, fam.m + 1):
        for J in subsets(fam.m, p):
            op = star if mode == "star" else shriek
            # W^J = N_{j_1} * W^{J - j_1}
            out[J] = op(fam[J[0]], out[J[1:]])
    return out


def weight_on_koszul(n: int, W: IncFiltration, fam: NilpotentFamily) -> FilteredComplex:
    """``W_k Ω`` has ``W^J_{k-|J|}`` at cube position ``J``."""
    cx = koszul(n, fam)
    wj = wj_all(fam, W)
    m = fam.m
    los = [f.bounds()[0] for f in wj.values()]
    his = [f.bounds()[1] for f in wj.values()]
    lo, hi = min(los) - 1, max(his) + m + 1
    filts = []
    for p in range(m + 1):
        Js = subsets(m, p)
        size = n * len(Js)

        def level(k, Js=Js, p=p, size=size):
            vecs = []
            for a, J in enumerate(Js):
                for v in wj[J][k - p].basis:
                    vecs.append((ZERO,) * (a * n) + v + (ZERO,) * ((len(Js) - a - 1) * n))
            return Subspace(size, vecs)

        filts.append(IncFiltration.from_function(size, level, lo, hi))
    fc = FilteredComplex(cx, {"W": filts}, {"n": n, "fam": fam, "W": W, "WJ": wj, "star_range": (lo, hi)})
    bad = fc.stability_failures("W")
    if bad:
        raise ValueError(f"weight filtration is not a filtration by subcomplexes at {bad}")
    return fc


def graded_complex(fc: FilteredComplex, name: str, k: int) -> ChainComplex:
    cx = fc.complex
    fl = fc.filtration(name)
    qs = [fl[p].gr(k) for p in range(len(cx.dims))]
    d = [qs[p].induced(cx.d[p], qs[p + 1]) for p in range(len(cx.d))]
    return ChainComplex([q.dim for q in qs], d, cx.lo)


# P^J and Q^J -------------------------------------------------------------------------------

def _gr_map(m: Matrix, src: IncFiltration, a: int, dst: IncFiltration, b: int) -> Matrix:
    return src.gr(a).induced(m, dst.gr(b))


def pq_spaces(n: int, W: IncFiltration, fam: NilpotentFamily, J: Sequence[int], k: int,
              mode: str = "P", wj: dict | None = None) -> Subspace:
    """``P^J_k`` inside ``Gr^{W^J}_k`` (or ``Q^J_k`` inside ``Gr^{Wbar^J}_k``)."""
    J = tuple(sorted(J))
    if wj is None:
        wj = wj_all(fam, W, "star" if mode == "P" else "shriek")
    fj = wj[J]
    g = fj.gr(k)
    out = Subspace.full(g.dim)
    ident = Matrix.identity(n)
    for r in range(len(J)):
        for K in combinations(J, r):
            A = [j for j in J if j not in K]
            fk = wj[K]
            if mode == "P":
                m = _gr_map(ident, fj, k, fk, k + len(A))
            elif mode == "Q":
                m = _gr_map(fam.product(A), fj, k, fk, k - len(A))
            else:
                raise ValueError(f"unknown mode {mode!r}")
            out = out & kernel(m)
    return out


def graded_check(fc: FilteredComplex) -> Report:
    """Decomposition of ``Gr^W_k Ω`` into intersection complexes of primitive parts, and the identities behind it."""
    n, fam, wj = fc.extra["n"], fc.extra["fam"], fc.extra["WJ"]
    m = fam.m
    rep = Report()
    lo, hi = fc.extra["star_range"]
    ident = Matrix.identity(n)
    prim = {}
    for J in wj:
        for a in range(lo - m - 1, hi + m + 2):
            if wj[J].gr_dim(a):
                prim[(J, a)] = pq_spaces(n, fc.extra["W"], fam, J, a, "P", wj)

    def image_of(K, a, J):
        """``N_{J-K} P^K_a`` inside ``Gr^{W^J}_{a-|J-K|}``."""
        p = prim.get((K, a))
        if p is None or p.dim == 0:
            return None
        A = [j for j in J if j not in K]
        g = _gr_map(fam.product(A), wj[K], a, wj[J], a - len(A))
        return p.image(g)

    # Gr^{W^J}_k = ⊕_K N_{J-K} P^K_{k+|J-K|}, and the Im + Ker splitting
    for J in wj:
        for k in range(lo - m - 1, hi + m + 2):
            g_dim = wj[J].gr_dim(k)
            pieces = []
            for r in range(len(J) + 1):
                for K in combinations(J, r):
                    s = image_of(K, k + len(J) - r, J)
                    if s is not None:
                        pieces.append(s)
            total = sum(s.dim for s in pieces)
            span = Subspace(g_dim, [v for s in pieces for v in s.basis]).dim if g_dim else 0
            rep.check(total == g_dim and span == g_dim, "primitive_sum", [one_based(J), k],
                      gr=g_dim, summands=total, span=span)
            for r in range(len(J)):
                for K in combinations(J, r):
                    A = [j for j in J if j not in K]
                    i = k + len(A)
                    if not (g_dim or wj[K].gr_dim(i)):
                        continue
                    try:
                        nm = _gr_map(fam.product(A), wj[K], i, wj[J], k)
                        im_ = _gr_map(ident, wj[J], k, wj[K], i)
                    except ValueError:
                        rep.fail("im_ker_maps", [one_based(K), one_based(J), i])
                        continue
                    a, b = image(nm), kernel(im_)
                    rep.check((a & b).is_zero() and a.dim + b.dim == g_dim, "im_ker",
                              [one_based(K), one_based(J), i], image=a.dim, kernel=b.dim, gr=g_dim)
    # subcomplexes C_K of Gr^W_k Ω with terms N_{J-K} P^K_{k-|K|}
    fl = fc.filtration("W")
    klo = min(f.bounds()[0] for f in fl) - 1
    khi = max(f.bounds()[1] for f in fl) + 1
    table = []
    for k in range(klo, khi + 1):
        gcx = graded_complex(fc, "W", k)
        qs = [fl[p].gr(k) for p in range(m + 1)]
        blocks = {}
        for p in range(m + 1):
            Js = subsets(m, p)
            for K in wj:
                vecs = []
                for a, J in enumerate(Js):
                    if not set(K) <= set(J):
                        continue
                    s = image_of(K, k - len(K), J)
                    if s is None:
                        continue
                    # embed Gr^{W^J}_{k-p} coordinates into Gr^W_k of the degree-p term
                    gj = wj[J].gr(k - p)
                    for c in s.basis:
                        v = gj.lift(c)
                        vec = (ZERO,) * (a * n) + v + (ZERO,) * ((len(Js) - a - 1) * n)
                        vecs.append(qs[p].coords(vec))
                blocks.setdefault(K, []).append(Subspace(qs[p].dim, vecs))
        for p in range(m + 1):
            parts = [blocks[K][p] for K in blocks]
            dsum = sum(s.dim for s in parts)
            span = Subspace(qs[p].dim, [v for s in parts for v in s.basis]).dim
            rep.check(dsum == qs[p].dim and span == qs[p].dim, "ic_terms", [k, p],
                      gr=qs[p].dim, summands=dsum, span=span)
            if p < m:
                for K in blocks:
                    ok = blocks[K][p].image(gcx.d[p]) <= blocks[K][p + 1]
                    rep.check(ok, "ic_subcomplex", [k, p, one_based(K)])
            # compare against the intersection-complex term counts
            predicted = 0
            for J in subsets(m, p):
                for r in range(len(J) + 1):
                    for K in combinations(J, r):
                        s = image_of(K, k - len(K), J)
                        predicted += s.dim if s is not None else 0
            table.append([k, p, qs[p].dim, predicted])
            rep.check(predicted == qs[p].dim, "ic_dims", [k, p], gr=qs[p].dim, predicted=predicted)
    rep.payload["ic_decomposition"] = table
    return rep
