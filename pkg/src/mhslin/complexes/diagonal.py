"""Total complex of a finite cosimplicial family of filtered complexes.

``K_0, ..., K_P`` carry filtrations ``W^f``, ``W`` (increasing) and ``F``
(decreasing); ``cofaces[p]`` lists the maps ``delta_i: K_p -> K_{p+1}``,
each given per degree of ``K_p``.  The total complex has
``s^n = ⊕_p K_p^{n-p}`` and ``D = sum_i (-1)^i delta_i + (-1)^p d_{K_p}``.
"""

from __future__ import annotations

from typing import Sequence

from ..exactlin.filtration import IncFiltration
from ..exactlin.matrix import Matrix, ZERO
from ..exactlin.subspace import Subspace
from ..report import Report
from .chain import ChainComplex, FilteredComplex


def _coface(cof: Sequence, src: ChainComplex, dst: ChainComplex, q: int) -> Matrix:
    """Degree-``q`` component of a coface given as a list aligned with ``src.degrees``."""
    a = q - src.lo
    if 0 <= a < len(cof):
        m = cof[a]
        if m.shape != (dst.dim(q), src.dim(q)):
            raise ValueError(f"coface in degree {q} has shape {m.shape}")
        return m
    return Matrix.zeros(dst.dim(q), src.dim(q))


def _check_cofaces(terms: Sequence[FilteredComplex], cofaces: Sequence) -> None:
    for p, maps in enumerate(cofaces):
        src, dst = terms[p].complex, terms[p + 1].complex
        for i, cof in enumerate(maps):
            for q in src.degrees:
                lhs = _coface(cof, src, dst, q + 1) @ src.diff(q)
                rhs = dst.diff(q) @ _coface(cof, src, dst, q)
                if lhs != rhs:
                    raise ValueError(f"coface {i} of term {p} is not a chain map in degree {q}")
                m = _coface(cof, src, dst, q)
                for name in ("Wf", "W", "F"):
                    a = terms[p].filtrations[name][q - src.lo]
                    b = terms[p + 1].filtrations[name][q - dst.lo] if dst.dim(q) else None
                    if b is None:
                        continue
                    if any(not s.image(m) <= b[k] for k, s in a.jumps):
                        raise ValueError(f"coface {i} of term {p} does not preserve {name} in degree {q}")
    for p in range(len(cofaces) - 1):
        lo, hi = cofaces[p], cofaces[p + 1]
        src, mid, dst = terms[p].complex, terms[p + 1].complex, terms[p + 2].complex
        for j in range(1, len(hi)):
            for i in range(j):
                if i >= len(hi) or j - 1 >= len(lo) or i >= len(lo):
                    continue
                for q in src.degrees:
                    lhs = _coface(hi[j], mid, dst, q) @ _coface(lo[i], src, mid, q)
                    rhs = _coface(hi[i], mid, dst, q) @ _coface(lo[j - 1], src, mid, q)
                    if lhs != rhs:
                        raise ValueError(f"cosimplicial identity fails for (i, j) = ({i}, {j}) at term {p}")


def diagonal_image(terms: Sequence[FilteredComplex], cofaces: Sequence) -> FilteredComplex:
    if not terms:
        raise ValueError("empty family")
    if len(cofaces) > len(terms) - 1:
        raise ValueError("more coface levels than terms")
    cofaces = list(cofaces) + [[] for _ in range(len(terms) - 1 - len(cofaces))]
    for t in terms:
        for name in ("Wf", "W", "F"):
            if name not in t.filtrations:
                raise ValueError(f"filtration {name!r} missing on a term")
    _check_cofaces(terms, cofaces)
    P = len(terms) - 1
    cxs = [t.complex for t in terms]
    lo = min(c.lo for c in cxs)
    hi = max(c.lo + len(c.dims) - 1 + p for p, c in enumerate(cxs))
    degs = list(range(lo, hi + 1))
    layout = {}           # n -> list of (p, offset, size)
    sizes = {}
    for n in degs:
        off = 0
        parts = []
        for p, c in enumerate(cxs):
            s = c.dim(n - p)
            parts.append((p, off, s))
            off += s
        layout[n], sizes[n] = parts, off
    d = []
    for n in degs[:-1]:
        rows = [[ZERO] * sizes[n] for _ in range(sizes[n + 1])]
        src_parts, dst_parts = layout[n], layout[n + 1]
        for p, off, s in src_parts:
            if not s:
                continue
            q = n - p
            blocks = [(dst_parts[p], cxs[p].diff(q).scale((-1) ** p))]
            if p < P:
                tot = Matrix.zeros(cxs[p + 1].dim(q), cxs[p].dim(q))
                for i, cof in enumerate(cofaces[p]):
                    tot = tot + _coface(cof, cxs[p], cxs[p + 1], q).scale((-1) ** i)
                blocks.append((dst_parts[p + 1], tot))
            for (_, doff, ds), m in blocks:
                for r in range(ds):
                    for c in range(s):
                        if m[r, c]:
                            rows[doff + r][off + c] += m[r, c]
        d.append(Matrix(rows, sizes[n]))
    total = ChainComplex([sizes[n] for n in degs], d, lo)
    if not total.d_squared_zero():
        raise ValueError("the total differential does not square to zero")

    def piece(n, name, k, shift):
        vecs = []
        for p, off, s in layout[n]:
            if not s:
                continue
            fl = terms[p].filtrations[name][n - p - cxs[p].lo]
            sub = fl.dec(k) if name == "F" else fl[k + p * shift]
            for v in sub.basis:
                vecs.append((ZERO,) * off + tuple(v) + (ZERO,) * (sizes[n] - off - s))
        return Subspace(sizes[n], vecs)

    def bounds(name, shift):
        los, his = [], []
        for p, t in enumerate(terms):
            for f in t.filtrations[name]:
                b = f.dec_bounds() if name == "F" else f.bounds()
                los.append(b[0] - p * shift - 1)
                his.append(b[1] + p * shift + 1)
        return min(los), max(his)

    filts = {}
    for name in ("Wf", "W"):
        a, b = bounds(name, 1)
        filts[name] = [IncFiltration.from_function(sizes[n], lambda k, n=n, name=name: piece(n, name, k, 1),
                                                   a - P - 1, b + P + 1) for n in degs]
    a, b = bounds("F", 0)
    filts["F"] = [IncFiltration.decreasing(sizes[n], {k: piece(n, "F", k, 0) for k in range(a, b + 1)})
                  for n in degs]
    fc = FilteredComplex(total, filts, {"layout": layout, "P": P})
    for name in filts:
        bad = fc.stability_failures(name)
        if bad:
            raise ValueError(f"diagonal filtration {name} is not d-stable at {bad}")
    return fc


def _sq_dim(fw: IncFiltration, ff: IncFiltration, i: int, j: int, k: int | None = None) -> int:
    """``dim (W^f_i/W^f_j)`` or ``dim Gr^W_k (W^f_i/W^f_j)``."""
    if k is None:
        return ff[i].dim - ff[j].dim
    top = (fw[k] & ff[i]) + ff[j]
    bot = (fw[k - 1] & ff[i]) + ff[j]
    return top.dim - bot.dim


def diagonal_lemma_check(terms: Sequence[FilteredComplex], fc: FilteredComplex) -> Report:
    """Subquotient and graded dims of the total filtrations against the termwise sums."""
    rep = Report()
    cxs = [t.complex for t in terms]
    tot = fc.complex
    wf_all = [k for t in terms for f in t.filtrations["Wf"] for k in f.weights()]
    w_all = [k for t in terms for f in t.filtrations["W"] for k in f.weights()]
    P = len(terms) - 1
    cut = range(min(wf_all) - P - 1, max(wf_all) + 1) if wf_all else range(0)
    wr = range(min(w_all) - P - 1, max(w_all) + 1) if w_all else range(0)
    count = 0
    for n in tot.degrees:
        a = n - tot.lo
        TW, TF = fc.filtrations["W"][a], fc.filtrations["Wf"][a]
        for i in cut:
            for j in cut:
                if j >= i:
                    continue
                lhs = _sq_dim(TW, TF, i, j)
                rhs = 0
                for p, c in enumerate(cxs):
                    if c.dim(n - p):
                        f = terms[p].filtrations
                        b = n - p - c.lo
                        rhs += _sq_dim(f["W"][b], f["Wf"][b], i + p, j + p)
                rep.check(lhs == rhs, "subquotient_dims", [n, i, j], total=lhs, termwise=rhs)
                for k in wr:
                    lhs = _sq_dim(TW, TF, i, j, k)
                    rhs = 0
                    for p, c in enumerate(cxs):
                        if c.dim(n - p):
                            f = terms[p].filtrations
                            b = n - p - c.lo
                            rhs += _sq_dim(f["W"][b], f["Wf"][b], i + p, j + p, k + p)
                    rep.check(lhs == rhs, "graded_dims", [n, i, j, k], total=lhs, termwise=rhs)
                    count += 1
    rep.payload["checked"] = count
    return rep
