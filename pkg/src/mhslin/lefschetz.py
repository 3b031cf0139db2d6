"""Bigraded Hodge-Lefschetz structures with a differential.

A structure lives on ``K^n`` with a homogeneous basis: ``degrees[a]`` is the
bidegree ``(i, j)`` of ``e_a``.  The Hodge data is one global decreasing
filtration ``F`` compatible with the bigrading plus an HS weight per
bidegree.  ``S`` is a Gram matrix, ``S(x, y) = x^T S y`` on real vectors,
extended sesquilinearly.  Positivity on primitive pieces is tested on
``h(x, y) = S(Cx, conj(l1^i l2^j y))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactlin.filtration import IncFiltration
from .exactlin.matrix import Matrix, dot, vconj
from .exactlin.scalar import i_power, im_part, re_part
from .exactlin.subspace import Quotient, Subspace, kernel, sum_all
from .hodge import _tensor_filtration, bigrading, is_pure_hs
from .report import Report


@dataclass
class BigradedHL:
    degrees: list
    l1: Matrix
    l2: Matrix
    S: Matrix | None = None
    d: Matrix | None = None
    F: IncFiltration | None = None
    weights: dict = field(default_factory=dict)

    def __post_init__(self):
        self.degrees = [tuple(x) for x in self.degrees]
        n = len(self.degrees)
        for name in ("l1", "l2", "S", "d"):
            m = getattr(self, name)
            if m is not None and m.shape != (n, n):
                raise ValueError(f"{name} has shape {m.shape}, expected {(n, n)}")
        if self.F is None and self.weights:
            self.F = tate_filtration(self.degrees, self.weights)

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def support(self) -> list:
        return sorted(set(self.degrees))

    def indices(self, ij) -> list[int]:
        return [a for a, d in enumerate(self.degrees) if d == tuple(ij)]

    def piece(self, ij) -> Subspace:
        return Subspace.coordinate(self.dim, self.indices(ij))

    def hs_weight(self, ij):
        return self.weights.get(tuple(ij))


def tate_filtration(degrees: Sequence, weights: dict) -> IncFiltration:
    """Every piece of even weight ``2p`` is of Tate type ``(p, p)``."""
    hodge = []
    for d in degrees:
        w = weights[tuple(d)]
        if w % 2:
            raise ValueError(f"odd weight {w} at {d} has no Tate type")
        hodge.append(w // 2)
    return IncFiltration.hodge_from_weights(hodge) if degrees else IncFiltration(0, [], "dec")


def _degree_ok(m: Matrix, degrees, shift) -> list:
    bad = []
    for a in range(len(degrees)):
        for b in range(len(degrees)):
            if m[b, a] and (degrees[b][0] != degrees[a][0] + shift[0] or degrees[b][1] != degrees[a][1] + shift[1]):
                bad.append([a, b])
    return bad


def _restricted(m: Matrix, src: list[int], dst: list[int]) -> Matrix:
    return m.submatrix(dst, src)


def _hs_compatible(x: BigradedHL, m: Matrix, shift, name: str, rep: Report):
    if x.F is None:
        return
    for ij in x.support():
        tgt = (ij[0] + shift[0], ij[1] + shift[1])
        if not x.indices(tgt):
            continue
        ws, wt = x.hs_weight(ij), x.hs_weight(tgt)
        if ws is None or wt is None or (wt - ws) % 2:
            rep.fail("hs_compatible", [name, list(ij)], source=ws, target=wt)
            continue
        s = (wt - ws) // 2
        p = x.piece(ij)
        lo, hi = x.F.dec_bounds()
        for q in range(lo, hi + 1):
            if not (x.F.dec(q) & p).image(m) <= x.F.dec(q + s):
                rep.fail("hs_compatible", [name, list(ij)], level=q)
                break


def validate_hl(x: BigradedHL) -> Report:
    rep = Report()
    for name, m, sh in (("l1", x.l1, (2, 0)), ("l2", x.l2, (0, 2))):
        bad = _degree_ok(m, x.degrees, sh)
        rep.check(not bad, "degree", name, entries=bad[:5])
    rep.check(x.l1.commutator(x.l2).is_zero(), "commute")
    sup = x.support()
    for (i, j) in sup:
        for name, m, pos in (("l1", x.l1, 0), ("l2", x.l2, 1)):
            k = (i, j)[pos]
            if k <= 0:
                continue
            opp = (-i, j) if pos == 0 else (i, -j)
            src, dst = x.indices(opp), x.indices((i, j))
            if len(src) != len(dst) or _restricted(m ** k, src, dst).rank() != len(src):
                rep.fail("lefschetz_iso", [name, [i, j]], source=len(src), target=len(dst))
    # pieces whose mirror image is empty
    for (i, j) in sup:
        if i < 0 and not x.indices((-i, j)):
            rep.fail("lefschetz_iso", ["l1", [-i, j]], source=len(x.indices((i, j))), target=0)
        if j < 0 and not x.indices((i, -j)):
            rep.fail("lefschetz_iso", ["l2", [i, -j]], source=len(x.indices((i, j))), target=0)
    if x.F is not None:
        for ij in sup:
            p = x.piece(ij)
            w = x.hs_weight(ij)
            if w is None:
                rep.fail("hs_weight_missing", list(ij))
                continue
            f = x.F.induced_sub(p)
            rep.check(is_pure_hs(p.dim, f, f.conj(), w).ok, "pure", list(ij), weight=w)
        _hs_compatible(x, x.l1, (2, 0), "l1", rep)
        _hs_compatible(x, x.l2, (0, 2), "l2", rep)
    return rep


def primitive_bidecomposition(x: BigradedHL, check: bool = True) -> dict:
    """``L_0^{-i,-j} = L^{-i,-j} ∩ Ker l1^{i+1} ∩ Ker l2^{j+1}`` for ``i, j >= 0``."""
    if check:
        v = validate_hl(x)
        if not v.ok:
            raise ValueError(f"not a Lefschetz structure: {v.failures()}")
    out = {}
    for (a, b) in x.support():
        if a > 0 or b > 0:
            continue
        i, j = -a, -b
        s = x.piece((a, b)) & kernel(x.l1 ** (i + 1)) & kernel(x.l2 ** (j + 1))
        if s.dim:
            out[(a, b)] = s
    # reconstruction
    for (a, b) in x.support():
        parts = []
        for (c, e), s in out.items():
            r, t = a - c, b - e
            if r < 0 or t < 0 or r % 2 or t % 2:
                continue
            parts.append(s.image((x.l1 ** (r // 2)) @ (x.l2 ** (t // 2))))
        total = sum_all(x.dim, parts)
        if total != x.piece((a, b)) or sum(p.dim for p in parts) != total.dim:
            raise ValueError(f"primitive decomposition fails at {(a, b)}")
    return out


def _hermitian(x: BigradedHL, basis_types, op: Matrix) -> Matrix:
    vecs = [v for v, _ in basis_types]
    rows = []
    for v, t in basis_types:
        row = []
        for w in vecs:
            row.append(i_power(t) * dot(x.S.apply(vconj(op.apply(w))), v))
        rows.append(row)
    return Matrix(rows, len(vecs))


def _pd(h: Matrix):
    for r in range(1, h.nrows + 1):
        d = h.submatrix(range(r), range(r)).det()
        if im_part(d) != 0 or re_part(d) <= 0:
            return False, r
    return True, None


def validate_polarized_hl(x: BigradedHL) -> Report:
    rep = validate_hl(x)
    if x.S is None:
        raise ValueError("no pairing")
    if x.dim and x.S.det() == 0:
        raise ValueError("degenerate pairing")
    if not rep.ok:
        return rep
    g = x.S
    bad = [[a, b] for a in range(x.dim) for b in range(x.dim)
           if g[a, b] and (x.degrees[a][0] + x.degrees[b][0] or x.degrees[a][1] + x.degrees[b][1])]
    rep.check(not bad, "bigraded_pairing", None, entries=bad[:5])
    for name, l in (("l1", x.l1), ("l2", x.l2)):
        rep.check((l.T @ g + g @ l).is_zero(), "isotropic", name)
    if x.F is not None:
        for ij in x.support():
            opp = (-ij[0], -ij[1])
            if not x.indices(opp):
                continue
            c2 = x.hs_weight(ij) + x.hs_weight(opp)
            if c2 % 2:
                rep.fail("hs_pairing", list(ij), reason="weights of opposite pieces have odd sum")
                continue
            c = c2 // 2
            p, po = x.piece(ij), x.piece(opp)
            lo, hi = x.F.dec_bounds()
            for q in range(lo - 1, hi + 2):
                a = x.F.dec(q) & p
                b = x.F.dec(c + 1 - q) & po
                if any(dot(g.apply(w), v) for v in a.basis for w in b.basis):
                    rep.fail("hs_pairing", list(ij), level=q)
                    break
    if not rep.ok:
        return rep
    prims = primitive_bidecomposition(x, check=False)
    for (a, b), s in sorted(prims.items()):
        op = (x.l1 ** (-a)) @ (x.l2 ** (-b))
        if x.F is not None:
            p = x.piece((a, b))
            f = x.F.induced_sub(s)
            pieces = bigrading(f, f.conj(), x.hs_weight((a, b)))
            bt = []
            for (pp, qq), sub in sorted(pieces.items()):
                for v in sub.basis:
                    bt.append((s.from_coords(v), pp - qq))
        else:
            bt = [(v, 0) for v in s.basis]
        h = _hermitian(x, bt, op)
        rep.check(h == h.conj().T, "hermitian", [a, b])
        ok, minor = _pd(h)
        rep.check(ok, "positive", [a, b], minor=minor)
    return rep


def check_differential(x: BigradedHL) -> Report:
    rep = Report()
    d = x.d
    if d is None:
        raise ValueError("no differential")
    bad = _degree_ok(d, x.degrees, (1, 1))
    rep.check(not bad, "d_degree", None, entries=bad[:5])
    rep.check((d @ d).is_zero(), "d_squared")
    rep.check(d.commutator(x.l1).is_zero(), "d_commutes", "l1")
    rep.check(d.commutator(x.l2).is_zero(), "d_commutes", "l2")
    if x.S is not None:
        rep.check(d.T @ x.S == x.S @ d, "d_selfadjoint")
    if x.F is not None:
        _hs_compatible(x, d, (1, 1), "d", rep)
    return rep


class DifferentialError(ValueError):
    pass


def d_cohomology(x: BigradedHL) -> tuple[BigradedHL, Report]:
    """``H^{i,j} = Ker d / Im d`` with induced ``l1, l2, S`` and Hodge data."""
    axioms = check_differential(x)
    if not axioms.ok:
        raise DifferentialError(f"differential axioms fail: {axioms.failures()}")
    d = x.d
    kd = kernel(d)
    quots = []
    for ij in x.support():
        p = x.piece(ij)
        z = p & kd
        prev = x.piece((ij[0] - 1, ij[1] - 1))
        bnd = prev.image(d)
        q = Quotient(z, bnd)
        if q.dim:
            quots.append((ij, q))
    degrees = []
    reps = []
    for ij, q in quots:
        degrees.extend([ij] * q.dim)
        reps.extend(q.reps)
    offsets = {}
    pos = 0
    for ij, q in quots:
        offsets[ij] = pos
        pos += q.dim
    N = len(reps)

    def induced(m: Matrix, shift):
        rows = [[Fraction(0)] * N for _ in range(N)]
        for ij, q in quots:
            tgt = (ij[0] + shift[0], ij[1] + shift[1])
            tq = dict(quots).get(tgt)
            for a, v in enumerate(q.reps):
                w = m.apply(v)
                if tq is None:
                    continue
                c = tq.coords(w)
                for b, val in enumerate(c):
                    rows[offsets[tgt] + b][offsets[ij] + a] = val
        return Matrix(rows, N)

    l1 = induced(x.l1, (2, 0))
    l2 = induced(x.l2, (0, 2))
    S = None
    if x.S is not None:
        S = Matrix([[dot(x.S.apply(w), v) for w in reps] for v in reps], N)
    F = None
    weights = {}
    if x.F is not None:
        # the Hodge filtration in the new basis: levels of F through each quotient
        lo, hi = x.F.dec_bounds()
        levels = {}
        for p in range(lo, hi + 2):
            vecs = []
            for ij, q in quots:
                sub = q.project(x.F.dec(p) & x.piece(ij))
                for c in sub.basis:
                    vec = [Fraction(0)] * N
                    for b, val in enumerate(c):
                        vec[offsets[ij] + b] = val
                    vecs.append(tuple(vec))
            levels[p] = Subspace(N, vecs)
        levels[lo] = Subspace.full(N)
        F = IncFiltration.decreasing(N, levels) if N else IncFiltration(0, [], "dec")
        weights = {ij: x.weights[ij] for ij, _ in quots}
    h = BigradedHL(degrees, l1, l2, S, None, F, weights)
    rep = Report()
    rep.merge(axioms, "d.")
    if N:
        rep.merge(validate_polarized_hl(h), "cohomology.")
    rep.payload["dims"] = [[list(ij), q.dim] for ij, q in quots]
    return h, rep


def euler_by_line(x: BigradedHL) -> dict:
    """``sum (-1)^i dim L^{i,j}`` along each line ``i - j = c`` (d moves along these lines)."""
    out = {}
    for (i, j) in x.degrees:
        out[i - j] = out.get(i - j, 0) + (-1) ** (i % 2)
    return {k: v for k, v in sorted(out.items())}


# fixture builders ------------------------------------------------------------------------

def string(a: int, b: int, shift: int | None = None) -> BigradedHL:
    """``V_a ⊗ V_b``: ``sl2 x sl2`` string with Tate pieces of weight ``shift + j - i``.

    On ``V_a`` the pairing is ``s(l^k v, l^k' v) = (-1)^k`` when ``k + k' = a``.
    """
    if shift is None:
        shift = (a + b) % 2
    if (shift + a + b) % 2:
        raise ValueError("shift + a + b must be even to get Tate pieces")
    degs = []
    for k in range(a + 1):
        for m in range(b + 1):
            degs.append((-a + 2 * k, -b + 2 * m))
    la = _raise_op(a + 1)
    lb = _raise_op(b + 1)
    sa = _string_pairing(a)
    sb = _string_pairing(b)
    l1 = la.kron(Matrix.identity(b + 1))
    l2 = Matrix.identity(a + 1).kron(lb)
    S = sa.kron(sb)
    weights = {d: shift + d[1] - d[0] for d in degs}
    return BigradedHL(degs, l1, l2, S, None, None, weights)


def _raise_op(n: int) -> Matrix:
    return Matrix([[1 if r == c + 1 else 0 for c in range(n)] for r in range(n)]) if n else Matrix.zeros(0, 0)


def _string_pairing(a: int) -> Matrix:
    return Matrix([[(-1) ** k if k + kk == a else 0 for kk in range(a + 1)] for k in range(a + 1)])


def direct_sum(parts: Sequence[BigradedHL]) -> BigradedHL:
    degs = [d for p in parts for d in p.degrees]
    l1 = Matrix.block_diagonal([p.l1 for p in parts])
    l2 = Matrix.block_diagonal([p.l2 for p in parts])
    S = Matrix.block_diagonal([p.S for p in parts]) if all(p.S is not None for p in parts) else None
    d = None
    if any(p.d is not None for p in parts):
        d = Matrix.block_diagonal([p.d if p.d is not None else Matrix.zeros(p.dim, p.dim) for p in parts])
    weights = {}
    for p in parts:
        for k, w in p.weights.items():
            if weights.get(k, w) != w:
                raise ValueError(f"conflicting weights at {k}")
            weights[k] = w
    F = _sum_filtrations([p.F for p in parts]) if all(p.F is not None for p in parts) else None
    return BigradedHL(degs, l1, l2, S, d, F, weights)


def _sum_filtrations(fs):
    n = sum(f.ambient for f in fs)
    lo = min(f.dec_bounds()[0] for f in fs)
    hi = max(f.dec_bounds()[1] for f in fs)
    levels = {}
    for p in range(lo, hi + 2):
        vecs, off = [], 0
        for f in fs:
            for v in f.dec(p).basis:
                vecs.append((Fraction(0),) * off + v + (Fraction(0),) * (n - off - f.ambient))
            off += f.ambient
        levels[p] = Subspace(n, vecs)
    return IncFiltration.decreasing(n, levels)


def tensor(x: BigradedHL, y: BigradedHL) -> BigradedHL:
    """``x ⊗ y`` with ``l = l ⊗ 1 + 1 ⊗ l``, ``S = S_x ⊗ S_y`` and ``d = d_x ⊗ 1``."""
    degs = [(a[0] + b[0], a[1] + b[1]) for a in x.degrees for b in y.degrees]
    ix, iy = Matrix.identity(x.dim), Matrix.identity(y.dim)
    l1 = x.l1.kron(iy) + ix.kron(y.l1)
    l2 = x.l2.kron(iy) + ix.kron(y.l2)
    S = x.S.kron(y.S) if x.S is not None and y.S is not None else None
    d = x.d.kron(iy) if x.d is not None else None
    if y.d is not None:
        raise ValueError("only the left factor may carry a differential")
    weights = {}
    for a in x.degrees:
        for b in y.degrees:
            k = (a[0] + b[0], a[1] + b[1])
            w = x.weights[a] + y.weights[b]
            if weights.get(k, w) != w:
                raise ValueError(f"tensor weights are not constant on bidegree {k}")
            weights[k] = w
    F = None
    if x.F is not None and y.F is not None:
        F = _tensor_filtration(x.F, y.F, "dec")
    return BigradedHL(degs, l1, l2, S, d, F, weights)


def curve_degeneration() -> BigradedHL:
    """A small polarized complex with differential: two components meeting in two points.

    Basis: ``u (-1,0)``, ``u' (1,0)``, ``a1, a2 (0,-1)``, ``b1, b2 (0,1)``.
    """
    degs = [(-1, 0), (1, 0), (0, -1), (0, -1), (0, 1), (0, 1)]
    n = 6
    U, U1, A1, A2, B1, B2 = range(6)

    def op(entries):
        rows = [[0] * n for _ in range(n)]
        for (src, dst), v in entries.items():
            rows[dst][src] = v
        return Matrix(rows)

    l1 = op({(U, U1): 1})
    l2 = op({(A1, B1): 1, (A2, B2): 1})
    d = op({(U, B1): 1, (U, B2): -1, (A1, U1): -1, (A2, U1): 1})
    g = [[0] * n for _ in range(n)]
    g[U][U1], g[U1][U] = 1, -1
    for a, b in ((A1, B1), (A2, B2)):
        g[a][b], g[b][a] = 1, -1
    weights = {(-1, 0): 2, (1, 0): 0, (0, -1): 0, (0, 1): 2}
    return BigradedHL(degs, l1, l2, Matrix(g), d, None, weights)


def acyclic_pair(alpha: int = 1) -> BigradedHL:
    """Two strings exchanged by ``d``; satisfies the differential axioms with zero cohomology.

    ``d`` sends ``a_{-1} -> b_1`` and ``b_{-1} -> a_1``.  The pairing is not a
    polarization, which is irrelevant here because nothing survives.
    """
    degs = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    am, ap, bm, bp = range(4)
    rows = [[0] * 4 for _ in range(4)]
    rows[ap][am] = 1
    l1 = Matrix(rows)
    rows = [[0] * 4 for _ in range(4)]
    rows[bp][bm] = 1
    l2 = Matrix(rows)
    rows = [[0] * 4 for _ in range(4)]
    rows[bp][am] = 1
    rows[ap][bm] = 1
    d = Matrix(rows)
    g = [[0] * 4 for _ in range(4)]
    g[am][ap], g[ap][am] = alpha, -alpha
    g[bm][bp], g[bp][bm] = -alpha, alpha
    weights = {(-1, 0): 2, (1, 0): 0, (0, -1): 0, (0, 1): 2}
    return BigradedHL(degs, l1, l2, Matrix(g), d, None, weights)
