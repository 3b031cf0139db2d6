"""Monodromy and relative monodromy filtrations, and Kashiwara's star/shriek.

Index sets ``J`` are tuples of 0-based operator positions; reports print
them 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

from .exactlin.filtration import IncFiltration
from .exactlin.matrix import Matrix, ZERO, dot, lincomb, solve, vsub
from .exactlin.subspace import Quotient, Subspace, image, kernel
from .monodromy import NilpotentFamily, NotNilpotent, nilpotency_index
from .report import InternalInvariantError, Report


class RelativeMonodromyMissing(ValueError):
    """M(N, W) does not exist, so a construction that needs it cannot proceed."""

    def __init__(self, msg, level=None):
        super().__init__(msg)
        self.level = level


def one_based(J) -> list:
    return [j + 1 for j in J]


# pure monodromy filtration ------------------------------------------------------

def monodromy_filtration(n: Matrix, center: int = 0) -> IncFiltration:
    """``M_{c+k} = sum_{j >= max(0,-k)} Ker N^{k+j+1} ∩ Im N^j``."""
    r = nilpotency_index(n)
    dim = n.nrows
    if dim == 0:
        return IncFiltration(0, [])
    powers = [Matrix.identity(dim)]
    for _ in range(r):
        powers.append(powers[-1] @ n)
    kers = [kernel(p) for p in powers]
    ims = [image(p) for p in powers]

    def ker(e):
        return kers[min(e, r)]

    def im(e):
        return ims[e] if e <= r else ims[r]

    levels = []
    for k in range(-r, r):
        s = Subspace.zero(dim)
        for j in range(max(0, -k), r):
            s = s + (ker(k + j + 1) & im(j))
        levels.append((center + k, s))
    return IncFiltration(dim, levels)


def gr_gr(m: IncFiltration, w: IncFiltration, j: int, l: int) -> Quotient:
    """``Gr^M_j Gr^W_l = (M_j∩W_l + W_{l-1}) / (M_{j-1}∩W_l + W_{l-1})``."""
    wl, wl1 = w[l], w[l - 1]
    return Quotient((m[j] & wl) + wl1, (m[j - 1] & wl) + wl1)


def verify_relative_monodromy(m: IncFiltration, n: Matrix, w: IncFiltration) -> Report:
    """Check (a) ``N M_i ⊆ M_{i-2}`` and (b) the graded isomorphisms.

    (b) asks that ``N^k: Gr^M_{l+k} Gr^W_l -> Gr^M_{l-k} Gr^W_l`` be an
    isomorphism for every ``k >= 0`` and every weight ``l`` of ``W``.
    Failed pairs are reported as ``[k, l]``.
    """
    rep = Report()
    if m.ambient != n.nrows or w.ambient != n.nrows:
        raise ValueError("dimension mismatch between M, N and W")
    for i in m.stability_failures(n, -2):
        rep.fail("shift", i)
    mlo, mhi = m.bounds()
    span = max(mhi - mlo + 2, 1)
    nk = Matrix.identity(n.nrows)
    for k in range(0, span + 1):
        for l in w.weights():
            src = gr_gr(m, w, l + k, l)
            dst = gr_gr(m, w, l - k, l)
            if src.dim == 0 and dst.dim == 0:
                continue
            if src.dim != dst.dim:
                rep.fail("graded_iso", [k, l], source=src.dim, target=dst.dim)
                continue
            try:
                g = src.induced(nk, dst)
            except ValueError:
                rep.fail("graded_iso", [k, l], reason="not induced")
                continue
            if g.rank() != src.dim:
                rep.fail("graded_iso", [k, l], rank=g.rank(), dim=src.dim)
        nk = nk @ n
    return rep


# relative monodromy ---------------------------------------------------------------

@dataclass
class RelMonodromyResult:
    status: str
    filtration: IncFiltration | None = None
    certificate: Report = field(default_factory=Report)
    level: int | None = None

    @property
    def exists(self) -> bool:
        return self.status == "exists"


def _check_pre(n: Matrix, w: IncFiltration):
    if not n.is_square() or n.nrows != w.ambient:
        raise ValueError("N and W live in different dimensions")
    nilpotency_index(n)
    if not w.is_stable(n):
        raise ValueError("N does not preserve W")


def relative_monodromy(n: Matrix, w: IncFiltration) -> RelMonodromyResult:
    """The relative monodromy filtration ``M(N, W)``, or ``not_exists``.

    Levels of ``W`` are processed bottom-up.  On ``Gr^W_l`` the centered
    filtration is known; its adapted basis is lifted to ``W_l`` and the lifts
    are corrected by unknown vectors of ``W_{l-1}`` so that ``N`` lowers the
    new filtration by two.  The corrections solve one linear system per level;
    an inconsistent system means no relative filtration exists.
    """
    _check_pre(n, w)
    dim = n.nrows
    cert = Report(status="exists")
    if dim == 0:
        return RelMonodromyResult("exists", IncFiltration(0, []), cert)
    # current filtration of U = W_{l-1}: dict k -> subspace plus range
    levels: dict[int, Subspace] = {}
    u = Subspace.zero(dim)

    def cur(k):
        if not levels:
            return Subspace.zero(dim)
        lo, hi = min(levels), max(levels)
        if k < lo:
            return Subspace.zero(dim)
        if k > hi:
            return u
        return levels[k]

    for l in w.weights():
        top = w[l]
        q = Quotient(top, u)
        nq = q.endo(n)
        mq = monodromy_filtration(nq, l)
        basis = []      # (weight, vector in q coordinates)
        for k, _ in mq.jumps:
            piece = Quotient(mq[k], mq[k - 1])
            basis.extend((k, r) for r in piece.reps)
        bmat = Matrix.from_columns([b for _, b in basis], q.dim)
        lifts = [q.lift(b) for _, b in basis]
        coeffs = []
        for k, b in basis:
            c = solve(bmat.rows, nq.apply(b), len(basis))
            if c is None:
                raise InternalInvariantError("adapted basis does not span the graded piece")
            coeffs.append(c)
        ub = list(u.basis)
        d = len(ub)
        nu = [n.apply(x) for x in ub]
        nv = [n.apply(x) for x in lifts]
        nb = len(basis)
        rows, rhs = [], []
        for i, (k, _) in enumerate(basis):
            ann = cur(k - 2).annihilator()
            if ann.is_zero():
                continue
            target = vsub(nv[i], lincomb(coeffs[i], lifts, dim))
            for phi in ann.basis:
                row = [ZERO] * (nb * d)
                for s in range(d):
                    row[i * d + s] += dot(phi, nu[s])
                for j in range(nb):
                    c = coeffs[i][j]
                    if c:
                        for s in range(d):
                            row[j * d + s] -= c * dot(phi, ub[s])
                rows.append(row)
                rhs.append(-dot(phi, target))
        sol = solve(rows, rhs, nb * d) if rows else (ZERO,) * (nb * d)
        if sol is None:
            cert.status = "not_exists"
            cert.fail("level_infeasible", l, unknowns=nb * d, equations=len(rows))
            return RelMonodromyResult("not_exists", None, cert, l)
        fixed = [lincomb(sol[i * d:(i + 1) * d], ub, dim) for i in range(nb)]
        fixed = [tuple(a + b for a, b in zip(lifts[i], fixed[i])) for i in range(nb)]
        klo = min([k for k, _ in basis] + ([min(levels)] if levels else []))
        khi = max([k for k, _ in basis] + ([max(levels)] if levels else []))
        new = {}
        for k in range(klo, khi + 1):
            new[k] = cur(k) + Subspace(dim, [fixed[i] for i, (kk, _) in enumerate(basis) if kk <= k])
        levels = new
        u = top
        cert.info("level_solved", l, unknowns=nb * d, equations=len(rows))
    m = IncFiltration(dim, sorted(levels.items()))
    ver = verify_relative_monodromy(m, n, w)
    if not ver.ok:
        raise InternalInvariantError(f"constructed filtration failed verification: {ver.failures()}")
    cert.merge(ver, "verify.")
    return RelMonodromyResult("exists", m, cert)


def require_relative(n: Matrix, w: IncFiltration) -> IncFiltration:
    res = relative_monodromy(n, w)
    if not res.exists:
        raise RelativeMonodromyMissing(f"M(N, W) does not exist (level {res.level})", res.level)
    return res.filtration


# primitive decomposition -----------------------------------------------------------

def primitive_parts(n: Matrix, m: IncFiltration | None = None, center: int = 0) -> dict[int, Subspace]:
    """``P_i = Ker(N^{i+1}: Gr^M_{c+i} -> Gr^M_{c-i-2})`` in the coordinates of ``Gr^M_{c+i}``."""
    if m is None:
        m = monodromy_filtration(n, center)
    else:
        ver = verify_relative_monodromy(m, n, IncFiltration.trivial(n.nrows, center))
        if not ver.ok:
            raise ValueError("M is not the centered monodromy filtration of N")
    lo, hi = m.bounds()
    out = {}
    for i in range(0, max(hi - center, 0) + 1):
        src = m.gr(center + i)
        dst = m.gr(center - i - 2)
        g = src.induced(n ** (i + 1), dst)
        out[i] = kernel(g) if src.dim else Subspace.zero(0)
    for i in range(0, max(hi - center, 0) + 1):
        expect = sum(out[j].dim for j in range(i, max(hi - center, 0) + 1, 2))
        if m.gr_dim(center + i) != expect:
            raise InternalInvariantError(f"primitive decomposition fails in degree {i}")
    return out


def jordan_type_from_ranks(n: Matrix) -> list[int]:
    r = nilpotency_index(n)
    ranks = [(n ** e).rank() for e in range(r + 2)]
    sizes = []
    for s in range(r, 0, -1):
        at_least = ranks[s - 1] - ranks[s]
        at_least_next = ranks[s] - ranks[s + 1]
        sizes.extend([s] * (at_least - at_least_next))
    return sizes


def jordan_type(n: Matrix) -> list[int]:
    """Jordan block sizes (descending) read off the primitive parts."""
    if not n.is_square():
        raise NotNilpotent("non-square matrix")
    if n.nrows == 0:
        return []
    parts = primitive_parts(n)
    sizes = []
    for i in sorted(parts, reverse=True):
        sizes.extend([i + 1] * parts[i].dim)
    if sizes != jordan_type_from_ranks(n):
        raise InternalInvariantError("primitive parts disagree with the rank sequence")
    return sizes


# star and shriek ----------------------------------------------------------------------

def _range(w: IncFiltration, m: IncFiltration):
    wlo, whi = w.bounds()
    mlo, mhi = m.bounds()
    return min(wlo, mlo) - 2, max(whi, mhi) + 2


def star(n: Matrix, w: IncFiltration, m: IncFiltration | None = None) -> IncFiltration:
    """``(N*W)_k = N W_{k+1} + M_k ∩ W_k``."""
    if m is None:
        m = require_relative(n, w)
    lo, hi = _range(w, m)
    return IncFiltration.from_function(w.ambient, lambda k: w[k + 1].image(n) + (m[k] & w[k]), lo, hi)


def shriek(n: Matrix, w: IncFiltration, m: IncFiltration | None = None) -> IncFiltration:
    """``(N!W)_k = W_{k-1} + M_k ∩ N^{-1} W_{k-1}``."""
    if m is None:
        m = require_relative(n, w)
    lo, hi = _range(w, m)
    return IncFiltration.from_function(w.ambient, lambda k: w[k - 1] + (m[k] & w[k - 1].preimage(n)), lo, hi)


def iterated(fam: NilpotentFamily, J: Sequence[int], w: IncFiltration, mode: str = "star",
             order: Sequence[int] | None = None) -> IncFiltration:
    """``W^J = N_{i_1} * (... (N_{i_j} * W))``; ``mode="shriek"`` gives the bar version.

    ``order`` lists ``J`` outermost first; the innermost operation is applied
    first.  The default order is ``sorted(J)``.
    """
    op = {"star": star, "shriek": shriek}.get(mode)
    if op is None:
        raise ValueError(f"unknown mode {mode!r}")
    seq = list(sorted(J) if order is None else order)
    if sorted(seq) != sorted(set(J)):
        raise ValueError("order is not a permutation of J")
    out = w
    for j in reversed(seq):
        out = op(fam[j], out)
    return out


def order_independence(fam: NilpotentFamily, J: Sequence[int], w: IncFiltration, mode: str = "star",
                       max_perms: int = 24) -> Report:
    rep = Report()
    base = None
    for count, perm in enumerate(permutations(sorted(J))):
        if count >= max_perms:
            break
        try:
            got = iterated(fam, J, w, mode, perm)
        except RelativeMonodromyMissing as e:
            rep.fail("intermediate_missing", one_based(perm), level=e.level)
            continue
        if base is None:
            base = got
        elif got != base:
            rep.fail("order_dependent", one_based(perm))
    return rep


# distributivity --------------------------------------------------------------------------

def is_distributive(filtrations: Sequence[IncFiltration]) -> Report:
    """``(A_i + B_j) ∩ C_k = A_i∩C_k + B_j∩C_k`` on all jump levels of all triples."""
    rep = Report()
    fs = list(filtrations)
    if fs and any(f.ambient != fs[0].ambient for f in fs):
        raise ValueError("filtrations live in different dimensions")
    levels = [[(k, s) for k, s in f.jumps] for f in fs]
    for a in range(len(fs)):
        for b in range(a + 1, len(fs)):
            for c in range(len(fs)):
                if c in (a, b):
                    continue
                for p, A in levels[a]:
                    for q, B in levels[b]:
                        for r, C in levels[c]:
                            lhs = (A + B) & C
                            rhs = (A & C) + (B & C)
                            if lhs != rhs:
                                rep.fail("distributive", {"filtrations": [a, b, c], "levels": [p, q, r]},
                                         lhs=lhs.dim, rhs=rhs.dim)
    return rep


# graded identities -----------------------------------------------------------------------

def distinguished_pair(n: Matrix, w: IncFiltration, m: IncFiltration | None = None) -> Report:
    """Split ``Gr^{N*W}_k`` as the image of ``N: Gr^W_{k+1}`` plus the kernel of ``I``."""
    if m is None:
        m = require_relative(n, w)
    sw = star(n, w, m)
    rep = Report()
    lo, hi = _range(w, m)
    for k in range(lo, hi + 1):
        g = sw.gr(k)
        if g.dim == 0:
            continue
        gw = w.gr(k + 1)
        nmap = gw.induced(n, g)
        imap = g.induced(Matrix.identity(n.nrows), gw)
        a = image(nmap)
        b = kernel(imap)
        rk = gw.endo(n).rank()
        rep.check(a.dim == rk, "image_rank", k, image=a.dim, rank=rk)
        rep.check((a & b).is_zero(), "direct", k)
        rep.check(a.dim + b.dim == g.dim, "dimension", k, image=a.dim, kernel=b.dim, total=g.dim)
    return rep


def graded_split(n: Matrix, w: IncFiltration, m: IncFiltration | None = None) -> Report:
    """Graded dims of ``0 -> NL -> L -> L/NL -> 0`` under ``N*W``."""
    if m is None:
        m = require_relative(n, w)
    sw = star(n, w, m)
    dim = n.nrows
    nl = image(n)
    on_nl = Quotient(nl)
    on_q = Quotient(Subspace.full(dim), nl)
    f_nl = sw.induced_on(on_nl)
    f_q = sw.induced_on(on_q)
    m_q = m.induced_on(on_q)
    rep = Report()
    lo, hi = _range(w, m)
    # NL matches the graded images of N only when N is strict for W
    strict = n.rank() == sum(w.gr(k).endo(n).rank() for k in w.weights())
    if not strict:
        rep.info("sub_image", None, strict=False)
    for k in range(lo, hi + 1):
        a, b, c = f_nl.gr_dim(k), sw.gr_dim(k), f_q.gr_dim(k)
        rep.check(a + c == b, "additive", k, sub=a, total=b, quotient=c)
        if strict:
            rk = w.gr(k + 1).endo(n).rank()
            rep.check(a == rk, "sub_image", k, sub=a, rank=rk)
        rep.check(c == m_q.gr_dim(k), "quotient_m", k, quotient=c, m=m_q.gr_dim(k))
    rep.payload["quotient_equal"] = f_q.same_levels(m_q)
    return rep


def zassenhaus(w: IncFiltration, m: IncFiltration) -> Report:
    """``dim Gr^W_k Gr^M_l = dim Gr^M_l Gr^W_k``."""
    rep = Report()
    for k in w.weights():
        for l in m.weights():
            lhs = gr_gr(m, w, l, k).dim
            rhs = gr_gr(w, m, k, l).dim
            rep.check(lhs == rhs, "zassenhaus", [k, l], gr_m_gr_w=lhs, gr_w_gr_m=rhs)
    return rep


def cone_filtration(fam: NilpotentFamily, J: Sequence[int], w: IncFiltration) -> RelMonodromyResult:
    """``M(J) = M(sum_{j in J} N_j, W)``."""
    return relative_monodromy(fam.total(sorted(J)), w)


def kashiwara_identity(fam: NilpotentFamily, J1: Sequence[int], J2: Sequence[int], w: IncFiltration) -> Report:
    """``M(J1 ∪ J2) = M(sum_{J1} N, M(J2))`` for disjoint ``J1``, ``J2``."""
    if set(J1) & set(J2):
        raise ValueError("index sets must be disjoint")
    rep = Report()
    loc = [one_based(sorted(J1)), one_based(sorted(J2))]
    whole = cone_filtration(fam, set(J1) | set(J2), w)
    inner = cone_filtration(fam, J2, w)
    if not (whole.exists and inner.exists):
        rep.fail("relative_missing", loc, whole=whole.exists, inner=inner.exists)
        return rep
    outer = relative_monodromy(fam.total(sorted(J1)), inner.filtration)
    if not outer.exists:
        rep.fail("relative_missing", loc, outer=False)
        return rep
    rep.check(outer.filtration.same_levels(whole.filtration), "kashiwara_identity", loc)
    return rep
