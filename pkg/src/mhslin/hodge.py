"""Hodge structures, mixed Hodge structures, nilpotent orbits and IMHS.

Conventions
-----------
* A decreasing filtration ``F`` is an :class:`IncFiltration` with polarity
  ``"dec"`` and ``F.dec(p) = F^p``.
* A pairing is a Gram matrix ``G`` with ``S(x, sigma y) = x^T G conj(y)``.
  Parity ``k`` means ``G = (-1)^k conj(G)^T``.
* Positivity is tested on the Hermitian form ``h(x, y) = S(Cx, sigma y)``
  with ``C = i^(p-q)`` on ``L^{p,q}``.
* Graded polarizations ``S_k`` are written in the canonical coordinates of
  ``Gr^W_k = Quotient(W_k, W_{k-1})``; for a coordinate filtration these are
  the standard basis vectors of weight ``k`` in index order.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exactlin.filtration import IncFiltration
from .exactlin.matrix import Matrix, dot, nullspace, vconj
from .exactlin.scalar import i_power, im_part, re_part
from .exactlin.subspace import Quotient, Subspace, image, kernel, sum_all
from .filtration_ops import monodromy_filtration, one_based, primitive_parts, relative_monodromy
from .monodromy import is_nilpotent
from .report import InternalInvariantError, Report

DIM_GUARD = 64


def default_seed() -> int:
    try:
        return int(os.environ.get("MHSLIN_SEED", "0"))
    except ValueError:
        return 0


@dataclass
class Pairing:
    matrix: Matrix
    parity: int

    def value(self, x, y):
        """``S(x, sigma y)``."""
        return dot(self.matrix.apply(vconj(y)), x)

    def symmetric(self) -> bool:
        sign = -1 if self.parity % 2 else 1
        return self.matrix == self.matrix.conj().T.scale(sign)

    def restrict(self, basis: Sequence) -> "Pairing":
        """Gram matrix on the span of ``basis`` (vectors in the current coordinates)."""
        b = Matrix.from_columns(list(basis), self.matrix.nrows) if basis else Matrix.zeros(self.matrix.nrows, 0)
        return Pairing(b.T @ self.matrix @ b.conj(), self.parity)


class HodgeData:
    """``(L; W, F, Fbar; N_1..N_m)`` with optional polarizations.

    ``polarizations`` maps a weight ``k`` to a :class:`Pairing` on
    ``Gr^W_k``; ``S`` is a single global pairing (used for pure orbits).
    """

    def __init__(self, dim: int, W: IncFiltration | None = None, F: IncFiltration | None = None,
                 Fbar: IncFiltration | None = None, nilpotents: Sequence[Matrix] = (),
                 polarizations: dict | None = None, S: Pairing | None = None, weight_offset: int = 0):
        self.dim = dim
        self.W = W if W is not None else IncFiltration.trivial(dim, 0)
        self.F = F if F is not None else IncFiltration.decreasing(dim, {0: Subspace.full(dim)})
        if self.F.polarity != "dec":
            raise ValueError("F must be a decreasing filtration")
        if not self.W.is_rational():
            raise ValueError("W must be defined over the rationals")
        self.nilpotents = list(nilpotents)
        for n in self.nilpotents:
            if n.shape != (dim, dim):
                raise ValueError("nilpotent operator has the wrong shape")
            if not n.is_rational():
                raise ValueError("nilpotent operators must be rational")
        self.warnings = []
        conj_f = self.F.conj()
        if Fbar is None:
            self.Fbar = conj_f
            self.fbar_derived = True
        else:
            self.Fbar = Fbar
            self.fbar_derived = False
            if Fbar != conj_f:
                self.warnings.append("fbar_not_conjugate")
        self.polarizations = dict(polarizations or {})
        self.S = S
        self.weight_offset = weight_offset

    @property
    def m(self) -> int:
        return len(self.nilpotents)

    def total(self, J: Sequence[int], weights=None) -> Matrix:
        out = Matrix.zeros(self.dim, self.dim)
        for pos, j in enumerate(J):
            t = 1 if weights is None else weights[pos]
            out = out + self.nilpotents[j].scale(t)
        return out

    def replace(self, **kw) -> "HodgeData":
        args = dict(dim=self.dim, W=self.W, F=self.F, Fbar=None if self.fbar_derived else self.Fbar,
                    nilpotents=self.nilpotents, polarizations=self.polarizations, S=self.S,
                    weight_offset=self.weight_offset)
        args.update(kw)
        return HodgeData(**args)

    def graded(self, k: int) -> "HodgeData":
        """``Gr^W_k`` with induced F, Fbar, N and ``S = S_k``; W trivial of weight ``k``."""
        q = self.W.gr(k)
        return HodgeData(q.dim, IncFiltration.trivial(q.dim, k), self.F.induced_on(q),
                         None if self.fbar_derived else self.Fbar.induced_on(q),
                         [q.endo(n) for n in self.nilpotents], S=self.polarizations.get(k))

    def __eq__(self, other):
        if not isinstance(other, HodgeData):
            return NotImplemented
        return (self.dim == other.dim and self.W == other.W and self.F == other.F
                and self.Fbar == other.Fbar and self.nilpotents == other.nilpotents
                and self.polarizations == other.polarizations and self.S == other.S
                and self.weight_offset == other.weight_offset)

    def __repr__(self):
        return f"HodgeData(dim={self.dim}, W={self.W!r}, m={self.m})"


# pure Hodge structures ------------------------------------------------------------

def _p_range(f: IncFiltration, fbar: IncFiltration, k: int):
    plo, phi = f.dec_bounds()
    qlo, qhi = fbar.dec_bounds()
    return range(min(plo, k - qhi) - 1, max(phi, k - qlo) + 2)


def bigrading(f: IncFiltration, fbar: IncFiltration, k: int) -> dict:
    """``{(p, k-p): F^p ∩ Fbar^{k-p}}`` for the nonzero pieces."""
    out = {}
    for p in _p_range(f, fbar, k):
        s = f.dec(p) & fbar.dec(k - p)
        if s.dim:
            out[(p, k - p)] = s
    return out


def is_pure_hs(dim: int, F: IncFiltration, Fbar: IncFiltration, k: int) -> Report:
    rep = Report()
    if F.ambient != dim or Fbar.ambient != dim:
        raise ValueError("filtrations are not on the given space")
    pieces = bigrading(F, Fbar, k)
    total = sum_all(dim, pieces.values())
    count = sum(s.dim for s in pieces.values())
    rep.check(total.dim == dim, "spans", k, span=total.dim, dim=dim)
    rep.check(count == total.dim, "direct", k, sum_of_dims=count, span=total.dim)
    rep.payload["hodge_numbers"] = [[p, q, s.dim] for (p, q), s in sorted(pieces.items())]
    rep.payload["weight"] = k
    return rep


def is_mhs(dim: int, W: IncFiltration, F: IncFiltration, Fbar: IncFiltration | None = None,
           weight_offset: int = 0) -> Report:
    """Each ``Gr^W_k`` with the induced filtrations is pure of weight ``k + weight_offset``."""
    if Fbar is None:
        Fbar = F.conj()
    rep = Report()
    numbers = {}
    for k in W.weights():
        q = W.gr(k)
        sub = is_pure_hs(q.dim, F.induced_on(q), Fbar.induced_on(q), k + weight_offset)
        numbers[k] = sub.payload["hodge_numbers"]
        if not sub.ok:
            rep.fail("graded_pure", k, weight=k + weight_offset)
    rep.payload["hodge_numbers"] = numbers
    return rep


def _positive_definite(h: Matrix) -> tuple[bool, int | None]:
    """Leading principal minors of a Hermitian matrix; returns (ok, first bad size)."""
    for r in range(1, h.nrows + 1):
        d = h.submatrix(range(r), range(r)).det()
        if im_part(d) != 0 or re_part(d) <= 0:
            return False, r
    return True, None


def check_polarization(dim: int, F: IncFiltration, Fbar: IncFiltration, k: int, S: Pairing) -> Report:
    if S.matrix.shape != (dim, dim):
        raise ValueError("pairing has the wrong size")
    if dim and S.matrix.det() == 0:
        raise ValueError("degenerate pairing")
    rep = Report()
    rep.check(S.parity % 2 == k % 2, "parity", k, parity=S.parity)
    rep.check(S.symmetric(), "symmetry", k)
    pure = is_pure_hs(dim, F, Fbar, k)
    if not pure.ok:
        rep.merge(pure, "pure.")
        return rep
    for p in _p_range(F, Fbar, k):
        q = k + 1 - p
        for x in F.dec(p).basis:
            for y in Fbar.dec(q).basis:
                if S.value(x, y) != 0:
                    rep.fail("orthogonal", [p, q])
                    break
            else:
                continue
            break
    basis, types = [], []
    for (p, q), s in sorted(bigrading(F, Fbar, k).items()):
        for v in s.basis:
            basis.append(v)
            types.append(p - q)
    h = Matrix([[i_power(types[a]) * S.value(basis[a], basis[b]) for b in range(len(basis))]
                for a in range(len(basis))], len(basis))
    rep.check(h == h.conj().T, "hermitian", k)
    ok, bad = _positive_definite(h)
    rep.check(ok, "positive", k, minor=bad)
    return rep


# nilpotent orbits -----------------------------------------------------------------

def _shifts_hodge(n: Matrix, f: IncFiltration) -> bool:
    """``N F^p ⊆ F^{p-1}``, i.e. the stored increasing index moves by +1."""
    return f.is_stable(n, 1)


def sample_tuples(m: int, seed: int, samples: int = 8) -> list[list[Fraction]]:
    rng = random.Random(seed)
    out = [[Fraction(1)] * m]
    for _ in range(samples):
        out.append([Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(m)])
    return out


def _orbit_preconditions(data: HodgeData, S: Pairing, w: int, rep: Report):
    g = S.matrix
    rep.check(S.parity % 2 == w % 2, "parity", w, parity=S.parity)
    rep.check(S.symmetric(), "symmetry", w)
    for j, n in enumerate(data.nilpotents):
        rep.check(is_nilpotent(n), "nilpotent", j + 1)
        rep.check((n.T @ g + g @ n).is_zero(), "isotropic", j + 1)
        rep.check(_shifts_hodge(n, data.F), "transversal_F", j + 1)
        rep.check(_shifts_hodge(n, data.Fbar), "transversal_Fbar", j + 1)
    for a, b in combinations(range(data.m), 2):
        rep.check(data.nilpotents[a].commutator(data.nilpotents[b]).is_zero(), "commute", [a + 1, b + 1])


def is_nilpotent_orbit(data: HodgeData, w: int, seed: int | None = None, samples: int = 8,
                       polarized: bool = True) -> Report:
    """Condition 2 of a polarized nilpotent orbit of weight ``w``.

    The cone check is sampled: the all-ones tuple plus ``samples`` seeded
    positive rational tuples.  With ``polarized=False`` only the cone and
    MHS conditions are tested.
    """
    rep = Report()
    dim = data.dim
    S = data.S
    if polarized:
        if S is None:
            raise ValueError("a polarization is required")
        if S.matrix.shape != (dim, dim):
            raise ValueError("pairing has the wrong size")
        if dim and S.matrix.det() == 0:
            raise ValueError("degenerate pairing")
        _orbit_preconditions(data, S, w, rep)
    else:
        for j, n in enumerate(data.nilpotents):
            rep.check(_shifts_hodge(n, data.F), "transversal_F", j + 1)
            rep.check(_shifts_hodge(n, data.Fbar), "transversal_Fbar", j + 1)
    if not rep.ok:
        return rep
    seed = default_seed() if seed is None else seed
    idx = list(range(data.m))
    n = data.total(idx)
    m = monodromy_filtration(n, w)
    for t in sample_tuples(data.m, seed, samples)[1:] if data.m else []:
        if monodromy_filtration(data.total(idx, t), w) != m:
            rep.fail("cone_sampled", [str(x) for x in t])
    rep.info("cone_sampled", None, samples=samples if data.m else 0, seed=seed)
    mhs = is_mhs(dim, m, data.F, data.Fbar)
    rep.merge(mhs, "mhs.")
    rep.payload["M"] = [[k, s.dim] for k, s in m.jumps]
    if not polarized or not mhs.ok:
        return rep
    parts = primitive_parts(n, m, w)
    for k, p in sorted(parts.items()):
        if p.dim == 0:
            continue
        q = m.gr(w + k)
        lifts = [q.lift(c) for c in p.basis]
        nk = n ** k
        gk = Matrix([[S.value(x, nk.apply(y)) for y in lifts] for x in lifts], len(lifts))
        fq = data.F.induced_on(q).induced_sub(p)
        fbq = data.Fbar.induced_on(q).induced_sub(p)
        sub = check_polarization(p.dim, fq, fbq, w + k, Pairing(gk, w + k))
        rep.merge(sub, "primitive.", k)
    return rep


def is_mixed_nilpotent_orbit(data: HodgeData, seed: int | None = None, samples: int = 8,
                             polarized: bool = True) -> Report:
    rep = Report()
    for k in data.W.weights():
        if polarized and k not in data.polarizations:
            raise ValueError(f"missing graded polarization for weight {k}")
        g = data.graded(k)
        sub = is_nilpotent_orbit(g, k, seed, samples, polarized)
        rep.merge(sub, "", k)
    if not polarized:
        rep.info("polarization_not_checked")
    return rep


def _jsets(m: int):
    for r in range(1, m + 1):
        yield from combinations(range(m), r)


def is_subobject(dim: int, a: Subspace, M: IncFiltration, F: IncFiltration, Fbar: IncFiltration) -> bool:
    """``A`` with the induced filtrations is again an MHS."""
    return is_mhs(a.dim, M.induced_sub(a), F.induced_sub(a), Fbar.induced_sub(a)).ok


def is_imhs(data: HodgeData, seed: int | None = None, samples: int = 8,
            require_polarization: bool = True) -> Report:
    """The IMHS axioms, itemized per axiom and per index set (1-based)."""
    rep = Report()
    orbit = is_mixed_nilpotent_orbit(data, seed, samples, require_polarization)
    rep.merge(orbit, "orbit.")
    filts = {}
    for J in _jsets(data.m):
        res = relative_monodromy(data.total(J), data.W)
        if not res.exists:
            rep.fail("relative_exists", one_based(J), level=res.level)
            continue
        mj = res.filtration
        filts[J] = mj
        for j in J:
            rep.check(mj.is_stable(data.nilpotents[j], -2), "lowers_M", [one_based(J), j + 1])
    rep.payload["M"] = {",".join(map(str, one_based(J))): [[k, s.dim] for k, s in f.jumps]
                        for J, f in filts.items()}
    full = tuple(range(data.m))
    mi = filts.get(full, data.W if not data.m else None)
    if mi is None:
        return rep
    mhs = is_mhs(data.dim, mi, data.F, data.Fbar)
    rep.merge(mhs, "limit_mhs.")
    for j, n in enumerate(data.nilpotents):
        rep.check(mi.is_stable(n, -2) and _shifts_hodge(n, data.F) and _shifts_hodge(n, data.Fbar),
                  "type_minus_one", j + 1)
    if mhs.ok:
        for k, s in data.W.jumps:
            rep.check(is_subobject(data.dim, s, mi, data.F, data.Fbar), "W_sub_mhs", k)
        for J, f in filts.items():
            for k, s in f.jumps:
                rep.check(is_subobject(data.dim, s, mi, data.F, data.Fbar), "M_sub_mhs", [one_based(J), k])
    rep.info("graded_polarization_of_limit", None, checked=False)
    return rep


# pre-admissibility and the limit MHS ---------------------------------------------------

class NotPreAdmissible(ValueError):
    pass


@dataclass
class LimitResult:
    data: HodgeData
    report: Report


def limit_mhs(dim: int, W0: IncFiltration, F0: IncFiltration, N: Matrix) -> LimitResult:
    if not is_nilpotent(N):
        raise ValueError("N is not nilpotent")
    if not W0.is_stable(N):
        raise ValueError("N does not preserve W0")
    if not F0.is_stable(N, 1):
        raise NotPreAdmissible("Griffiths transversality fails: N F^p is not inside F^{p-1}")
    res = relative_monodromy(N, W0)
    if not res.exists:
        raise NotPreAdmissible(f"the relative monodromy filtration does not exist (level {res.level})")
    m = res.filtration
    data = HodgeData(dim, m, F0, nilpotents=[N])
    rep = Report()
    rep.merge(is_mhs(dim, m, F0), "mhs.")
    rep.check(m.is_stable(N, -2) and F0.is_stable(N, 1) and data.Fbar.is_stable(N, 1), "type_minus_one")
    rep.payload["M"] = [[k, s.dim] for k, s in m.jumps]
    rep.payload["hodge_numbers"] = is_mhs(dim, m, F0).payload["hodge_numbers"]
    return LimitResult(data, rep)


# Tate twists, Hom and tensor ----------------------------------------------------------

def tate_twist(data: HodgeData, b: int) -> HodgeData:
    """``W'_k = W_{k+2b}``, ``F'^p = F^{p+b}``; ``S_k`` moves to weight ``k - 2b``."""
    pol = {k - 2 * b: Pairing(s.matrix, s.parity - 2 * b) for k, s in data.polarizations.items()}
    return HodgeData(data.dim, data.W.reindex(-2 * b), data.F.reindex(b),
                     None if data.fbar_derived else data.Fbar.reindex(b), data.nilpotents, pol,
                     data.S, data.weight_offset)


def _hom_filtration(a: IncFiltration, b: IncFiltration, polarity: str, dec: bool) -> IncFiltration:
    """``{f : f(A_i) ⊆ B_{i+k}}`` on ``Hom(A, B)`` vectorized row-major."""
    na, nb = a.ambient, b.ambient
    alo, ahi = a.bounds()
    blo, bhi = b.bounds()
    lo, hi = blo - ahi - 1, bhi - alo + 1

    def level(k):
        rows = []
        for i, s in a.jumps:
            ann = b[i + k].annihilator()
            for phi in ann.basis:
                for v in s.basis:
                    rows.append(tuple(phi[r] * v[c] for r in range(nb) for c in range(na)))
        return Subspace(na * nb, nullspace(rows, na * nb))

    return IncFiltration.from_function(na * nb, level, lo, hi, polarity)


def _tensor_filtration(a: IncFiltration, b: IncFiltration, polarity: str) -> IncFiltration:
    n = a.ambient * b.ambient
    alo, ahi = a.bounds()
    blo, bhi = b.bounds()

    def level(k):
        vecs = []
        for i, s in a.jumps:
            t = b[k - i]
            for x in s.basis:
                for y in t.basis:
                    vecs.append(tuple(p * q for p in x for q in y))
        return Subspace(n, vecs)

    return IncFiltration.from_function(n, level, alo + blo - 1, ahi + bhi, polarity)


def hom_tensor(A: HodgeData, B: HodgeData, mode: str = "tensor") -> HodgeData:
    if A.m != B.m:
        raise ValueError("the two objects carry different numbers of nilpotent operators")
    n = A.dim * B.dim
    if n > DIM_GUARD:
        raise ValueError(f"dimension {n} exceeds the guard {DIM_GUARD}")
    ia, ib = Matrix.identity(A.dim), Matrix.identity(B.dim)
    if mode == "hom":
        W = _hom_filtration(A.W, B.W, "inc", False)
        F = _hom_filtration(A.F, B.F, "dec", True)
        Fb = _hom_filtration(A.Fbar, B.Fbar, "dec", True)
        nil = [nb.kron(ia) - ib.kron(na.T) for na, nb in zip(A.nilpotents, B.nilpotents)]
        derived = A.fbar_derived and B.fbar_derived
        # hom index: row index of B first, column index of A second
    elif mode == "tensor":
        W = _tensor_filtration(A.W, B.W, "inc")
        F = _tensor_filtration(A.F, B.F, "dec")
        Fb = _tensor_filtration(A.Fbar, B.Fbar, "dec")
        nil = [na.kron(ib) + ia.kron(nb) for na, nb in zip(A.nilpotents, B.nilpotents)]
        derived = A.fbar_derived and B.fbar_derived
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return HodgeData(n, W, F, None if derived else Fb, nil)


# morphisms -------------------------------------------------------------------------------

@dataclass
class MorphismData:
    f: Matrix
    source: HodgeData
    target: HodgeData


def _compat(f: Matrix, a: IncFiltration, b: IncFiltration, name: str, rep: Report):
    for k, s in a.jumps:
        if not s.image(f) <= b[k]:
            rep.fail("compatible", [name, -k if a.polarity == "dec" else k])


def _strict(f: Matrix, a: IncFiltration, b: IncFiltration, name: str, rep: Report):
    im = image(f)
    lo, hi = a.bounds()
    blo, bhi = b.bounds()
    for k in range(min(lo, blo) - 1, max(hi, bhi) + 1):
        if a[k].image(f) != (im & b[k]):
            rep.fail("strict", [name, -k if a.polarity == "dec" else k])


def _sub_graded_pairing(W: IncFiltration, a: Subspace, k: int, S: Pairing) -> Pairing:
    """Restriction of ``S_k`` on ``Gr^W_k`` to ``Gr^W_k`` of the subspace ``a`` (coordinates of ``a``)."""
    wa = W.induced_sub(a)
    qa = wa.gr(k)
    qv = W.gr(k)
    basis = [qv.coords(a.from_coords(qa.lift(e))) for e in _units(qa.dim)]
    return S.restrict(basis)


def _units(n):
    return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]


def _quot_graded_pairing(W: IncFiltration, a: Subspace, k: int, S: Pairing) -> Pairing:
    """``S_k`` transported to ``Gr^W_k(V/A)`` through the orthogonal complement of the image."""
    qv = W.gr(k)
    n = qv.dim
    img = qv.project(a)
    # complement {y : S(x, sigma y) = 0 for x in img}
    rows = [tuple(dot(x, S.matrix.column(j)) for j in range(n)) for x in img.basis]
    comp = [vconj(y) for y in nullspace(rows, n)]
    quot = Quotient(Subspace.full(qv.ambient), a)
    wq = W.induced_on(quot)
    qq = wq.gr(k)
    # coordinates of complement vectors in Gr^W_k(V/A)
    cols = [qq.coords(quot.coords(qv.lift(c))) for c in comp]
    if len(cols) != qq.dim:
        raise InternalInvariantError("orthogonal complement has the wrong dimension")
    if not cols:
        return Pairing(Matrix.zeros(0, 0), S.parity)
    p = Matrix.from_columns(cols, qq.dim)
    pinv = p.inverse()
    gc = S.restrict(comp).matrix
    return Pairing(pinv.T @ gc @ pinv.conj(), S.parity)


def morphism_analyze(md: MorphismData, check_imhs: bool = False, seed: int | None = None) -> Report:
    f, A, B = md.f, md.source, md.target
    if f.shape != (B.dim, A.dim):
        raise ValueError("morphism has the wrong shape")
    rep = Report()
    _compat(f, A.W, B.W, "W", rep)
    _compat(f, A.F, B.F, "F", rep)
    _compat(f, A.Fbar, B.Fbar, "Fbar", rep)
    for j, (na, nb) in enumerate(zip(A.nilpotents, B.nilpotents)):
        rep.check(nb @ f == f @ na, "intertwines", j + 1)
    if A.m != B.m:
        rep.fail("nilpotent_count", None, source=A.m, target=B.m)
    if not rep.ok:
        return rep
    _strict(f, A.W, B.W, "W", rep)
    _strict(f, A.F, B.F, "F", rep)
    _strict(f, A.Fbar, B.Fbar, "Fbar", rep)
    ker = kernel(f)
    rep.payload["kernel_dim"] = ker.dim
    rep.payload["cokernel_dim"] = B.dim - f.rank()
    if not rep.ok:
        return rep
    kdata = kernel_data(A, ker)
    cdata = cokernel_data(B, image(f))
    rep.payload["kernel"] = {"W": [[k, s.dim] for k, s in kdata.W.jumps]}
    rep.payload["cokernel"] = {"W": [[k, s.dim] for k, s in cdata.W.jumps]}
    rep.merge(is_mhs(kdata.dim, kdata.W, kdata.F, kdata.Fbar, A.weight_offset), "kernel.")
    rep.merge(is_mhs(cdata.dim, cdata.W, cdata.F, cdata.Fbar, B.weight_offset), "cokernel.")
    if check_imhs:
        rep.merge(is_imhs(kdata, seed), "kernel.imhs.")
        rep.merge(is_imhs(cdata, seed), "cokernel.imhs.")
    return rep


def kernel_data(A: HodgeData, ker: Subspace) -> HodgeData:
    """Induced structure on a sub-object, in the echelon coordinates of ``ker``."""
    nil = []
    for n in A.nilpotents:
        cols = [ker.coords(n.apply(v)) for v in ker.basis]
        nil.append(Matrix.from_columns(cols, ker.dim) if cols else Matrix.zeros(0, 0))
    pol = {}
    for k, s in A.polarizations.items():
        if A.W.induced_sub(ker).gr_dim(k):
            pol[k] = _sub_graded_pairing(A.W, ker, k, s)
    return HodgeData(ker.dim, A.W.induced_sub(ker), A.F.induced_sub(ker),
                     None if A.fbar_derived else A.Fbar.induced_sub(ker), nil, pol,
                     weight_offset=A.weight_offset)


def cokernel_data(B: HodgeData, img: Subspace) -> HodgeData:
    q = Quotient(Subspace.full(B.dim), img)
    nil = [q.endo(n) for n in B.nilpotents]
    pol = {}
    for k, s in B.polarizations.items():
        if B.W.induced_on(q).gr_dim(k):
            pol[k] = _quot_graded_pairing(B.W, img, k, s)
    return HodgeData(q.dim, B.W.induced_on(q), B.F.induced_on(q),
                     None if B.fbar_derived else B.Fbar.induced_on(q), nil, pol,
                     weight_offset=B.weight_offset)
