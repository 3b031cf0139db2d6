"""Spectral sequence of a filtered complex and FMHC/LMHC validation.

An increasing filtration ``W^f`` is turned into the decreasing filtration
``F^p = W^f_{-p}``; page entries are reported as ``[p, q, dim]`` with
``p + q`` the total degree.  Each page is computed twice: from cycles and
boundaries, and as the graded piece ``Gr_F^p H(F^{p-r+1} / F^{p+r})``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..exactlin.subspace import Quotient, Subspace
from ..hodge import is_mhs
from ..report import InternalInvariantError, Report
from .chain import ChainComplex, FilteredComplex


@dataclass
class SpectralSequence:
    pages: dict = field(default_factory=dict)       # r -> {(p, n): dim}, n the total degree
    formula_pages: dict = field(default_factory=dict)
    differentials: dict = field(default_factory=dict)  # r -> {(p, n): rank of d_r}
    abutment: dict = field(default_factory=dict)    # n -> {p: dim Gr_F^p H^n}
    cohomology: dict = field(default_factory=dict)  # n -> dim H^n
    degenerates_at: int | None = None
    last: int = 0

    def page(self, r: int) -> dict:
        return self.pages[min(r, self.last)]

    def infinity(self) -> dict:
        return self.pages[self.last]

    def table(self, r: int) -> list:
        return [[p, n - p, d] for (p, n), d in sorted(self.page(r).items()) if d]

    def to_json(self) -> dict:
        return {
            "pages": {str(r): self.table(r) for r in sorted(self.pages)},
            "degenerates_at": self.degenerates_at,
            "cohomology": {str(n): d for n, d in sorted(self.cohomology.items())},
            "abutment": {str(n): [[p, d] for p, d in sorted(v.items()) if d]
                         for n, v in sorted(self.abutment.items())},
        }


class _Decreasing:
    """``F^p C^n = W^f_{-p} C^n`` for a list of per-degree increasing filtrations."""

    def __init__(self, cx: ChainComplex, fl: list):
        self.cx, self.fl = cx, fl

    def __call__(self, p: int, n: int) -> Subspace:
        i = n - self.cx.lo
        if not 0 <= i < len(self.fl):
            return Subspace.zero(0)
        return self.fl[i][-p]

    def p_range(self):
        lo = min(f.bounds()[0] for f in self.fl)
        hi = max(f.bounds()[1] for f in self.fl)
        return -hi, -lo


def spectral_sequence(fc: FilteredComplex, which: str = "Wf") -> SpectralSequence:
    cx = fc.complex
    fl = fc.filtration(which)
    if fc.stability_failures(which):
        raise ValueError(f"filtration {which!r} is not d-stable at {fc.stability_failures(which)}")
    if any(f.polarity != "inc" for f in fl):
        raise ValueError("spectral_sequence expects an increasing filtration")
    F = _Decreasing(cx, fl)
    plo, phi = F.p_range()
    prange = range(plo - 1, phi + 2)
    rmax = (phi - plo) + 2
    degs = list(cx.degrees)

    def fil(p, n):
        if p < plo:
            return Subspace.full(cx.dim(n))
        if p > phi:
            return Subspace.zero(cx.dim(n))
        return F(p, n)

    def Z(r, p, n):
        return fil(p, n) & fil(p + r, n + 1).preimage(cx.diff(n)) if cx.dim(n) else Subspace.zero(0)

    def dF(p, n):
        """``d F^p C^{n-1}`` inside ``C^n``."""
        if not cx.dim(n - 1):
            return Subspace.zero(cx.dim(n))
        return fil(p, n - 1).image(cx.diff(n - 1))

    ss = SpectralSequence()
    for n in degrees_of(cx):
        ss.cohomology[n] = cx.cohomology_dims()[n - cx.lo]
    quots = {}
    for r in range(0, rmax + 1):
        page, form = {}, {}
        for n in degs:
            for p in prange:
                top = Z(r, p, n)
                sub = Z(r - 1, p + 1, n) + (fil(p, n) & dF(p - r + 1, n))
                q = Quotient(top, sub)
                quots[(r, p, n)] = q
                page[(p, n)] = q.dim
                if r >= 1:
                    B = dF(p - r + 1, n) + fil(p + r, n)
                    form[(p, n)] = (top + B).dim - (Z(r - 1, p + 1, n) + B).dim
        ss.pages[r] = page
        if r >= 1:
            ss.formula_pages[r] = form
            if form != page:
                bad = sorted(k for k in page if page[k] != form.get(k))
                raise InternalInvariantError(f"page {r} disagrees between the two constructions at {bad}")
    # differentials and the H(E_r) = E_{r+1} check
    for r in range(0, rmax):
        ranks = {}
        for n in degs:
            for p in prange:
                src = quots[(r, p, n)]
                if (r, p + r, n + 1) in quots:
                    ranks[(p, n)] = src.induced(cx.diff(n), quots[(r, p + r, n + 1)]).rank() if src.dim else 0
                else:
                    ranks[(p, n)] = 0
        ss.differentials[r] = ranks
        for n in degs:
            for p in prange:
                h = ss.pages[r][(p, n)] - ranks[(p, n)] - ranks.get((p - r, n - 1), 0)
                if h != ss.pages[r + 1][(p, n)]:
                    raise InternalInvariantError(f"H(E_{r}) differs from E_{r + 1} at {(p, n)}")
    ss.last = rmax
    for r in range(0, rmax + 1):
        if all(not v for s in range(r, rmax) for v in ss.differentials[s].values()):
            ss.degenerates_at = r
            break
    for n in degs:
        H = cx.cohomology(n)
        dims = {}
        for p in prange:
            dims[p] = H.project(fil(p, n)).dim - H.project(fil(p + 1, n)).dim
        ss.abutment[n] = dims
        einf = sum(ss.pages[rmax][(p, n)] for p in prange)
        if einf != ss.cohomology[n] or any(dims[p] != ss.pages[rmax][(p, n)] for p in prange):
            raise InternalInvariantError(f"E_infinity does not match the filtered cohomology in degree {n}")
    return ss


def degrees_of(cx: ChainComplex):
    return list(cx.degrees)


# FMHC / LMHC ----------------------------------------------------------------------------

def subquotient_complex(fc: FilteredComplex, i: int, j: int, name: str = "Wf") -> FilteredComplex:
    """``W^f_i / W^f_j`` with the induced filtrations (in quotient coordinates)."""
    cx = fc.complex
    fl = fc.filtration(name)
    qs = [Quotient(fl[p][i], fl[p][j]) for p in range(len(cx.dims))]
    d = [qs[p].induced(cx.d[p], qs[p + 1]) for p in range(len(cx.d))]
    sub = ChainComplex([q.dim for q in qs], d, cx.lo)
    filts = {k: [f[p].induced_on(qs[p]) for p in range(len(qs))] for k, f in fc.filtrations.items()}
    return FilteredComplex(sub, filts)


def cohomology_mhs(fc: FilteredComplex, w: str = "W", f: str = "F") -> dict:
    """``n -> (dim, W, F)`` induced on ``H^n``."""
    cx = fc.complex
    out = {}
    for n in cx.degrees:
        H = cx.cohomology(n)
        p = n - cx.lo
        out[n] = (H.dim, fc.filtrations[w][p].induced_on(H), fc.filtrations[f][p].induced_on(H))
    return out


def fmhc_lmhc_validate(fc: FilteredComplex, mode: str = "fmhc") -> Report:
    """Every ``H^n(W^f_i / W^f_j)`` is a MHS with weights ``W[n]``; LMHC also needs ``E_2 = E_inf``."""
    if mode not in ("fmhc", "lmhc"):
        raise ValueError(f"unknown mode {mode!r}")
    rep = Report()
    for name in ("Wf", "W", "F"):
        if name not in fc.filtrations:
            raise ValueError(f"filtration {name!r} missing")
        for deg, k in fc.stability_failures(name):
            rep.fail("d_stable", [name, deg, k])
    if not rep.ok:
        return rep
    fl = fc.filtration("Wf")
    levels = sorted({k for f in fl for k in f.weights()})
    lo = min(f.bounds()[0] for f in fl)
    cuts = [lo - 1] + levels
    checked = []
    for a, i in enumerate(cuts):
        for j in cuts[:a]:
            sub = subquotient_complex(fc, i, j)
            for n, (dim, W, F) in cohomology_mhs(sub).items():
                if not dim:
                    continue
                r = is_mhs(dim, W, F, None, n)
                checked.append([i, j, n])
                if not r.ok:
                    rep.fail("mhs", [i, j, n], graded=[x["location"] for x in r.failures()])
    rep.payload["checked"] = checked
    if mode == "lmhc":
        ss = spectral_sequence(fc, "Wf")
        rep.payload["degenerates_at"] = ss.degenerates_at
        e2, einf = ss.page(2), ss.infinity()
        rep.check(e2 == einf, "degenerates_at_2", None, degenerates_at=ss.degenerates_at)
    return rep
