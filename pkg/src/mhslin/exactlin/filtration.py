"""Finite exhaustive separated filtrations.

Everything is stored as an increasing filtration ``W_k``.  A decreasing
filtration ``F^p`` is stored with ``W_k = F^{-k}`` and ``polarity = "dec"``;
use :meth:`IncFiltration.dec` to read it back in its own indexing.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Sequence

from .matrix import Matrix, ZERO
from .subspace import Quotient, Subspace


class IncFiltration:
    __slots__ = ("ambient", "jumps", "polarity", "_hash")

    def __init__(self, ambient: int, levels: Iterable[tuple[int, Subspace]], polarity: str = "inc"):
        if polarity not in ("inc", "dec"):
            raise ValueError(f"unknown polarity {polarity!r}")
        items = sorted(levels, key=lambda kv: kv[0])
        jumps = []
        prev = Subspace.zero(ambient)
        last_k = None
        for k, s in items:
            if s.ambient != ambient:
                raise ValueError(f"filtration level {k} lives in dimension {s.ambient}, expected {ambient}")
            if last_k is not None and k == last_k:
                raise ValueError(f"duplicate filtration index {k}")
            if not prev <= s:
                raise ValueError(f"filtration is not nested at index {k}")
            if s.dim > prev.dim:
                jumps.append((int(k), s))
            prev = s
            last_k = k
        if prev.dim != ambient:
            raise ValueError("filtration is not exhaustive (top level is not the whole space)")
        self.ambient = ambient
        self.jumps = tuple(jumps)
        self.polarity = polarity
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def from_levels(cls, ambient: int, levels: Mapping[int, Subspace] | Iterable, polarity="inc"):
        items = levels.items() if isinstance(levels, Mapping) else levels
        return cls(ambient, list(items), polarity)

    @classmethod
    def from_function(cls, ambient: int, f: Callable[[int], Subspace], lo: int, hi: int, polarity="inc"):
        """Sample ``f`` on ``lo..hi``; ``f(hi)`` must be the whole space."""
        return cls(ambient, [(k, f(k)) for k in range(lo, hi + 1)], polarity)

    @classmethod
    def trivial(cls, ambient: int, weight: int = 0) -> "IncFiltration":
        return cls(ambient, [(weight, Subspace.full(ambient))])

    @classmethod
    def from_weights(cls, weights: Sequence[int]) -> "IncFiltration":
        """Coordinate filtration: ``W_k`` is spanned by the ``e_i`` with ``weights[i] <= k``."""
        n = len(weights)
        ks = sorted(set(weights))
        return cls(n, [(k, Subspace.coordinate(n, [i for i, w in enumerate(weights) if w <= k])) for k in ks])

    @classmethod
    def decreasing(cls, ambient: int, levels: Mapping[int, Subspace] | Iterable) -> "IncFiltration":
        """Decreasing filtration from ``{p: F^p}``; ``F^p`` for the smallest ``p`` must be everything."""
        items = levels.items() if isinstance(levels, Mapping) else levels
        return cls(ambient, [(-p, s) for p, s in items], "dec")

    @classmethod
    def hodge_from_weights(cls, weights: Sequence[int]) -> "IncFiltration":
        """Decreasing coordinate filtration: ``F^p`` spanned by the ``e_i`` with ``weights[i] >= p``."""
        n = len(weights)
        ps = sorted(set(weights))
        return cls.decreasing(n, [(p, Subspace.coordinate(n, [i for i, w in enumerate(weights) if w >= p]))
                                  for p in ps])

    # access ---------------------------------------------------------------
    def __getitem__(self, k: int) -> Subspace:
        out = None
        for w, s in self.jumps:
            if w <= k:
                out = s
            else:
                break
        return out if out is not None else Subspace.zero(self.ambient)

    def dec(self, p: int) -> Subspace:
        """``F^p`` for a filtration built with :meth:`decreasing`."""
        return self[-p]

    def weights(self) -> list[int]:
        return [k for k, _ in self.jumps]

    def bounds(self) -> tuple[int, int]:
        """``(lo, hi)``: ``W_{lo-1} = 0`` and ``W_hi`` is everything."""
        if not self.jumps:
            return (0, 0)
        return (self.jumps[0][0], self.jumps[-1][0])

    def dec_bounds(self) -> tuple[int, int]:
        """``(p_lo, p_hi)`` with ``F^{p_lo}`` everything and ``F^{p_hi+1} = 0``."""
        lo, hi = self.bounds()
        return (-hi, -lo)

    def gr(self, k: int) -> Quotient:
        return Quotient(self[k], self[k - 1])

    def gr_dim(self, k: int) -> int:
        return self[k].dim - self[k - 1].dim

    def gr_dims(self) -> dict[int, int]:
        out = {}
        prev = 0
        for k, s in self.jumps:
            out[k] = s.dim - prev
            prev = s.dim
        return out

    def dims(self, lo: int, hi: int) -> tuple[int, ...]:
        return tuple(self[k].dim for k in range(lo, hi + 1))

    # transformations ----------------------------------------------------------
    def reindex(self, offset: int) -> "IncFiltration":
        """Filtration with ``W'_{k+offset} = W_k``."""
        return IncFiltration(self.ambient, [(k + offset, s) for k, s in self.jumps], self.polarity)

    def transform(self, g: Matrix) -> "IncFiltration":
        """Image filtration under an automorphism ``g``."""
        return IncFiltration(self.ambient, [(k, s.image(g)) for k, s in self.jumps], self.polarity)

    def conj(self) -> "IncFiltration":
        return IncFiltration(self.ambient, [(k, s.conj()) for k, s in self.jumps], self.polarity)

    def is_rational(self) -> bool:
        return all(s.is_rational() for _, s in self.jumps)

    def induced_sub(self, a: Subspace) -> "IncFiltration":
        """``W_k ∩ A`` written in the coordinates of the echelon basis of ``A``."""
        if a.ambient != self.ambient:
            raise ValueError("subspace is not in the ambient space of the filtration")
        levels = [(k, Subspace(a.dim, (a.coords(v) for v in (s & a).basis))) for k, s in self.jumps]
        if not levels:
            return IncFiltration(a.dim, [])
        levels[-1] = (levels[-1][0], Subspace.full(a.dim))
        return IncFiltration(a.dim, levels, self.polarity)

    def induced_quotient(self, a: Subspace) -> "IncFiltration":
        """``(W_k + A)/A`` in the canonical coordinates of ``V/A``."""
        return self.induced_on(Quotient(Subspace.full(self.ambient), a))

    def induced_on(self, q: Quotient) -> "IncFiltration":
        """Filtration induced on the subquotient ``q = B/A``."""
        if q.ambient != self.ambient:
            raise ValueError("subquotient is not in the ambient space of the filtration")
        levels = [(k, q.project(s)) for k, s in self.jumps]
        if q.dim == 0:
            return IncFiltration(0, [], self.polarity)
        if not levels or levels[-1][1].dim != q.dim:
            levels.append((self.bounds()[1], Subspace.full(q.dim)))
        return IncFiltration(q.dim, levels, self.polarity)

    def is_stable(self, m: Matrix, shift: int = 0) -> bool:
        """``m W_k ⊆ W_{k+shift}`` for every ``k``."""
        return not self.stability_failures(m, shift)

    def stability_failures(self, m: Matrix, shift: int = 0) -> list[int]:
        return [k for k, s in self.jumps if not s.image(m) <= self[k + shift]]

    # comparison ---------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, IncFiltration):
            return NotImplemented
        return (self.ambient == other.ambient and self.polarity == other.polarity
                and self.jumps == other.jumps)

    def same_levels(self, other: "IncFiltration") -> bool:
        """Equality of the underlying chains, ignoring the polarity tag."""
        return self.ambient == other.ambient and self.jumps == other.jumps

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient, self.polarity, self.jumps))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{k}:{s.dim}" for k, s in self.jumps)
        return f"IncFiltration(ambient={self.ambient}, {self.polarity}, {{{body}}})"


def dual_filtration(w: IncFiltration) -> IncFiltration:
    """``W*_j = Ann(W_{-j-1})`` on the dual space (standard dual basis)."""
    return IncFiltration(w.ambient, [(-k, w[k - 1].annihilator()) for k, _ in w.jumps], w.polarity)


def induced(f: IncFiltration, target: Subspace | Quotient) -> IncFiltration:
    if isinstance(target, Quotient):
        return f.induced_on(target)
    return f.induced_sub(target)


def direct_sum(fs: Sequence[IncFiltration]) -> IncFiltration:
    """Block filtration ``W_k = ⊕ W^{(a)}_k`` on the concatenated space."""
    if not fs:
        raise ValueError("empty direct sum")
    pol = fs[0].polarity
    if any(f.polarity != pol for f in fs):
        raise ValueError("mixed polarities in a direct sum")
    n = sum(f.ambient for f in fs)
    keys = sorted({k for f in fs for k in f.weights()})
    levels = []
    for k in keys:
        vecs, off = [], 0
        for f in fs:
            for v in f[k].basis:
                vecs.append((ZERO,) * off + tuple(v) + (ZERO,) * (n - off - f.ambient))
            off += f.ambient
        levels.append((k, Subspace(n, vecs)))
    return IncFiltration(n, levels, pol)
