"""Canonical subspaces of ``K^n`` and concrete subquotients ``B/A``."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .matrix import Matrix, ZERO, lincomb, nullspace, rref, solve, vconj
from .scalar import to_scalar


class Subspace:
    """A linear subspace of ``K^ambient`` stored by its reduced echelon basis.

    Two ``Subspace`` objects are equal exactly when they are the same
    subspace, because the reduced row echelon basis is unique.
    """

    __slots__ = ("ambient", "basis", "pivots", "_hash")

    def __init__(self, ambient: int, vectors: Iterable[Sequence] = ()):
        vecs = [tuple(to_scalar(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient}")
        self.ambient = ambient
        self.basis, self.pivots = rref(vecs, ambient)
        self._hash = None

    @classmethod
    def _from_rref(cls, ambient, basis, pivots):
        s = object.__new__(cls)
        s.ambient = ambient
        s.basis = basis
        s.pivots = pivots
        s._hash = None
        return s

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls._from_rref(n, (), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls._from_rref(n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)),
                              tuple(range(n)))

    @classmethod
    def span(cls, n: int, vectors: Iterable[Sequence]) -> "Subspace":
        return cls(n, vectors)

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        idx = sorted(set(indices))
        return cls._from_rref(n, tuple(tuple(Fraction(int(j == i)) for j in range(n)) for i in idx),
                              tuple(idx))

    # basic queries ---------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return len(self.basis) == self.ambient

    def reduce(self, v: Sequence):
        """Canonical representative of ``v`` modulo this subspace."""
        v = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if c:
                for j, a in enumerate(row):
                    if a:
                        v[j] = v[j] - c * a
        return tuple(v)

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def coords(self, v: Sequence):
        """Coordinates of ``v`` (assumed to lie in the subspace) in the echelon basis."""
        return tuple(v[p] for p in self.pivots)

    def from_coords(self, c: Sequence):
        return lincomb(c, self.basis, self.ambient)

    def matrix(self) -> Matrix:
        """Basis vectors as rows."""
        return Matrix._raw(self.basis, self.ambient)

    def basis_columns(self) -> Matrix:
        return Matrix.from_columns(self.basis, self.ambient)

    def is_rational(self) -> bool:
        return self.matrix().is_rational()

    # lattice operations ------------------------------------------------
    def _check(self, other: "Subspace"):
        if self.ambient != other.ambient:
            raise ValueError(f"ambient dimension mismatch: {self.ambient} vs {other.ambient}")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if other.is_zero() or self.is_full():
            return self
        if self.is_zero() or other.is_full():
            return other
        return Subspace._from_rref(self.ambient, *rref(self.basis + other.basis, self.ambient))

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.is_zero() or other.is_full():
            return self
        if other.is_zero() or self.is_full():
            return other
        return (self.annihilator() + other.annihilator()).annihilator()

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(v) for v in self.basis)

    def __ge__(self, other: "Subspace") -> bool:
        return other <= self

    def __lt__(self, other: "Subspace") -> bool:
        return self <= other and self.dim < other.dim

    def annihilator(self) -> "Subspace":
        """``{phi : phi(v) = 0 for v in self}`` in the dual space (bilinear pairing)."""
        return Subspace(self.ambient, nullspace(self.basis, self.ambient))

    def conj(self) -> "Subspace":
        return Subspace(self.ambient, (vconj(v) for v in self.basis))

    def image(self, m: Matrix) -> "Subspace":
        if m.ncols != self.ambient:
            raise ValueError(f"matrix with {m.ncols} columns applied in dimension {self.ambient}")
        return Subspace(m.nrows, (m.apply(v) for v in self.basis))

    def preimage(self, m: Matrix) -> "Subspace":
        """``{v : m v in self}``; always contains ``ker m``."""
        if m.nrows != self.ambient:
            raise ValueError(f"matrix with {m.nrows} rows pulled back to dimension {self.ambient}")
        ann = self.annihilator()
        if ann.is_zero():
            return Subspace.full(m.ncols)
        rows = [tuple(sum((phi[i] * m.rows[i][j] for i in range(m.nrows) if phi[i]), ZERO)
                      for j in range(m.ncols)) for phi in ann.basis]
        return Subspace(m.ncols, nullspace(rows, m.ncols))

    def complement_coordinates(self):
        """Indices of non-pivot coordinates; the matching unit vectors span a complement."""
        piv = set(self.pivots)
        return [j for j in range(self.ambient) if j not in piv]

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient, self.basis))
        return self._hash

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, basis={[list(map(str, b)) for b in self.basis]})"


def kernel(m: Matrix) -> Subspace:
    return Subspace(m.ncols, nullspace(m.rows, m.ncols))


def image(m: Matrix) -> Subspace:
    return Subspace(m.nrows, m.columns())


def transport(m: Matrix, a: Subspace, mode: str = "image") -> Subspace:
    if mode == "image":
        return a.image(m)
    if mode == "preimage":
        return a.preimage(m)
    raise ValueError(f"unknown transport mode {mode!r}")


def sum_all(n: int, spaces: Iterable[Subspace]) -> Subspace:
    vecs = []
    for s in spaces:
        vecs.extend(s.basis)
    return Subspace(n, vecs)


def intersect_all(n: int, spaces: Iterable[Subspace]) -> Subspace:
    out = Subspace.full(n)
    for s in spaces:
        out = out & s
    return out


def is_direct_sum(n: int, spaces: Sequence[Subspace]) -> bool:
    return sum_all(n, spaces).dim == sum(s.dim for s in spaces)


class Quotient:
    """The subquotient ``top/sub`` with canonical coordinates.

    Representatives are the reduced echelon basis of ``top`` reduced modulo
    ``sub``; coordinates of a vector are read off at their pivots.
    """

    __slots__ = ("top", "sub", "reps", "rep_pivots", "ambient")

    def __init__(self, top: Subspace, sub: Subspace | None = None):
        if sub is None:
            sub = Subspace.zero(top.ambient)
        if not sub <= top:
            raise ValueError("quotient denominator is not contained in the numerator")
        self.top = top
        self.sub = sub
        self.ambient = top.ambient
        self.reps, self.rep_pivots = rref([sub.reduce(v) for v in top.basis], top.ambient)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, v: Sequence):
        r = self.sub.reduce(v)
        return tuple(r[p] for p in self.rep_pivots)

    def contains(self, v: Sequence) -> bool:
        return self.top.contains(v)

    def lift(self, c: Sequence):
        return lincomb(c, self.reps, self.ambient)

    def lifts(self):
        return list(self.reps)

    def project(self, s: Subspace) -> Subspace:
        """Image of ``(s ∩ top) + sub`` in quotient coordinates."""
        t = s & self.top
        return Subspace(self.dim, (self.coords(v) for v in t.basis))

    def lift_subspace(self, s: Subspace) -> Subspace:
        """Preimage in the ambient space (contains ``sub``)."""
        return self.sub + Subspace(self.ambient, (self.lift(c) for c in s.basis))

    def induced(self, m: Matrix, target: "Quotient") -> Matrix:
        """Matrix of the map ``self -> target`` induced by ``m``.

        Raises ``ValueError`` if ``m`` does not map ``top`` into ``target.top``
        and ``sub`` into ``target.sub``.
        """
        cols = []
        for v in self.reps:
            w = m.apply(v)
            if not target.top.contains(w):
                raise ValueError("map does not carry the numerator into the target numerator")
            cols.append(target.coords(w))
        for v in self.sub.basis:
            if not target.sub.contains(m.apply(v)):
                raise ValueError("map does not carry the denominator into the target denominator")
        return Matrix.from_columns(cols, target.dim) if cols else Matrix.zeros(target.dim, 0)

    def endo(self, m: Matrix) -> Matrix:
        return self.induced(m, self)

    def __repr__(self):
        return f"Quotient(dim={self.dim}, top={self.top.dim}, sub={self.sub.dim})"


def solve_in(m: Matrix, b: Sequence):
    return solve(m.rows, b, m.ncols)
