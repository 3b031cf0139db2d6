"""Immutable exact matrices and the row-reduction primitives behind them.

Matrices act on column vectors: ``(M @ v)[i] = sum_j M[i][j] * v[j]``.
Vectors are plain tuples of scalars.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .scalar import conj, is_rational, to_scalar

ZERO = Fraction(0)
ONE = Fraction(1)


def rref(rows: Sequence[Sequence], ncols: int):
    """Reduced row echelon form.

    Returns ``(basis, pivots)`` where ``basis`` holds the nonzero reduced rows
    (as tuples) and ``pivots[i]`` is the pivot column of ``basis[i]``.
    """
    work = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    nrows = len(work)
    for c in range(ncols):
        if r == nrows:
            break
        p = None
        for i in range(r, nrows):
            if work[i][c]:
                p = i
                break
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        prow = work[r]
        inv = ONE / prow[c]
        if inv != 1:
            for j in range(c, ncols):
                if prow[j]:
                    prow[j] = prow[j] * inv
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i != r:
                f = work[i][c]
                if f:
                    row = work[i]
                    for j in nz:
                        row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in work[:r]), tuple(pivots)


def nullspace(rows: Sequence[Sequence], ncols: int):
    """Basis of ``{x : A x = 0}`` for ``A`` given by ``rows`` (``ncols`` wide)."""
    basis, pivots = rref(rows, ncols)
    piv = set(pivots)
    out = []
    for f in range(ncols):
        if f in piv:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(basis, pivots):
            if row[f]:
                v[p] = -row[f]
        out.append(tuple(v))
    return out


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int):
    """One solution of ``A x = b`` (free variables set to 0), or ``None``."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    basis, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for row, p in zip(basis, pivots):
        x[p] = row[ncols]
    return tuple(x)


def det(rows: Sequence[Sequence]):
    n = len(rows)
    work = [list(r) for r in rows]
    d = ONE
    for c in range(n):
        p = None
        for i in range(c, n):
            if work[i][c]:
                p = i
                break
        if p is None:
            return ZERO
        if p != c:
            work[c], work[p] = work[p], work[c]
            d = -d
        piv = work[c][c]
        d = d * piv
        for i in range(c + 1, n):
            f = work[i][c]
            if f:
                f = f / piv
                row, prow = work[i], work[c]
                for j in range(c, n):
                    if prow[j]:
                        row[j] = row[j] - f * prow[j]
    return d


def dot(u: Sequence, v: Sequence):
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s = s + a * b
    return s


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v):
    return tuple(c * a for a in v)


def vconj(v):
    return tuple(conj(a) for a in v)


def lincomb(coeffs: Sequence, vectors: Sequence[Sequence], n: int):
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for j, a in enumerate(v):
                if a:
                    out[j] = out[j] + c * a
    return tuple(out)


def unit(n: int, i: int):
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


class Matrix:
    """An immutable ``nrows x ncols`` matrix of exact scalars."""

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(tuple(to_scalar(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _raw(cls, rows, ncols):
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        m._hash = None
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls._raw(tuple((ZERO,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(tuple(unit(n, i) for i in range(n)), n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(nrows)), len(cols))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def block_diagonal(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        nr = sum(b.nrows for b in blocks)
        nc = sum(b.ncols for b in blocks)
        rows = []
        c0 = 0
        for b in blocks:
            for r in b.rows:
                rows.append((ZERO,) * c0 + r + (ZERO,) * (nc - c0 - b.ncols))
            c0 += b.ncols
        return cls._raw(tuple(rows), nc) if nr else cls.zeros(0, nc)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        if not self.nrows:
            return Matrix.zeros(self.ncols, 0)
        return Matrix._raw(tuple(zip(*self.rows)), self.nrows)

    def conj(self) -> "Matrix":
        return Matrix._raw(tuple(vconj(r) for r in self.rows), self.ncols)

    def is_rational(self) -> bool:
        return all(is_rational(x) for r in self.rows for x in r)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def apply(self, v: Sequence):
        return tuple(dot(r, v) for r in self.rows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            # row-sparse product: most operators here are very sparse
            sparse = [[(j, x) for j, x in enumerate(r) if x] for r in other.rows]
            rows = []
            for r in self.rows:
                acc = [ZERO] * other.ncols
                for k, a in enumerate(r):
                    if a:
                        for j, x in sparse[k]:
                            acc[j] = acc[j] + a * x
                rows.append(tuple(acc))
            return Matrix._raw(tuple(rows), other.ncols)
        return self.apply(other)

    def __add__(self, other: "Matrix"):
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return Matrix._raw(tuple(vadd(a, b) for a, b in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: "Matrix"):
        if self.shape != other.shape:
            raise ValueError("shape mismatch in subtraction")
        return Matrix._raw(tuple(vsub(a, b) for a, b in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self):
        return Matrix._raw(tuple(tuple(-x for x in r) for r in self.rows), self.ncols)

    def scale(self, c) -> "Matrix":
        c = to_scalar(c)
        return Matrix._raw(tuple(vscale(c, r) for r in self.rows), self.ncols)

    def __rmul__(self, c):
        return self.scale(c)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        out = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def kron(self, other: "Matrix") -> "Matrix":
        rows = []
        for ra in self.rows:
            for rb in other.rows:
                rows.append(tuple(a * b for a in ra for b in rb))
        return Matrix._raw(tuple(rows), self.ncols * other.ncols)

    def rank(self) -> int:
        return len(rref(self.rows, self.ncols)[1])

    def det(self):
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        return det(self.rows)

    def inverse(self) -> "Matrix":
        n = self.nrows
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        aug = [r + unit(n, i) for i, r in enumerate(self.rows)]
        basis, pivots = rref(aug, 2 * n)
        if pivots[:n] != tuple(range(n)) or len(pivots) < n:
            raise ZeroDivisionError("singular matrix")
        return Matrix._raw(tuple(r[n:] for r in basis), n)

    def kernel_vectors(self):
        return nullspace(self.rows, self.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(cols))

    def commutator(self, other: "Matrix") -> "Matrix":
        return self @ other - other @ self

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ncols, self.rows))
        return self._hash

    def tolist(self):
        return [list(r) for r in self.rows]

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix[{self.nrows}x{self.ncols}]({body})"


def shift_matrix(n: int) -> Matrix:
    """Single nilpotent Jordan block: ``e_{j+1} -> e_j``, ``e_0 -> 0``."""
    return Matrix([[1 if j == i + 1 else 0 for j in range(n)] for i in range(n)]) if n else Matrix.zeros(0, 0)


def jordan_nilpotent(sizes: Sequence[int]) -> Matrix:
    """Block-diagonal nilpotent matrix with Jordan blocks of the given sizes."""
    return Matrix.block_diagonal([shift_matrix(s) for s in sizes]) if sizes else Matrix.zeros(0, 0)
