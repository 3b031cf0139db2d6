"""Independent reference computations used by the tests.

Nothing here calls the filtration or complex code under test; the oracles
only share the exact matrix and subspace types.
"""

from __future__ import annotations

import random
from fractions import Fraction

import sympy

from mhslin.exactlin import IncFiltration, Matrix, Subspace
from mhslin.exactlin.filtration import direct_sum


# random exact data ------------------------------------------------------------------

def partitions(n: int, top: int | None = None):
    top = n if top is None else top
    if n == 0:
        yield []
        return
    for k in range(min(n, top), 0, -1):
        for rest in partitions(n - k, k):
            yield [k] + rest


def random_partition(rng: random.Random, n: int) -> list[int]:
    parts = []
    left = n
    while left:
        k = rng.randint(1, left)
        parts.append(k)
        left -= k
    return sorted(parts, reverse=True)


def jordan_matrix(sizes) -> Matrix:
    n = sum(sizes)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for s in sizes:
        for i in range(s - 1):
            rows[off + i][off + i + 1] = 1
        off += s
    return Matrix(rows) if n else Matrix.zeros(0, 0)


def random_invertible(rng: random.Random, n: int, spread: int = 2) -> Matrix:
    """Product of random unit lower and unit upper triangular integer matrices."""
    lo = [[1 if i == j else (rng.randint(-spread, spread) if j < i else 0) for j in range(n)] for i in range(n)]
    up = [[1 if i == j else (rng.randint(-spread, spread) if j > i else 0) for j in range(n)] for i in range(n)]
    if n == 0:
        return Matrix.zeros(0, 0)
    return Matrix(lo) @ Matrix(up)


def random_nilpotent(rng: random.Random, n: int, spread: int = 1) -> tuple[Matrix, list[int]]:
    sizes = random_partition(rng, n)
    p = random_invertible(rng, n, spread)
    return p @ jordan_matrix(sizes) @ p.inverse(), sizes


# monodromy filtration by induction on the nilpotency index ---------------------------------

def recursive_monodromy(n: Matrix, center: int = 0) -> dict[int, Subspace]:
    """Levels ``M_k`` built from the outermost string inward.

    On a subquotient ``A/B`` with ``N^{l+1} A ⊆ B`` and ``N^l A ⊄ B`` put
    ``M_l = A``, ``M_{l-1} = {x in A : N^l x in B}``, ``M_{-l} = N^l A + B``,
    ``M_{-l-1} = B`` and recurse on ``M_{l-1}/M_{-l}``.
    """
    dim = n.nrows
    levels: dict[int, Subspace] = {}

    powers = [Matrix.identity(dim)]

    def power(e):
        while len(powers) <= e:
            powers.append(powers[-1] @ n)
        return powers[e]

    def rec(a: Subspace, b: Subspace):
        if a == b:
            return
        e = 0
        while not a.image(power(e)) <= b:
            e += 1
        l = e - 1
        levels[l] = a
        levels[-l - 1] = b
        if l == 0:
            return
        upper = a & b.preimage(power(l))
        lower = a.image(power(l)) + b
        levels[l - 1] = upper
        levels[-l] = lower
        rec(upper, lower)

    rec(Subspace.full(dim), Subspace.zero(dim))
    out = {}
    if not levels:
        return out
    lo, hi = min(levels), max(levels)
    cur = Subspace.zero(dim)
    for k in range(lo, hi + 1):
        if k in levels:
            cur = levels[k]
        out[center + k] = cur
    return out


def filtration_from_levels(dim: int, levels: dict[int, Subspace]) -> IncFiltration:
    if not levels:
        return IncFiltration(dim, [])
    return IncFiltration(dim, sorted(levels.items()))


# graded relative monodromy instances --------------------------------------------------------

def random_w_automorphism(rng: random.Random, weights: list[int], spread: int = 2) -> Matrix:
    """Random ``g`` with ``g W_k = W_k`` for the coordinate filtration of ``weights``."""
    n = len(weights)
    while True:
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if weights[i] < weights[j]:
                    rows[i][j] = rng.randint(-spread, spread)
                elif weights[i] == weights[j]:
                    rows[i][j] = (1 if i == j else 0) + rng.randint(-1, 1)
        g = Matrix(rows)
        if g.det() != 0:
            return g


def graded_instance(rng: random.Random, dim: int, jumps: int):
    """``(N, W, M)`` with ``N`` graded for a splitting of ``W``, transported by a random ``g``.

    On each weight block ``l`` the expected filtration is the monodromy
    filtration of the block centered at ``l``.
    """
    jumps = max(1, min(jumps, dim))
    cuts = sorted(rng.sample(range(1, dim), jumps - 1)) if jumps > 1 else []
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [dim])]
    start = rng.randint(-3, 1)
    block_weights = [start + 2 * i + rng.randint(0, 1) for i in range(len(sizes))]
    block_weights = sorted(set(block_weights))
    while len(block_weights) < len(sizes):
        block_weights.append(block_weights[-1] + 1)
    weights = [w for w, s in zip(block_weights, sizes) for _ in range(s)]
    blocks, filts = [], []
    for s, w in zip(sizes, block_weights):
        nb, _ = random_nilpotent(rng, s)
        blocks.append(nb)
        filts.append(filtration_from_levels(s, recursive_monodromy(nb, w)))
    n0 = Matrix.block_diagonal(blocks)
    m0 = direct_sum(filts)
    g = random_w_automorphism(rng, weights)
    n = g @ n0 @ g.inverse()
    m = IncFiltration(dim, [(k, s.image(g)) for k, s in m0.jumps])
    return n, IncFiltration.from_weights(weights), m


def random_w_nilpotent(rng: random.Random, weights: list[int]) -> Matrix:
    """A nilpotent preserving the coordinate filtration, not necessarily graded."""
    n = len(weights)
    blocks = {}
    for i, w in enumerate(weights):
        blocks.setdefault(w, []).append(i)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for w, idx in blocks.items():
        nb, _ = random_nilpotent(rng, len(idx))
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                rows[i][j] = nb[a, b]
    for i in range(n):
        for j in range(n):
            if weights[i] < weights[j] and rng.random() < 0.5:
                rows[i][j] = Fraction(rng.randint(-2, 2))
    g = random_w_automorphism(rng, weights)
    return g @ Matrix(rows) @ g.inverse()


# ranks and homology through an outside CAS --------------------------------------------------

def cas_rank(m: Matrix) -> int:
    if m.nrows == 0 or m.ncols == 0:
        return 0
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in m.rows]).rank()


def homology_dims(dims: dict[int, int], diffs: dict[int, Matrix]) -> dict[int, int]:
    """``dim H^n = dim C^n - rank d^n - rank d^{n-1}`` with ranks from sympy."""
    ranks = {n: cas_rank(d) for n, d in diffs.items()}
    return {n: dims[n] - ranks.get(n, 0) - ranks.get(n - 1, 0) for n in dims}


def kernel_dim(m: Matrix) -> int:
    return m.ncols - cas_rank(m)


def complex_homology(cx) -> list[int]:
    dims = {p: d for p, d in enumerate(cx.dims)}
    diffs = {p: m for p, m in enumerate(cx.d)}
    h = homology_dims(dims, diffs)
    return [h[p] for p in range(len(cx.dims))]
