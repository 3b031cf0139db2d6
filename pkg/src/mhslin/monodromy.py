"""Monodromy data: unipotent logarithms, exponentials and quasi-unipotence.

``unipotent_log`` returns the rational matrix ``Log T``.  The usual
normalisation ``N = -Log T / (2 pi i)`` is never applied as a scalar; it is
carried by ``NilpotentFamily.twist`` and only affects Tate-twist
bookkeeping.  Filtrations built from ``N`` do not see the scalar factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .exactlin.matrix import Matrix
from .report import Report

LOG_TWIST = "log"   # N stores Log T; the -1/(2 pi i) factor is a twist tag


class NotUnipotent(ValueError):
    pass


class NotNilpotent(ValueError):
    pass


@dataclass(frozen=True)
class NotQuasiUnipotent:
    reason: str = "eigenvalue that is not a root of unity"

    def __bool__(self):
        return False


@dataclass(frozen=True)
class QuasiUnipotence:
    a: int
    b: int


@dataclass
class MonodromyFamily:
    dim: int
    operators: list = field(default_factory=list)
    twist_convention: str = LOG_TWIST
    kind = "unipotent"


@dataclass
class NilpotentFamily:
    dim: int
    operators: list = field(default_factory=list)
    twist: str = LOG_TWIST
    kind = "nilpotent"

    @property
    def m(self) -> int:
        return len(self.operators)

    @property
    def nilpotency_indices(self) -> list[int]:
        return [nilpotency_index(n) for n in self.operators]

    def __getitem__(self, i) -> Matrix:
        return self.operators[i]

    def __len__(self):
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    def product(self, J: Sequence[int]) -> Matrix:
        """``N_J``, the product over ``J`` (identity for ``J`` empty)."""
        out = Matrix.identity(self.dim)
        for j in J:
            out = out @ self.operators[j]
        return out

    def total(self, J: Sequence[int], weights: Sequence | None = None) -> Matrix:
        """``sum_{j in J} t_j N_j`` (all ``t_j = 1`` by default)."""
        out = Matrix.zeros(self.dim, self.dim)
        for pos, j in enumerate(J):
            t = 1 if weights is None else weights[pos]
            out = out + self.operators[j].scale(t)
        return out


def is_nilpotent(n: Matrix) -> bool:
    return n.is_square() and (n ** n.nrows).is_zero()


def nilpotency_index(n: Matrix) -> int:
    """Smallest ``r >= 0`` with ``n^r = 0``; raises for non-nilpotent ``n``."""
    if not n.is_square():
        raise NotNilpotent("non-square matrix")
    p = Matrix.identity(n.nrows)
    for r in range(n.nrows + 1):
        if p.is_zero():
            return r
        p = p @ n
    raise NotNilpotent("matrix is not nilpotent")


def is_unipotent(t: Matrix) -> bool:
    return t.is_square() and is_nilpotent(t - Matrix.identity(t.nrows))


def _series(x: Matrix, coeff) -> Matrix:
    """``sum_{k>=1} coeff(k) x^k`` for nilpotent ``x`` (terminates)."""
    n = x.nrows
    out = Matrix.zeros(n, n)
    p = x
    k = 1
    while not p.is_zero():
        out = out + p.scale(coeff(k))
        p = p @ x
        k += 1
        if k > n + 1:
            raise NotNilpotent("series did not terminate")
    return out


def unipotent_log(t: Matrix) -> Matrix:
    if not is_unipotent(t):
        raise NotUnipotent("T - I is not nilpotent")
    x = t - Matrix.identity(t.nrows)
    return _series(x, lambda k: Fraction((-1) ** (k + 1), k))


def exp_nilpotent(n: Matrix) -> Matrix:
    if not is_nilpotent(n):
        raise NotNilpotent("matrix is not nilpotent")
    fact = [1]
    for k in range(1, n.nrows + 2):
        fact.append(fact[-1] * k)
    return Matrix.identity(n.nrows) + _series(n, lambda k: Fraction(1, fact[k]))


# quasi-unipotence -------------------------------------------------------------

def totient(n: int) -> int:
    out = 0
    for k in range(1, n + 1):
        if gcd(k, n) == 1:
            out += 1
    return out


def candidate_orders(dim: int) -> list[int]:
    """All ``n`` with ``phi(n) <= dim``; ``phi(n) >= sqrt(n/2)`` bounds the search."""
    return [n for n in range(1, 2 * dim * dim + 3) if totient(n) <= dim]


def _pdivmod(a: list, b: list):
    """Polynomial division, coefficients low degree first."""
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and any(a):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        while a and a[-1] == 0:
            a.pop()
    return q, a


def cyclotomic(n: int, _cache={}) -> list:
    if n not in _cache:
        p = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
        for d in range(1, n):
            if n % d == 0:
                p, r = _pdivmod(p, cyclotomic(d))
                assert not r
        _cache[n] = p
    return _cache[n]


def characteristic_polynomial(t: Matrix) -> list:
    """``det(x I - t)`` by Faddeev-LeVerrier; coefficients low degree first."""
    n = t.nrows
    c = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    m = Matrix.zeros(n, n)
    ident = Matrix.identity(n)
    for k in range(1, n + 1):
        m = t @ m + ident.scale(c[n - k + 1])
        tm = t @ m
        c[n - k] = -sum((tm[i, i] for i in range(n)), Fraction(0)) / k
    return c


def quasi_unipotence(t: Matrix):
    """Minimal ``(a, b)`` with ``(T^a - I)^b = 0``, or ``NotQuasiUnipotent``.

    The orders of the eigenvalues are found by stripping cyclotomic factors
    ``Phi_n`` (``phi(n) <= dim``) off the characteristic polynomial; ``a``
    is the lcm of the orders found, then ``b`` is searched directly.
    """
    if not t.is_square():
        raise ValueError("non-square matrix")
    if not t.is_rational():
        raise ValueError("monodromy operators must be rational")
    if t.det() == 0:
        raise ZeroDivisionError("singular monodromy operator")
    n = t.nrows
    if n == 0:
        return QuasiUnipotence(1, 0)
    p = characteristic_polynomial(t)
    orders = []
    for k in candidate_orders(n):
        phi = cyclotomic(k)
        while len(p) >= len(phi):
            q, r = _pdivmod(p, phi)
            if r:
                break
            p = q
            orders.append(k)
    if len(p) != 1:
        return NotQuasiUnipotent()
    a = 1
    for k in orders:
        a = a * k // gcd(a, k)
    x = t ** a - Matrix.identity(n)
    p = Matrix.identity(n)
    for b in range(n + 1):
        if p.is_zero():
            return QuasiUnipotence(a, b)
        p = p @ x
    raise AssertionError("T^a is not unipotent although all eigenvalues are roots of unity")


# families -----------------------------------------------------------------------

def validate_family(fam) -> Report:
    """Pairwise commutation plus unipotence or nilpotence of every member.

    Operators are numbered from 1 in the report.
    """
    rep = Report()
    ops = list(fam.operators)
    for i, a in enumerate(ops):
        if a.shape != (fam.dim, fam.dim):
            rep.fail("shape", i + 1, shape=list(a.shape))
            continue
        if fam.kind == "unipotent":
            rep.check(a.det() != 0, "invertible", i + 1)
            rep.check(is_unipotent(a), "unipotent", i + 1)
        else:
            rep.check(is_nilpotent(a), "nilpotent", i + 1)
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if ops[i].shape == ops[j].shape and not ops[i].commutator(ops[j]).is_zero():
                rep.fail("commute", [i + 1, j + 1])
    rep.payload["size"] = len(ops)
    return rep


def log_family(fam: MonodromyFamily) -> NilpotentFamily:
    return NilpotentFamily(fam.dim, [unipotent_log(t) for t in fam.operators], fam.twist_convention)
