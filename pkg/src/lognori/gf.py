"""Finite fields F_q as integer-coded elements, with dense linear algebra.

An element of F_q, q = p^k, is an int in ``range(q)`` whose base-p digits
are the coefficients of a polynomial in a fixed primitive root.  Addition
is digitwise; multiplication goes through discrete log tables.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Sequence

from .errors import PreconditionError


def prime_power(q: int) -> tuple[int, int]:
    """``(p, k)`` with ``q = p^k``; raises for non prime powers."""
    if q < 2:
        raise PreconditionError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise PreconditionError(f"{q} is not a prime power")
    return p, k


class GF:
    """The field with ``q`` elements."""

    def __init__(self, q: int):
        self.q = q
        self.p, self.k = prime_power(q)
        p, k = self.p, self.k
        self.modulus = _primitive_polynomial(p, k)
        # antilog[i] = g^i as a digit vector, g = class of X
        self.exp: list[int] = [0] * (2 * q)
        self.log: list[int] = [0] * q
        cur = [1] + [0] * (k - 1)
        for i in range(q - 1):
            code = self._encode(cur)
            self.exp[i] = code
            self.log[code] = i
            cur = self._times_x(cur)
        for i in range(q - 1, 2 * q):
            self.exp[i] = self.exp[i - (q - 1)]
        self._add = [[self._encode([(a + b) % p for a, b in zip(self._decode(x), self._decode(y))]) for y in range(q)] for x in range(q)]
        self._neg = [self._encode([(-a) % p for a in self._decode(x)]) for x in range(q)]

    def _encode(self, digits: Sequence[int]) -> int:
        return sum(d * self.p**i for i, d in enumerate(digits))

    def _decode(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(x % self.p)
            x //= self.p
        return out

    def digits(self, x: int) -> list[int]:
        """Coordinates of ``x`` over F_p."""
        return self._decode(x)

    def from_digits(self, d: Sequence[int]) -> int:
        return self._encode([v % self.p for v in d])

    def _times_x(self, v: list[int]) -> list[int]:
        p, k = self.p, self.k
        top = v[-1]
        out = [0] + v[:-1]
        # X^k = -(c_0 + ... + c_{k-1} X^{k-1})
        return [(out[i] - top * self.modulus[i]) % p for i in range(k)]

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in " + repr(self))
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        return self.exp[(self.log[a] * e) % (self.q - 1)]

    def frob(self, a: int) -> int:
        return self.pow(a, self.p)

    def from_int(self, n: int) -> int:
        """Image of an integer in the prime field."""
        return n % self.p

    def sum(self, xs) -> int:
        acc = 0
        for x in xs:
            acc = self._add[acc][x]
        return acc

    def dot(self, a: Sequence[int], b: Sequence[int]) -> int:
        acc = 0
        for x, y in zip(a, b):
            if x and y:
                acc = self._add[acc][self.exp[self.log[x] + self.log[y]]]
        return acc


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


def _primitive_polynomial(p: int, k: int) -> tuple[int, ...]:
    """Lowest monic degree-k polynomial over F_p whose root generates F_q^*,
    as its low-order coefficients ``c_0..c_{k-1}``."""
    if k == 1:
        # X - g for the least primitive root g
        g = next(g for g in range(1, p) if p == 2 or all(pow(g, (p - 1) // r, p) != 1 for r in _prime_factors(p - 1)))
        return ((-g) % p,)
    order = p**k - 1
    factors = _prime_factors(order)
    for coeffs in itertools.product(range(p), repeat=k):
        if coeffs[0] == 0:
            continue
        if _x_order_ok(coeffs, p, k, order, factors):
            return coeffs
    raise AssertionError("no primitive polynomial found")


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _polmulmod(a, b, mod, p, k):
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(2 * k - 2, k - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for i in range(k):
                prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
    return prod[:k]


def _polpow(e, mod, p, k):
    result = [1] + [0] * (k - 1)
    base = [0, 1] + [0] * (k - 2)
    while e:
        if e & 1:
            result = _polmulmod(result, base, mod, p, k)
        base = _polmulmod(base, base, mod, p, k)
        e >>= 1
    return result


def _x_order_ok(mod, p, k, order, factors) -> bool:
    one = [1] + [0] * (k - 1)
    if _polpow(order, mod, p, k) != one:
        return False
    return all(_polpow(order // r, mod, p, k) != one for r in factors)


# -- linear algebra over F_q ----------------------------------------------

Mat = list[list[int]]


def rref(F: GF, m: Sequence[Sequence[int]], ncols: int) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [list(r) for r in m]
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, len(a)) if a[r][col]), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = F.inv(a[row][col])
        a[row] = [F.mul(inv, x) for x in a[row]]
        for r in range(len(a)):
            if r != row and a[r][col]:
                f = a[r][col]
                a[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
        if row == len(a):
            break
    return a[:row], pivots


def rank(F: GF, m: Sequence[Sequence[int]], ncols: int) -> int:
    return len(rref(F, m, ncols)[1])


def nullspace(F: GF, m: Sequence[Sequence[int]], ncols: int) -> Mat:
    """Basis of ``{v : m v = 0}`` as a list of vectors."""
    r, pivots = rref(F, m, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [0] * ncols
        v[fcol] = 1
        for row, pc in zip(r, pivots):
            v[pc] = F.neg(row[fcol])
        basis.append(v)
    return basis


def mat_mul(F: GF, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Mat:
    if not a:
        return []
    cols = list(zip(*b)) if b else []
    ncols = len(b[0]) if b else 0
    return [[F.dot(row, col) for col in cols] if cols else [0] * ncols for row in a]


def mat_vec(F: GF, a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [F.dot(row, v) for row in a]


def inverse(F: GF, a: Sequence[Sequence[int]]) -> Mat:
    n = len(a)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    r, piv = rref(F, aug, 2 * n)
    if piv[:n] != list(range(n)) or len(r) < n:
        raise PreconditionError("matrix is singular")
    return [row[n:] for row in r]


def solve(F: GF, a: Sequence[Sequence[int]], b: Sequence[int], ncols: int) -> list[int] | None:
    """Some solution of ``a x = b``, or None."""
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    r, piv = rref(F, aug, ncols + 1)
    if ncols in piv:
        return None
    x = [0] * ncols
    for row, pc in zip(r, piv):
        x[pc] = row[ncols]
    return x
