"""Homomorphisms between small commutative group schemes over F_q.

A group scheme here is represented by its Hopf algebra ``F_q[x]/(f)`` with
x grouplike (``mu_N``: ``f = x^N - 1``) or primitive (``alpha_p``:
``f = x^p``; ``Z/p``: ``f = x^p - x``).  ``G_m`` is allowed as a target
only.  A map ``G -> H`` is a Hopf map ``O(H) -> O(G)``, fixed by the image
y of x, so Hom is found by exhausting y over ``O(G)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import PreconditionError, ResourceCapError
from .gf import GF, field, prime_power
from .lattice import AbelianGroup

DEFAULT_HOM_CAP = 200_000


@dataclass(frozen=True)
class FiniteGroupSchemeTag:
    kind: str  # "mu" | "alpha" | "Z/p" | "Gm"
    q: int
    m: int = 1  # mu_{p^m}

    def __post_init__(self):
        if self.kind not in ("mu", "alpha", "Z/p", "Gm"):
            raise PreconditionError(f"unknown group scheme {self.kind!r}")
        prime_power(self.q)
        if self.kind == "mu" and self.m < 0:
            raise PreconditionError("mu needs m >= 0")

    @property
    def p(self) -> int:
        return prime_power(self.q)[0]

    @property
    def order(self) -> int | None:
        if self.kind == "Gm":
            return None
        return self.p**self.m if self.kind == "mu" else self.p

    @property
    def grouplike(self) -> bool:
        return self.kind in ("mu", "Gm")

    def __str__(self):
        name = {"mu": f"mu_{self.p ** self.m}", "alpha": f"alpha_{self.p}", "Z/p": f"Z/{self.p}", "Gm": "G_m"}[self.kind]
        return f"{name}/F_{self.q}"

    def relation(self) -> list[int]:
        """Coefficients of f, low degree first (F_q encoded)."""
        F = field(self.q)
        N = self.order
        f = [0] * (N + 1)
        f[N] = 1
        if self.kind == "mu":
            f[0] = F.neg(1)
        elif self.kind == "Z/p":
            f[1] = F.neg(1)
        return f


def mu(p: int, m: int = 1, q: int | None = None) -> FiniteGroupSchemeTag:
    return FiniteGroupSchemeTag("mu", q or p, m)


def alpha(p: int, q: int | None = None) -> FiniteGroupSchemeTag:
    return FiniteGroupSchemeTag("alpha", q or p)


def constant(p: int, q: int | None = None) -> FiniteGroupSchemeTag:
    return FiniteGroupSchemeTag("Z/p", q or p)


def gm(p: int, q: int | None = None) -> FiniteGroupSchemeTag:
    return FiniteGroupSchemeTag("Gm", q or p)


class HopfAlgebra:
    """``F_q[x]/(f)`` with basis ``1, x, ..., x^{N-1}``."""

    def __init__(self, tag: FiniteGroupSchemeTag):
        if tag.kind == "Gm":
            raise PreconditionError("G_m has no finite Hopf algebra")
        self.tag = tag
        self.F = field(tag.q)
        self.dim = tag.order
        self.f = tag.relation()

    @cached_property
    def _powers(self) -> list[list[int]]:
        """``x^k`` reduced, for ``k < 2 dim``."""
        F, N = self.F, self.dim
        out = []
        cur = [1] + [0] * (N - 1)
        for _ in range(2 * N):
            out.append(cur)
            # multiply by x, reduce x^N = -(f_0 + ... )
            top = cur[-1]
            nxt = [0] + cur[:-1]
            if top:
                nxt = [F.sub(a, F.mul(top, c)) for a, c in zip(nxt, self.f[:N])]
            cur = nxt
        return out

    def mul(self, a: list[int], b: list[int]) -> list[int]:
        F, N = self.F, self.dim
        acc = [0] * (2 * N)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        acc[i + j] = F.add(acc[i + j], F.mul(x, y))
        out = [0] * N
        for k, c in enumerate(acc):
            if c:
                for t, v in enumerate(self._powers[k]):
                    if v:
                        out[t] = F.add(out[t], F.mul(c, v))
        return out

    def power(self, a: list[int], e: int) -> list[int]:
        result = self.one()
        for _ in range(e):
            result = self.mul(result, a)
        return result

    def one(self) -> list[int]:
        return [1] + [0] * (self.dim - 1)

    def x(self) -> list[int]:
        v = [0] * self.dim
        if self.dim > 1:
            v[1] = 1
        else:
            v = self._powers[1][:]
        return v

    @cached_property
    def counit(self) -> list[int]:
        """``eps(x^i)``."""
        e = 1 if self.tag.grouplike else 0
        return [self.F.pow(e, i) if i else 1 for i in range(self.dim)]

    @cached_property
    def coproduct(self) -> list[list[list[int]]]:
        """``Delta(x^i)`` as ``dim x dim`` coefficient matrices."""
        F, N = self.F, self.dim
        if self.tag.grouplike:
            dx = _outer(F, self.x(), self.x())
        else:
            dx = [[F.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(_outer(F, self.x(), self.one()), _outer(F, self.one(), self.x()))]
        out = [_outer(F, self.one(), self.one())]
        for _ in range(1, N):
            out.append(self._tensor_mul(out[-1], dx))
        return out

    def _tensor_mul(self, a, b):
        F, N = self.F, self.dim
        out = [[0] * N for _ in range(N)]
        for i1 in range(N):
            for j1 in range(N):
                c1 = a[i1][j1]
                if not c1:
                    continue
                for i2 in range(N):
                    for j2 in range(N):
                        c2 = b[i2][j2]
                        if not c2:
                            continue
                        c = F.mul(c1, c2)
                        left = self._powers[i1 + i2]
                        right = self._powers[j1 + j2]
                        for u, lu in enumerate(left):
                            if lu:
                                for v, rv in enumerate(right):
                                    if rv:
                                        out[u][v] = F.add(out[u][v], F.mul(c, F.mul(lu, rv)))
        return out

    def delta(self, y: list[int]) -> list[list[int]]:
        F, N = self.F, self.dim
        out = [[0] * N for _ in range(N)]
        for i, c in enumerate(y):
            if c:
                for u in range(N):
                    for v in range(N):
                        w = self.coproduct[i][u][v]
                        if w:
                            out[u][v] = F.add(out[u][v], F.mul(c, w))
        return out

    def eval_counit(self, y: list[int]) -> int:
        return self.F.dot(y, self.counit)


def _outer(F: GF, a: list[int], b: list[int]) -> list[list[int]]:
    return [[F.mul(x, y) for y in b] for x in a]


@dataclass(frozen=True)
class HomGroup:
    source: FiniteGroupSchemeTag
    target: FiniteGroupSchemeTag
    images: tuple[tuple[int, ...], ...]  # image of x for each homomorphism
    invariants: AbelianGroup

    @property
    def order(self) -> int:
        return len(self.images)

    def describe(self) -> list[str]:
        out = []
        for y in self.images:
            terms = [f"{c}*x^{i}" if i else str(c) for i, c in enumerate(y) if c]
            out.append("x -> " + (" + ".join(terms) or "0"))
        return out


def hom_group_schemes(a: FiniteGroupSchemeTag, b: FiniteGroupSchemeTag, cap: int = DEFAULT_HOM_CAP) -> HomGroup:
    """All homomorphisms ``a -> b`` by exhaustive search.

    Coordinates of y are assigned in order and each entry of the coproduct
    constraint is tested as soon as every coordinate it involves is fixed,
    so the search is complete while pruning early.  ``cap`` bounds the
    number of partial assignments visited.
    """
    if a.q != b.q:
        raise PreconditionError("group schemes over different fields")
    if a.kind == "Gm":
        raise PreconditionError("G_m is only supported as a target")
    A = HopfAlgebra(a)
    F, N = A.F, A.dim
    target_counit = 1 if b.grouplike else 0
    rel = None if b.kind == "Gm" else b.relation()
    # entry (u, v) of Delta(y) - (y (x) y or y (x) 1 + 1 (x) y) is decided at depth
    checks: dict[int, list[tuple[int, int]]] = {}
    for u in range(N):
        for v in range(N):
            involved = {k for k in range(N) if A.coproduct[k][u][v]}
            if b.grouplike:
                involved |= {u, v}
            else:
                involved |= {0} | ({u} if v == 0 else set()) | ({v} if u == 0 else set())
            checks.setdefault(max(involved), []).append((u, v))

    def entry(y, u, v):
        lhs = F.sum(F.mul(y[k], A.coproduct[k][u][v]) for k in range(N) if y[k] and A.coproduct[k][u][v])
        if b.grouplike:
            rhs = F.mul(y[u], y[v])
        else:
            rhs = F.add(y[u] if v == 0 else 0, y[v] if u == 0 else 0)
        return lhs == rhs

    found = []
    visited = 0
    y = [0] * N

    def extend(depth):
        nonlocal visited
        if depth == N:
            if A.eval_counit(y) != target_counit:
                return
            if rel is not None:
                val = [0] * N
                for k, c in enumerate(rel):
                    if c:
                        val = [F.add(s, F.mul(c, t)) for s, t in zip(val, A.power(y, k))]
                if any(val):
                    return
            found.append(tuple(y))
            return
        for c in range(F.q):
            visited += 1
            if visited > cap:
                raise ResourceCapError("Hopf map search", cap)
            y[depth] = c
            if all(entry(y, u, v) for u, v in checks.get(depth, ())):
                extend(depth + 1)
        y[depth] = 0

    extend(0)
    return HomGroup(a, b, tuple(found), _hom_invariants(A, b, found))


def _hom_invariants(A: HopfAlgebra, b: FiniteGroupSchemeTag, homs: list[tuple[int, ...]]) -> AbelianGroup:
    """Invariant factors under convolution: product of images when the
    target coordinate is grouplike, sum when it is primitive."""
    F = A.F
    if not homs:
        raise AssertionError("the trivial homomorphism always exists")
    unit = tuple(A.one()) if b.grouplike else tuple([0] * A.dim)
    members = set(homs)

    def op(u, v):
        if b.grouplike:
            return tuple(A.mul(list(u), list(v)))
        return tuple(F.add(x, y) for x, y in zip(u, v))

    orders = {}
    for h in homs:
        cur, k = h, 1
        while cur != unit:
            cur = op(cur, h)
            k += 1
            if cur not in members:
                raise AssertionError("Hom set is not closed under convolution")
        orders[h] = k
    return _group_from_orders(list(orders.values()))


def _group_from_orders(orders: list[int]) -> AbelianGroup:
    """Invariant factors of a finite abelian p-group from its element orders."""
    total = len(orders)
    if total == 1:
        return AbelianGroup(0, ())
    p, _ = prime_power(total)
    # r_i = log_p |G[p^i]| - log_p |G[p^{i-1}]| = #cyclic factors of order >= p^i
    logs = [0]
    i = 1
    while True:
        cnt = sum(1 for o in orders if (p**i) % o == 0)
        logs.append(_ilog(cnt, p))
        if cnt == total:
            break
        i += 1
    r = [logs[i] - logs[i - 1] for i in range(1, len(logs))] + [0]
    factors = []
    for i in range(1, len(r)):
        factors += [p**i] * (r[i - 1] - r[i])
    return AbelianGroup(0, tuple(sorted(factors)))


def _ilog(n: int, p: int) -> int:
    k = 0
    while n > 1:
        if n % p:
            raise AssertionError(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k
