"""Picard groups of the thickened lines X_n and their p-torsion.

``Pic(X_n) = Z + K`` where ``K = H^1(X_n, 1 + N)`` and N is the nilradical.
Classes of K are handled through a multiplicative normal form on the Cech
overlap: a unit ``1 + ...`` is divided, level by level in eps, by factors
extending over either chart until only the middle band ``-j < m < 0``
remains at each level j.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import PreconditionError, ResourceCapError
from .lattice import AbelianGroup
from .truncated import FieldCoefficients, TruncatedRingElement, truncated_exp, truncated_log
from .cohomology import CurveParams, cech_h1_thickened

Position = tuple[int, int]  # (m, j)


class UnitNormalForm:
    """Normal form for ``H^1(X_n, 1 + N)`` over F_q."""

    def __init__(self, params: CurveParams):
        self.params = params
        self.F = params.field
        self.d = params.d
        self.ring = FieldCoefficients(self.F)
        self.positions: list[Position] = [(m, j) for j in range(2, self.d) for m in range(-j + 1, 0)]
        self._index = {pos: i for i, pos in enumerate(self.positions)}

    @property
    def length(self) -> int:
        return len(self.positions)

    def element(self, terms) -> TruncatedRingElement:
        return TruncatedRingElement(self.ring, self.d, terms)

    def one(self) -> TruncatedRingElement:
        return self.element({(0, 0): 1})

    def _factor(self, coeffs: dict[int, int], j: int) -> TruncatedRingElement:
        terms = {(m, j): c for m, c in coeffs.items()}
        terms[(0, 0)] = 1
        return self.element(terms)

    def normal_form(self, u: TruncatedRingElement) -> tuple[int, ...]:
        if not u.is_one_plus_nilpotent():
            raise PreconditionError("unit is not 1 + nilpotent")
        out = [0] * self.length
        for j in range(1, self.d):
            c = u.eps_coefficient(j)
            if not c:
                continue
            low = {m: v for m, v in c.items() if m >= 0}  # extends over z != 0
            high = {m: v for m, v in c.items() if m <= -j}  # extends over x != 0
            mid = {m: v for m, v in c.items() if -j < m < 0}
            for part in (low, high, mid):
                if part:
                    u = u * self._factor(part, j).inverse_one_plus()
            for m, v in mid.items():
                out[self._index[(m, j)]] = v
            assert not u.eps_coefficient(j)
        return tuple(out)

    def representative(self, coords: Sequence[int]) -> TruncatedRingElement:
        u = self.one()
        for j in range(2, self.d):
            part = {m: coords[self._index[(m, j)]] for m in range(-j + 1, 0) if coords[self._index[(m, j)]]}
            if part:
                u = u * self._factor(part, j)
        return u

    def multiply(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return self.normal_form(self.representative(a) * self.representative(b))

    def power(self, a: Sequence[int], e: int) -> tuple[int, ...]:
        return self.normal_form(self.representative(a) ** e)

    def elements(self, cap: int = 1 << 16) -> Iterator[tuple[int, ...]]:
        total = self.F.q**self.length
        if total > cap:
            raise ResourceCapError("unit group enumeration", cap)
        return itertools.product(range(self.F.q), repeat=self.length)

    def level_of(self, coords: Sequence[int]) -> int:
        """Least eps level carrying a nonzero coordinate (d if trivial)."""
        return min((self.positions[i][1] for i, c in enumerate(coords) if c), default=self.d)


@dataclass(frozen=True)
class ThickeningStep:
    """Data of ``X_{m-1} in X_m`` with ideal ``I = eps^{p^{m-1}}``."""

    m: int
    ideal_power_zero: bool  # I^p = 0 on X_m
    exp_is_iso: bool  # exp/log identities on sampled cochains of I
    h1_dim: int  # dim_{F_q} H^1(X_m, I)


@dataclass(frozen=True)
class PicardTorsion:
    params: CurveParams
    kernel_order_log: int  # log_q |K|
    kernel_factors: tuple[int, ...]  # invariant factors of K
    steps: tuple[ThickeningStep, ...]

    @property
    def p_torsion(self) -> AbelianGroup:
        """``Pic(X_n)[p]``, elementary abelian."""
        return AbelianGroup(0, (self.params.p,) * self.p_rank)

    @property
    def p_rank(self) -> int:
        """F_p-dimension of ``Pic(X_n)[p]``."""
        return len(self.kernel_factors)

    @property
    def group(self) -> AbelianGroup:
        """``Pic(X_n) = Z + K``."""
        return AbelianGroup(1, tuple(sorted(self.kernel_factors)))


def _step(params: CurveParams, m: int, samples: int, rng: random.Random) -> ThickeningStep:
    p, q = params.p, params.q
    dm = p**m
    lo = p ** (m - 1)
    sub = CurveParams(p, m, q)
    F = sub.field
    ring = FieldCoefficients(F)
    eps_lo = TruncatedRingElement(ring, dm, {(0, lo): 1})
    ideal_zero = (eps_lo**p).is_zero()
    ok = True
    for _ in range(samples):
        xs = []
        for _ in range(2):
            terms = {(rng.randint(-dm, dm), rng.randint(lo, dm - 1)): rng.randrange(q) for _ in range(3)}
            xs.append(TruncatedRingElement(ring, dm, terms))
        x, y = xs
        ex, ey = truncated_exp(x), truncated_exp(y)
        ok &= truncated_exp(x + y) == ex * ey
        ok &= truncated_log(ex) == x
        ok &= truncated_exp(truncated_log(ex)) == ex
    cech = cech_h1_thickened(sub)
    h1 = sum(1 for (_, j) in cech.basis if j >= lo)
    return ThickeningStep(m, ideal_zero, ok, h1)


def picard_p_torsion(params: CurveParams, samples: int = 20, seed: int = 0) -> PicardTorsion:
    """Structure of ``K = ker(Pic X_n -> Pic X_0)`` and of ``Pic(X_n)[p]``.

    Along ``X_0 in X_1 in ... in X_n`` each ideal squares to zero p-fold, so
    the truncated exponential identifies ``H^1(1 + I)`` with ``H^1(I)`` and
    the orders multiply.  The group structure comes from the p-th power map
    on the eps filtration of the normal form: it must carry level j
    injectively to level pj (checked on generators), which pins down every
    ``K[p^i]`` as the classes of level at least ``d / p^i``.
    """
    p, d = params.p, params.d
    rng = random.Random(seed)
    steps = tuple(_step(params, m, samples, rng) for m in range(1, params.n + 1))
    for s in steps:
        if not (s.ideal_power_zero and s.exp_is_iso):
            raise PreconditionError(f"thickening step {s.m} failed its exp/log check")
    order_log = sum(s.h1_dim for s in steps)
    nf = UnitNormalForm(params)
    if order_log != nf.length:
        raise PreconditionError("normal form size disagrees with the inductive order")
    F = params.field
    # p-th power on generators 1 + beta s^m eps^j
    for idx, (m, j) in enumerate(nf.positions):
        for l in range(F.k):
            beta = F.p**l
            coords = [0] * nf.length
            coords[idx] = beta
            img = nf.power(coords, p)
            if p * j < d:
                target = nf._index[(p * m, p * j)]
                if nf.level_of(img) != p * j or img[target] != F.frob(beta):
                    raise PreconditionError(f"p-th power is not injective on level {j}")
            elif any(img):
                raise PreconditionError(f"p-th power of level {j} should vanish")
    # |K[p^i]| = q^{#positions with level >= d/p^i}
    k = F.k
    counts = []
    i = 1
    while True:
        bound = -(-d // p**i)
        counts.append(k * sum(1 for (_, j) in nf.positions if j >= bound))
        if counts[-1] == k * nf.length:
            break
        i += 1
    factors = []
    ranks = [c - prev for prev, c in zip([0] + counts[:-1], counts)]
    # ranks[i-1] = number of cyclic factors of order >= p^i
    for i, r in enumerate(ranks, start=1):
        nxt = ranks[i] if i < len(ranks) else 0
        factors += [p**i] * (r - nxt)
    return PicardTorsion(params, order_log, tuple(sorted(factors)), steps)


def brute_force_kernel(params: CurveParams, cap: int = 1 << 12) -> tuple[int, dict[int, int]]:
    """Oracle: enumerate K, return ``(|K|, {i: |K[p^i]|})`` by repeated
    multiplication of normal-form representatives."""
    nf = UnitNormalForm(params)
    p = params.p
    elems = list(nf.elements(cap))
    identity = tuple([0] * nf.length)
    torsion: dict[int, int] = {}
    orders = {}
    for e in elems:
        order = 1
        rep = nf.representative(e)
        cur = rep
        while nf.normal_form(cur) != identity:
            cur = cur * rep
            order += 1
            if order > len(elems):
                raise AssertionError("element order exceeds group order")
        orders[e] = order
    i = 1
    while True:
        torsion[i] = sum(1 for o in orders.values() if p**i % o == 0)
        if torsion[i] == len(elems):
            break
        i += 1
    return len(elems), torsion
