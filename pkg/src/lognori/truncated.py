"""Laurent polynomials in s with coefficients in k[eps]/eps^d, over F_q or
over the group ring F_q[t]/(t^d - 1)."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Mapping

from .errors import NilpotencyError, PreconditionError, ResourceCapError
from .gf import GF, field


@dataclass(frozen=True, eq=False)
class GroupRingScalar:
    """Element of ``F_q[t]/(t^d - 1)`` stored as its d coefficients."""

    F: GF
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise PreconditionError("group ring needs d >= 1")

    @property
    def d(self) -> int:
        return len(self.coeffs)

    @classmethod
    def scalar(cls, F: GF, d: int, c: int) -> "GroupRingScalar":
        return cls(F, (c,) + (0,) * (d - 1))

    @classmethod
    def monomial(cls, F: GF, d: int, e: int, c: int = 1) -> "GroupRingScalar":
        co = [0] * d
        co[e % d] = c
        return cls(F, tuple(co))

    def __eq__(self, other):
        return isinstance(other, GroupRingScalar) and self.F == other.F and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.F.q, self.coeffs))

    def __repr__(self):
        terms = [f"{c}*t^{i}" for i, c in enumerate(self.coeffs) if c]
        return "R(" + (" + ".join(terms) or "0") + ")"

    def _check(self, other: "GroupRingScalar"):
        if self.F != other.F or self.d != other.d:
            raise PreconditionError("group ring elements from different rings")

    def __add__(self, other):
        self._check(other)
        return GroupRingScalar(self.F, tuple(self.F.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return GroupRingScalar(self.F, tuple(self.F.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return GroupRingScalar(self.F, tuple(self.F.neg(a) for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingScalar(self.F, tuple(self.F.mul(other, a) for a in self.coeffs))
        self._check(other)
        F, d = self.F, self.d
        out = [0] * d
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    k = (i + j) % d
                    out[k] = F.add(out[k], F.mul(a, b))
        return GroupRingScalar(F, tuple(out))

    def augmentation(self) -> int:
        """Image under ``t -> 1``."""
        return self.F.sum(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return self.augmentation() != 0

    def is_root_of_unity(self) -> bool:
        """``a^d = 1``; since ``a^d`` equals ``aug(a)^d`` this means aug(a) = 1
        when d is a power of the characteristic."""
        return self ** self.d == self.one()

    def one(self) -> "GroupRingScalar":
        return GroupRingScalar.scalar(self.F, self.d, 1)

    def inverse(self) -> "GroupRingScalar":
        # a^d = sum c_i^d t^{i d} is the scalar aug(a)^d when d is a p-power
        if not self.is_unit():
            raise PreconditionError(f"{self} is not a unit")
        ad = self ** self.d
        if any(ad.coeffs[1:]):
            raise PreconditionError("inverse formula needs d to be a power of p")
        return self ** (self.d - 1) * self.F.inv(ad.coeffs[0])

    def __pow__(self, e: int) -> "GroupRingScalar":
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius(self) -> "GroupRingScalar":
        """``a -> a^p``: coefficients to the p-th power, ``t^i -> t^{pi}``."""
        F, d = self.F, self.d
        out = [0] * d
        for i, c in enumerate(self.coeffs):
            if c:
                k = (F.p * i) % d
                out[k] = F.add(out[k], F.frob(c))
        return GroupRingScalar(F, tuple(out))


class CoefficientRing:
    """Arithmetic interface used by :class:`TruncatedRingElement`."""

    F: GF

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError


class FieldCoefficients(CoefficientRing):
    def __init__(self, F: GF):
        self.F = F

    def __eq__(self, other):
        return isinstance(other, FieldCoefficients) and other.F == self.F

    def __hash__(self):
        return hash(("field", self.F.q))

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return self.F.add(a, b)

    def neg(self, a):
        return self.F.neg(a)

    def mul(self, a, b):
        return self.F.mul(a, b)

    def is_zero(self, a) -> bool:
        return a == 0

    def from_field(self, c: int):
        return c

    def frob(self, a):
        return self.F.frob(a)


class GroupRingCoefficients(CoefficientRing):
    def __init__(self, F: GF, d: int):
        self.F = F
        self.d = d

    def __eq__(self, other):
        return isinstance(other, GroupRingCoefficients) and other.F == self.F and other.d == self.d

    def __hash__(self):
        return hash(("group ring", self.F.q, self.d))

    def zero(self):
        return GroupRingScalar(self.F, (0,) * self.d)

    def one(self):
        return GroupRingScalar.scalar(self.F, self.d, 1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def from_field(self, c: int):
        return GroupRingScalar.scalar(self.F, self.d, c)

    def frob(self, a):
        return a.frobenius()


Key = tuple[int, int]  # (s exponent m, eps exponent j)


class TruncatedRingElement:
    """Finite sum of ``c * s^m * eps^j`` with ``0 <= j < d``.

    ``s_bound``, when set, caps ``|m|``; products leaving the window raise
    :class:`ResourceCapError` instead of silently truncating.
    """

    __slots__ = ("ring", "d", "terms", "s_bound")

    def __init__(self, ring: CoefficientRing, d: int, terms: Mapping[Key, object] | Iterable = (), s_bound: int | None = None):
        self.ring = ring
        self.d = d
        self.s_bound = s_bound
        clean: dict[Key, object] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (m, j), c in items:
            if j < 0:
                raise PreconditionError("negative eps exponent")
            if j >= d or ring.is_zero(c):
                continue
            if s_bound is not None and abs(m) > s_bound:
                raise ResourceCapError("s-degree window", s_bound)
            key = (m, j)
            clean[key] = ring.add(clean[key], c) if key in clean else c
            if ring.is_zero(clean[key]):
                del clean[key]
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def over(cls, q: int, d: int, terms=(), s_bound: int | None = None) -> "TruncatedRingElement":
        return cls(FieldCoefficients(field(q)), d, terms, s_bound)

    def _like(self, terms) -> "TruncatedRingElement":
        return TruncatedRingElement(self.ring, self.d, terms, self.s_bound)

    def const(self, c) -> "TruncatedRingElement":
        return self._like({(0, 0): c})

    def one(self) -> "TruncatedRingElement":
        return self.const(self.ring.one())

    def zero(self) -> "TruncatedRingElement":
        return self._like({})

    def monomial(self, m: int, j: int, c=None) -> "TruncatedRingElement":
        return self._like({(m, j): self.ring.one() if c is None else c})

    # -- arithmetic -------------------------------------------------------

    def _compatible(self, other: "TruncatedRingElement"):
        if self.ring != other.ring or self.d != other.d:
            raise PreconditionError("elements of different rings")

    def __add__(self, other: "TruncatedRingElement") -> "TruncatedRingElement":
        self._compatible(other)
        return self._like(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "TruncatedRingElement":
        return self._like({k: self.ring.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other: "TruncatedRingElement") -> "TruncatedRingElement":
        return self + (-other)

    def __mul__(self, other) -> "TruncatedRingElement":
        if not isinstance(other, TruncatedRingElement):
            return self._like({k: self.ring.mul(other, c) for k, c in self.terms.items()})
        self._compatible(other)
        ring, d = self.ring, self.d
        out: dict[Key, object] = {}
        for (m1, j1), c1 in self.terms.items():
            for (m2, j2), c2 in other.terms.items():
                j = j1 + j2
                if j >= d:
                    continue
                key = (m1 + m2, j)
                prod = ring.mul(c1, c2)
                out[key] = ring.add(out[key], prod) if key in out else prod
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TruncatedRingElement":
        if e < 0:
            raise PreconditionError("use inverse() for negative powers")
        result, base = self.one(), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        return isinstance(other, TruncatedRingElement) and self.ring == other.ring and self.d == other.d and self.terms == other.terms

    def __hash__(self):
        return hash((self.d, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*s^{m}*e^{j}" for (m, j), c in sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0])))

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def eps_order(self) -> int:
        """Least eps exponent present (``d`` for zero)."""
        return min((j for _, j in self.terms), default=self.d)

    def eps_coefficient(self, j: int) -> dict[int, object]:
        return {m: c for (m, jj), c in self.terms.items() if jj == j}

    def constant_part(self) -> "TruncatedRingElement":
        return self._like({k: c for k, c in self.terms.items() if k[1] == 0})

    def nilpotent_part(self) -> "TruncatedRingElement":
        return self._like({k: c for k, c in self.terms.items() if k[1] > 0})

    def is_one_plus_nilpotent(self) -> bool:
        return self.constant_part() == self.one()

    def inverse_one_plus(self) -> "TruncatedRingElement":
        """Inverse of an element ``1 + x`` with x in the eps-ideal."""
        if not self.is_one_plus_nilpotent():
            raise PreconditionError("element is not 1 + nilpotent")
        x = self.nilpotent_part()
        result, term = self.one(), self.one()
        for _ in range(1, self.d):
            term = -(term * x)
            if term.is_zero():
                break
            result = result + term
        return result

    def frobenius(self) -> "TruncatedRingElement":
        """``g -> g^p`` computed termwise, valid in characteristic p."""
        p = self.ring.F.p
        return self._like({(p * m, p * j): self.ring.frob(c) for (m, j), c in self.terms.items()})

    def substitute(self, s_image: "TruncatedRingElement", s_inv_image: "TruncatedRingElement", eps_image: "TruncatedRingElement") -> "TruncatedRingElement":
        """Ring map determined by the images of s, 1/s and eps."""
        out = self.zero()
        cache_s: dict[int, TruncatedRingElement] = {0: self.one()}
        cache_e: dict[int, TruncatedRingElement] = {0: self.one()}

        def spow(m):
            if m not in cache_s:
                cache_s[m] = (s_image ** m) if m > 0 else (s_inv_image ** (-m))
            return cache_s[m]

        def epow(j):
            if j not in cache_e:
                cache_e[j] = eps_image ** j
            return cache_e[j]

        for (m, j), c in self.terms.items():
            out = out + (spow(m) * epow(j)) * c
        return out


def _prime_field_inverse(F: GF, n: int) -> int:
    return F.inv(F.from_int(n))


def truncated_exp(x: TruncatedRingElement) -> TruncatedRingElement:
    """``sum_{i<p} x^i / i!`` for x with ``x^p = 0``."""
    p = x.ring.F.p
    if not (x ** p).is_zero():
        raise NilpotencyError(p)
    F = x.ring.F
    result, power = x.one(), x.one()
    for i in range(1, p):
        power = power * x
        result = result + power * x.ring.from_field(_prime_field_inverse(F, factorial(i)))
    return result


def truncated_log(u: TruncatedRingElement) -> TruncatedRingElement:
    """``sum_{i=1}^{p-1} (-1)^{i+1} (u-1)^i / i`` for u = 1 + y, ``y^p = 0``."""
    p = u.ring.F.p
    if not u.is_one_plus_nilpotent():
        raise PreconditionError("log needs constant term 1")
    y = u - u.one()
    if not (y ** p).is_zero():
        raise NilpotencyError(p)
    F = u.ring.F
    result, power = u.zero(), u.one()
    for i in range(1, p):
        power = power * y
        c = _prime_field_inverse(F, i)
        if i % 2 == 0:
            c = F.neg(c)
        result = result + power * u.ring.from_field(c)
    return result
