"""Finitely generated monoids inside finitely generated abelian groups.

An :class:`AffineMonoid` is the submonoid of an ambient group generated by a
finite list of elements, so it is fine (finitely generated and cancellative)
by construction.  Saturation is taken inside the full groupification,
torsion included.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .cone import DEFAULT_HILBERT_CAP, Cone, hilbert_basis
from .errors import PreconditionError, ResourceCapError
from .lattice import (
    AbelianGroup,
    LinearSolver,
    Matrix,
    Quotient,
    Vector,
    columns_to_matrix,
    group_map_kernel_cokernel,
    identity,
    integer_kernel,
    mat_vec,
    quotient,
    rank,
    rational_solve,
    subgroup,
)

DEFAULT_MEMBERSHIP_CAP = 500_000
DEFAULT_KUMMER_CAP = 256


class _Groupification:
    """Canonical coordinates on the subgroup generated by a monoid."""

    def __init__(self, ambient: AbelianGroup, gens: Sequence[Vector]):
        self.ambient = ambient
        self.gens = list(gens)
        self.q, self.gen_coords = subgroup(gens, ambient)
        self.group = self.q.group
        n = ambient.dim
        cols = self.gens + ambient.relations()
        self._solver = LinearSolver(columns_to_matrix(cols, n), n, len(cols)) if n and cols else None

    def coords(self, v: Sequence[int]) -> Vector | None:
        """Canonical coordinates of an ambient element, or None if outside."""
        v = self.ambient.reduce(v)
        if not any(v):
            return self.group.zero()
        if self._solver is None:
            return None
        sol = self._solver.solve(v)
        if sol is None:
            return None
        return self.q(sol[: len(self.gens)])

    @cached_property
    def embedding(self) -> Matrix:
        """Ambient images of the canonical basis vectors (as columns)."""
        g = self.group
        k = len(self.gens)
        # section of the projection Z^k -> group
        cols = [tuple(row[j] for row in self.q.projection) for j in range(k)] + g.relations()
        solver = LinearSolver(columns_to_matrix(cols, g.dim), g.dim, len(cols))
        images = []
        for i in range(g.dim):
            e = tuple(int(i == j) for j in range(g.dim))
            c = solver.solve(e)
            assert c is not None
            amb = [0] * self.ambient.dim
            for coeff, gen in zip(c[:k], self.gens):
                for t in range(self.ambient.dim):
                    amb[t] += coeff * gen[t]
            images.append(self.ambient.reduce(amb))
        return columns_to_matrix(images, self.ambient.dim)

    def to_ambient(self, c: Sequence[int]) -> Vector:
        return self.ambient.reduce(mat_vec(self.embedding, c)) if self.group.dim else self.ambient.zero()


@dataclass(frozen=True)
class AffineMonoid:
    """Submonoid of ``ambient`` generated by ``generators``."""

    ambient: AbelianGroup
    generators: tuple[Vector, ...]

    def __post_init__(self):
        gens = tuple(self.ambient.reduce(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)

    @classmethod
    def free(cls, rank_: int) -> "AffineMonoid":
        """``N^rank`` with its standard generators in ``Z^rank``."""
        return cls(AbelianGroup(rank_), tuple(tuple(int(i == j) for j in range(rank_)) for i in range(rank_)))

    @classmethod
    def trivial(cls) -> "AffineMonoid":
        return cls(AbelianGroup(0), ())

    # -- structure ---------------------------------------------------------

    @cached_property
    def _gp(self) -> _Groupification:
        return _Groupification(self.ambient, self.generators)

    @cached_property
    def _cone(self) -> Cone:
        g = self._gp.group
        return Cone([g.free_part(c) for c in self._gp.gen_coords], g.free_rank)

    @cached_property
    def _unit_mask(self) -> tuple[bool, ...]:
        g = self._gp.group
        return tuple(self._cone.in_lineality(g.free_part(c)) for c in self._gp.gen_coords)

    @cached_property
    def _sharp_quotient(self) -> Quotient:
        """Projection of the groupification onto groupification / units."""
        g = self._gp.group
        rels = [c for c, unit in zip(self._gp.gen_coords, self._unit_mask) if unit] + g.relations()
        return quotient(rels, g.dim)

    def coords(self, v: Sequence[int]) -> Vector | None:
        return self._gp.coords(v)

    @property
    def group(self) -> AbelianGroup:
        return self._gp.group

    @property
    def is_fine(self) -> bool:
        return True

    @cached_property
    def is_sharp(self) -> bool:
        return all(not any(c) for c, unit in zip(self._gp.gen_coords, self._unit_mask) if unit)

    @cached_property
    def is_saturated(self) -> bool:
        sat = _saturation_coords(self)
        return all(_contains_general(self, c) for c in sat)

    def unit_generators(self) -> list[Vector]:
        return [g for g, unit in zip(self.generators, self._unit_mask) if unit and any(g)]

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def __str__(self):
        gens = ", ".join("(" + " ".join(map(str, g)) + ")" for g in self.generators)
        return f"<{gens}> in {self.ambient}"

    def canonical(self) -> "AffineMonoid":
        """The same monoid in SNF coordinates of its groupification, with a
        lexicographically sorted generating set (the Hilbert basis when
        saturated and sharp).  Depends on the generating set, not its order."""
        ordered = tuple(sorted(set(self.generators)))
        if ordered != self.generators:
            return AffineMonoid(self.ambient, ordered).canonical()
        coords = sorted({c for c in self._gp.gen_coords if any(c)})
        m = AffineMonoid(self._gp.group, tuple(coords))
        if self.is_saturated:
            sat = saturate(m)
            object.__setattr__(sat, "is_saturated", True)
            return sat
        return m


def groupify(m: AffineMonoid) -> AbelianGroup:
    """Invariants of the subgroup generated by ``m``."""
    return m.group


def _saturation_coords(m: AffineMonoid, cap: int = DEFAULT_HILBERT_CAP) -> list[Vector]:
    """Generators of the saturation in canonical groupification coordinates."""
    g = m.group
    f = g.free_rank
    cone = m._cone
    out: list[Vector] = []
    tz = (0,) * len(g.torsion)
    # torsion part
    for j in range(len(g.torsion)):
        out.append((0,) * f + tuple(int(i == j) for i in range(len(g.torsion))))
    if f:
        facets = cone.facets
        lin = integer_kernel(facets, f) if facets else [tuple(int(i == j) for j in range(f)) for i in range(f)]
        for v in lin:
            out.append(tuple(v) + tz)
            out.append(tuple(-x for x in v) + tz)
        if len(lin) < f:
            q = quotient(lin, f)
            pointed_rays = [q(r) for r in cone.rays]
            hb = hilbert_basis(pointed_rays, q.group.free_rank, cap)
            solver = LinearSolver(q.projection, q.group.dim, f)
            for h in hb:
                x = solver.solve(h)
                assert x is not None
                out.append(tuple(x) + tz)
    return sorted(set(out))


def saturate(m: AffineMonoid, cap: int = DEFAULT_HILBERT_CAP) -> AffineMonoid:
    """Saturation of ``m`` inside its groupification, in ``m``'s ambient.

    Generators: a Hilbert basis of the pointed part of the cone, a lattice
    basis of the lineality space with both signs, and the torsion basis.
    """
    coords = _saturation_coords(m, cap)
    gens = tuple(sorted({m._gp.to_ambient(c) for c in coords}))
    out = AffineMonoid(m.ambient, gens)
    out.__dict__["is_saturated"] = True
    return out


def _contains_saturated(m: AffineMonoid, c: Vector) -> bool:
    return m._cone.contains(m.group.free_part(c))


def _contains_general(m: AffineMonoid, c: Vector, cap: int = DEFAULT_MEMBERSHIP_CAP) -> bool:
    """Membership of canonical coordinates ``c`` by exact bounded search.

    Units are factored out first; in the sharp quotient every generator has
    positive degree for a grading built from the facet normals, so the
    search over decompositions is finite.
    """
    q = m._sharp_quotient
    target = q(c)
    gens = sorted({q(gc) for gc, unit in zip(m._gp.gen_coords, m._unit_mask) if not unit} - {q.group.zero()})
    if not gens:
        return not any(target)
    grp = q.group
    cone = Cone([grp.free_part(x) for x in gens], grp.free_rank)
    if not cone.contains(grp.free_part(target)):
        return False
    w = cone.grading
    deg = lambda x: sum(a * b for a, b in zip(w, grp.free_part(x)))
    gens.sort(key=lambda x: (-deg(x), x))
    seen: set[Vector] = set()
    stack = [target]
    while stack:
        r = stack.pop()
        if not any(r):
            return True
        if r in seen:
            continue
        seen.add(r)
        if len(seen) > cap:
            raise ResourceCapError("monoid membership search", cap)
        for x in gens:
            nxt = grp.reduce([a - b for a, b in zip(r, x)])
            if nxt in seen:
                continue
            if deg(nxt) < 0 or not cone.contains(grp.free_part(nxt)):
                continue
            stack.append(nxt)
    return False


def contains(m: AffineMonoid, v: Sequence[int], cap: int = DEFAULT_MEMBERSHIP_CAP) -> bool:
    """Whether ambient element ``v`` is a non-negative integer combination of
    the generators of ``m``."""
    c = m.coords(v)
    if c is None:
        return False
    if m.__dict__.get("is_saturated"):
        return _contains_saturated(m, c)
    return _contains_general(m, c, cap)


def same_elements(a: AffineMonoid, b: AffineMonoid) -> bool:
    """Equality as subsets of a common ambient group."""
    if a.ambient != b.ambient:
        raise PreconditionError("monoids live in different ambient groups")
    return all(contains(b, g) for g in a.generators) and all(contains(a, g) for g in b.generators)


def unit_group(m: AffineMonoid) -> AbelianGroup:
    units = [c for c, unit in zip(m._gp.gen_coords, m._unit_mask) if unit]
    q, _ = subgroup(units, m.group)
    return q.group


@dataclass(frozen=True)
class Sharpening:
    monoid: AffineMonoid
    projection: Quotient  # from m's groupification coordinates


def _sharpen(m: AffineMonoid) -> Sharpening:
    q = m._sharp_quotient
    images = sorted({q(c) for c, unit in zip(m._gp.gen_coords, m._unit_mask) if not unit} - {q.group.zero()})
    out = AffineMonoid(q.group, tuple(images))
    if m.__dict__.get("is_saturated"):
        out.__dict__["is_saturated"] = True
    return Sharpening(out, q)


def sharpen(m: AffineMonoid) -> AffineMonoid:
    """``m`` modulo its unit group, presented in the quotient group."""
    return _sharpen(m).monoid


@dataclass(frozen=True)
class MonoidMap:
    """Homomorphism ``source -> target`` induced by an ambient group map.

    ``matrix`` has one row per target ambient coordinate and one column per
    source ambient coordinate.
    """

    source: AffineMonoid
    target: AffineMonoid
    matrix: tuple[tuple[int, ...], ...]
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        mat = tuple(tuple(r) for r in self.matrix)
        object.__setattr__(self, "matrix", mat)
        if not self.check:
            return
        sa, ta = self.source.ambient, self.target.ambient
        if len(mat) != ta.dim or any(len(r) != sa.dim for r in mat):
            raise PreconditionError(f"matrix shape does not match {sa} -> {ta}")
        for j, t in enumerate(sa.torsion):
            col = [row[sa.free_rank + j] * t for row in mat]
            if any(ta.reduce(col)):
                raise PreconditionError("group map is not well defined on torsion")
        for g, img in zip(self.source.generators, self.generator_images):
            if not contains(self.target, img):
                raise PreconditionError(f"image {img} of generator {g} is not in the target monoid")

    def apply(self, v: Sequence[int]) -> Vector:
        if not self.matrix:
            return ()
        return self.target.ambient.reduce(mat_vec(self.matrix, v))

    @property
    def generator_images(self) -> list[Vector]:
        return [self.apply(g) for g in self.source.generators]

    def image(self) -> AffineMonoid:
        return AffineMonoid(self.target.ambient, tuple(self.generator_images))

    def compose(self, after: "MonoidMap") -> "MonoidMap":
        """``after`` o ``self``."""
        n = self.source.ambient.dim
        cols = [after.apply(self.apply(tuple(int(i == j) for j in range(n)))) for i in range(n)]
        mat = columns_to_matrix(cols, after.target.ambient.dim)
        return MonoidMap(self.source, after.target, tuple(map(tuple, mat)))

    @classmethod
    def identity(cls, m: AffineMonoid) -> "MonoidMap":
        return cls(m, m, tuple(map(tuple, identity(m.ambient.dim))), check=False)

    @classmethod
    def scalar(cls, source: AffineMonoid, target: AffineMonoid, k: int) -> "MonoidMap":
        if source.ambient != target.ambient:
            raise PreconditionError("scalar maps need a common ambient")
        n = source.ambient.dim
        return cls(source, target, tuple(tuple(k * int(i == j) for j in range(n)) for i in range(n)))

    def group_kernel_cokernel(self) -> tuple[AbelianGroup, AbelianGroup]:
        """Kernel and cokernel of the induced map of groupifications."""
        src = self.source
        k = len(src.generators)
        rels = integer_kernel(columns_to_matrix(src._gp.gens + src.ambient.relations(), src.ambient.dim), k + len(src.ambient.torsion)) if src.ambient.dim and k else []
        src_rels = [r[:k] for r in rels]
        tgt = self.target
        images = []
        for img in self.generator_images:
            c = tgt.coords(img)
            assert c is not None
            images.append(c)
        return group_map_kernel_cokernel(images, src_rels, k, tgt.group)


def _pushout(left: MonoidMap, right: MonoidMap) -> tuple[AffineMonoid, Quotient, AbelianGroup, AbelianGroup]:
    if left.source != right.source:
        raise PreconditionError("pushout legs must share their source")
    a2, a3 = left.target.ambient, right.target.ambient
    n2, n3 = a2.dim, a3.dim
    rels = [tuple(r) + (0,) * n3 for r in a2.relations()]
    rels += [(0,) * n2 + tuple(r) for r in a3.relations()]
    for g in left.source.generators:
        rels.append(tuple(left.apply(g)) + tuple(-x for x in right.apply(g)))
    q = quotient(rels, n2 + n3)
    images = [q(tuple(g) + (0,) * n3) for g in left.target.generators]
    images += [q((0,) * n2 + tuple(g)) for g in right.target.generators]
    return AffineMonoid(q.group, tuple(images)), q, a2, a3


def pushout_integral(left: MonoidMap, right: MonoidMap) -> AffineMonoid:
    """Image of ``Q2 + Q3`` in the group pushout (the fine pushout)."""
    return _pushout(left, right)[0]


@dataclass(frozen=True)
class Pushout:
    monoid: AffineMonoid
    left_leg: MonoidMap  # Q2 -> pushout
    right_leg: MonoidMap  # Q3 -> pushout


def pushout_with_legs(left: MonoidMap, right: MonoidMap, cap: int = DEFAULT_HILBERT_CAP) -> Pushout:
    integral, q, a2, a3 = _pushout(left, right)
    sat = saturate(integral, cap)
    n2, n3 = a2.dim, a3.dim
    leg2 = [q(tuple(int(i == j) for j in range(n2)) + (0,) * n3) for i in range(n2)]
    leg3 = [q((0,) * n2 + tuple(int(i == j) for j in range(n3))) for i in range(n3)]
    d = q.group.dim
    m2 = tuple(map(tuple, columns_to_matrix(leg2, d))) if n2 else tuple(() for _ in range(d))
    m3 = tuple(map(tuple, columns_to_matrix(leg3, d))) if n3 else tuple(() for _ in range(d))
    return Pushout(sat, MonoidMap(left.target, sat, m2, check=False), MonoidMap(right.target, sat, m3, check=False))


def pushout_fs(left: MonoidMap, right: MonoidMap, cap: int = DEFAULT_HILBERT_CAP) -> AffineMonoid:
    """Saturated amalgamated sum of ``left: Q1 -> Q2`` and ``right: Q1 -> Q3``."""
    return pushout_with_legs(left, right, cap).monoid


def root_monoid(p_monoid: AffineMonoid, n: int) -> MonoidMap:
    """``P -> P^{1/n}``, realized as multiplication by ``n`` on a copy of P."""
    if n < 1:
        raise PreconditionError("root order must be positive")
    if not p_monoid.is_saturated or not p_monoid.is_sharp:
        raise PreconditionError("root_monoid needs a fine saturated sharp monoid")
    return MonoidMap.scalar(p_monoid, p_monoid, n)


@dataclass(frozen=True)
class KummerVerdict:
    status: str  # "kummer" | "not_kummer" | "unknown"
    exponent: int | None = None
    witness: str = ""

    def __bool__(self):
        return self.status == "kummer"


def is_kummer(f: MonoidMap, cap: int = DEFAULT_KUMMER_CAP) -> KummerVerdict:
    """Injective on groupifications, and some uniform multiple of every
    target generator lies in the image; reports the least such multiple."""
    if not f.source.is_sharp or not f.target.is_sharp:
        raise PreconditionError("Kummer test needs sharp source and target")
    ker, _ = f.group_kernel_cokernel()
    if ker.dim:
        return KummerVerdict("not_kummer", witness=f"kernel {ker}")
    image = f.image()
    amb = f.target.ambient
    cone = Cone([amb.free_part(g) for g in image.generators], amb.free_rank)
    gens = [g for g in f.target.generators if any(g)]
    for h in gens:
        if not cone.contains(amb.free_part(h)):
            return KummerVerdict("not_kummer", witness=f"{h} has no multiple in the image")
    for n in range(1, cap + 1):
        if all(contains(image, amb.scale(n, h)) for h in gens):
            return KummerVerdict("kummer", n)
    return KummerVerdict("unknown", witness=f"no exponent <= {cap}")


@dataclass(frozen=True)
class MonoidIsomorphism:
    """Outcome of an isomorphism search.

    On success ``matrix`` maps the sharp quotient of the first monoid onto
    that of the second (canonical coordinates) and ``units`` is the common
    unit group.  On failure ``invariant`` names what differs.
    """

    isomorphic: bool
    matrix: tuple[tuple[int, ...], ...] | None = None
    units: AbelianGroup | None = None
    invariant: str = ""

    def __bool__(self):
        return self.isomorphic


def sharp_hilbert_basis(m: AffineMonoid) -> tuple[AbelianGroup, list[Vector]]:
    """Hilbert basis of the sharp quotient of a saturated monoid, in its
    (torsion-free) groupification."""
    s = sharpen(m).canonical()
    return s.ambient, list(s.generators)


def monoid_isomorphic(a: AffineMonoid, b: AffineMonoid, cap: int = 100_000) -> MonoidIsomorphism:
    sa, sb = a.is_saturated, b.is_saturated
    if sa != sb:
        return MonoidIsomorphism(False, invariant="saturated")
    if not sa:
        raise PreconditionError("isomorphism test needs saturated monoids")
    if a.group != b.group:
        return MonoidIsomorphism(False, invariant=f"groupification {a.group} != {b.group}")
    ua, ub = unit_group(a), unit_group(b)
    if ua != ub:
        return MonoidIsomorphism(False, invariant=f"unit group {ua} != {ub}")
    ga, ha = sharp_hilbert_basis(a)
    gb, hb = sharp_hilbert_basis(b)
    if ga != gb:
        return MonoidIsomorphism(False, invariant=f"sharp groupification {ga} != {gb}")
    if len(ha) != len(hb):
        return MonoidIsomorphism(False, invariant=f"Hilbert basis size {len(ha)} != {len(hb)}")
    d = ga.free_rank
    if d == 0:
        return MonoidIsomorphism(True, (), ua)
    # a basis of Q^d among a's Hilbert basis elements
    chosen: list[Vector] = []
    for h in ha:
        if rank(chosen + [h], d) > len(chosen):
            chosen.append(h)
        if len(chosen) == d:
            break
    target_set = set(hb)
    tries = 0
    for images in itertools.permutations(hb, d):
        tries += 1
        if tries > cap:
            raise ResourceCapError("isomorphism search", cap)
        if rank(list(images), d) < d:
            continue
        # phi(chosen[i]) = images[i]; rows of phi from solving chosen^T
        phi = _solve_linear_map(chosen, list(images), d)
        if phi is None:
            continue
        if abs(_det(phi)) != 1:
            continue
        mapped = {tuple(mat_vec(phi, h)) for h in ha}
        if mapped == target_set:
            return MonoidIsomorphism(True, tuple(map(tuple, phi)), ua)
    return MonoidIsomorphism(False, invariant="no Hilbert basis matching")


def _solve_linear_map(src: list[Vector], dst: list[Vector], d: int) -> Matrix | None:
    """Integer matrix phi with phi(src[i]) = dst[i], or None."""
    rows = []
    for r in range(d):
        # phi row r . src[i] = dst[i][r]
        sol = rational_solve([[src[i][c] for i in range(d)] for c in range(d)], [dst[i][r] for i in range(d)])
        if sol is None or any(x.denominator != 1 for x in sol):
            return None
        rows.append([int(x) for x in sol])
    return rows


def _det(m: Matrix) -> Fraction:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for c in range(n):
        r = next((r for r in range(c, n) if a[r][c] != 0), None)
        if r is None:
            return Fraction(0)
        if r != c:
            a[c], a[r] = a[r], a[c]
            det = -det
        det *= a[c][c]
        for r2 in range(c + 1, n):
            f = a[r2][c] / a[c][c]
            a[r2] = [x - f * y for x, y in zip(a[r2], a[c])]
    return det
