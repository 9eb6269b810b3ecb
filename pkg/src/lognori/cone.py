"""Rational polyhedral cones given by generators, and Hilbert bases."""

from __future__ import annotations

import itertools
from functools import cached_property
from math import floor
from typing import Sequence

from .errors import ResourceCapError
from .lattice import Vector, integer_kernel, primitive, rank, rational_solve, smith, unimodular_inverse

DEFAULT_HILBERT_CAP = 200_000


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


class Cone:
    """The cone ``Q>=0 <rays>`` inside ``Q^dim``.

    Described by equations (linear forms vanishing on the span) and facet
    normals (inward, primitive integer vectors).  The cone need not be
    pointed or full dimensional.
    """

    def __init__(self, rays: Sequence[Sequence[int]], dim: int):
        self.dim = dim
        self.rays = [tuple(r) for r in rays if any(r)]

    @cached_property
    def equations(self) -> list[Vector]:
        if not self.rays:
            return [tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim)]
        return integer_kernel(self.rays, self.dim)

    @cached_property
    def span_dim(self) -> int:
        return rank(self.rays, self.dim)

    @cached_property
    def facets(self) -> list[Vector]:
        r = self.span_dim
        if r == 0:
            return []
        eqs = self.equations
        found: set[Vector] = set()
        for subset in itertools.combinations(self.rays, r - 1):
            rows = list(subset) + eqs
            ker = integer_kernel(rows, self.dim) if rows else None
            if ker is None:
                # dim 1 span with nothing to cut: the normal is the ray direction
                ker = [tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim)]
            if len(ker) != 1:
                continue
            normal = primitive(ker[0])
            vals = [dot(normal, x) for x in self.rays]
            if all(v >= 0 for v in vals):
                pass
            elif all(v <= 0 for v in vals):
                normal = tuple(-x for x in normal)
            else:
                continue
            if all(v == 0 for v in vals):
                continue
            found.add(normal)
        return sorted(found)

    def contains(self, x: Sequence[int]) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(f, x) >= 0 for f in self.facets)

    def in_lineality(self, x: Sequence[int]) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(f, x) == 0 for f in self.facets)

    @cached_property
    def is_pointed(self) -> bool:
        return not any(self.in_lineality(r) for r in self.rays)

    @cached_property
    def grading(self) -> Vector:
        """Integral form positive on every nonzero point of a pointed cone."""
        if not self.is_pointed:
            raise ValueError("cone is not pointed")
        g = [0] * self.dim
        for f in self.facets:
            for i, x in enumerate(f):
                g[i] += x
        # positivity only matters on the cone's span
        return tuple(g)


def parallelepiped_points(basis: Sequence[Sequence[int]], dim: int) -> list[Vector]:
    """Lattice points of ``{sum l_i b_i : 0 <= l_i < 1}`` for a basis of ``Q^dim``."""
    cols = [list(b) for b in basis]
    m = [[cols[j][i] for j in range(dim)] for i in range(dim)]
    diag, u, _ = smith(m, dim, dim)
    uinv = unimodular_inverse(u)
    out = []
    for y in itertools.product(*(range(d) for d in diag)):
        x = [sum(uinv[i][j] * y[j] for j in range(dim)) for i in range(dim)]
        lam = rational_solve(cols, x)
        shift = [floor(v) for v in lam]
        pt = tuple(x[i] - sum(shift[j] * cols[j][i] for j in range(dim)) for i in range(dim))
        out.append(pt)
    return out


def hilbert_basis(rays: Sequence[Sequence[int]], dim: int, cap: int = DEFAULT_HILBERT_CAP) -> list[Vector]:
    """Minimal generating set of ``cone(rays) ∩ Z^dim`` for a pointed,
    full-dimensional cone.

    Candidates are the generators together with the lattice points of the
    fundamental parallelepipeds of every simplicial subcone spanned by
    generators; these generate the monoid, so the irreducible candidates are
    exactly the Hilbert basis.
    """
    cone = Cone(rays, dim)
    gens = sorted(set(cone.rays))
    if dim == 0 or not gens:
        return []
    if cone.span_dim != dim:
        raise ValueError("cone is not full dimensional")
    if not cone.is_pointed:
        raise ValueError("cone is not pointed")
    candidates: set[Vector] = set(gens)
    budget = cap
    for subset in itertools.combinations(gens, dim):
        if rank(subset, dim) < dim:
            continue
        m = [[subset[j][i] for j in range(dim)] for i in range(dim)]
        det = 1
        for d in smith(m, dim, dim)[0]:
            det *= d
        budget -= det
        if budget < 0:
            raise ResourceCapError("Hilbert basis candidate enumeration", cap)
        candidates.update(p for p in parallelepiped_points(subset, dim) if any(p))
    cand = sorted(candidates)
    basis = []
    for x in cand:
        reducible = False
        for y in cand:
            if y == x:
                continue
            diff = tuple(a - b for a, b in zip(x, y))
            if cone.contains(diff):
                reducible = True
                break
        if not reducible:
            basis.append(x)
    return basis
