"""Exact integer lattice kernels: Smith normal form and finitely generated
abelian groups.

Matrices are plain lists of rows of Python ints. Vectors are tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]
Vector = tuple[int, ...]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def mat_vec(m: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in m]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], inner: int, ncols: int) -> Matrix:
    bt = transpose(b, ncols) if b else [[0] * inner for _ in range(ncols)]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def columns_to_matrix(cols: Sequence[Sequence[int]], nrows: int) -> Matrix:
    """Stack column vectors into an ``nrows x len(cols)`` matrix."""
    return [[c[i] for c in cols] for i in range(nrows)]


def smith(m: Sequence[Sequence[int]], nrows: int, ncols: int) -> tuple[list[int], Matrix, Matrix]:
    """Smith normal form with transforms.

    Returns ``(diag, U, V)`` with ``U * m * V`` diagonal, ``diag`` its first
    ``min(nrows, ncols)`` entries (non-negative, each dividing the next, zeros
    last) and ``U``, ``V`` unimodular.
    """
    a = [list(row) for row in m]
    u = identity(nrows)
    v = identity(ncols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        if k:
            ra, rs = a[dst], a[src]
            for c in range(ncols):
                ra[c] += k * rs[c]
            ua, us = u[dst], u[src]
            for c in range(nrows):
                ua[c] += k * us[c]

    def add_col(src, dst, k):  # col_dst += k * col_src
        if k:
            for row in a:
                row[dst] += k * row[src]
            for row in v:
                row[dst] += k * row[src]

    t = 0
    while t < min(nrows, ncols):
        pivot = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # finish the column before touching the row: mixing the two while
            # column t is uncleared makes the entries explode
            if _clear(a, t, nrows, lambda i: a[i][t], add_row, swap_rows):
                continue
            if _clear(a, t, ncols, lambda j: a[t][j], add_col, swap_cols):
                continue
            bad = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if a[i][j] % a[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    diag = [a[i][i] for i in range(min(nrows, ncols))]
    return diag, u, v


def _clear(a, t, n, entry, add, swap) -> bool:
    """Reduce entries ``t+1..n-1`` of row or column t modulo the pivot with
    balanced remainders; swap in any nonzero remainder as the new pivot.
    Returns whether the pivot changed."""
    changed = False
    for i in range(t + 1, n):
        if entry(i):
            piv = a[t][t]
            q = (2 * entry(i) + abs(piv)) // (2 * piv) if piv > 0 else -((2 * entry(i) + abs(piv)) // (2 * -piv))
            add(t, i, -q)
            if entry(i):
                swap(t, i)
                changed = True
    return changed


def unimodular_inverse(u: Matrix) -> Matrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(u)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(u)]
    for c in range(n):
        r = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[r] = aug[r], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    out = []
    for row in aug:
        tail = row[n:]
        if any(x.denominator != 1 for x in tail):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in tail])
    return out


def integer_kernel(m: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Basis of ``{x in Z^ncols : m x = 0}``."""
    nrows = len(m)
    if nrows == 0:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    diag, _, v = smith(m, nrows, ncols)
    rank = sum(1 for d in diag if d)
    return [tuple(v[i][j] for i in range(ncols)) for j in range(rank, ncols)]


class LinearSolver:
    """Integer solutions of ``m x = b`` for a fixed matrix ``m``."""

    def __init__(self, m: Sequence[Sequence[int]], nrows: int, ncols: int):
        self.nrows, self.ncols = nrows, ncols
        self.diag, self.u, self.v = smith(m, nrows, ncols)

    def solve(self, b: Sequence[int]) -> Vector | None:
        ub = mat_vec(self.u, b)
        y = [0] * self.ncols
        for i, val in enumerate(ub):
            d = self.diag[i] if i < len(self.diag) else 0
            if d == 0:
                if val:
                    return None
            else:
                if val % d:
                    return None
                y[i] = val // d
        return tuple(mat_vec(self.v, y))


def rational_solve(cols: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction] | None:
    """Solve ``sum x_i cols[i] = b`` over Q for linearly independent columns."""
    n = len(cols)
    dim = len(b)
    aug = [[Fraction(cols[j][i]) for j in range(n)] + [Fraction(b[i])] for i in range(dim)]
    row = 0
    pivots = []
    for c in range(n):
        r = next((r for r in range(row, dim) if aug[r][c] != 0), None)
        if r is None:
            continue
        aug[row], aug[r] = aug[r], aug[row]
        piv = aug[row][c]
        aug[row] = [x / piv for x in aug[row]]
        for r2 in range(dim):
            if r2 != row and aug[r2][c] != 0:
                f = aug[r2][c]
                aug[r2] = [x - f * y for x, y in zip(aug[r2], aug[row])]
        pivots.append(c)
        row += 1
    if any(aug[r][n] != 0 for r in range(row, dim)):
        return None
    x = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        x[c] = aug[r][n]
    return x


def rank(vectors: Sequence[Sequence[int]], dim: int) -> int:
    if not vectors:
        return 0
    diag, _, _ = smith(list(vectors), len(vectors), dim)
    return sum(1 for d in diag if d)


def primitive(v: Sequence[int]) -> Vector:
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(v) if g in (0, 1) else tuple(x // g for x in v)


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^free_rank + Z/t_1 + ... + Z/t_k`` with t_i dividing t_{i+1}.

    Elements are tuples of length ``free_rank + k``: free coordinates first,
    then torsion coordinates reduced into ``[0, t_i)``.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        for i, t in enumerate(self.torsion):
            if t < 2:
                raise ValueError(f"torsion factor {t} must be >= 2")
            if i and t % self.torsion[i - 1]:
                raise ValueError(f"torsion factors {self.torsion} are not a divisor chain")

    @property
    def dim(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def order_diag(self) -> tuple[int, ...]:
        """Presentation diagonal: 0 for free coordinates, t_i for torsion."""
        return (0,) * self.free_rank + self.torsion

    def reduce(self, v: Sequence[int]) -> Vector:
        if len(v) != self.dim:
            raise ValueError(f"vector {tuple(v)} has wrong length for {self}")
        f = self.free_rank
        return tuple(v[:f]) + tuple(x % t for x, t in zip(v[f:], self.torsion))

    def zero(self) -> Vector:
        return (0,) * self.dim

    def add(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        return self.reduce([x + y for x, y in zip(a, b)])

    def scale(self, k: int, a: Sequence[int]) -> Vector:
        return self.reduce([k * x for x in a])

    def neg(self, a: Sequence[int]) -> Vector:
        return self.reduce([-x for x in a])

    def relations(self) -> list[Vector]:
        """Columns generating the relation subgroup of the presentation."""
        n = self.dim
        return [tuple(t * int(i == self.free_rank + j) for i in range(n)) for j, t in enumerate(self.torsion)]

    def is_torsion(self, v: Sequence[int]) -> bool:
        return all(x == 0 for x in v[: self.free_rank])

    def free_part(self, v: Sequence[int]) -> Vector:
        return tuple(v[: self.free_rank])

    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self):
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class Quotient:
    """``Z^n / <relations>`` in canonical form, with the projection matrix."""

    group: AbelianGroup
    projection: Matrix  # group.dim rows, n columns
    source_dim: int

    def __call__(self, v: Sequence[int]) -> Vector:
        return self.group.reduce(mat_vec(self.projection, v))


def quotient(relations: Sequence[Sequence[int]], n: int) -> Quotient:
    """Canonical presentation of ``Z^n`` modulo the span of ``relations``."""
    rels = [tuple(r) for r in relations if any(r)]
    if not rels:
        return Quotient(AbelianGroup(n), identity(n), n)
    m = columns_to_matrix(rels, n)
    diag, u, _ = smith(m, n, len(rels))
    full = [diag[i] if i < len(diag) else 0 for i in range(n)]
    tors_rows = [i for i in range(n) if full[i] > 1]
    free_rows = [i for i in range(n) if full[i] == 0]
    group = AbelianGroup(len(free_rows), tuple(full[i] for i in tors_rows))
    proj = [list(u[i]) for i in free_rows + tors_rows]
    return Quotient(group, proj, n)


def subgroup(gens: Sequence[Sequence[int]], ambient: AbelianGroup) -> tuple[Quotient, list[Vector]]:
    """Abstract structure of the subgroup generated by ``gens``.

    Returns ``(q, coords)`` where ``q`` presents the subgroup as a quotient of
    ``Z^len(gens)`` (generator i is the unit vector e_i) and ``coords[i]`` is
    generator i in the canonical coordinates of ``q.group``.
    """
    k = len(gens)
    n = ambient.dim
    rel_cols = ambient.relations()
    cols = [tuple(g) for g in gens] + rel_cols
    if k == 0:
        q = quotient([], 0)
        return q, []
    m = columns_to_matrix(cols, n) if n else []
    if n == 0:
        kernel = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    else:
        kernel = [kv[:k] for kv in integer_kernel(m, len(cols))]
    q = quotient(kernel, k)
    coords = [q(tuple(int(i == j) for j in range(k))) for i in range(k)]
    return q, coords


def group_map_kernel_cokernel(
    images: Sequence[Sequence[int]],
    source_relations: Sequence[Sequence[int]],
    source_dim: int,
    target: AbelianGroup,
) -> tuple[AbelianGroup, AbelianGroup]:
    """Kernel and cokernel of ``Z^source_dim / source_relations -> target``.

    ``images[i]`` is the image of the i-th unit vector.
    """
    n = target.dim
    tgt_rels = target.relations()
    coker = quotient(list(images) + tgt_rels, n).group
    if source_dim == 0:
        return AbelianGroup(0), coker
    cols = list(images) + tgt_rels
    if n == 0:
        kernel_basis = [tuple(int(i == j) for j in range(source_dim)) for i in range(source_dim)]
    else:
        kernel_basis = [kv[:source_dim] for kv in integer_kernel(columns_to_matrix(cols, n), len(cols))]
    # sub-lattice K of Z^source_dim; ker = K / source_relations
    if not kernel_basis:
        return AbelianGroup(0), coker
    r = len(kernel_basis)
    solver = LinearSolver(columns_to_matrix(kernel_basis, source_dim), source_dim, r)
    rel_coords = []
    for rel in source_relations:
        y = solver.solve(rel)
        if y is None:
            raise ValueError("source relation is not mapped to zero")
        rel_coords.append(y)
    return quotient(rel_coords, r).group, coker
