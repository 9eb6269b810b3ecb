"""H^1 of the thickened line ``X_n = Proj k[x,y,z]/(x+y-z)^{p^n}`` over F_q.

Two models are kept.  The monomial model has basis ``1/(T0^x T1^y T2^z)``
with ``x, y, z >= 1`` and ``x+y+z = d``; the torus acts diagonally there.
The Cech model uses the opens ``z != 0`` (coordinates ``s = x/z``,
``eps = (x+y-z)/z``) and ``x != 0`` (``s' = 1/s``, ``eps' = eps/s``), and is
where Frobenius and unit computations live.  :func:`basis_change` links the
two and is checked against both actions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from . import gf
from .errors import PreconditionError, ResourceCapError
from .gf import GF, field, prime_power
from .truncated import FieldCoefficients, GroupRingCoefficients, GroupRingScalar, TruncatedRingElement


@dataclass(frozen=True)
class CurveParams:
    p: int
    n: int
    q: int

    def __post_init__(self):
        fp, _ = prime_power(self.q)
        if fp != self.p:
            raise PreconditionError(f"q={self.q} is not a power of p={self.p}")
        if self.n < 0:
            raise PreconditionError("n must be non-negative")

    @property
    def d(self) -> int:
        return self.p**self.n

    @property
    def field(self) -> GF:
        return field(self.q)

    @property
    def degree(self) -> int:
        """``[F_q : F_p]``."""
        return self.field.k


def expected_h1_dim(d: int) -> int:
    return (d - 1) * (d - 2) // 2


# -- monomial model -------------------------------------------------------


@dataclass(frozen=True)
class CohomologySpace:
    params: CurveParams
    basis: tuple[tuple[int, int, int], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def field(self) -> GF:
        return self.params.field


def monomial_h1_basis(params: CurveParams) -> CohomologySpace:
    d = params.d
    basis = tuple((x, y, d - x - y) for x in range(1, d) for y in range(1, d) if d - x - y >= 1)
    return CohomologySpace(params, basis)


def unit_root(params: CurveParams, a: GroupRingScalar) -> GroupRingScalar:
    if a.F != params.field or a.d != params.d:
        raise PreconditionError("scalar is not in F_q[t]/(t^d - 1) for these parameters")
    if not a.is_unit():
        raise PreconditionError(f"{a} is not a unit")
    if not a.is_root_of_unity():
        raise PreconditionError(f"{a} is not a d-th root of unity")
    return a


def t_scalar(params: CurveParams, e: int = 1) -> GroupRingScalar:
    return GroupRingScalar.monomial(params.field, params.d, e)


def one_scalar(params: CurveParams) -> GroupRingScalar:
    return GroupRingScalar.scalar(params.field, params.d, 1)


@dataclass(frozen=True)
class DiagonalOperator:
    """Diagonal R-linear operator on ``space (x) R``."""

    space: CohomologySpace
    entries: tuple[GroupRingScalar, ...]

    def apply(self, v: Sequence[GroupRingScalar]) -> list[GroupRingScalar]:
        return [e * x for e, x in zip(self.entries, v)]

    def compose(self, other: "DiagonalOperator") -> "DiagonalOperator":
        return DiagonalOperator(self.space, tuple(a * b for a, b in zip(self.entries, other.entries)))

    def is_identity(self) -> bool:
        return all(e == e.one() for e in self.entries)


def torus_action(params: CurveParams, a: GroupRingScalar, b: GroupRingScalar) -> DiagonalOperator:
    """``1/(T0^x T1^y T2^z) -> a^{-x} b^{-y} / (T0^x T1^y T2^z)``."""
    unit_root(params, a)
    unit_root(params, b)
    space = monomial_h1_basis(params)
    ainv, binv = a.inverse(), b.inverse()
    return DiagonalOperator(space, tuple((ainv**x) * (binv**y) for x, y, _ in space.basis))


def _fixed_subspace(F: GF, ops: Iterable[Sequence[Sequence[GroupRingScalar]]], dim: int) -> list[list[int]]:
    """``{v in F_q^dim : op(v) = v}`` for R-matrices ``op`` (rows of columns)."""
    rows: list[list[int]] = []
    for op in ops:
        for i in range(dim):
            d = op[i][0].d
            for k in range(d):
                rows.append([F.sub(op[i][j].coeffs[k], int(i == j and k == 0)) for j in range(dim)])
    if not rows:
        return [[int(i == j) for j in range(dim)] for i in range(dim)]
    return gf.nullspace(F, rows, dim)


def fixed_classes(params: CurveParams, generators: Iterable[tuple[GroupRingScalar, GroupRingScalar]]) -> list[list[int]]:
    """Basis of the F_q-classes v with ``h_(a,b)(v) = v`` in ``H^1 (x) R``.

    Each condition reads ``(a^{-x} b^{-y} - 1) v_(x,y,z) = 0``, one F_q
    equation per coefficient of t.
    """
    space = monomial_h1_basis(params)
    ops = []
    for a, b in generators:
        diag = torus_action(params, a, b).entries
        zero = GroupRingScalar(params.field, (0,) * params.d)
        ops.append([[diag[i] if i == j else zero for j in range(space.dim)] for i in range(space.dim)])
    return _fixed_subspace(params.field, ops, space.dim)


# -- Cech model -----------------------------------------------------------


@dataclass
class CechH1:
    """Windowed two-open Cech complex and its exact H^1 quotient.

    Overlap sections are Laurent in s with ``|m| <= window``; the image of
    the restriction maps is row reduced once and every overlap section is
    reduced modulo it.
    """

    params: CurveParams
    window: int
    columns: list[tuple[int, int]]  # monomials (m, j) of the windowed overlap
    image_rref: list[list[int]]
    pivots: list[int]
    basis: list[tuple[int, int]]  # surviving monomials, the H^1 basis

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def field(self) -> GF:
        return self.params.field

    @cached_property
    def _col_index(self) -> dict[tuple[int, int], int]:
        return {c: i for i, c in enumerate(self.columns)}

    @cached_property
    def _basis_index(self) -> dict[tuple[int, int], int]:
        return {c: i for i, c in enumerate(self.basis)}

    def _reduce_field(self, terms: dict[tuple[int, int], int]) -> list[int]:
        F = self.field
        vec = [0] * len(self.columns)
        for key, c in terms.items():
            idx = self._col_index.get(key)
            if idx is None:
                raise ResourceCapError("Cech window", self.window)
            vec[idx] = F.add(vec[idx], c)
        for row, pc in zip(self.image_rref, self.pivots):
            c = vec[pc]
            if c:
                vec = [F.sub(x, F.mul(c, y)) for x, y in zip(vec, row)]
        return [vec[self._col_index[b]] for b in self.basis]

    def reduce(self, g: TruncatedRingElement) -> list:
        """Coordinates of the class of an overlap section in :attr:`basis`.

        Works for F_q or group-ring coefficients (the quotient is F_q-linear
        and is applied to each coefficient of t).
        """
        if isinstance(g.ring, FieldCoefficients):
            return self._reduce_field(g.terms)
        d = g.ring.d
        per_t = [self._reduce_field({k: c.coeffs[i] for k, c in g.terms.items()}) for i in range(d)]
        return [GroupRingScalar(self.field, tuple(per_t[i][b] for i in range(d))) for b in range(self.rank)]

    def representative(self, idx: int, ring=None) -> TruncatedRingElement:
        m, j = self.basis[idx]
        ring = ring or FieldCoefficients(self.field)
        return TruncatedRingElement(ring, self.params.d, {(m, j): ring.one()})


def _overlap_images(params: CurveParams, window: int) -> list[TruncatedRingElement]:
    """Restrictions of the monomial bases of both charts to the overlap."""
    d = params.d
    F = params.field
    ring = FieldCoefficients(F)
    one = TruncatedRingElement(ring, d, {(0, 0): 1})
    s = one.monomial(1, 0)
    s_inv = one.monomial(-1, 0)
    eps = one.monomial(0, 1)
    s_prime = s_inv
    eps_prime = eps * s_inv
    out = []
    for j in range(d):
        for a in range(window + 1):
            out.append((s**a) * (eps**j))
            if a + j <= window:
                out.append((s_prime**a) * (eps_prime**j))
    return out


def _cech_at(params: CurveParams, window: int) -> CechH1:
    d = params.d
    F = params.field
    columns = [(m, j) for j in range(d) for m in range(-window, window + 1)]
    index = {c: i for i, c in enumerate(columns)}
    rows = []
    for g in _overlap_images(params, window):
        vec = [0] * len(columns)
        for key, c in g.terms.items():
            vec[index[key]] = F.add(vec[index[key]], c)
        rows.append(vec)
    r, pivots = gf.rref(F, rows, len(columns))
    basis = [c for i, c in enumerate(columns) if i not in set(pivots)]
    return CechH1(params, window, columns, r, pivots, basis)


def cech_h1_thickened(params: CurveParams, window: int | None = None, max_window: int = 64) -> CechH1:
    """Cech H^1 with a window grown until the rank is stable.

    The eps-graded pieces are twists ``O(-j)`` of the reduced line with
    classes in s-degrees ``-j < m < 0``, so any window ``>= d - 1`` is
    adequate; stability under one more step is checked rather than assumed.
    """
    w = window if window is not None else max(params.d - 1, 1)
    prev = _cech_at(params, w)
    while True:
        if w + 1 > max_window:
            raise ResourceCapError("Cech window", max_window)
        nxt = _cech_at(params, w + 1)
        if nxt.rank == prev.rank:
            return prev
        prev, w = nxt, w + 1


# -- Frobenius ------------------------------------------------------------


@dataclass(frozen=True)
class SemilinearOperator:
    """``v -> M v^(p)``: p-semilinear operator on F_q^dim.

    ``matrix[i][j]`` is the i-th coordinate of the image of basis vector j.
    """

    F: GF
    matrix: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def apply(self, v: Sequence[int]) -> list[int]:
        F = self.F
        return gf.mat_vec(F, self.matrix, [F.frob(x) for x in v])

    def apply_group_ring(self, v: Sequence[GroupRingScalar]) -> list[GroupRingScalar]:
        """Extension to ``F_q^dim (x) R`` with Frobenius on R."""
        vp = [x.frobenius() for x in v]
        out = []
        for row in self.matrix:
            acc = None
            for c, x in zip(row, vp):
                term = x * c
                acc = term if acc is None else acc + term
            out.append(acc)
        return out


def frobenius_operator(params: CurveParams, cech: CechH1 | None = None) -> SemilinearOperator:
    """Frobenius ``g -> g^p`` on Cech H^1 in the surviving-monomial basis."""
    cech = cech or cech_h1_thickened(params)
    F = params.field
    cols = []
    for idx in range(cech.rank):
        rep = cech.representative(idx)
        cols.append(cech.reduce(rep ** params.p))
    n = cech.rank
    return SemilinearOperator(F, tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))


def semilinear_kernel_dim(op: SemilinearOperator, shift: int = 0) -> int:
    """F_p-dimension of ``ker(op - shift*id)``, shift in {0, 1}."""
    if shift not in (0, 1):
        raise PreconditionError("shift must be 0 or 1")
    F = op.F
    p, k, n = F.p, F.k, op.dim
    Fp = field(p)
    cols = []
    for i in range(n):
        for l in range(k):
            beta = p**l  # digit basis element
            v = [0] * n
            v[i] = beta
            w = op.apply(v)
            if shift:
                w = [F.sub(a, b) for a, b in zip(w, v)]
            cols.append([dgt for x in w for dgt in F.digits(x)])
    size = n * k
    if size == 0:
        return 0
    rows = [[cols[c][r] for c in range(size)] for r in range(size)]
    return size - gf.rank(Fp, rows, size)


# -- torus action on the Cech model --------------------------------------


def cech_torus_matrix(params: CurveParams, a: GroupRingScalar, b: GroupRingScalar, cech: CechH1 | None = None) -> list[list[GroupRingScalar]]:
    """R-matrix of ``x -> a x, y -> b y`` on Cech H^1 (x) R.

    In chart coordinates ``s -> a s`` and
    ``eps -> eps + (a-1) s + (b-1)(1 + eps - s)``.
    """
    unit_root(params, a)
    unit_root(params, b)
    cech = cech or cech_h1_thickened(params)
    ring = GroupRingCoefficients(params.field, params.d)
    d = params.d
    one = TruncatedRingElement(ring, d, {(0, 0): ring.one()})
    s = one.monomial(1, 0)
    eps = one.monomial(0, 1)
    r_one = ring.one()
    s_img = s * a
    s_inv_img = one.monomial(-1, 0) * a.inverse()
    eps_img = eps + s * (a - r_one) + (one + eps - s) * (b - r_one)
    cols = []
    for idx in range(cech.rank):
        rep = cech.representative(idx, ring)
        cols.append(cech.reduce(rep.substitute(s_img, s_inv_img, eps_img)))
    n = cech.rank
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _t_coefficient(m: Sequence[Sequence[GroupRingScalar]], k: int) -> list[list[int]]:
    return [[x.coeffs[k] for x in row] for row in m]


@dataclass(frozen=True)
class BasisChange:
    """Columns: Cech coordinates of the monomial basis vectors."""

    params: CurveParams
    matrix: tuple[tuple[int, ...], ...]
    inverse: tuple[tuple[int, ...], ...]

    def to_monomial_diag(self, cech_matrix: Sequence[Sequence[GroupRingScalar]]) -> list[list[GroupRingScalar]]:
        """``C^{-1} A C`` for an R-matrix A."""
        F = self.params.field
        d = self.params.d
        n = len(self.matrix)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = [0] * d
                for k in range(n):
                    ck = self.inverse[i][k]
                    if not ck:
                        continue
                    for l in range(n):
                        cl = self.matrix[l][j]
                        if not cl:
                            continue
                        f = F.mul(ck, cl)
                        for t, c in enumerate(cech_matrix[k][l].coeffs):
                            if c:
                                acc[t] = F.add(acc[t], F.mul(f, c))
                row.append(GroupRingScalar(F, tuple(acc)))
            out.append(row)
        return out

    def transport_semilinear(self, op: SemilinearOperator) -> SemilinearOperator:
        """``C^{-1} M C^(p)``."""
        F = self.params.field
        cp = [[F.frob(x) for x in row] for row in self.matrix]
        m = gf.mat_mul(F, gf.mat_mul(F, self.inverse, op.matrix), cp)
        return SemilinearOperator(F, tuple(map(tuple, m)))


def basis_change(params: CurveParams, cech: CechH1 | None = None) -> BasisChange:
    """Match Cech classes to monomials through torus weights.

    The coefficient of ``t^i`` in the Cech matrix of ``(t, 1)`` is the
    projector onto weight i for the first factor, and likewise for
    ``(1, t)``; the monomial (x, y, z) must span the joint weight space
    ``(-x, -y)``, which is checked to be a line.
    """
    cech = cech or cech_h1_thickened(params)
    F = params.field
    d = params.d
    space = monomial_h1_basis(params)
    n = space.dim
    if n != cech.rank:
        raise PreconditionError("models disagree on the dimension")
    if n == 0:
        return BasisChange(params, (), ())
    ha = cech_torus_matrix(params, t_scalar(params), one_scalar(params), cech)
    hb = cech_torus_matrix(params, one_scalar(params), t_scalar(params), cech)
    cols = []
    for x, y, _ in space.basis:
        pa = _t_coefficient(ha, (-x) % d)
        pb = _t_coefficient(hb, (-y) % d)
        proj = gf.mat_mul(F, pa, pb)
        colspace, piv = gf.rref(F, [list(c) for c in zip(*proj)], n)
        if len(piv) != 1:
            raise PreconditionError(f"weight space of {(x, y)} has dimension {len(piv)}")
        cols.append(colspace[0])
    c = [[cols[j][i] for j in range(n)] for i in range(n)]
    cinv = gf.inverse(F, c)
    return BasisChange(params, tuple(map(tuple, c)), tuple(map(tuple, cinv)))
