import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from lognori.lattice import AbelianGroup, integer_kernel, mat_mul, quotient, smith, subgroup, unimodular_inverse

small = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    )


def sympy_diag(m):
    d = smith_normal_form(Matrix(m), domain=ZZ)
    return [abs(int(d[i, i])) for i in range(min(d.shape))]


@given(matrices())
def test_smith_matches_sympy_oracle(m):
    r, c = len(m), len(m[0])
    diag, u, v = smith(m, r, c)
    assert sorted(diag, key=lambda x: (x == 0, x)) == diag
    assert [x for x in diag if x] == [x for x in sympy_diag(m) if x]
    prod = mat_mul(mat_mul(u, m, r, c), v, c, c)
    for i in range(r):
        for j in range(c):
            assert prod[i][j] == (diag[i] if i == j else 0)
    for a, b in zip(diag, diag[1:]):
        assert b == 0 or (a != 0 and b % a == 0)


@given(matrices())
def test_unimodular_transforms_invert(m):
    r, c = len(m), len(m[0])
    _, u, v = smith(m, r, c)
    for t in (u, v):
        n = len(t)
        inv = unimodular_inverse(t)
        assert mat_mul(t, inv, n, n) == [[int(i == j) for j in range(n)] for i in range(n)]


@given(matrices())
def test_integer_kernel(m):
    c = len(m[0])
    for k in integer_kernel(m, c):
        assert all(sum(a * b for a, b in zip(row, k)) == 0 for row in m)


def test_quotient_torsor_relations():
    # Z^4 / <(2,0,-2,0), (0,2,0,-2)>: the group pushout of the doubling legs
    q = quotient([(2, 0, -2, 0), (0, 2, 0, -2)], 4)
    assert q.group == AbelianGroup(2, (2, 2))


def test_quotient_simple_cases():
    assert quotient([], 3).group == AbelianGroup(3)
    assert quotient([(4, 6)], 2).group == AbelianGroup(1, (2,))
    assert quotient([(2, 0), (0, 3)], 2).group == AbelianGroup(0, (6,))


def test_abelian_group_validation():
    with pytest.raises(ValueError):
        AbelianGroup(1, (2, 3))
    with pytest.raises(ValueError):
        AbelianGroup(0, (1,))
    g = AbelianGroup(1, (2, 4))
    assert g.reduce((5, 3, -1)) == (5, 1, 3)
    assert g.order() is None and AbelianGroup(0, (2, 4)).order() == 8
    assert str(g) == "Z^1 + Z/2 + Z/4"


def test_subgroup_of_torsion_ambient():
    amb = AbelianGroup(1, (4,))
    q, coords = subgroup([(2, 2), (0, 2)], amb)
    assert q.group == AbelianGroup(1, (2,))
    assert len(coords) == 2
