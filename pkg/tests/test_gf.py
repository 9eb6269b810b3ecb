import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import GF as SymGF
from sympy.polys.matrices import DomainMatrix

from lognori import gf
from lognori.errors import PreconditionError

FIELDS = [2, 3, 4, 5, 8, 9, 25, 27]


@pytest.mark.parametrize("q", FIELDS)
def test_field_axioms_exhaustive(q):
    F = gf.field(q)
    els = list(F.elements)
    for a, b in itertools.product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
        if b:
            assert F.mul(F.div(a, b), b) == a
    # the multiplicative group is cyclic of order q - 1
    assert len({F.pow(F.exp[1], i) for i in range(q - 1)}) == q - 1


@pytest.mark.parametrize("q", FIELDS)
def test_distributive_and_frobenius(q):
    F = gf.field(q)
    els = list(F.elements)
    for a, b, c in itertools.islice(itertools.product(els, repeat=3), 4000):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a, b in itertools.product(els, repeat=2):
        assert F.frob(F.mul(a, b)) == F.mul(F.frob(a), F.frob(b))
        assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))
    # Frobenius has order k and fixes exactly the prime field
    fixed = [a for a in els if F.frob(a) == a]
    assert len(fixed) == F.p
    for a in els:
        x = a
        for _ in range(F.k):
            x = F.frob(x)
        assert x == a


def test_prime_power_validation():
    assert gf.prime_power(49) == (7, 2)
    for bad in (1, 6, 12, 100):
        with pytest.raises(PreconditionError):
            gf.prime_power(bad)


def test_prime_field_is_integers_mod_p():
    F = gf.field(7)
    for a, b in itertools.product(range(7), repeat=2):
        assert F.mul(a, b) == a * b % 7 and F.add(a, b) == (a + b) % 7


@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 5), st.integers(1, 5), st.data())
def test_rank_matches_sympy(p, r, c, data):
    F = gf.field(p)
    m = [[data.draw(st.integers(0, p - 1)) for _ in range(c)] for _ in range(r)]
    K = SymGF(p)
    oracle = DomainMatrix([[K(x) for x in row] for row in m], (r, c), K).rank()
    assert gf.rank(F, m, c) == oracle
    ns = gf.nullspace(F, m, c)
    assert len(ns) == c - oracle
    for v in ns:
        assert not any(gf.mat_vec(F, m, v))


@given(st.sampled_from([4, 9, 8]), st.integers(1, 4), st.data())
def test_inverse_and_solve(q, n, data):
    F = gf.field(q)
    m = [[data.draw(st.integers(0, q - 1)) for _ in range(n)] for _ in range(n)]
    b = [data.draw(st.integers(0, q - 1)) for _ in range(n)]
    if gf.rank(F, m, n) == n:
        inv = gf.inverse(F, m)
        assert gf.mat_mul(F, m, inv) == [[int(i == j) for j in range(n)] for i in range(n)]
        x = gf.solve(F, m, b, n)
        assert gf.mat_vec(F, m, x) == b
