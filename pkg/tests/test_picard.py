import pytest

from lognori.cohomology import CurveParams, frobenius_operator, semilinear_kernel_dim
from lognori.errors import PreconditionError
from lognori.lattice import AbelianGroup
from lognori.picard import UnitNormalForm, brute_force_kernel, picard_p_torsion


def torsion_counts(factors, p):
    """``{i: |K[p^i]|}`` for a group with the given invariant factors."""
    out, i = {}, 1
    while True:
        size = 1
        for f in factors:
            size *= min(f, p**i)
        out[i] = size
        if all(f <= p**i for f in factors):
            return out
        i += 1


@pytest.mark.parametrize("p,q", [(2, 2), (3, 9), (5, 5)])
def test_reduced_line_has_trivial_kernel(p, q):
    r = picard_p_torsion(CurveParams(p, 0, q))
    assert r.kernel_factors == () and r.p_torsion == AbelianGroup(0)
    assert r.group == AbelianGroup(1)


@pytest.mark.parametrize("q", [2, 4])
def test_first_thickening_for_p_two(q):
    r = picard_p_torsion(CurveParams(2, 1, q))
    assert r.p_rank == 0 and r.steps[0].h1_dim == 0


@pytest.mark.parametrize("p,n,q", [(2, 2, 2), (2, 2, 4), (3, 1, 3), (3, 1, 9)])
def test_against_brute_force(p, n, q):
    P = CurveParams(p, n, q)
    r = picard_p_torsion(P)
    order, tors = brute_force_kernel(P)
    assert order == q**r.kernel_order_log
    assert tors == torsion_counts(r.kernel_factors, p)


@pytest.mark.parametrize("q,rank", [(3, 1), (9, 2), (27, 3)])
def test_first_thickening_for_p_three(q, rank):
    # one eps^2 class s^{-1} eps^2 per F_p basis vector of F_q
    r = picard_p_torsion(CurveParams(3, 1, q))
    assert r.kernel_factors == (3,) * rank


def test_higher_factors_appear():
    assert picard_p_torsion(CurveParams(2, 3, 2)).kernel_factors.count(4) == 3
    assert picard_p_torsion(CurveParams(3, 2, 3)).kernel_factors.count(9) == 1


@pytest.mark.parametrize("p,n,q", [(2, 2, 2), (2, 2, 4), (3, 1, 9), (3, 2, 3), (3, 2, 9), (2, 3, 2)])
def test_p_rank_equals_frobenius_kernel(p, n, q):
    # p-torsion of 1 + N and the kernel of Frobenius on H^1(O) are computed
    # by unrelated routes
    P = CurveParams(p, n, q)
    assert picard_p_torsion(P).p_rank == semilinear_kernel_dim(frobenius_operator(P))


def test_thickening_steps():
    r = picard_p_torsion(CurveParams(3, 2, 3))
    assert [s.m for s in r.steps] == [1, 2]
    assert all(s.ideal_power_zero and s.exp_is_iso for s in r.steps)
    assert sum(s.h1_dim for s in r.steps) == r.kernel_order_log == 28


def test_normal_form_roundtrip():
    nf = UnitNormalForm(CurveParams(2, 2, 4))
    for coords in list(nf.elements())[:64]:
        assert nf.normal_form(nf.representative(coords)) == tuple(coords)
    with pytest.raises(PreconditionError):
        nf.normal_form(nf.element({(0, 0): 2}))
