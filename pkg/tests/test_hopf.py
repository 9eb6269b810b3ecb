import pytest

from lognori.errors import PreconditionError, ResourceCapError
from lognori.hopf import FiniteGroupSchemeTag, HopfAlgebra, alpha, constant, gm, hom_group_schemes, mu
from lognori.lattice import AbelianGroup

FIELDS = [(2, 2), (2, 4), (3, 3), (3, 9), (5, 5)]


def dual_prediction(src: str, tgt: str, p: int, k: int) -> tuple[int, ...]:
    """Hom over F_{p^k} predicted by Cartier duality (mu <-> Z/p, alpha
    self-dual) and the p-adic structure of mu."""
    if src.startswith("mu"):
        m = 2 if src == "mu2" else 1
        if tgt == "Gm":
            return (p**m,)
        if tgt.startswith("mu"):
            return (p ** min(m, 2 if tgt == "mu2" else 1),)
        return ()
    if src == tgt == "alpha":
        return (p,) * k  # End(alpha_p) = F_q additively
    if src == tgt == "Z/p":
        return (p,)
    return ()


def tags(p, q):
    return {"mu": mu(p, 1, q), "mu2": mu(p, 2, q), "alpha": alpha(p, q), "Z/p": constant(p, q), "Gm": gm(p, q)}


@pytest.mark.parametrize("p,q", FIELDS)
def test_hom_table_matches_duality(p, q):
    k = {2: 1, 4: 2, 3: 1, 9: 2, 5: 1}[q]
    t = tags(p, q)
    for src in ("mu", "mu2", "alpha", "Z/p"):
        for tgt in t:
            h = hom_group_schemes(t[src], t[tgt])
            assert h.invariants.torsion == dual_prediction(src, tgt, p, k), (src, tgt)
            assert h.order == h.invariants.order()


def test_named_examples():
    assert hom_group_schemes(mu(2), mu(2)).order == 2
    assert hom_group_schemes(mu(3), alpha(3)).order == 1
    assert hom_group_schemes(mu(2), constant(2)).order == 1
    assert sorted(hom_group_schemes(mu(2), mu(2)).describe()) == ["x -> 1", "x -> 1*x^1"]


def test_mu_images_are_power_maps():
    h = hom_group_schemes(mu(3, 2, 9), mu(3, 1, 9))
    monomials = {tuple(i for i, c in enumerate(y) if c) for y in h.images}
    assert monomials == {(0,), (3,), (6,)}


@pytest.mark.parametrize("m", [1, 2, 3])
def test_hom_into_mu_p_has_order_p(m):
    assert hom_group_schemes(mu(2, m), mu(2)).order == 2


@pytest.mark.parametrize("p,q", FIELDS)
def test_hopf_axioms(p, q):
    for tag in (mu(p, 1, q), mu(p, 2, q), alpha(p, q), constant(p, q)):
        A = HopfAlgebra(tag)
        F, N, D, eps = A.F, A.dim, A.coproduct, A.counit
        for k in range(N):
            # (eps (x) 1) Delta = id
            for v in range(N):
                assert F.sum(F.mul(eps[u], D[k][u][v]) for u in range(N)) == int(v == k)
            # coassociativity on basis elements
            for a in range(N):
                for b in range(N):
                    for c in range(N):
                        left = F.sum(F.mul(D[k][u][c], D[u][a][b]) for u in range(N))
                        right = F.sum(F.mul(D[k][a][u], D[u][b][c]) for u in range(N))
                        assert left == right


def test_validation():
    with pytest.raises(PreconditionError):
        FiniteGroupSchemeTag("nu", 2)
    with pytest.raises(PreconditionError):
        FiniteGroupSchemeTag("mu", 6)
    with pytest.raises(PreconditionError):
        hom_group_schemes(mu(3, 1, 3), mu(3, 1, 9))
    with pytest.raises(PreconditionError):
        hom_group_schemes(gm(2), mu(2))


def test_cap_is_reported():
    with pytest.raises(ResourceCapError):
        hom_group_schemes(mu(3, 2, 9), gm(3, 9), cap=10)


def test_trivial_group_invariants():
    assert hom_group_schemes(constant(5), alpha(5)).invariants == AbelianGroup(0)
