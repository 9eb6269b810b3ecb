import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lognori.charts import random_fs_sharp, torsor_target
from lognori.errors import PreconditionError
from lognori.lattice import AbelianGroup
from lognori.monoid import (
    AffineMonoid,
    MonoidMap,
    contains,
    groupify,
    is_kummer,
    monoid_isomorphic,
    pushout_fs,
    pushout_integral,
    root_monoid,
    same_elements,
    saturate,
    sharpen,
    unit_group,
)
from lognori.suites import random_leg

Z1 = AbelianGroup(1)
N = AffineMonoid.free(1)
N2 = AffineMonoid.free(2)
S23 = AffineMonoid(Z1, ((2,), (3,)))


def test_groupify():
    assert groupify(N2) == AbelianGroup(2)
    assert groupify(S23) == AbelianGroup(1)
    leg = root_monoid(N2, 2)
    assert groupify(pushout_integral(leg, leg)) == AbelianGroup(2, (2, 2))


def test_saturate_examples():
    assert same_elements(saturate(S23), N)
    assert same_elements(saturate(N2), N2)
    leg = root_monoid(N2, 2)
    assert monoid_isomorphic(pushout_fs(leg, leg), torsor_target(2))


def test_sharpen_examples():
    n_plus_z = AffineMonoid(AbelianGroup(2), ((1, 0), (0, 1), (0, -1)))
    assert monoid_isomorphic(sharpen(n_plus_z), N)
    assert monoid_isomorphic(sharpen(N), N)
    s = sharpen(torsor_target(2))
    assert s.is_sharp and monoid_isomorphic(s, N2)


def test_unit_group_of_torsion_monoid():
    assert unit_group(torsor_target(2)) == AbelianGroup(0, (2, 2))


def test_pushout_examples():
    idn = MonoidMap.identity(N)
    assert monoid_isomorphic(pushout_fs(idn, idn), N)
    trivial = AffineMonoid.trivial()
    f = MonoidMap(trivial, N, tuple(() for _ in range(1)))
    g = MonoidMap(trivial, N2, tuple(() for _ in range(2)))
    assert monoid_isomorphic(pushout_fs(f, g), AffineMonoid.free(3))


def test_root_monoid():
    r = root_monoid(N, 3)
    assert r.apply((1,)) == (3,)
    assert r.matrix == ((3,),)
    assert root_monoid(N2, 1).matrix == ((1, 0), (0, 1))
    assert root_monoid(N2, 4).matrix == ((4, 0), (0, 4))
    with pytest.raises(PreconditionError):
        root_monoid(S23, 2)


def test_is_kummer_examples():
    v = is_kummer(root_monoid(N, 5))
    assert v and v.exponent == 5
    diag = MonoidMap(N, N2, ((1,), (1,)))
    v = is_kummer(diag)
    assert v.status == "not_kummer" and v.witness
    for p, n in ((2, 1), (2, 2), (3, 1)):
        assert is_kummer(root_monoid(N2, p**n)).exponent == p**n


def test_contains_examples():
    assert not contains(S23, (1,))
    assert contains(S23, (7,))
    assert not contains(N2, (-1, 0))


def test_isomorphic_examples():
    iso = monoid_isomorphic(N2, N2)
    assert iso and iso.matrix is not None
    assert not monoid_isomorphic(N, S23)


def test_map_validation():
    with pytest.raises(PreconditionError):
        MonoidMap(N, N, ((-1,),))


def test_canonical_form_is_deterministic():
    m = AffineMonoid(AbelianGroup(2), ((1, 2), (1, 0), (1, 1)))
    assert m.canonical() == AffineMonoid(AbelianGroup(2), ((1, 1), (1, 0), (1, 2))).canonical()


gens_strategy = st.integers(1, 3).flatmap(
    lambda r: st.lists(st.tuples(*[st.integers(-3, 3)] * r), min_size=1, max_size=4).map(lambda g: (r, g))
)


@given(gens_strategy, st.sampled_from([(), (2,), (2, 4)]))
def test_saturation_idempotent_and_extensive(data, tors):
    r, gens = data
    amb = AbelianGroup(r, tors)
    m = AffineMonoid(amb, tuple(g + (1,) * len(tors) for g in gens))
    s = saturate(m)
    assert same_elements(saturate(s), s)
    assert groupify(s) == groupify(m)
    for g in m.generators:
        assert contains(s, g)


@given(gens_strategy)
def test_sharpen_idempotent(data):
    r, gens = data
    m = saturate(AffineMonoid(AbelianGroup(r), tuple(gens)))
    s = sharpen(m)
    assert s.is_sharp
    assert monoid_isomorphic(sharpen(s), s)


@given(gens_strategy, st.integers(2, 4))
def test_contains_consistent_with_saturate(data, k):
    r, gens = data
    m = AffineMonoid(AbelianGroup(r), tuple(gens))
    s = saturate(m)
    g = tuple(sum(x) for x in zip(*gens))
    if contains(m, tuple(k * x for x in g)):
        assert contains(s, g)


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_pushout_symmetry(seed):
    rng = random.Random(seed)
    q = random_fs_sharp(rng)
    f, g = random_leg(rng, q), random_leg(rng, q)
    assert monoid_isomorphic(pushout_fs(f, g), pushout_fs(g, f))


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.integers(1, 5))
def test_root_monoid_is_kummer(seed, n):
    p = random_fs_sharp(random.Random(seed))
    v = is_kummer(root_monoid(p, n))
    assert v and n % v.exponent == 0
