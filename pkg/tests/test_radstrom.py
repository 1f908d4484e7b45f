"""The normed space of polytope pairs (differences A - B up to cancellation)."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conecorr.cone import standard_basis
from conecorr.correspondence import LinearCorrespondence
from conecorr.geometry import canonicalize, hausdorff, set_equal
from conecorr.radstrom import (
    DifferencePair,
    embed,
    equivalent,
    pair_add,
    pair_dist,
    pair_norm,
    pair_scale,
    pair_sub,
    zero_pair,
)
from conecorr.sampling import random_polytope

F = Fraction


def P(*pts):
    return canonicalize([tuple(F(c) for c in p) for p in pts])


def test_equivalence_cancels_common_summand():
    # [0,2] - [0,1] is the same difference as [0,1] - {0}
    p = DifferencePair(P((0,), (2,)), P((0,), (1,)))
    q = DifferencePair(P((0,), (1,)), P((0,)))
    assert equivalent(p, q)


def test_non_equivalent_pairs():
    p = DifferencePair(P((0,), (2,)), P((0,)))
    q = DifferencePair(P((0,), (1,)), P((0,)))
    assert not equivalent(p, q)


def test_addition_is_componentwise():
    p = DifferencePair(P((0,), (1,)), P((0,)))
    q = DifferencePair(P((0,), (2,)), P((0,)))
    s = pair_add(p, q)
    assert set_equal(s.plus, P((0,), (3,)))
    assert set_equal(s.minus, P((0,)))
    # the zero pair is an additive identity
    assert equivalent(pair_add(p, zero_pair(1)), p)


def test_pair_dimensions_must_match():
    from conecorr.geometry import GeometryError

    with pytest.raises(GeometryError):
        DifferencePair(P((0,)), P((0, 0)))


def test_norm_of_a_segment_difference():
    p = DifferencePair(P((0, 0), (1, 0)), P((0, 0)))
    assert pair_norm(p) == pytest.approx(1.0, abs=1e-12)


def test_zero_pair_has_zero_norm():
    z = zero_pair(2)
    assert pair_norm(z) == 0.0
    assert equivalent(z, DifferencePair(P((1, 1)), P((1, 1))))


def test_scale_by_negative_swaps_components():
    p = DifferencePair(P((0,), (1,)), P((0,)))
    q = pair_scale(p, F(-2))
    assert set_equal(q.plus, P((0,)))
    assert set_equal(q.minus, P((0,), (2,)))
    flipped = pair_scale(p, F(-1))
    assert set_equal(flipped.plus, P((0,)))
    assert set_equal(flipped.minus, P((0,), (1,)))


def test_scale_by_zero_and_positive():
    p = DifferencePair(P((0,), (1,)), P((0,)))
    z = pair_scale(p, F(0))
    assert set_equal(z.plus, P((0,))) and set_equal(z.minus, P((0,)))
    doubled = pair_scale(p, F(2))
    assert set_equal(doubled.plus, P((0,), (2,)))
    assert set_equal(doubled.minus, P((0,)))


def test_equivalent_pairs_share_a_norm():
    p = DifferencePair(P((0,), (2,)), P((0,), (1,)))
    q = DifferencePair(P((0,), (1,)), P((0,)))
    assert pair_norm(p) == pytest.approx(1.0, abs=1e-12)
    assert pair_norm(p) == pytest.approx(pair_norm(q), abs=1e-12)


def test_subtraction_gives_additive_inverse():
    p = DifferencePair(P((0, 0), (1, 2)), P((0, 0), (3, 1)))
    diff = pair_sub(p, p)
    assert equivalent(diff, zero_pair(2))
    assert pair_norm(diff) == 0.0


def test_operator_sugar():
    p = DifferencePair(P((0,), (1,)), P((0,)))
    q = DifferencePair(P((0,), (2,)), P((0,)))
    assert equivalent(p + q, pair_add(p, q))
    assert equivalent(p - q, pair_sub(p, q))
    assert equivalent(p * F(3), pair_scale(p, F(3)))


def test_embed_values_of_a_linear_map():
    basis = standard_basis(2)
    phi = LinearCorrespondence(basis, [P((0, 0), (1, 0)), P((0, 0))])
    x = basis.point((F(1), F(1)))
    y = basis.point((F(2), F(0)))
    fx, fy = embed(phi, x), embed(phi, y)
    # embedding is additive because the map is
    fxy = embed(phi, x + y)
    assert equivalent(pair_add(fx, fy), fxy)
    assert pair_norm(fx) == pytest.approx(1.0, abs=1e-12)
    # distance between embedded points is the Hausdorff distance of the values
    assert pair_dist(fx, fy) == pytest.approx(
        hausdorff(phi.value(x), phi.value(y)), abs=1e-12
    )
    # scaling commutes with the embedding for nonnegative rationals
    for r in (F(0), F(1, 2), F(3)):
        assert equivalent(embed(phi, x * r), pair_scale(fx, r))


def test_embed_at_the_origin_is_zero():
    basis = standard_basis(2)
    phi = LinearCorrespondence(basis, [P((0, 0), (1, 0)), P((0, 0))])
    origin = basis.point((F(0), F(0)))
    assert equivalent(embed(phi, origin), zero_pair(2))


# ---------------------------------------------------------------------------
# randomized axioms
# ---------------------------------------------------------------------------


@st.composite
def pairs(draw, dim=2):
    seed = draw(st.integers(min_value=0, max_value=2**31 - 1))
    rng = random.Random(seed)
    return DifferencePair(
        random_polytope(rng, dim, max_vertices=4),
        random_polytope(rng, dim, max_vertices=4),
    )


@given(pairs(), pairs())
@settings(max_examples=40, deadline=None)
def test_norm_triangle_inequality(p, q):
    assert pair_norm(p + q) <= pair_norm(p) + pair_norm(q) + 1e-9


@given(pairs(), st.sampled_from([F(-2), F(-1, 2), F(1, 3), F(3)]))
@settings(max_examples=40, deadline=None)
def test_norm_absolute_homogeneity(p, lam):
    assert pair_norm(pair_scale(p, lam)) == pytest.approx(
        abs(float(lam)) * pair_norm(p), abs=1e-9
    )


@given(pairs(), pairs())
@settings(max_examples=30, deadline=None)
def test_addition_commutes_up_to_equivalence(p, q):
    assert equivalent(p + q, q + p)


@given(pairs(), st.data())
@settings(max_examples=30, deadline=None)
def test_norm_is_well_defined_on_classes(p, data):
    """Adding the same polytope to both sides never moves the norm."""
    rng = random.Random(data.draw(st.integers(min_value=0, max_value=2**31 - 1)))
    k = random_polytope(rng, p.dim, max_vertices=4)
    shifted = DifferencePair(p.plus + k, p.minus + k)
    assert equivalent(p, shifted)
    assert pair_norm(shifted) == pytest.approx(pair_norm(p), abs=1e-9)


@given(pairs(), pairs(), pairs())
@settings(max_examples=25, deadline=None)
def test_dist_is_translation_invariant(p, q, r):
    d0 = pair_dist(p, q)
    d1 = pair_dist(p + r, q + r)
    assert d1 == pytest.approx(d0, abs=1e-9)


@given(pairs(), pairs(), st.data())
@settings(max_examples=25, deadline=None)
def test_equivalence_relation_axioms(p, q, data):
    assert equivalent(p, p)
    assert equivalent(p, q) == equivalent(q, p)
    # transitivity along a chain of common-summand shifts
    rng = random.Random(data.draw(st.integers(min_value=0, max_value=2**31 - 1)))
    k1 = random_polytope(rng, p.dim, max_vertices=3)
    k2 = random_polytope(rng, p.dim, max_vertices=3)
    once = DifferencePair(p.plus + k1, p.minus + k1)
    twice = DifferencePair(once.plus + k2, once.minus + k2)
    assert equivalent(p, once) and equivalent(once, twice)
    assert equivalent(p, twice)


@given(pairs(), pairs(), st.data())
@settings(max_examples=25, deadline=None)
def test_operations_respect_equivalence(p, q, data):
    rng = random.Random(data.draw(st.integers(min_value=0, max_value=2**31 - 1)))
    k = random_polytope(rng, p.dim, max_vertices=3)
    p2 = DifferencePair(p.plus + k, p.minus + k)
    assert equivalent(pair_add(p, q), pair_add(p2, q))
    for lam in (F(2), F(-1, 2)):
        assert equivalent(pair_scale(p, lam), pair_scale(p2, lam))


@given(pairs())
@settings(max_examples=30, deadline=None)
def test_norm_zero_iff_equivalent_to_zero(p):
    n = pair_norm(p)
    if equivalent(p, zero_pair(p.dim)):
        assert n == 0.0
    else:
        assert n > 0
    # hausdorff of the two components is exactly the norm
    assert n == pytest.approx(hausdorff(p.plus, p.minus), abs=1e-12)
