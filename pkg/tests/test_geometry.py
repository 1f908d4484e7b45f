"""Exact polytope arithmetic: hulls, membership, distances, Hausdorff."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conecorr.geometry import (
    GeometryError,
    canonicalize,
    contains_point,
    contains_set,
    dist_point_to_polytope,
    format_polytope,
    format_vector,
    hausdorff,
    minkowski_sum,
    parse_polytope,
    parse_rational,
    parse_vector,
    rational,
    scale,
    set_equal,
    support,
)
from conecorr import _exact


F = Fraction


def P(*pts):
    return canonicalize([tuple(F(c) for c in p) for p in pts])


# ---------------------------------------------------------------------------
# strategies
# ---------------------------------------------------------------------------

fractions = st.fractions(min_value=-4, max_value=4, max_denominator=12)


@st.composite
def polytopes(draw, dim=None, max_vertices=6):
    """Random rational polytope given as a redundant point list."""
    d = dim if dim is not None else draw(st.integers(min_value=1, max_value=3))
    n = draw(st.integers(min_value=1, max_value=max_vertices))
    pts = draw(
        st.lists(
            st.tuples(*[fractions] * d), min_size=n, max_size=n
        )
    )
    return canonicalize(pts)


@st.composite
def polytope_pairs(draw, max_vertices=5):
    d = draw(st.integers(min_value=1, max_value=3))
    return (
        draw(polytopes(dim=d, max_vertices=max_vertices)),
        draw(polytopes(dim=d, max_vertices=max_vertices)),
    )


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------


def test_midpoint_of_segment_is_redundant():
    p = P((0, 0), (1, 0), (F(1, 2), 0))
    assert p.vertices == ((F(0), F(0)), (F(1), F(0)))


def test_square_center_is_interior():
    p = P((0, 0), (1, 0), (0, 1), (1, 1), (F(1, 2), F(1, 2)))
    assert len(p.vertices) == 4
    assert set(p.vertices) == {
        (F(0), F(0)),
        (F(1), F(0)),
        (F(0), F(1)),
        (F(1), F(1)),
    }


def test_single_point_and_duplicates():
    p = P((F(1, 3), F(2, 3)), (F(1, 3), F(2, 3)))
    assert p.vertices == ((F(1, 3), F(2, 3)),)


def test_canonicalize_equals_segment():
    assert set_equal(P((0, 0), (1, 0), (F(1, 2), 0)), P((0, 0), (1, 0)))


def test_empty_input_rejected():
    with pytest.raises(GeometryError):
        canonicalize([])


def test_mixed_dimensions_rejected():
    with pytest.raises(GeometryError):
        canonicalize([(F(0),), (F(0), F(1))])


@given(polytopes())
@settings(max_examples=60)
def test_canonicalize_is_idempotent(p):
    assert canonicalize(p.vertices).iverts == p.iverts
    assert canonicalize(p.vertices).den == p.den


@given(polytopes())
@settings(max_examples=60)
def test_vertices_are_extreme(p):
    """Dropping any vertex changes the hull."""
    if len(p.vertices) == 1:
        return
    for i in range(len(p.vertices)):
        rest = p.vertices[:i] + p.vertices[i + 1 :]
        assert not contains_point(canonicalize(rest), p.vertices[i])


# ---------------------------------------------------------------------------
# hull backends cross-check (sorted-unique points vs LP membership)
# ---------------------------------------------------------------------------


@given(polytopes(max_vertices=8))
@settings(max_examples=80, deadline=None)
def test_vertex_set_matches_lp_oracle(p):
    """A point of the input is a vertex iff it is not in the hull of the others."""
    ipts = list(p.iverts)
    for i, q in enumerate(ipts):
        others = ipts[:i] + ipts[i + 1 :]
        if others:
            assert not _exact.point_in_hull_lp(q, others)


# ---------------------------------------------------------------------------
# Minkowski sums and scaling
# ---------------------------------------------------------------------------


def test_interval_addition():
    assert set_equal(minkowski_sum(P((0,), (1,)), P((0,), (2,))), P((0,), (3,)))


def test_square_plus_square():
    unit = P((0, 0), (1, 0), (0, 1), (1, 1))
    two = minkowski_sum(unit, unit)
    assert set_equal(two, P((0, 0), (2, 0), (0, 2), (2, 2)))


def test_sum_with_point_translates():
    tri = P((0, 0), (1, 0), (0, 1))
    shifted = minkowski_sum(tri, P((2, 3)))
    assert set_equal(shifted, P((2, 3), (3, 3), (2, 4)))


def test_example_superadditivity_segments():
    # segment (0,0)-(2,0) contains segment (0,0)-(1,0), never the reverse
    assert contains_set(P((0, 0), (2, 0)), P((0, 0), (1, 0)))
    assert not contains_set(P((0,), (1,)), P((0,), (2,)))


def test_scale_by_zero_gives_origin():
    p = P((1, 2), (3, 4))
    assert scale(p, 0).vertices == ((F(0), F(0)),)


def test_scale_negative():
    p = P((1, 0), (0, 1))
    assert set_equal(scale(p, -2), P((-2, 0), (0, -2)))
    assert set_equal(-p, scale(p, -1))


def test_operators_match_functions():
    a, b = P((0, 0), (1, 1)), P((1, 0))
    assert set_equal(a + b, minkowski_sum(a, b))
    assert set_equal(F(1, 2) * a, scale(a, F(1, 2)))
    assert set_equal(a * F(1, 2), scale(a, F(1, 2)))


@given(polytope_pairs())
@settings(max_examples=50, deadline=None)
def test_minkowski_commutes(pair):
    a, b = pair
    assert set_equal(a + b, b + a)


@given(polytopes())
@settings(max_examples=50, deadline=None)
def test_difference_body_contains_origin(p):
    origin = tuple(F(0) for _ in range(p.dim))
    assert contains_point(p + (-p), origin)


@given(polytope_pairs(), fractions.filter(lambda r: r > 0))
@settings(max_examples=50, deadline=None)
def test_scale_distributes_over_sum(pair, r):
    a, b = pair
    assert set_equal(scale(a + b, r), scale(a, r) + scale(b, r))


@given(polytopes(), fractions.filter(lambda r: r > 0), fractions.filter(lambda r: r > 0))
@settings(max_examples=50, deadline=None)
def test_distributivity_needs_common_factor(p, r, s):
    """r*P + s*P = (r+s)*P holds for convex P (one-sided inclusion is trivial)."""
    assert set_equal(scale(p, r) + scale(p, s), scale(p, r + s))


@given(polytope_pairs())
@settings(max_examples=40, deadline=None)
def test_support_is_additive_under_sum(pair):
    a, b = pair
    d = tuple(F(k + 1, 3) * (-1) ** k for k in range(a.dim))
    assert support(a + b, d) == support(a, d) + support(b, d)


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def test_membership_on_segment():
    seg = P((0, 0), (1, 0))
    assert contains_point(seg, (F(1, 2), F(0)))
    assert not contains_point(seg, (F(1, 2), F(1, 1000)))
    assert not contains_point(seg, (F(3, 2), F(0)))


def test_membership_triangle():
    tri = P((0, 0), (1, 0), (0, 1))
    assert contains_point(tri, (F(1, 3), F(1, 3)))
    assert not contains_point(tri, (F(2, 3), F(2, 3)))


def test_membership_wrong_dimension():
    with pytest.raises(GeometryError):
        contains_point(P((0, 0), (1, 0)), (F(0),))


@given(polytopes(max_vertices=6))
@settings(max_examples=60, deadline=None)
def test_membership_agrees_with_lp(p):
    """Facet-based membership agrees with the LP feasibility oracle."""
    probes = list(p.vertices)
    n = len(p.vertices)
    centroid = tuple(sum(v[j] for v in p.vertices) / n for j in range(p.dim))
    probes.append(centroid)
    probes.append(tuple(c + F(1, 7) for c in centroid))
    probes.append(tuple(c - 5 for c in p.vertices[0]))
    for q in probes:
        den = math.lcm(*[c.denominator for c in q], p.den)
        iq = tuple(int(c * den) for c in q)
        ipts = [tuple(x * (den // p.den) for x in v) for v in p.iverts]
        expected = _exact.point_in_hull_lp(iq, ipts)
        assert contains_point(p, q) == expected


@given(polytope_pairs())
@settings(max_examples=40, deadline=None)
def test_summands_inside_their_sum_after_recentering(pair):
    """A + B contains a + B for every vertex a of A."""
    a, b = pair
    s = a + b
    for v in a.vertices:
        assert contains_set(s, b + P(v))


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------


def test_distance_to_endpoint():
    assert dist_point_to_polytope((F(2), F(0)), P((0, 0), (1, 0))) == pytest.approx(
        1.0, abs=1e-12
    )


def test_distance_perpendicular_foot():
    assert dist_point_to_polytope((F(1), F(1)), P((0, 0), (2, 0))) == pytest.approx(
        1.0, abs=1e-12
    )


def test_distance_inside_is_zero():
    tri = P((0, 0), (1, 0), (0, 1))
    assert dist_point_to_polytope((F(1, 4), F(1, 4)), tri) == 0.0


def test_l1_distance():
    # nearest point in the l1 sense for (2,2) against the unit segment is (1,0)
    assert dist_point_to_polytope((F(2), F(2)), P((0, 0), (1, 0)), metric="l1") == (
        pytest.approx(3.0, abs=1e-12)
    )


def test_unknown_metric():
    with pytest.raises(GeometryError):
        dist_point_to_polytope((F(0),), P((0,), (1,)), metric="linf")


@given(polytopes(), st.tuples(fractions, fractions, fractions))
@settings(max_examples=50, deadline=None)
def test_euclidean_distance_vs_vertex_sampling(p, q3):
    """d(x,P) is at most the distance to any convex combination of vertices."""
    x = q3[: p.dim]
    d = dist_point_to_polytope(x, p)
    verts = p.vertices
    best = min(
        math.sqrt(sum(float(xi - vi) ** 2 for xi, vi in zip(x, v))) for v in verts
    )
    assert d <= best + 1e-9
    if contains_point(p, x):
        assert d == 0.0
    else:
        assert d > 0


# ---------------------------------------------------------------------------
# Hausdorff distance
# ---------------------------------------------------------------------------


def test_hausdorff_jump_gap():
    seg = P((0, 0), (1, 0))
    origin = P((0, 0))
    assert hausdorff(seg, origin) == pytest.approx(1.0, abs=1e-12)


def test_hausdorff_nested_intervals():
    assert hausdorff(P((0,), (1,)), P((0,), (2,))) == pytest.approx(1.0, abs=1e-12)


def test_hausdorff_dense_sampling_oracle():
    """Brute-force check of h(segment, {0}) by sampling the segment."""
    seg = P((0, 0), (1, 0))
    origin = P((0, 0))
    # sup over x in seg of d(x, {0}) — sample at pitch 1/500
    brute = max(
        math.hypot(k / 500.0, 0.0) for k in range(501)
    )
    assert hausdorff(seg, origin) == pytest.approx(brute, abs=1e-9)


def test_hausdorff_identical_sets_zero():
    p = P((0, 0), (1, 0), (0, 1))
    q = P((0, 0), (1, 0), (0, 1), (F(1, 3), F(1, 3)))
    assert hausdorff(p, q) == 0.0


def test_hausdorff_translation():
    p = P((0, 0), (1, 0))
    q = P((0, 3), (1, 3))
    assert hausdorff(p, q) == pytest.approx(3.0, abs=1e-12)


@given(polytope_pairs())
@settings(max_examples=40, deadline=None)
def test_hausdorff_symmetry(pair):
    a, b = pair
    assert hausdorff(a, b) == pytest.approx(hausdorff(b, a), abs=1e-12)


@given(polytope_pairs(), polytopes(dim=2))
@settings(max_examples=30, deadline=None)
def test_hausdorff_triangle_inequality(pair, c):
    a, b = pair
    if a.dim != c.dim:
        return
    assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-9


@given(polytope_pairs(), polytopes(dim=2))
@settings(max_examples=30, deadline=None)
def test_hausdorff_cancellation(pair, k):
    """h(A+K, B+K) = h(A,B): the pair-space norm is well defined."""
    a, b = pair
    if a.dim != k.dim:
        return
    assert hausdorff(a + k, b + k) == pytest.approx(hausdorff(a, b), abs=1e-9)


@given(polytope_pairs(), fractions)
@settings(max_examples=30, deadline=None)
def test_hausdorff_absolute_homogeneity(pair, r):
    a, b = pair
    got = hausdorff(scale(a, r), scale(b, r))
    assert got == pytest.approx(abs(float(r)) * hausdorff(a, b), abs=1e-9)


# ---------------------------------------------------------------------------
# parsing / formatting
# ---------------------------------------------------------------------------


def test_parse_rational_forms():
    assert parse_rational("3/4") == F(3, 4)
    assert parse_rational("-2") == F(-2)
    with pytest.raises(GeometryError):
        parse_rational("0.5x")


def test_rational_rejects_floats():
    with pytest.raises(GeometryError):
        rational(0.5)


def test_vector_round_trip():
    v = (F(1, 2), F(-3), F(0))
    assert parse_vector(format_vector(v)) == v


def test_polytope_round_trip():
    p = P((0, 0), (1, 0), (F(1, 2), F(3, 4)))
    q = parse_polytope(format_polytope(p))
    assert q.iverts == p.iverts and q.den == p.den


def test_parse_polytope_rejects_garbage():
    for bad in ("", "[[]]", "[[1,2],[3]]", "[1,2]"):
        with pytest.raises(GeometryError):
            parse_polytope(bad)
