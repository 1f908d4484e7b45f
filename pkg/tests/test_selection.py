"""Extreme linear selections of a polytope-valued map."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conecorr.cone import ConeBasis, standard_basis
from conecorr.correspondence import (
    BoundaryJumpCorrespondence,
    InflatedLinearCorrespondence,
    LinearCorrespondence,
)
from conecorr.geometry import canonicalize, contains_point, hausdorff, set_equal
from conecorr.sampling import random_images, sample_points
from conecorr.selection import (
    LinearSelection,
    SelectionCapError,
    SelectionError,
    apply_selection,
    basis_images,
    certify_selection,
    check_hull_recovery,
    extreme_matrices,
    selection_family,
)

F = Fraction


def P(*pts):
    return canonicalize([tuple(F(c) for c in p) for p in pts])


quadrant = standard_basis(2)


def plane_linear():
    return LinearCorrespondence(quadrant, [P((0, 0), (1, 0)), P((0, 0))])


def default_samples(basis, n_random=20, seed=0):
    return sample_points(basis, random.Random(seed), n_random=n_random)


# ---------------------------------------------------------------------------
# multimatrix construction
# ---------------------------------------------------------------------------


def test_basis_images_identity_coordinates():
    mm = basis_images(plane_linear(), quadrant)
    assert set_equal(mm.columns[0], P((0, 0), (1, 0)))
    assert set_equal(mm.columns[1], P((0, 0)))
    assert mm.count == 2


def test_basis_images_of_the_boundary_jump():
    """Both generators of the jump map sit on the boundary ray, so both
    image polytopes collapse to the origin."""
    mm = basis_images(BoundaryJumpCorrespondence(), quadrant)
    assert set_equal(mm.columns[0], P((0, 0)))
    assert set_equal(mm.columns[1], P((0, 0)))
    assert mm.count == 1


def test_basis_images_rejects_escaping_vertex():
    phi = LinearCorrespondence(quadrant, [P((0, 0), (-1, 0)), P((0, 0))])
    with pytest.raises(SelectionError, match="generator 0.*outside the target"):
        basis_images(phi, quadrant)


def test_matrix_counts_multiply():
    square = P((0, 0), (1, 0), (0, 1), (1, 1))
    seg = P((0, 0), (1, 0))
    phi = LinearCorrespondence(quadrant, [square, seg])
    mm = basis_images(phi, quadrant)
    assert mm.count == 8
    assert len(extreme_matrices(mm)) == 8


def test_cap_is_enforced():
    square = P((0, 0), (1, 0), (0, 1), (1, 1))
    phi = LinearCorrespondence(quadrant, [square, square])
    mm = basis_images(phi, quadrant)
    with pytest.raises(
        SelectionCapError, match="multimatrix too large.*cap of 15"
    ):
        extreme_matrices(mm, cap=15)


def test_matrices_come_out_in_lexicographic_order():
    square = P((0, 0), (1, 0), (0, 1), (1, 1))
    seg = P((0, 0), (1, 0))
    mm = basis_images(LinearCorrespondence(quadrant, [square, seg]), quadrant)
    choices = [m.columns for m in extreme_matrices(mm)]
    assert choices == sorted(choices)
    assert len(set(choices)) == len(choices)


# ---------------------------------------------------------------------------
# applying and certifying
# ---------------------------------------------------------------------------


def test_apply_matrix_vector_product():
    mm = basis_images(plane_linear(), quadrant)
    mats = extreme_matrices(mm)
    picked = next(m for m in mats if m.columns[0] == (F(1), F(0)))
    sel = LinearSelection(quadrant, quadrant, picked)
    assert apply_selection(sel, quadrant.point((F(2), F(3)))) == (F(2), F(0))


def test_apply_respects_target_generators():
    """Coordinates are w.r.t. the target basis, not raw ambient entries."""
    skew = ConeBasis(((F(1), F(0)), (F(1), F(1))))
    phi = LinearCorrespondence(quadrant, [P((2, 1)), P((1, 1))])
    mm = basis_images(phi, skew)
    (mat,) = extreme_matrices(mm)
    sel = LinearSelection(quadrant, skew, mat)
    # phi is singleton-valued, so the (unique) selection reproduces it
    x = quadrant.point((F(1), F(2)))
    assert apply_selection(sel, x) == (F(4), F(3))
    # a singleton-valued map admits exactly one selection, and it certifies
    family = selection_family(phi, skew, default_samples(quadrant))
    assert len(family.rows) == 1 and family.certified_count == 1


def test_apply_at_origin_and_generators():
    phi = plane_linear()
    mats = extreme_matrices(basis_images(phi, quadrant))
    for mat in mats:
        sel = LinearSelection(quadrant, quadrant, mat)
        assert apply_selection(sel, quadrant.point((F(0), F(0)))) == (F(0), F(0))
        # at a generator the selection returns exactly the encoded column
        e0 = quadrant.point((F(1), F(0)))
        assert apply_selection(sel, e0) == mat.columns[0]
        assert contains_point(phi.value(e0), mat.columns[0])


def test_apply_is_additive_and_homogeneous():
    phi = plane_linear()
    mats = extreme_matrices(basis_images(phi, quadrant))
    sel = LinearSelection(quadrant, quadrant, mats[-1])
    x = quadrant.point((F(1, 2), F(3)))
    y = quadrant.point((F(2), F(1, 3)))
    sx, sy = apply_selection(sel, x), apply_selection(sel, y)
    assert apply_selection(sel, x + y) == tuple(a + b for a, b in zip(sx, sy))
    for t in (F(1, 3), F(2), F(7, 5)):
        assert apply_selection(sel, x * t) == tuple(t * c for c in sx)


def test_inflated_map_certifies_its_linear_part():
    """Superadditivity pushes each linear selection inside the inflated map."""
    linear = plane_linear()
    phi = InflatedLinearCorrespondence(
        quadrant,
        [P((0, 0), (1, 0)), P((0, 0))],
        P((F(-1, 4), F(-1, 4)), (F(1, 4), F(-1, 4)), (F(0), F(1, 4))),
    )
    samples = default_samples(quadrant)
    for mat in extreme_matrices(basis_images(linear, quadrant)):
        sel = LinearSelection(quadrant, quadrant, mat)
        assert certify_selection(sel, phi, samples).ok


def test_certified_family_of_the_worked_example():
    phi = plane_linear()
    samples = default_samples(quadrant)
    family = selection_family(phi, quadrant, samples)
    assert len(family.rows) == 2
    assert family.certified_count == 2
    entries = {row.matrix.entries_text() for row in family.rows}
    assert entries == {"[[0,0],[0,0]]", "[[1,0],[0,0]]"}


def test_boundary_jump_family_is_only_the_zero_map():
    phi = BoundaryJumpCorrespondence()
    samples = default_samples(quadrant)
    family = selection_family(phi, quadrant, samples)
    assert family.certified_count == 1
    (row,) = family.rows
    assert row.matrix.entries_text() == "[[0,0],[0,0]]"
    sel = family.certified_selections[0]
    assert apply_selection(sel, quadrant.point((F(5), F(2)))) == (F(0), F(0))


def test_uncertifiable_candidate_reports_failing_sample():
    """A hand-built non-extreme candidate escapes the jump map at (1,0)."""
    phi = BoundaryJumpCorrespondence()
    mats = extreme_matrices(basis_images(plane_linear(), quadrant))
    bad = next(m for m in mats if m.columns[0] == (F(1), F(0)))
    sel = LinearSelection(quadrant, quadrant, bad)
    v = certify_selection(sel, phi, [quadrant.point((F(1), F(0)))])
    assert not v.ok
    assert v.witness == (F(1), F(0))


def test_lipschitz_bounds_are_column_norm_sums():
    phi = plane_linear()
    family = selection_family(phi, quadrant, default_samples(quadrant))
    by_entries = {row.matrix.entries_text(): row for row in family.rows}
    assert by_entries["[[0,0],[0,0]]"].lipschitz_bound == pytest.approx(0.0)
    assert by_entries["[[1,0],[0,0]]"].lipschitz_bound == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# hull recovery
# ---------------------------------------------------------------------------


def test_hull_recovery_for_linear_maps():
    phi = plane_linear()
    samples = default_samples(quadrant)
    family = selection_family(phi, quadrant, samples)
    mats = [row.matrix for row in family.rows if row.certified]
    v = check_hull_recovery(phi, mats, quadrant, samples)
    assert v.ok and v.equal


def test_hull_recovery_detects_missing_matrices():
    phi = plane_linear()
    samples = [quadrant.point((F(1), F(1)))]
    family = selection_family(phi, quadrant, samples)
    zero_only = [
        row.matrix
        for row in family.rows
        if row.matrix.entries_text() == "[[0,0],[0,0]]"
    ]
    v = check_hull_recovery(phi, zero_only, quadrant, samples)
    assert v.ok and not v.equal  # containment holds, equality does not


# ---------------------------------------------------------------------------
# randomized suites
# ---------------------------------------------------------------------------


@st.composite
def random_linear(draw):
    seed = draw(st.integers(min_value=0, max_value=2**31 - 1))
    rng = random.Random(seed)
    n = draw(st.integers(min_value=1, max_value=2))
    m = draw(st.integers(min_value=1, max_value=2))
    # vertices must stay inside the standard target cone
    images = [
        canonicalize(
            [
                tuple(abs(c) for c in v)
                for v in random_polytope_verts(rng, m)
            ]
        )
        for _ in range(n)
    ]
    return LinearCorrespondence(standard_basis(n), images)


def random_polytope_verts(rng, dim):
    from conecorr.sampling import random_vector

    return [
        tuple(random_vector(rng, dim)) for _ in range(rng.randint(1, 4))
    ]


@given(random_linear())
@settings(max_examples=20, deadline=None)
def test_every_extreme_matrix_certifies_for_linear(phi):
    basis = phi.domain
    target = standard_basis(phi.codomain_dim)
    samples = default_samples(basis, n_random=10, seed=1)
    family = selection_family(phi, target, samples)
    assert family.certified_count == len(family.rows)
    mats = [row.matrix for row in family.rows]
    assert check_hull_recovery(phi, mats, target, samples).equal


@given(random_linear(), st.data())
@settings(max_examples=20, deadline=None)
def test_selection_values_are_lipschitz(phi, data):
    """|A x - A y| is controlled by the l1 distance of the coordinates."""
    basis = phi.domain
    target = standard_basis(phi.codomain_dim)
    samples = default_samples(basis, n_random=8, seed=2)
    family = selection_family(phi, target, samples)
    nonneg = st.fractions(min_value=0, max_value=2, max_denominator=8)
    lam1 = tuple(data.draw(nonneg) for _ in range(basis.size))
    lam2 = tuple(data.draw(nonneg) for _ in range(basis.size))
    x, y = basis.point(lam1), basis.point(lam2)
    l1 = float(sum(abs(a - b) for a, b in zip(lam1, lam2)))
    for row in family.rows:
        sel = LinearSelection(basis, target, row.matrix)
        vx, vy = apply_selection(sel, x), apply_selection(sel, y)
        gap = hausdorff(P(vx), P(vy))
        assert gap <= row.lipschitz_bound * l1 + 1e-9
