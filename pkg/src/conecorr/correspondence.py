"""Set-valued maps on cones and their structural property checks.

A correspondence sends each cone point to a convex compact polytope.  The
interesting structural questions — is the map superadditive, is it
homogeneous over positive rationals, how do its values move as the argument
moves — are all answered exactly here; floating point only shows up in
distance readouts.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cone import ConeBasis, ConeError, ConePoint, standard_basis
from .geometry import (
    GeometryError,
    Polytope,
    Vec,
    canonicalize,
    contains_set,
    format_vector,
    minkowski_sum,
    rational,
    scale,
    set_equal,
    vector,
)
from . import _exact, geometry

__all__ = [
    "Correspondence",
    "LinearCorrespondence",
    "InflatedLinearCorrespondence",
    "AffineCorrespondence",
    "BoundaryJumpCorrespondence",
    "Verdict",
    "ScalarTrack",
    "ProbeRow",
    "ProbeReport",
    "BoundednessReport",
    "check_superadditive",
    "check_q_homogeneous",
    "scalarize",
    "jensen_check",
    "continuity_probe",
    "uniform_boundedness_probe",
]


@dataclass(frozen=True)
class Verdict:
    """Outcome of an exact property check.

    ``ok`` is the property itself; ``equal`` additionally reports set
    equality where the property is an inclusion (None when not applicable
    or not evaluated).  ``witness`` pins down the first violating point.
    """

    ok: bool
    equal: Optional[bool] = None
    witness: Optional[Vec] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


class Correspondence(ABC):
    """Map from a cone into convex compact polytopes of a fixed dimension."""

    def __init__(self, domain: ConeBasis, codomain_dim: int):
        if codomain_dim < 1:
            raise GeometryError("codomain dimension must be at least 1")
        self.domain = domain
        self.codomain_dim = codomain_dim

    @abstractmethod
    def _value_at(self, lambdas: Vec) -> Polytope:
        """Value on coordinates w.r.t. the domain generators."""

    def value(self, x: ConePoint) -> Polytope:
        if x.basis != self.domain:
            raise ConeError("point belongs to a different cone basis")
        return self._value_at(x.lambdas)

    def value_batch(self, xs: Sequence[ConePoint]) -> list[Polytope]:
        return [self.value(x) for x in xs]

    def __call__(self, x) -> Polytope:
        """Evaluate at a :class:`ConePoint` or at an ambient vector."""
        if not isinstance(x, ConePoint):
            x = self.domain.from_ambient(x)
        return self.value(x)


class LinearCorrespondence(Correspondence):
    """Additive, positively homogeneous map determined by generator images.

    ``x = sum_i lambda_i e_i`` is sent to the weighted Minkowski sum
    ``sum_i lambda_i Phi_i`` of the generator images ``Phi_i``.
    """

    def __init__(self, domain: ConeBasis, images: Sequence[Polytope]):
        if len(images) != domain.size:
            raise GeometryError("one image per generator is required")
        dims = {im.dim for im in images}
        if len(dims) != 1:
            raise GeometryError("images must share one dimension")
        super().__init__(domain, dims.pop())
        self.images = tuple(images)
        self._engine = None

    def _get_engine(self):
        if self._engine is None and self.codomain_dim <= 3:
            from ._engine import MinkowskiEngine

            self._engine = MinkowskiEngine(list(self.images))
        return self._engine

    def _value_at(self, lambdas: Vec) -> Polytope:
        eng = self._get_engine()
        if eng is not None:
            return eng.value(lambdas)
        return _naive_weighted_sum(self.images, lambdas)

    def value_batch(self, xs: Sequence[ConePoint]) -> list[Polytope]:
        for x in xs:
            if x.basis != self.domain:
                raise ConeError("point belongs to a different cone basis")
        eng = self._get_engine()
        if eng is not None:
            return eng.value_batch([x.lambdas for x in xs])
        return [self._value_at(x.lambdas) for x in xs]

    def scaled(self, alpha) -> "LinearCorrespondence":
        """The pointwise rescaling ``x -> alpha * value(x)``."""
        a = rational(alpha)
        return LinearCorrespondence(
            self.domain, [scale(im, a) for im in self.images]
        )


class InflatedLinearCorrespondence(Correspondence):
    """Linear part plus an inflation that switches on inside the cone.

    ``x`` with coordinates ``lambda`` maps to
    ``sum_i lambda_i Phi_i + min_i(lambda_i) * B``.  The min term is
    superadditive and positively homogeneous but not additive, which makes
    this the standard example of a strictly superadditive homogeneous map.
    """

    def __init__(self, domain: ConeBasis, images: Sequence[Polytope], inflation: Polytope):
        if len(images) != domain.size:
            raise GeometryError("one image per generator is required")
        dims = {im.dim for im in images} | {inflation.dim}
        if len(dims) != 1:
            raise GeometryError("images and inflation must share one dimension")
        super().__init__(domain, dims.pop())
        self.images = tuple(images)
        self.inflation = inflation
        self._engine = None

    def _get_engine(self):
        if self._engine is None and self.codomain_dim <= 3:
            from ._engine import MinkowskiEngine

            self._engine = MinkowskiEngine(list(self.images) + [self.inflation])
        return self._engine

    def _weights(self, lambdas: Vec) -> tuple:
        return tuple(lambdas) + (min(lambdas),)

    def _value_at(self, lambdas: Vec) -> Polytope:
        eng = self._get_engine()
        if eng is not None:
            return eng.value(self._weights(lambdas))
        return _naive_weighted_sum(
            list(self.images) + [self.inflation], self._weights(lambdas)
        )

    def value_batch(self, xs: Sequence[ConePoint]) -> list[Polytope]:
        for x in xs:
            if x.basis != self.domain:
                raise ConeError("point belongs to a different cone basis")
        eng = self._get_engine()
        if eng is not None:
            return eng.value_batch([self._weights(x.lambdas) for x in xs])
        return [self._value_at(x.lambdas) for x in xs]


class AffineCorrespondence(Correspondence):
    """Linear part plus a constant set offset: ``x -> sum_i lambda_i Phi_i + B``.

    The constant offset breaks positive homogeneity (and additivity), so this
    class exists mainly as a counterexample generator for the checkers.
    """

    def __init__(self, domain: ConeBasis, images: Sequence[Polytope], offset: Polytope):
        if len(images) != domain.size:
            raise GeometryError("one image per generator is required")
        dims = {im.dim for im in images} | {offset.dim}
        if len(dims) != 1:
            raise GeometryError("images and offset must share one dimension")
        super().__init__(domain, dims.pop())
        self.images = tuple(images)
        self.offset = offset
        self._engine = None

    def _get_engine(self):
        if self._engine is None and self.codomain_dim <= 3:
            from ._engine import MinkowskiEngine

            self._engine = MinkowskiEngine(list(self.images) + [self.offset])
        return self._engine

    def _value_at(self, lambdas: Vec) -> Polytope:
        weights = tuple(lambdas) + (Fraction(1),)
        eng = self._get_engine()
        if eng is not None:
            return eng.value(weights)
        return _naive_weighted_sum(list(self.images) + [self.offset], weights)


class BoundaryJumpCorrespondence(Correspondence):
    """Piecewise rule on the plane quadrant that is continuous inside but
    jumps on a boundary ray.

    Points with second coordinate zero map to the origin; all others map to
    the horizontal segment from the origin to ``(x_1, 0)``.  The map is
    superadditive, positively homogeneous, and lower semicontinuous, yet not
    upper semicontinuous at interior boundary points — approaching
    ``(a, 0)`` from inside the quadrant keeps a whole segment alive that the
    boundary value lacks.
    """

    def __init__(self):
        super().__init__(standard_basis(2), 2)

    def _value_at(self, lambdas: Vec) -> Polytope:
        a, b = lambdas
        if b == 0:
            return canonicalize([(0, 0)])
        return canonicalize([(0, 0), (a, 0)])


def _naive_weighted_sum(images, weights) -> Polytope:
    total = None
    for im, w in zip(images, weights):
        term = scale(im, w)
        total = term if total is None else minkowski_sum(total, term)
    return total


# ---------------------------------------------------------------------------
# exact property checks
# ---------------------------------------------------------------------------


def check_superadditive(phi: Correspondence, x: ConePoint, y: ConePoint) -> Verdict:
    """Does ``value(x) + value(y)`` sit inside ``value(x + y)``?  Exact.

    ``equal`` reports whether the inclusion is an equality (additivity at
    this pair).  The Minkowski sum is never hulled: the inclusion is decided
    vertex-sum by vertex-sum, and equality by recovering each vertex of the
    right-hand side as a vertex sum (with a rational feasibility program as
    the fallback for degenerate ties).
    """
    big = phi.value(x + y)
    px, py = phi.value(x), phi.value(y)
    den = px.den * py.den
    sums = sorted(
        {
            tuple(a * py.den + b * px.den for a, b in zip(u, v))
            for u in px.iverts
            for v in py.iverts
        }
    )
    flags = geometry._contains_scaled(big, sums, den)
    for row, ok in zip(sums, flags):
        if not ok:
            witness = tuple(Fraction(c, den) for c in row)
            return Verdict(
                False,
                equal=False,
                witness=witness,
                detail=f"sum vertex {format_vector(witness)} escapes the value at x+y",
            )
    # inclusion holds; check equality by recovering big's vertices as sums
    sum_set = set(sums)
    fracs = None
    for row in big.iverts:
        f = den // big.den if den % big.den == 0 else None
        if f is not None and tuple(v * f for v in row) in sum_set:
            continue
        if fracs is None:
            fracs = [tuple(Fraction(c, den) for c in r) for r in sums]
        vert = tuple(Fraction(v, big.den) for v in row)
        if not _exact.point_in_hull_lp(vert, fracs):
            return Verdict(
                True,
                equal=False,
                witness=vert,
                detail=f"strict inclusion: vertex {format_vector(vert)} of the "
                "value at x+y is not reached by the sum",
            )
    return Verdict(True, equal=True)


def check_q_homogeneous(phi: Correspondence, x: ConePoint, r) -> Verdict:
    """Exact test of ``value(r x) == r * value(x)`` for rational ``r > 0``."""
    factor = rational(r)
    if factor <= 0:
        raise GeometryError("scale factor must be a positive rational")
    left = phi.value(factor * x)
    right = scale(phi.value(x), factor)
    if set_equal(left, right):
        return Verdict(True, equal=True)
    for v in right.vertices:
        if not geometry.contains_point(left, v):
            return Verdict(
                False,
                equal=False,
                witness=v,
                detail=f"r*value(x) vertex {format_vector(v)} missing from value(r*x)",
            )
    for v in left.vertices:
        if not geometry.contains_point(right, v):
            return Verdict(
                False,
                equal=False,
                witness=v,
                detail=f"value(r*x) vertex {format_vector(v)} missing from r*value(x)",
            )
    return Verdict(False, equal=False)  # pragma: no cover - unreachable


@dataclass(frozen=True)
class ScalarTrack:
    """Coordinate-wise envelope of a correspondence.

    ``lower``/``upper`` give the exact min/max of coordinate ``index`` over
    the value polytope; for superadditive homogeneous maps the lower
    envelope is midpoint convex and the upper one midpoint concave.
    """

    phi: Correspondence
    index: int

    def lower(self, x: ConePoint) -> Fraction:
        p = self.phi.value(x)
        return min(Fraction(row[self.index], p.den) for row in p.iverts)

    def upper(self, x: ConePoint) -> Fraction:
        p = self.phi.value(x)
        return max(Fraction(row[self.index], p.den) for row in p.iverts)

    def box(self, x: ConePoint) -> Polytope:
        """Product of all coordinate envelopes at ``x`` (contains the value)."""
        p = self.phi.value(x)
        los = [min(Fraction(r[i], p.den) for r in p.iverts) for i in range(p.dim)]
        his = [max(Fraction(r[i], p.den) for r in p.iverts) for i in range(p.dim)]
        corners = [[]]
        for lo, hi in zip(los, his):
            corners = [c + [v] for c in corners for v in (lo, hi)]
        return canonicalize(corners)


def scalarize(phi: Correspondence, index: int) -> ScalarTrack:
    if not 0 <= index < phi.codomain_dim:
        raise GeometryError("coordinate index out of range")
    return ScalarTrack(phi, index)


def jensen_check(phi: Correspondence, index: int, x: ConePoint, y: ConePoint) -> Verdict:
    """Midpoint convexity/concavity of the coordinate envelopes, exactly.

    For a superadditive positively homogeneous map the lower envelope g and
    upper envelope h satisfy ``g((x+y)/2) <= (g(x)+g(y))/2`` and
    ``h((x+y)/2) >= (h(x)+h(y))/2``; both are checked as exact rationals.
    """
    track = scalarize(phi, index)
    mid = Fraction(1, 2) * (x + y)
    g_mid, g_avg = track.lower(mid), (track.lower(x) + track.lower(y)) / 2
    h_mid, h_avg = track.upper(mid), (track.upper(x) + track.upper(y)) / 2
    if g_mid > g_avg:
        return Verdict(
            False,
            witness=(g_mid, g_avg),
            detail=f"lower envelope fails midpoint convexity: {g_mid} > {g_avg}",
        )
    if h_mid < h_avg:
        return Verdict(
            False,
            witness=(h_mid, h_avg),
            detail=f"upper envelope fails midpoint concavity: {h_mid} < {h_avg}",
        )
    return Verdict(True)


# ---------------------------------------------------------------------------
# probes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeRow:
    k: int
    hausdorff: float
    lsc_deficit: float
    usc_deficit: float
    lsc_exactly_zero: bool
    usc_exactly_zero: bool


@dataclass(frozen=True)
class ProbeReport:
    x: ConePoint
    direction: Vec
    rows: tuple[ProbeRow, ...]
    verdict: str

    @property
    def final(self) -> ProbeRow:
        return self.rows[-1]


def continuity_probe(
    phi: Correspondence,
    x: ConePoint,
    direction,
    steps: int = 20,
    tol: float = 1e-9,
) -> ProbeReport:
    """Track value movement along ``x + direction / 2^k`` for k = 1..steps.

    Reports the Hausdorff distance to the base value split into its two
    one-sided deficits, with exact flags whenever a deficit is a true zero
    (decided by rational containment, not by thresholding).  The sequence
    must stay in the cone; the first escaping step raises ConeError.
    """
    if steps < 1:
        raise GeometryError("need at least one step")
    v = vector(direction)
    if len(v) != x.basis.ambient_dim:
        raise ConeError("direction dimension does not match the ambient space")
    base = phi.value(x)
    rows = []
    points = []
    for k in range(1, steps + 1):
        shift = tuple(c / (1 << k) for c in v)
        target = tuple(a + s for a, s in zip(x.ambient, shift))
        lam = x.basis.coords(target)
        if lam is None or any(c < 0 for c in lam):
            raise ConeError(f"sequence exits the cone at step k={k}")
        points.append(ConePoint(x.basis, lam, vector(target)))
    values = phi.value_batch(points)
    for k, val in enumerate(values, start=1):
        lsc_zero = contains_set(val, base)
        usc_zero = contains_set(base, val)
        lsc = 0.0 if lsc_zero else _directed(base, val)
        usc = 0.0 if usc_zero else _directed(val, base)
        rows.append(
            ProbeRow(k, max(lsc, usc), lsc, usc, lsc_zero, usc_zero)
        )
    final = rows[-1]
    if final.hausdorff <= tol:
        verdict = "converges"
    else:
        verdict = f"stalls near {final.hausdorff:.6g}"
    return ProbeReport(x, v, tuple(rows), verdict)


def _directed(p: Polytope, q: Polytope) -> float:
    import math

    return math.sqrt(geometry._directed_hausdorff(p, q, "euclidean"))


@dataclass(frozen=True)
class BoundednessReport:
    rows: tuple[tuple[ConePoint, Fraction], ...]  # (point, sup of squared norms)
    global_sq: Fraction

    @property
    def global_bound(self) -> float:
        import math

        return math.sqrt(self.global_sq)


def uniform_boundedness_probe(
    family: Sequence[Correspondence], points: Sequence[ConePoint]
) -> BoundednessReport:
    """Exact sup of vertex norms of all family values over the sample points.

    Returns per-point suprema of the squared Euclidean norm (squares stay
    rational, so the comparison is exact) together with the global bound.
    """
    if not family:
        raise GeometryError("empty family")
    if not points:
        raise GeometryError("empty sample set")
    rows = []
    global_sq = Fraction(0)
    for x in points:
        best = Fraction(0)
        for phi in family:
            val = phi.value(x)
            d2 = val.den * val.den
            for row in val.iverts:
                sq = Fraction(sum(c * c for c in row), d2)
                if sq > best:
                    best = sq
        rows.append((x, best))
        if best > global_sq:
            global_sq = best
    return BoundednessReport(tuple(rows), global_sq)
