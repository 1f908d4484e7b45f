"""Exact vertex-representation polytope arithmetic over the rationals.

Polytopes are stored by their canonical vertex list: no redundant points,
vertices sorted lexicographically, coordinates on a minimal common integer
grid.  Two polytopes compare equal exactly when they are equal as point
sets.  All set operations (Minkowski sum, scaling, containment, equality)
are exact; floating point appears only in distance *outputs* (Euclidean
distances run Wolfe's min-norm algorithm, l1 distances an exact rational
linear program rounded at the very end).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from . import _exact
from ._minnorm import min_norm_sq

__all__ = [
    "GeometryError",
    "Polytope",
    "rational",
    "vector",
    "canonicalize",
    "minkowski_sum",
    "scale",
    "support",
    "contains_point",
    "contains_points",
    "contains_set",
    "set_equal",
    "hull_equals",
    "dist_point_to_polytope",
    "hausdorff",
    "parse_rational",
    "parse_vector",
    "format_vector",
    "parse_polytope",
    "format_polytope",
]

Vec = tuple[Fraction, ...]

# Conservative magnitude bound under which int64 matrix products cannot
# overflow for the row lengths we use (<= 8 terms of |a*b|).
_I64 = int(np.iinfo(np.int64).max) // 16


class GeometryError(ValueError):
    pass


def rational(value) -> Fraction:
    """Coerce ints, Fractions, and strings like ``"3/4"`` to an exact Fraction.

    Floats are rejected on purpose: coordinates must stay exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise GeometryError(f"malformed rational {value!r}") from exc
    raise GeometryError(f"expected an exact rational, got {type(value).__name__}")


def vector(values) -> Vec:
    return tuple(rational(v) for v in values)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _normalize_scaled(rows, den):
    g = den
    for row in rows:
        g = gcd(g, _exact.vec_gcd(row))
        if g == 1:
            return tuple(tuple(r) for r in rows), den
    return tuple(tuple(v // g for v in row) for row in rows), den // g


@dataclass(frozen=True)
class Polytope:
    """Convex polytope of dimension >= 1, canonical vertex representation.

    ``iverts`` are the vertex coordinates on the common integer grid with
    denominator ``den``; ``vertices`` materializes them as Fractions.  Build
    instances with :func:`canonicalize` / :meth:`from_points` — the raw
    constructor trusts its arguments to already be canonical.
    """

    iverts: tuple[tuple[int, ...], ...]
    den: int

    @classmethod
    def from_points(cls, points) -> "Polytope":
        return canonicalize(points)

    @cached_property
    def vertices(self) -> tuple[Vec, ...]:
        d = self.den
        return tuple(tuple(Fraction(c, d) for c in row) for row in self.iverts)

    @property
    def dim(self) -> int:
        return len(self.iverts[0])

    @cached_property
    def _hull(self) -> _exact.HullData:
        hull = _exact.hull_structure(list(self.iverts))
        if len(hull.vertex_ids) != len(self.iverts):  # pragma: no cover
            raise GeometryError("non-canonical polytope representation")
        return hull

    @cached_property
    def _float_verts(self) -> np.ndarray:
        return np.array(self.iverts, dtype=float) / float(self.den)

    @cached_property
    def _membership_arrays(self):
        """(eqA, eqC, inA, inC, proj) as int64 arrays, or None if oversized."""
        hull = self._hull
        if hull.ineqs is None:
            return None
        rows = [list(n) + [c] for n, c in hull.equalities]
        rows += [list(n) + [c] for n, c in hull.ineqs]
        bound = max((max(abs(v) for v in row) for row in rows), default=0)
        if bound > _I64 or max(
            (abs(v) for r in self.iverts for v in r), default=0
        ) > _I64:
            return None
        eqA = np.array([n for n, _ in hull.equalities], dtype=np.int64).reshape(
            len(hull.equalities), self.dim
        )
        eqC = np.array([c for _, c in hull.equalities], dtype=np.int64)
        inA = np.array([n for n, _ in hull.ineqs], dtype=np.int64).reshape(
            len(hull.ineqs), hull.rank
        )
        inC = np.array([c for _, c in hull.ineqs], dtype=np.int64)
        proj = np.array(hull.proj, dtype=np.intp)
        return eqA, eqC, inA, inC, proj

    def __add__(self, other):
        if isinstance(other, Polytope):
            return minkowski_sum(self, other)
        return NotImplemented

    def __mul__(self, factor):
        return scale(self, factor)

    __rmul__ = __mul__

    def __neg__(self):
        return scale(self, -1)

    def __repr__(self):
        return f"Polytope({format_polytope(self)})"


def _poly_from_scaled(iverts_sorted, den, hull=None) -> Polytope:
    iverts, den2 = _normalize_scaled(iverts_sorted, den)
    poly = Polytope(iverts, den2)
    if hull is not None and den2 == den:
        poly.__dict__["_hull"] = hull
    return poly


def canonicalize(points) -> Polytope:
    """Canonical polytope from any finite point collection.

    Removes non-extreme points, deduplicates, and sorts vertices
    lexicographically, so equal point sets produce identical objects.
    """
    pts = [vector(p) for p in points]
    if not pts:
        raise GeometryError("empty point set")
    dims = {len(p) for p in pts}
    if len(dims) != 1:
        raise GeometryError("mixed point dimensions")
    if dims == {0}:
        raise GeometryError("points must have dimension >= 1")
    den = 1
    for p in pts:
        for c in p:
            den = _lcm(den, c.denominator)
    ipts = sorted({tuple(int(c * den) for c in p) for p in pts})
    hull = _exact.hull_structure(ipts)
    iverts = tuple(sorted(ipts[i] for i in hull.vertex_ids))
    fixed = _exact.HullData(
        hull.rank, tuple(range(len(iverts))), hull.equalities, hull.proj, hull.ineqs
    )
    return _poly_from_scaled(iverts, den, hull=fixed)


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    if p.dim != q.dim:
        raise GeometryError("dimension mismatch in Minkowski sum")
    den = _lcm(p.den, q.den)
    a, b = den // p.den, den // q.den
    sums = sorted(
        {
            tuple(a * x + b * y for x, y in zip(u, v))
            for u in p.iverts
            for v in q.iverts
        }
    )
    hull = _exact.hull_structure(sums)
    iverts = tuple(sorted(sums[i] for i in hull.vertex_ids))
    fixed = _exact.HullData(
        hull.rank, tuple(range(len(iverts))), hull.equalities, hull.proj, hull.ineqs
    )
    return _poly_from_scaled(iverts, den, hull=fixed)


def scale(p: Polytope, factor) -> Polytope:
    """Pointwise scaling ``factor * p``; exact for any rational factor."""
    t = rational(factor)
    if t == 0:
        return Polytope(((0,) * p.dim,), 1)
    num, q = t.numerator, t.denominator
    rows = sorted(tuple(num * v for v in row) for row in p.iverts)
    return _poly_from_scaled(tuple(rows), p.den * q)


def support(p: Polytope, direction) -> Fraction:
    """Support value ``max_{x in p} <direction, x>`` (exact)."""
    u = vector(direction)
    if len(u) != p.dim:
        raise GeometryError("dimension mismatch in support query")
    return max(
        sum(c * Fraction(v, p.den) for c, v in zip(u, row)) for row in p.iverts
    )


def _scale_points_to_int(points, dim) -> tuple[list[tuple[int, ...]], int]:
    vecs = []
    den = 1
    for pt in points:
        v = vector(pt)
        if len(v) != dim:
            raise GeometryError("dimension mismatch in containment query")
        vecs.append(v)
        for c in v:
            den = _lcm(den, c.denominator)
    return [tuple(int(c * den) for c in v) for v in vecs], den


def _contains_scaled(p: Polytope, ipts, den: int) -> list[bool]:
    """Exact membership of points ``ipts / den`` in ``p`` (batched)."""
    hull = p._hull
    if hull.ineqs is None:
        verts = p.vertices
        return [
            _exact.point_in_hull_lp(tuple(Fraction(c, den) for c in row), verts)
            for row in ipts
        ]
    # common grid: compare n . (pt * p.den) against c * den
    arrays = p._membership_arrays
    use_np = False
    if arrays is not None:
        eqA, eqC, inA, inC, proj = arrays
        max_pt = max((abs(v) for row in ipts for v in row), default=0) * p.den
        max_n = max(
            int(abs(eqA).max(initial=0)), int(abs(inA).max(initial=0)), 1
        )
        max_c = max(
            int(abs(eqC).max(initial=0)), int(abs(inC).max(initial=0)), 1
        )
        lim = (1 << 62) // max(1, p.dim)
        use_np = max_pt <= lim // max_n and max_c <= (1 << 62) // max(1, den)
    if use_np:
        pts = np.asarray(ipts, dtype=np.int64) * p.den
        ok = np.ones(len(pts), dtype=bool)
        if len(eqA):
            ok &= (pts @ eqA.T == eqC * den).all(axis=1)
        if len(inA):
            ok &= (pts[:, proj] @ inA.T <= inC * den).all(axis=1)
        return list(map(bool, ok))
    flags = []
    for row in ipts:
        scaled = [v * p.den for v in row]
        good = all(
            sum(n_i * x_i for n_i, x_i in zip(n, scaled)) == c * den
            for n, c in hull.equalities
        )
        if good:
            px = [scaled[j] for j in hull.proj]
            good = all(
                sum(n_i * x_i for n_i, x_i in zip(n, px)) <= c * den
                for n, c in hull.ineqs
            )
        flags.append(good)
    return flags


def contains_point(p: Polytope, point) -> bool:
    ipts, den = _scale_points_to_int([point], p.dim)
    return _contains_scaled(p, ipts, den)[0]


def contains_points(p: Polytope, points) -> list[bool]:
    """Exact membership for a batch of rational points."""
    points = list(points)
    if not points:
        return []
    ipts, den = _scale_points_to_int(points, p.dim)
    return _contains_scaled(p, ipts, den)


def contains_set(p: Polytope, q: Polytope) -> bool:
    """Exact test for ``q`` a subset of ``p`` (vertex containment suffices)."""
    if p.dim != q.dim:
        raise GeometryError("dimension mismatch in set containment")
    return all(_contains_scaled(p, q.iverts, q.den))


def set_equal(p: Polytope, q: Polytope) -> bool:
    """Set equality; canonical form makes this a plain structural compare."""
    return p == q


def hull_equals(p: Polytope, points) -> bool:
    """Does ``conv(points)`` equal ``p``?  Avoids building the hull of ``points``.

    Containment one way is vertex-wise; the reverse direction first tries
    exact vertex lookup in the point list and only falls back to a rational
    feasibility program for vertices that are convex combinations of
    non-listed points.
    """
    points = list(points)
    if not points:
        return False
    ipts, den = _scale_points_to_int(points, p.dim)
    if not all(_contains_scaled(p, ipts, den)):
        return False
    lookup = set(ipts)
    exact_grid = den % p.den == 0
    factor = den // p.den if exact_grid else 0
    fracs = None
    for row in p.iverts:
        if exact_grid and tuple(v * factor for v in row) in lookup:
            continue
        if fracs is None:
            fracs = [tuple(Fraction(c, den) for c in r) for r in ipts]
        if not _exact.point_in_hull_lp(
            tuple(Fraction(v, p.den) for v in row), fracs
        ):
            return False
    return True


def dist_point_to_polytope(point, p: Polytope, metric: str = "euclidean") -> float:
    """Distance from a rational point to a polytope.

    Euclidean distances use Wolfe's min-norm algorithm after an exact
    containment check (so zero really means zero); l1 distances solve an
    exact linear program and round only the final value.
    """
    if metric not in ("euclidean", "l1"):
        raise GeometryError(f"unknown metric {metric!r}")
    x = vector(point)
    if len(x) != p.dim:
        raise GeometryError("dimension mismatch in distance query")
    if contains_point(p, x):
        return 0.0
    if metric == "euclidean":
        diff = p._float_verts - np.array([float(c) for c in x])
        return math.sqrt(max(0.0, min_norm_sq(diff)))
    return float(_l1_dist_exact(x, p))


def _l1_dist_exact(x: Vec, p: Polytope) -> Fraction:
    """Exact ``min_{y in p} |x - y|_1`` via a rational LP."""
    verts = p.vertices
    k, m = len(verts), p.dim
    nvars = k + 3 * m  # alpha, t, u, w
    A = []
    b = []
    for d in range(m):
        row = [verts[j][d] for j in range(k)]
        row += [Fraction(1) if e == d else Fraction(0) for e in range(m)]
        row += [Fraction(-1) if e == d else Fraction(0) for e in range(m)]
        row += [Fraction(0)] * m
        A.append(row)
        b.append(x[d])
    for d in range(m):
        row = [verts[j][d] for j in range(k)]
        row += [Fraction(-1) if e == d else Fraction(0) for e in range(m)]
        row += [Fraction(0)] * m
        row += [Fraction(1) if e == d else Fraction(0) for e in range(m)]
        A.append(row)
        b.append(x[d])
    A.append([Fraction(1)] * k + [Fraction(0)] * (3 * m))
    b.append(Fraction(1))
    cost = [Fraction(0)] * k + [Fraction(1)] * m + [Fraction(0)] * (2 * m)
    status, _, obj = _exact.lp_solve(cost, A, b)
    if status != "optimal":  # pragma: no cover - always feasible/bounded
        raise GeometryError(f"l1 distance program returned {status}")
    return obj


def _directed_hausdorff(p: Polytope, q: Polytope, metric: str) -> float:
    flags = _contains_scaled(q, p.iverts, p.den)
    worst = 0.0
    verts = None
    for i, inside in enumerate(flags):
        if inside:
            continue
        if metric == "euclidean":
            diff = q._float_verts - p._float_verts[i]
            worst = max(worst, min_norm_sq(diff))
        else:
            if verts is None:
                verts = p.vertices
            worst = max(worst, float(_l1_dist_exact(verts[i], q)) ** 2)
    return worst


def hausdorff(p: Polytope, q: Polytope, metric: str = "euclidean") -> float:
    """Hausdorff distance between two polytopes.

    The supremum over each set is attained at a vertex because the distance
    to a convex set is a convex function, so only vertices are scanned.
    """
    if p.dim != q.dim:
        raise GeometryError("dimension mismatch in Hausdorff distance")
    if metric not in ("euclidean", "l1"):
        raise GeometryError(f"unknown metric {metric!r}")
    d2 = max(_directed_hausdorff(p, q, metric), _directed_hausdorff(q, p, metric))
    return math.sqrt(d2)


# ---------------------------------------------------------------------------
# text forms
# ---------------------------------------------------------------------------

_RAT = re.compile(r"-?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    tok = text.strip()
    if not _RAT.match(tok):
        raise GeometryError(f"malformed rational {text!r}")
    try:
        return Fraction(tok)
    except ZeroDivisionError as exc:
        raise GeometryError(f"zero denominator in {text!r}") from exc


def parse_vector(text: str) -> Vec:
    """Parse ``[1,1/2,-3]`` into an exact vector."""
    s = re.sub(r"\s+", "", text)
    if not (s.startswith("[") and s.endswith("]")) or s.count("[") != 1:
        raise GeometryError(f"malformed vector {text!r}")
    body = s[1:-1]
    if not body:
        raise GeometryError(f"empty vector {text!r}")
    return tuple(parse_rational(tok) for tok in body.split(","))


def format_vector(vec) -> str:
    return "[" + ",".join(str(rational(c)) for c in vec) + "]"


def parse_polytope(text: str) -> Polytope:
    """Parse ``[[0,0],[1,0],[1/2,3/4]]`` into a canonical polytope."""
    s = re.sub(r"\s+", "", text)
    if not (s.startswith("[[") and s.endswith("]]")):
        raise GeometryError(f"malformed polytope {text!r}")
    rows = s[2:-2].split("],[")
    pts = []
    for row in rows:
        if not row or "[" in row or "]" in row:
            raise GeometryError(f"malformed polytope {text!r}")
        pts.append(tuple(parse_rational(tok) for tok in row.split(",")))
    return canonicalize(pts)


def format_polytope(p: Polytope) -> str:
    return "[" + ",".join(format_vector(v) for v in p.vertices) + "]"
