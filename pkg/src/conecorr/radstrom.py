"""Difference pairs of polytopes with exact equivalence and a Hausdorff norm.

A pair ``[A, B]`` stands for the formal difference ``A - B``; two pairs are
the same element exactly when ``A + E == B + D`` (the cancellation law makes
this an equivalence).  Addition and nonnegative scaling act componentwise,
negative scaling swaps the components, and ``|| [A, B] || = h(A, B)`` gives
the norm used by the `radstrom` report suite.  Embedding a correspondence
sends ``x`` to ``[value(x), {0}]``, turning additivity of the map into
additivity in the pair space, where distances between values can cancel.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cone import ConePoint
from .geometry import (
    GeometryError,
    Polytope,
    canonicalize,
    hausdorff,
    minkowski_sum,
    rational,
    scale,
    set_equal,
)

__all__ = [
    "DifferencePair",
    "zero_pair",
    "equivalent",
    "pair_add",
    "pair_scale",
    "pair_sub",
    "pair_norm",
    "pair_dist",
    "embed",
]


@dataclass(frozen=True)
class DifferencePair:
    """Formal difference ``plus - minus`` of two convex compact polytopes."""

    plus: Polytope
    minus: Polytope

    def __post_init__(self):
        if self.plus.dim != self.minus.dim:
            raise GeometryError("pair components must share one dimension")

    @property
    def dim(self) -> int:
        return self.plus.dim

    def __add__(self, other: "DifferencePair") -> "DifferencePair":
        return pair_add(self, other)

    def __sub__(self, other: "DifferencePair") -> "DifferencePair":
        return pair_sub(self, other)

    def __mul__(self, factor) -> "DifferencePair":
        return pair_scale(self, factor)

    __rmul__ = __mul__


def zero_pair(dim: int) -> DifferencePair:
    origin = canonicalize([(0,) * dim])
    return DifferencePair(origin, origin)


def equivalent(p: DifferencePair, q: DifferencePair) -> bool:
    """Exact cancellation-law equivalence: ``p.plus + q.minus == p.minus + q.plus``."""
    if p.dim != q.dim:
        raise GeometryError("pair dimensions differ")
    return set_equal(
        minkowski_sum(p.plus, q.minus), minkowski_sum(p.minus, q.plus)
    )


def pair_add(p: DifferencePair, q: DifferencePair) -> DifferencePair:
    if p.dim != q.dim:
        raise GeometryError("pair dimensions differ")
    return DifferencePair(
        minkowski_sum(p.plus, q.plus), minkowski_sum(p.minus, q.minus)
    )


def pair_scale(p: DifferencePair, factor) -> DifferencePair:
    """Scalar action; negative factors swap the components.

    ``t * [A, B]`` is ``[tA, tB]`` for ``t >= 0`` and ``[|t|B, |t|A]`` for
    ``t < 0``, which is what makes ``-1 * p`` an additive inverse up to
    equivalence.
    """
    t = rational(factor)
    if t >= 0:
        return DifferencePair(scale(p.plus, t), scale(p.minus, t))
    return DifferencePair(scale(p.minus, -t), scale(p.plus, -t))


def pair_sub(p: DifferencePair, q: DifferencePair) -> DifferencePair:
    return pair_add(p, pair_scale(q, -1))


def pair_norm(p: DifferencePair, metric: str = "euclidean") -> float:
    """Norm of the pair: the Hausdorff distance between its components.

    Well-defined on equivalence classes because Minkowski addition of a
    common set on both sides leaves the Hausdorff distance unchanged.
    """
    return hausdorff(p.plus, p.minus, metric=metric)


def pair_dist(p: DifferencePair, q: DifferencePair, metric: str = "euclidean") -> float:
    """Distance between two pairs, ``|| p - q ||`` computed without swaps."""
    if p.dim != q.dim:
        raise GeometryError("pair dimensions differ")
    return hausdorff(
        minkowski_sum(p.plus, q.minus),
        minkowski_sum(p.minus, q.plus),
        metric=metric,
    )


def embed(phi, x: ConePoint) -> DifferencePair:
    """The pair ``[value(x), {0}]`` — the canonical image of a map value.

    For additive maps this is an additive embedding:
    ``embed(x) + embed(y)`` is equivalent to ``embed(x + y)``.
    """
    value = phi.value(x)
    origin = canonicalize([(0,) * value.dim])
    return DifferencePair(value, origin)
