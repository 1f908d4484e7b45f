"""Deterministic sample generation: coordinate grids and seeded random data.

Everything is driven by a caller-supplied :class:`random.Random`, so runs
with the same seed produce identical samples on any platform.  Random
rationals are drawn with bounded denominators to keep downstream exact
arithmetic fast.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Sequence

from .cone import ConeBasis, ConePoint
from .geometry import Polytope, canonicalize, rational

__all__ = [
    "DEFAULT_GRID",
    "lambda_grid",
    "box_grid",
    "random_rational",
    "random_vector",
    "random_polytope",
    "random_images",
    "sample_points",
]

DEFAULT_GRID = (
    Fraction(0),
    Fraction(1, 2),
    Fraction(1),
    Fraction(3, 2),
    Fraction(2),
)


def lambda_grid(n: int, values: Sequence = DEFAULT_GRID) -> list[tuple[Fraction, ...]]:
    """All coordinate tuples over the given value list, lexicographic."""
    vals = [rational(v) for v in values]
    return [tuple(t) for t in itertools.product(vals, repeat=n)]


def box_grid(n: int, subdivisions: int) -> list[tuple[Fraction, ...]]:
    """Uniform grid over the coordinate box [0, 1]^n, (subdivisions+1)^n points."""
    if subdivisions < 1:
        raise ValueError("need at least one subdivision")
    vals = [Fraction(i, subdivisions) for i in range(subdivisions + 1)]
    return [tuple(t) for t in itertools.product(vals, repeat=n)]


def random_rational(
    rng: random.Random, lo=0, hi=2, max_den: int = 16
) -> Fraction:
    """Uniformly pick a denominator <= max_den, then a numerator in range."""
    lo, hi = rational(lo), rational(hi)
    den = rng.randint(1, max_den)
    lo_num = math.ceil(lo * den)
    hi_num = math.floor(hi * den)
    return Fraction(rng.randint(lo_num, hi_num), den)


def random_vector(rng, dim: int, lo=0, hi=2, max_den: int = 16):
    return tuple(random_rational(rng, lo, hi, max_den) for _ in range(dim))


def random_polytope(
    rng,
    dim: int,
    max_vertices: int = 6,
    lo=-2,
    hi=2,
    max_den: int = 8,
) -> Polytope:
    k = rng.randint(1, max_vertices)
    return canonicalize(
        [random_vector(rng, dim, lo, hi, max_den) for _ in range(k)]
    )


def random_images(
    rng,
    n: int,
    dim: int,
    max_vertices: int = 6,
    lo=-2,
    hi=2,
    max_den: int = 16,
) -> list[Polytope]:
    """Generator images for a random linear map (one polytope per generator)."""
    return [
        random_polytope(rng, dim, max_vertices, lo, hi, max_den)
        for _ in range(n)
    ]


def sample_points(
    basis: ConeBasis,
    rng,
    grid_values: Sequence = DEFAULT_GRID,
    n_random: int = 50,
    lo=0,
    hi=2,
    max_den: int = 16,
) -> list[ConePoint]:
    """The default sample set: the coordinate grid plus seeded random points."""
    pts = [basis.point(lam) for lam in lambda_grid(basis.size, grid_values)]
    for _ in range(n_random):
        pts.append(basis.point(random_vector(rng, basis.size, lo, hi, max_den)))
    return pts
