"""Finitely generated cones with linearly independent generators.

A :class:`ConeBasis` wraps generators ``e_1, ..., e_n`` living in an ambient
rational space of dimension ``d >= n``.  Because the generators are
independent, every cone point has unique nonnegative coordinates, and the
coordinate map identifies the cone with the nonnegative orthant of R^n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

from . import _exact
from .geometry import Vec, vector

__all__ = ["ConeError", "ConeBasis", "ConePoint", "standard_basis"]


class ConeError(ValueError):
    pass


@dataclass(frozen=True)
class ConeBasis:
    """Ordered, linearly independent generators of a cone in R^d."""

    generators: tuple[Vec, ...]

    def __post_init__(self):
        gens = tuple(vector(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ConeError("a cone basis needs at least one generator")
        dims = {len(g) for g in gens}
        if len(dims) != 1:
            raise ConeError("generators must share one ambient dimension")
        if self.size > self.ambient_dim:
            raise ConeError("more generators than ambient dimensions")
        if _exact.int_rank([_int_row(g) for g in gens]) != self.size:
            raise ConeError("generators are linearly dependent")

    @property
    def size(self) -> int:
        return len(self.generators)

    @property
    def ambient_dim(self) -> int:
        return len(self.generators[0])

    @cached_property
    def _matrix(self):
        # columns of the solve: d x n system  E . lam = x
        return [
            [self.generators[j][i] for j in range(self.size)]
            for i in range(self.ambient_dim)
        ]

    def coords(self, point) -> Vec | None:
        """Unique coordinates of ``point`` in the generator basis.

        Returns None when the point is outside the linear span.  Coordinates
        may be negative; use :meth:`in_cone` for the membership question.
        """
        x = vector(point)
        if len(x) != self.ambient_dim:
            raise ConeError("point dimension does not match the ambient space")
        if self.size == self.ambient_dim:
            sol = _exact.solve_fraction_system(self._matrix, list(x))
            return tuple(sol) if sol is not None else None
        # overdetermined: solve on an independent row subset, verify the rest
        rows, leads = [], []
        idx = []
        for i, row in enumerate(self._matrix):
            if _exact.echelon_insert(rows, leads, _int_row(row)):
                idx.append(i)
            if len(idx) == self.size:
                break
        sol = _exact.solve_fraction_system(
            [self._matrix[i] for i in idx], [x[i] for i in idx]
        )
        if sol is None:
            return None
        for i in range(self.ambient_dim):
            if sum(a * s for a, s in zip(self._matrix[i], sol)) != x[i]:
                return None
        return tuple(sol)

    def in_cone(self, point) -> bool:
        lam = self.coords(point)
        return lam is not None and all(c >= 0 for c in lam)

    def in_relative_interior(self, point) -> bool:
        lam = self.coords(point)
        return lam is not None and all(c > 0 for c in lam)

    def point(self, lambdas) -> "ConePoint":
        """Cone point with the given nonnegative coordinates."""
        lam = vector(lambdas)
        if len(lam) != self.size:
            raise ConeError("coordinate count does not match the basis size")
        if any(c < 0 for c in lam):
            raise ConeError("point not in cone: negative coordinate")
        ambient = tuple(
            sum((c * g[i] for c, g in zip(lam, self.generators)), Fraction(0))
            for i in range(self.ambient_dim)
        )
        return ConePoint(self, lam, ambient)

    def from_ambient(self, point) -> "ConePoint":
        lam = self.coords(point)
        if lam is None or any(c < 0 for c in lam):
            raise ConeError("point not in cone")
        return ConePoint(self, lam, vector(point))


def _int_row(vec):
    den = 1
    for c in vec:
        den = den * c.denominator // gcd(den, c.denominator)
    return [int(c * den) for c in vec]


@dataclass(frozen=True)
class ConePoint:
    """A cone element carrying both its coordinates and ambient position."""

    basis: ConeBasis
    lambdas: Vec
    ambient: Vec

    def __add__(self, other: "ConePoint") -> "ConePoint":
        if not isinstance(other, ConePoint):
            return NotImplemented
        if other.basis != self.basis:
            raise ConeError("cannot add points over different cone bases")
        return ConePoint(
            self.basis,
            tuple(a + b for a, b in zip(self.lambdas, other.lambdas)),
            tuple(a + b for a, b in zip(self.ambient, other.ambient)),
        )

    def __mul__(self, factor) -> "ConePoint":
        from .geometry import rational

        r = rational(factor)
        if r < 0:
            raise ConeError("point not in cone: negative scale factor")
        return ConePoint(
            self.basis,
            tuple(r * c for c in self.lambdas),
            tuple(r * c for c in self.ambient),
        )

    __rmul__ = __mul__

    def __repr__(self):
        from .geometry import format_vector

        return f"ConePoint(lambdas={format_vector(self.lambdas)})"


def standard_basis(n: int) -> ConeBasis:
    """The nonnegative orthant of R^n as a cone basis."""
    if n < 1:
        raise ConeError("dimension must be at least 1")
    return ConeBasis(
        tuple(
            tuple(Fraction(1 if j == i else 0) for j in range(n)) for i in range(n)
        )
    )
