"""Linear selections of polytope-valued maps via generator-image matrices.

For a map with generator images ``Phi_i`` and a target cone basis, write
each image in target coordinates; the resulting coordinate polytopes
``M_i`` form the columns of a "multimatrix".  Picking one point per column
yields a matrix ``A`` whose induced linear map ``x -> A . lambda(x)`` is a
candidate single-valued selection; picking vertices yields the extreme
candidates.  Certification checks, exactly, that the candidate's value lies
inside the map's value at every sample.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import numpy as np

from . import geometry
from .cone import ConeBasis, ConePoint
from .correspondence import Correspondence, Verdict
from .geometry import (
    GeometryError,
    Polytope,
    Vec,
    canonicalize,
    format_vector,
    vector,
)
from . import _exact

__all__ = [
    "SelectionError",
    "SelectionCapError",
    "Multimatrix",
    "SelectionMatrix",
    "LinearSelection",
    "FamilyRow",
    "SelectionFamily",
    "basis_images",
    "extreme_matrices",
    "apply_selection",
    "certify_selection",
    "selection_family",
    "check_hull_recovery",
]

DEFAULT_CAP = 10**6


class SelectionError(ValueError):
    pass


class SelectionCapError(SelectionError):
    """Enumerating the extreme matrices would exceed the configured cap."""


@dataclass(frozen=True)
class Multimatrix:
    """Per-generator coordinate polytopes of the generator images."""

    columns: tuple[Polytope, ...]

    @property
    def count(self) -> int:
        n = 1
        for col in self.columns:
            n *= len(col.iverts)
        return n


@dataclass(frozen=True)
class SelectionMatrix:
    """One coordinate vector per generator, defining a linear map."""

    columns: tuple[Vec, ...]

    def entries_text(self) -> str:
        return "[" + ",".join(format_vector(c) for c in self.columns) + "]"


@dataclass(frozen=True)
class LinearSelection:
    source: ConeBasis
    target: ConeBasis
    matrix: SelectionMatrix

    def apply(self, x: ConePoint) -> Vec:
        return apply_selection(self, x)


def basis_images(phi: Correspondence, target: ConeBasis) -> Multimatrix:
    """Target-coordinate polytopes of the generator images.

    Every vertex of every generator image must lie in the target cone;
    the first escaping vertex is reported by generator and vertex.
    """
    if target.ambient_dim != phi.codomain_dim:
        raise SelectionError("target cone lives in the wrong ambient space")
    cols = []
    for i in range(phi.domain.size):
        unit = tuple(
            Fraction(1 if j == i else 0) for j in range(phi.domain.size)
        )
        image = phi.value(phi.domain.point(unit))
        coords = []
        for w in image.vertices:
            lam = target.coords(w)
            if lam is None or any(c < 0 for c in lam):
                raise SelectionError(
                    f"image of generator {i} has vertex {format_vector(w)} "
                    "outside the target cone"
                )
            coords.append(lam)
        cols.append(canonicalize(coords))
    return Multimatrix(tuple(cols))


def extreme_matrices(mm: Multimatrix, cap: int = DEFAULT_CAP) -> list[SelectionMatrix]:
    """All vertex-per-column choices, in lexicographic column-vertex order."""
    total = mm.count
    if total > cap:
        raise SelectionCapError(
            f"multimatrix too large: {total} selection matrices "
            f"exceeding the cap of {cap}"
        )
    return [
        SelectionMatrix(tuple(choice))
        for choice in itertools.product(*(col.vertices for col in mm.columns))
    ]


def apply_selection(sel: LinearSelection, x: ConePoint) -> Vec:
    """Exact value of the selection at ``x`` (a point of the ambient codomain)."""
    if x.basis != sel.source:
        raise SelectionError("point belongs to a different cone basis")
    mu = [
        sum((l * col[j] for l, col in zip(x.lambdas, sel.matrix.columns)), Fraction(0))
        for j in range(sel.target.size)
    ]
    return tuple(
        sum((m * g[d] for m, g in zip(mu, sel.target.generators)), Fraction(0))
        for d in range(sel.target.ambient_dim)
    )


def certify_selection(
    sel: LinearSelection, phi: Correspondence, samples: Sequence[ConePoint]
) -> Verdict:
    """Exact containment of the selection value in the map value at each sample."""
    values = phi.value_batch(list(samples))
    for x, val in zip(samples, values):
        pt = apply_selection(sel, x)
        if not geometry.contains_point(val, pt):
            return Verdict(
                False,
                witness=pt,
                detail=f"selection escapes the value at sample "
                f"{format_vector(x.lambdas)}",
            )
    return Verdict(True)


@dataclass(frozen=True)
class FamilyRow:
    index: int
    matrix: SelectionMatrix
    certified: bool
    failing_sample: Optional[ConePoint]
    lipschitz_bound: float


@dataclass(frozen=True)
class SelectionFamily:
    source: ConeBasis
    target: ConeBasis
    rows: tuple[FamilyRow, ...]

    @property
    def certified_count(self) -> int:
        return sum(1 for r in self.rows if r.certified)

    @property
    def certified_selections(self) -> list[LinearSelection]:
        return [
            LinearSelection(self.source, self.target, r.matrix)
            for r in self.rows
            if r.certified
        ]


def _ambient_tensor(matrices, target: ConeBasis):
    """Ambient selection columns as integers: tensors[m][i][k] is coordinate k
    of the ambient image of generator i under matrix m, over a common
    denominator."""
    den = 1
    gens = target.generators
    d = target.ambient_dim
    cols_amb = []
    for sel in matrices:
        mats = []
        for col in sel.columns:
            amb = tuple(
                sum((c * g[k] for c, g in zip(col, gens)), Fraction(0))
                for k in range(d)
            )
            for c in amb:
                den = den * c.denominator // gcd(den, c.denominator)
            mats.append(amb)
        cols_amb.append(mats)
    tensors = [
        [[int(c * den) for c in amb] for amb in mats] for mats in cols_amb
    ]
    return tensors, den


def _selection_points(tensors, lam):
    """Integer selection values ``sum_i lam_i * column_i`` per matrix."""
    n = len(lam)
    d = len(tensors[0][0])
    return [
        tuple(sum(lam[i] * mat[i][k] for i in range(n)) for k in range(d))
        for mat in tensors
    ]


def selection_family(
    phi: Correspondence,
    target: ConeBasis,
    samples: Sequence[ConePoint],
    cap: int = DEFAULT_CAP,
) -> SelectionFamily:
    """Enumerate extreme selection matrices and certify each on the samples.

    The Lipschitz column reports ``sum_i ||ambient column i||_2`` for each
    matrix — a bound on how fast the selection value can move per unit of
    l1 coordinate change.  Memory scales with the number of matrices, so the
    cap doubles as a resource guard.
    """
    mm = basis_images(phi, target)
    matrices = extreme_matrices(mm, cap=cap)
    samples = list(samples)
    tensors, den = _ambient_tensor(matrices, target)

    values = phi.value_batch(samples) if samples else []
    certified = [True] * len(matrices)
    failing: list[Optional[ConePoint]] = [None] * len(matrices)

    arr = np.array(tensors, dtype=np.int64) if _fits64(tensors) else None
    for x, val in zip(samples, values):
        q = 1
        for c in x.lambdas:
            q = q * c.denominator // gcd(q, c.denominator)
        lam = [int(c * q) for c in x.lambdas]
        if arr is not None and _prod_ok(arr, lam):
            pts = np.tensordot(arr, np.array(lam, dtype=np.int64), axes=([1], [0]))
            rows = [tuple(int(v) for v in r) for r in pts]
        else:
            rows = _selection_points(tensors, lam)
        flags = geometry._contains_scaled(val, rows, den * q)
        for idx, ok in enumerate(flags):
            if not ok and certified[idx]:
                certified[idx] = False
                failing[idx] = x

    rows_out = []
    for idx, sel in enumerate(matrices):
        bound = sum(
            math.sqrt(sum((v / den) ** 2 for v in col))
            for col in tensors[idx]
        )
        rows_out.append(
            FamilyRow(idx, sel, certified[idx], failing[idx], bound)
        )
    return SelectionFamily(phi.domain, target, tuple(rows_out))


def _fits64(tensors) -> bool:
    m = 0
    for mat in tensors:
        for row in mat:
            for v in row:
                a = abs(v)
                if a > m:
                    m = a
    return m < (1 << 61)


def _prod_ok(arr, lam) -> bool:
    top = int(abs(arr).max(initial=0))
    la = max((abs(v) for v in lam), default=0)
    return top * max(1, la) * arr.shape[-1] < (1 << 62)


def check_hull_recovery(
    phi: Correspondence,
    matrices: Sequence[SelectionMatrix],
    target: ConeBasis,
    samples: Sequence[ConePoint],
) -> Verdict:
    """Does the convex hull of all selection values equal the map value?

    True for additive homogeneous maps sampled anywhere in the cone.  Both
    directions are exact: containment is vertex-batched, and each vertex of
    the value has to reappear among the selection values (rational
    feasibility fallback for interior coincidences).
    """
    samples = list(samples)
    tensors, den = _ambient_tensor(matrices, target)
    values = phi.value_batch(samples)
    for x, val in zip(samples, values):
        q = 1
        for c in x.lambdas:
            q = q * c.denominator // gcd(q, c.denominator)
        lam = [int(c * q) for c in x.lambdas]
        rows = _selection_points(tensors, lam)
        flags = geometry._contains_scaled(val, rows, den * q)
        if not all(flags):
            bad = rows[flags.index(False)]
            pt = tuple(Fraction(c, den * q) for c in bad)
            return Verdict(
                False,
                witness=pt,
                detail=f"selection value {format_vector(pt)} escapes the map "
                f"value at {format_vector(x.lambdas)}",
            )
        # reverse: every vertex of the value is a selection value here
        lookup = set(rows)
        dq = den * q
        fracs = None
        for vert_row in val.iverts:
            if dq % val.den == 0:
                key = tuple(v * (dq // val.den) for v in vert_row)
                if key in lookup:
                    continue
            if fracs is None:
                fracs = [tuple(Fraction(c, dq) for c in r) for r in rows]
            vert = tuple(Fraction(v, val.den) for v in vert_row)
            if not _exact.point_in_hull_lp(vert, fracs):
                # containment holds but the hull is strictly smaller
                return Verdict(
                    True,
                    equal=False,
                    witness=vert,
                    detail=f"value vertex {format_vector(vert)} is not "
                    f"recovered by any selection at {format_vector(x.lambdas)}",
                )
    return Verdict(True, equal=True)
