"""Fast exact evaluation of weighted Minkowski sums with fixed summands.

For images ``P_1, ..., P_n`` and weights ``u >= 0`` the sum
``u_1 P_1 + ... + u_n P_n`` has a normal fan that is constant for strictly
positive weights (the common refinement of the image fans, which the fan of
any nonnegative-weight sum coarsens).  Consequences used here:

* every vertex of any nonnegative-weight sum is of the form
  ``sum_i u_i v_i`` where ``(v_1, ..., v_n)`` is one of the vertex tuples
  realized at unit weights — a finite "pattern" computed once;
* every facet normal of any nonnegative-weight sum appears among the facet
  normals of the unit-weight sum.

Evaluation therefore reduces to one integer matrix product over the pattern
followed by an exact active-normal rank filter; no per-call convex hull is
needed while the sum stays full-dimensional.  Degenerate weight supports
fall back to the exact hull kernel.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

from . import _exact
from .geometry import Polytope, _poly_from_scaled

_LIM = 1 << 62


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class MinkowskiEngine:
    def __init__(self, images):
        if not images:
            raise ValueError("engine needs at least one image")
        self.m = images[0].dim
        self.n = len(images)
        D = 1
        for im in images:
            D = _lcm(D, im.den)
        self.den = D
        self.scaled = [
            tuple(tuple(v * (D // im.den) for v in row) for row in im.iverts)
            for im in images
        ]

        # vertex-tuple pattern from the unit-weight sum, pruning after each fold
        pts = {self.scaled[0][i]: (i,) for i in range(len(self.scaled[0]))}
        for j in range(1, self.n):
            nxt: dict[tuple, tuple] = {}
            for coords, tag in pts.items():
                for i, w in enumerate(self.scaled[j]):
                    c = tuple(a + b for a, b in zip(coords, w))
                    nxt[c] = tag + (i,)  # collisions happen only off-vertex
            order = sorted(nxt)
            hull = _exact.hull_structure(order)
            pts = {order[k]: nxt[order[k]] for k in hull.vertex_ids}
        order = sorted(pts)
        hull = _exact.hull_structure(order)
        self.pattern_size = len(order)
        self.tags = [pts[c] for c in order]
        self.generic_rank = hull.rank
        self.normals: list[tuple[int, ...]] = []
        if hull.rank == self.m and hull.ineqs is not None:
            self.normals = [n for n, _ in hull.ineqs]

        self.tensor = [
            [self.scaled[i][tag[i]] for i in range(self.n)] for tag in self.tags
        ]
        flat = [v for tag_row in self.tensor for vert in tag_row for v in vert]
        self._max_t = max((abs(v) for v in flat), default=0)
        self._np_tensor = (
            np.array(self.tensor, dtype=np.int64) if self._max_t < _LIM else None
        )
        self._max_n = max(
            (abs(v) for n in self.normals for v in n), default=0
        )
        self._np_normals = (
            np.array(self.normals, dtype=np.int64)
            if self.normals and self._max_n < _LIM
            else None
        )
        self._dirs = []
        for rows in self.scaled:
            v0 = rows[0]
            self._dirs.append([
                tuple(a - b for a, b in zip(r, v0)) for r in rows[1:]
            ])
        self._support_rank_cache: dict[tuple[bool, ...], int] = {}
        self._vertex_mask_cache: dict[bytes, bool] = {}

    def _support_rank(self, mask) -> int:
        got = self._support_rank_cache.get(mask)
        if got is None:
            rows: list[list[int]] = []
            leads: list[int] = []
            for i, on in enumerate(mask):
                if on:
                    for d in self._dirs[i]:
                        _exact.echelon_insert(rows, leads, d)
            got = len(rows)
            self._support_rank_cache[mask] = got
        return got

    def _is_vertex_mask(self, key: bytes, active_rows) -> bool:
        got = self._vertex_mask_cache.get(key)
        if got is None:
            got = _exact.int_rank(active_rows) == self.m
            self._vertex_mask_cache[key] = got
        return got

    def value(self, lambdas) -> Polytope:
        return self.value_batch([lambdas])[0]

    def value_batch(self, lam_list) -> list[Polytope]:
        out = []
        for lam in lam_list:
            q = 1
            for c in lam:
                q = _lcm(q, c.denominator)
            a = [int(c * q) for c in lam]
            den = self.den * q
            max_a = max(a) if a else 0

            if (
                self._np_tensor is not None
                and self._max_t * max(1, max_a) * self.n < _LIM
            ):
                pts = np.tensordot(
                    np.array(a, dtype=np.int64), self._np_tensor, axes=([0], [1])
                )
                uni = np.unique(pts, axis=0)
                rows = [tuple(int(v) for v in r) for r in uni]
            else:
                seen = {
                    tuple(
                        sum(a[i] * tag_row[i][d] for i in range(self.n))
                        for d in range(self.m)
                    )
                    for tag_row in self.tensor
                }
                rows = sorted(seen)

            mask = tuple(x > 0 for x in a)
            if self.normals and self._support_rank(mask) == self.m:
                poly = self._filter_vertices(rows, den)
            else:
                hull = _exact.hull_structure(rows)
                verts = tuple(sorted(rows[i] for i in hull.vertex_ids))
                fixed = _exact.HullData(
                    hull.rank,
                    tuple(range(len(verts))),
                    hull.equalities,
                    hull.proj,
                    hull.ineqs,
                )
                poly = _poly_from_scaled(verts, den, hull=fixed)
            out.append(poly)
        return out

    def _filter_vertices(self, rows, den) -> Polytope:
        m = self.m
        max_r = max((abs(v) for r in rows for v in r), default=0)
        if self._np_normals is not None and max_r * max(1, self._max_n) * m < _LIM:
            arr = np.array(rows, dtype=np.int64)
            prod = arr @ self._np_normals.T
            offs = prod.max(axis=0)
            active = prod == offs
            verts = []
            for i in range(len(rows)):
                key = b"p" + np.packbits(active[i]).tobytes()
                cached = self._vertex_mask_cache.get(key)
                if cached is None:
                    act = [self.normals[f] for f in np.nonzero(active[i])[0]]
                    cached = self._is_vertex_mask(key, act)
                if cached:
                    verts.append(rows[i])
            ineqs = tuple(
                (self.normals[f], int(offs[f])) for f in range(len(self.normals))
            )
        else:
            dots = [
                [sum(n_i * x_i for n_i, x_i in zip(n, r)) for n in self.normals]
                for r in rows
            ]
            offs = [max(col) for col in zip(*dots)]
            verts = []
            for r, dr in zip(rows, dots):
                act_flags = tuple(d == o for d, o in zip(dr, offs))
                key = b"t" + bytes(act_flags)
                cached = self._vertex_mask_cache.get(key)
                if cached is None:
                    act = [n for n, on in zip(self.normals, act_flags) if on]
                    cached = self._is_vertex_mask(key, act)
                if cached:
                    verts.append(r)
            ineqs = tuple(zip(self.normals, offs))
        verts = tuple(sorted(verts))
        fixed = _exact.HullData(
            m, tuple(range(len(verts))), (), tuple(range(m)), ineqs
        )
        return _poly_from_scaled(verts, den, hull=fixed)
