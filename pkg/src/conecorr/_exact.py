"""Exact integer linear algebra, convex hulls, and rational linear programs.

Internal kernel behind the public geometry layer.  Everything here works on
plain Python integers or :class:`~fractions.Fraction` values, so results are
exact; callers that want speed convert to numpy themselves after checking
overflow bounds.

Hull combinatorics are computed on integer-scaled points.  Affine rank is
detected first, then each rank gets its own exact routine: rank 0 and 1 are
immediate, rank 2 uses a monotone chain, rank 3 a quickhull with an explicit
verification sweep, and rank >= 4 falls back to per-point linear programs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class KernelError(ValueError):
    pass


# ---------------------------------------------------------------------------
# small integer / rational linear algebra
# ---------------------------------------------------------------------------


def vec_gcd(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


def primitive(vec):
    """Divide an integer vector by the gcd of its entries (direction kept)."""
    g = vec_gcd(vec)
    if g > 1:
        return tuple(v // g for v in vec)
    return tuple(vec)


def echelon_insert(rows, leads, vec):
    """Reduce ``vec`` against an integer echelon basis; extend it if independent.

    ``rows``/``leads`` are mutated.  Returns True when ``vec`` added a pivot.
    """
    r = list(vec)
    for lead, prow in zip(leads, rows):
        c = r[lead]
        if c:
            p = prow[lead]
            r = [p * a - c * b for a, b in zip(r, prow)]
            g = vec_gcd(r)
            if g > 1:
                r = [a // g for a in r]
    for j, a in enumerate(r):
        if a:
            leads.append(j)
            rows.append(r)
            return True
    return False


def int_rank(vectors) -> int:
    rows: list[list[int]] = []
    leads: list[int] = []
    for vec in vectors:
        echelon_insert(rows, leads, vec)
    return len(rows)


def nullspace(vectors, m):
    """Primitive integer basis of {n : v . n == 0 for all v in vectors}."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    pivots: list[int] = []
    r = 0
    for col in range(m):
        pr = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][col]
        rows[r] = [a / pv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    basis = []
    for fc in (c for c in range(m) if c not in pivots):
        v = [Fraction(0)] * m
        v[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -rows[ri][fc]
        den = 1
        for a in v:
            den = den * a.denominator // gcd(den, a.denominator)
        ints = [int(a * den) for a in v]
        basis.append(primitive(ints))
    return basis


def solve_fraction_system(matrix, rhs):
    """Solve A x = b exactly.  Returns None when inconsistent or underdetermined."""
    n = len(matrix)
    if n == 0:
        return [] if not rhs else None
    m = len(matrix[0])
    rows = [[Fraction(a) for a in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    pivots = []
    r = 0
    for col in range(m):
        pr = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][col]
        rows[r] = [a / pv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][m]:
            return None  # inconsistent
    if r < m:
        return None  # underdetermined
    x = [Fraction(0)] * m
    for ri, pc in enumerate(pivots):
        x[pc] = rows[ri][m]
    return x


# ---------------------------------------------------------------------------
# exact convex hulls on integer points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HullData:
    """Combinatorial hull description of an integer point set.

    ``equalities`` pin the affine hull in ambient coordinates; ``ineqs`` cut
    the polytope out of the affine hull after projecting to the ``proj``
    coordinate axes (a bijection on the affine hull).  ``ineqs`` is None for
    rank >= 4 where membership falls back to linear programming.
    """

    rank: int
    vertex_ids: tuple[int, ...]
    equalities: tuple[tuple[tuple[int, ...], int], ...]
    proj: tuple[int, ...]
    ineqs: tuple[tuple[tuple[int, ...], int], ...] | None


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull2d_ccw(pts):
    """Indices of strict hull vertices of distinct 2-d integer points, ccw."""
    order = sorted(range(len(pts)), key=lambda i: pts[i])
    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and _cross2(pts[lower[-2]], pts[lower[-1]], pts[i]) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and _cross2(pts[upper[-2]], pts[upper[-1]], pts[i]) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def _sub3(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _cross3(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


class _Face:
    __slots__ = ("ia", "ib", "ic", "n", "off", "outside", "alive")

    def __init__(self, ia, ib, ic, pts):
        self.ia, self.ib, self.ic = ia, ib, ic
        n = _cross3(_sub3(pts[ib], pts[ia]), _sub3(pts[ic], pts[ia]))
        self.n = n
        self.off = _dot(n, pts[ia])
        self.outside: list[int] = []
        self.alive = True

    def det(self, p):
        return _dot(self.n, p) - self.off

    def edges(self):
        return ((self.ia, self.ib), (self.ib, self.ic), (self.ic, self.ia))


def _initial_tetra(pts):
    i0 = min(range(len(pts)), key=lambda i: pts[i])
    p0 = pts[i0]

    def d2(i):
        return sum((a - b) ** 2 for a, b in zip(pts[i], p0))

    i1 = max((i for i in range(len(pts)) if i != i0), key=lambda i: (d2(i), pts[i]))
    d01 = _sub3(pts[i1], p0)

    def area2(i):
        c = _cross3(d01, _sub3(pts[i], p0))
        return _dot(c, c)

    i2 = max(range(len(pts)), key=lambda i: (area2(i), pts[i]))
    if area2(i2) == 0:
        raise KernelError("degenerate rank for 3-d hull")
    base_n = _cross3(d01, _sub3(pts[i2], p0))
    base_off = _dot(base_n, p0)

    def vol(i):
        return _dot(base_n, pts[i]) - base_off

    i3 = max(range(len(pts)), key=lambda i: (abs(vol(i)), pts[i]))
    if vol(i3) == 0:
        raise KernelError("degenerate rank for 3-d hull")
    return i0, i1, i2, i3


def _quickhull3d(pts):
    """Outward facet planes [(normal, offset)] of distinct rank-3 int points."""
    i0, i1, i2, i3 = _initial_tetra(pts)
    corners = (i0, i1, i2, i3)
    faces: list[_Face] = []
    for tri, opp in (
        ((i0, i1, i2), i3),
        ((i0, i1, i3), i2),
        ((i0, i2, i3), i1),
        ((i1, i2, i3), i0),
    ):
        f = _Face(*tri, pts)
        if f.det(pts[opp]) > 0:
            f = _Face(tri[0], tri[2], tri[1], pts)
        faces.append(f)

    def assign(idx_iter, targets):
        leftovers = []
        for i in idx_iter:
            p = pts[i]
            for f in targets:
                if f.alive and f.det(p) > 0:
                    f.outside.append(i)
                    break
            else:
                leftovers.append(i)
        return leftovers

    assign((i for i in range(len(pts)) if i not in corners), faces)

    while True:
        face = next((f for f in faces if f.alive and f.outside), None)
        if face is None:
            # verification sweep: reinsert anything strictly outside
            dirty = False
            for f in faces:
                if not f.alive:
                    continue
                for i in range(len(pts)):
                    if f.det(pts[i]) > 0:
                        f.outside.append(i)
                        dirty = True
                if f.outside:
                    break
            if not dirty:
                break
            continue
        qi = max(face.outside, key=lambda i: (face.det(pts[i]), pts[i]))
        q = pts[qi]

        visible = {id(f): f for f in faces if f.alive and f.det(q) > 0}
        # grow the visible set until no horizon edge is collinear with q
        while True:
            degenerate = None
            counts: dict[tuple[int, int], int] = {}
            for f in visible.values():
                for a, b in f.edges():
                    counts[(min(a, b), max(a, b))] = counts.get((min(a, b), max(a, b)), 0) + 1
            horizon = []
            for f in visible.values():
                for a, b in f.edges():
                    if counts[(min(a, b), max(a, b))] == 1:
                        horizon.append((a, b))
                        if _cross3(_sub3(pts[b], pts[a]), _sub3(q, pts[a])) == (0, 0, 0):
                            degenerate = (a, b)
            if degenerate is None:
                break
            grown = False
            for f in faces:
                if f.alive and id(f) not in visible and f.det(q) == 0:
                    a, b = degenerate
                    ids = (f.ia, f.ib, f.ic)
                    if a in ids or b in ids:
                        visible[id(f)] = f
                        grown = True
                        break
            if not grown:  # pragma: no cover - guarded by the sweep
                raise KernelError("horizon degeneracy could not be resolved")

        orphans = []
        for f in visible.values():
            f.alive = False
            orphans.extend(f.outside)
            f.outside = []
        new_faces = []
        for a, b in horizon:
            nf = _Face(a, b, qi, pts)
            new_faces.append(nf)
        faces = [f for f in faces if f.alive] + new_faces
        assign((i for i in set(orphans) if i != qi), new_faces)

    planes = {}
    for f in faces:
        if f.alive:
            g = vec_gcd((*map(abs, f.n), abs(f.off)))
            key = (tuple(v // g for v in f.n), f.off // g)
            planes[key] = None
    return list(planes.keys())


def hull_structure(ipts) -> HullData:
    """Exact hull description of a deduplicated integer point list."""
    if not ipts:
        raise KernelError("empty point set")
    m = len(ipts[0])
    v0 = ipts[0]

    rows: list[list[int]] = []
    leads: list[int] = []
    for p in ipts:
        if len(rows) == m:
            break
        echelon_insert(rows, leads, [a - b for a, b in zip(p, v0)])
    rank = len(rows)

    equalities = tuple(
        (n, _dot(n, v0)) for n in nullspace(rows, m)
    )
    proj = tuple(sorted(leads))

    if rank == 0:
        return HullData(0, (0,), equalities, proj, ())

    ppts = [tuple(p[j] for j in proj) for p in ipts]

    if rank == 1:
        imin = min(range(len(ppts)), key=lambda i: ppts[i])
        imax = max(range(len(ppts)), key=lambda i: ppts[i])
        ineqs = (((1,), ppts[imax][0]), ((-1,), -ppts[imin][0]))
        return HullData(1, tuple(sorted({imin, imax})), equalities, proj, ineqs)

    if rank == 2:
        cyc = _hull2d_ccw(ppts)
        ineqs = []
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            pa, pb = ppts[a], ppts[b]
            n = primitive((pb[1] - pa[1], -(pb[0] - pa[0])))
            ineqs.append((n, _dot(n, pa)))
        return HullData(2, tuple(sorted(set(cyc))), equalities, proj, tuple(ineqs))

    if rank == 3:
        planes = _quickhull3d(ppts)
        verts = []
        for i, p in enumerate(ppts):
            active = [n for n, off in planes if _dot(n, p) == off]
            if len(active) >= 3 and int_rank(active) == 3:
                verts.append(i)
        return HullData(3, tuple(verts), equalities, proj, tuple(planes))

    verts = tuple(
        i for i in range(len(ipts))
        if not point_in_hull_lp(ipts[i], [p for j, p in enumerate(ipts) if j != i])
    )
    return HullData(rank, verts, equalities, proj, None)


# ---------------------------------------------------------------------------
# exact simplex (Bland's rule)
# ---------------------------------------------------------------------------


def _pivot(tab, basis, pr, pc):
    prow = tab[pr]
    pv = prow[pc]
    tab[pr] = [a / pv for a in prow]
    prow = tab[pr]
    for i, row in enumerate(tab):
        if i != pr and row[pc]:
            f = row[pc]
            tab[i] = [a - f * b for a, b in zip(row, prow)]
    basis[pr] = pc


def _simplex(tab, basis, cost):
    """Minimize ``cost`` over the tableau in-place; Bland's rule, exact."""
    nrows = len(tab)
    ncols = len(tab[0]) - 1
    while True:
        # reduced costs
        red = list(cost) + [Fraction(0)]
        for i, bi in enumerate(basis):
            cb = cost[bi]
            if cb:
                red = [r - cb * a for r, a in zip(red, tab[i])]
        pc = next((j for j in range(ncols) if red[j] < 0), None)
        if pc is None:
            obj = Fraction(0)
            for i, bi in enumerate(basis):
                obj += cost[bi] * tab[i][-1]
            return obj
        pr = None
        best = None
        for i in range(nrows):
            a = tab[i][pc]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[pr]):
                    best, pr = ratio, i
        if pr is None:
            return None  # unbounded
        _pivot(tab, basis, pr, pc)


def lp_solve(c, A, b):
    """Exact ``min c.x  s.t.  A x = b, x >= 0``.

    Returns (status, x, objective) with status in
    {"optimal", "infeasible", "unbounded"}.
    """
    m = len(A)
    n = len(c)
    tab = []
    for row, rhs in zip(A, b):
        row = [Fraction(a) for a in row]
        rhs = Fraction(rhs)
        if rhs < 0:
            row = [-a for a in row]
            rhs = -rhs
        tab.append(row + [Fraction(0)] * m + [rhs])
    for i in range(m):
        tab[i][n + i] = Fraction(1)
    basis = [n + i for i in range(m)]

    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    if _simplex(tab, basis, phase1) != 0:
        return "infeasible", None, None
    # drive artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            pc = next((j for j in range(n) if tab[i][j]), None)
            if pc is not None:
                _pivot(tab, basis, i, pc)
    keep = [i for i in range(m) if basis[i] < n or any(tab[i][j] for j in range(n))]
    tab = [[tab[i][j] for j in range(n)] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    if any(bi >= n for bi in basis):  # pragma: no cover - redundant zero rows only
        return "infeasible", None, None

    phase2 = [Fraction(x) for x in c]
    obj = _simplex(tab, basis, phase2)
    if obj is None:
        return "unbounded", None, None
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        x[bi] = tab[i][-1]
    return "optimal", x, obj


def point_in_hull_lp(point, points) -> bool:
    """Exact test for ``point in conv(points)`` via a feasibility program."""
    if not points:
        return False
    m = len(point)
    A = [[Fraction(p[d]) for p in points] for d in range(m)]
    A.append([Fraction(1)] * len(points))
    b = [Fraction(x) for x in point] + [Fraction(1)]
    status, _, _ = lp_solve([Fraction(0)] * len(points), A, b)
    return status == "optimal"
