"""Minimum-norm point in a polytope via Wolfe's algorithm (floating point).

Used for Euclidean point-to-polytope distances.  Exact zero distances are
handled upstream with rational containment tests, so this module only sees
genuinely positive distances where float accuracy is appropriate.
"""

from __future__ import annotations

import numpy as np


class ConvergenceError(RuntimeError):
    """Raised when the solver hits its iteration cap before the gap closes."""


def min_norm_sq(V: np.ndarray, tol: float = 1e-12, max_iter: int | None = None) -> float:
    """Squared Euclidean norm of the smallest-norm point of conv(rows of V).

    Runs Wolfe's method with a duality-gap stopping rule: stop once
    ``<x, x> - min_j <x, v_j> <= tol * scale`` where ``scale`` is the largest
    squared vertex norm.  Ties in the initial vertex pick go to the lowest
    row index, which is deterministic because callers pass rows in canonical
    (sorted) order.
    """
    V = np.asarray(V, dtype=float)
    k = len(V)
    if k == 0:
        raise ValueError("empty vertex set")
    cap = max_iter if max_iter is not None else max(10 * k * k, 20)
    scale = max(1.0, float((V * V).sum(axis=1).max()))

    j0 = int(np.argmin((V * V).sum(axis=1)))
    S = [j0]
    w = np.array([1.0])
    gap = np.inf

    for _ in range(cap):
        x = w @ V[S]
        dots = V @ x
        j = int(np.argmin(dots))
        gap = float(x @ x - dots[j])
        if gap <= tol * scale:
            return float(x @ x)
        if j in S:
            # numerically stalled: the best improving vertex is already active
            return float(x @ x)
        S.append(j)
        w = np.append(w, 0.0)

        for _minor in range(2 * len(V) + 4):
            B = V[S]
            ks = len(S)
            M = np.empty((ks + 1, ks + 1))
            M[:ks, :ks] = B @ B.T
            M[:ks, ks] = 1.0
            M[ks, :ks] = 1.0
            M[ks, ks] = 0.0
            rhs = np.zeros(ks + 1)
            rhs[ks] = 1.0
            try:
                v = np.linalg.solve(M, rhs)[:ks]
            except np.linalg.LinAlgError:
                v = np.linalg.lstsq(M, rhs, rcond=None)[0][:ks]
            if (v > 1e-14).all():
                w = v
                break
            diffs = w - v
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where((v <= 1e-14) & (diffs > 1e-18), w / diffs, np.inf)
            theta = float(min(1.0, ratios.min()))
            w = (1.0 - theta) * w + theta * v
            w[w < 1e-14] = 0.0
            keep = w > 0.0
            if keep.all() or not keep.any():
                w = np.maximum(v, 0.0)
                w /= w.sum()
                break
            S = [s for s, k_ in zip(S, keep) if k_]
            w = w[keep]
            w /= w.sum()

    raise ConvergenceError(
        f"min-norm point failed to converge within {cap} iterations "
        f"(residual duality gap {gap:.3e})"
    )
