"""Exact bottleneck distance between persistence diagrams.

Finite points of one dimension are matched by binary search over the
candidate distance set (pairwise L-inf distances and half-persistences),
testing feasibility with a maximum bipartite matching on the diagonal-
augmented graph.  Infinite-death points are matched among themselves by
sorted birth; mismatched counts give an infinite distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .persistence import PersistenceDiagram


@dataclass(frozen=True)
class MatchingProblem:
    """Finite off-diagonal points of a single dimension plus a threshold."""

    left: tuple[tuple[float, float], ...]
    right: tuple[tuple[float, float], ...]
    threshold: float


def _cost_matrix(left, right) -> np.ndarray:
    la = np.asarray(left, dtype=float).reshape(-1, 2)
    ra = np.asarray(right, dtype=float).reshape(-1, 2)
    return np.max(np.abs(la[:, None, :] - ra[None, :, :]), axis=2)


def _diag_costs(pts) -> np.ndarray:
    a = np.asarray(pts, dtype=float).reshape(-1, 2)
    return (a[:, 1] - a[:, 0]) / 2.0


def feasible_at(problem: MatchingProblem) -> bool:
    """Perfect matching within the threshold, allowing diagonal projections.

    Left side: the n left points plus m diagonal slots (one per right
    point); right side: the m right points plus n diagonal slots.  Diagonal
    slots pair with their own point at half its persistence and with each
    other for free.
    """
    if problem.threshold < 0:
        raise ValueError("threshold must be >= 0")
    n, m = len(problem.left), len(problem.right)
    if n == 0 and m == 0:
        return True
    t = problem.threshold
    size = n + m
    rows, cols = [], []
    if n and m:
        ii, jj = np.nonzero(_cost_matrix(problem.left, problem.right) <= t)
        rows.extend(ii.tolist())
        cols.extend(jj.tolist())
    if n:
        for i in np.flatnonzero(_diag_costs(problem.left) <= t):
            rows.append(int(i))
            cols.append(m + int(i))  # left point i to its own diagonal slot
    if m:
        for j in np.flatnonzero(_diag_costs(problem.right) <= t):
            rows.append(n + int(j))
            cols.append(int(j))
    for i in range(m):
        for j in range(n):
            rows.append(n + i)  # diagonal slots match each other freely
            cols.append(m + j)
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return int((match >= 0).sum()) == size


def _finite_part(left, right) -> float:
    if not left and not right:
        return 0.0
    candidates = [0.0]
    candidates.extend(_diag_costs(left).tolist())
    candidates.extend(_diag_costs(right).tolist())
    if left and right:
        candidates.extend(_cost_matrix(left, right).ravel().tolist())
    cand = np.unique(np.asarray(candidates, dtype=float))
    lo, hi = 0, len(cand) - 1
    # the largest candidate is always feasible: every cost is <= it
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible_at(MatchingProblem(left, right, float(cand[mid]))):
            hi = mid
        else:
            lo = mid + 1
    return float(cand[lo])


def _infinite_part(a_births, b_births) -> float:
    if len(a_births) != len(b_births):
        return math.inf
    if not a_births:
        return 0.0
    return float(np.max(np.abs(np.asarray(a_births) - np.asarray(b_births))))


def bottleneck(a: PersistenceDiagram, b: PersistenceDiagram, dim: int) -> float:
    """Exact bottleneck distance between the dimension-``dim`` points.

    Result is the max of the finite-point matching value and the
    infinite-bar birth matching value.
    """
    left = tuple(a.finite_points(dim))
    right = tuple(b.finite_points(dim))
    inf_part = _infinite_part(a.infinite_births(dim), b.infinite_births(dim))
    if math.isinf(inf_part):
        return math.inf
    return max(_finite_part(left, right), inf_part)
