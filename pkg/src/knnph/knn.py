"""kNN ordering matrices, symmetrizations, and order-preservation checks.

The ordering matrix ranks, for each point, every other point by distance
(self pinned to rank 0).  Rows are generally not symmetric, so three
symmetrizations are provided: entrywise min, mean ("trans", half-integers),
and max.  Neighborhoods, kNN-preserving transformation checks, and the kNN
equivalence of point clouds are all defined on top of these matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import PointCloud, TieRule, argsort_row, pairwise_distances, row_tie_rule

SYM_METHODS = ("min", "trans", "max")

SCOPE_GLOBAL = "global"
SCOPE_LOCAL = "local"
SCOPE_K_BOUNDED = "k-bounded"
SCOPE_K_BOUNDED_LOCAL = "k-bounded-local"


@dataclass(frozen=True)
class SymOrderMatrix:
    """Symmetrized ordering matrix: entrywise min, mean, or max of k_ij, k_ji.

    Entries are floats; min/max entries are integral and trans entries are
    exact half-integers (halves are exact in binary floating point, so the
    contract of exact equality holds).
    """

    method: str
    entries: np.ndarray

    def __post_init__(self):
        if self.method not in SYM_METHODS:
            raise ValueError(f"unknown symmetrization method: {self.method!r}")
        ent = np.array(self.entries, dtype=float)
        if ent.ndim != 2 or ent.shape[0] != ent.shape[1]:
            raise ValueError("entries must be a square matrix")
        ent.flags.writeable = False
        object.__setattr__(self, "entries", ent)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class Neighborhood:
    """Nodes whose symmetrized order relative to ``center`` is at most ``level``."""

    center: int
    level: float
    members: frozenset[int]


def ordering_function(cloud: PointCloud, tie_rule: TieRule = TieRule()) -> np.ndarray:
    """kNN ordering matrix: row i ranks all points by distance from point i.

    Entry (i, j) is the neighbor order of j with respect to i; the diagonal
    is pinned to 0.  Requires at least two points.
    """
    if cloud.n < 2:
        raise ValueError("ordering function requires at least 2 points")
    d = pairwise_distances(cloud)
    n = cloud.n
    orders = np.empty((n, n), dtype=int)
    for i in range(n):
        row = d[i].copy()
        row[i] = -1.0  # below every real distance, so k_ii == 0 even with duplicate points
        orders[i] = argsort_row(row, row_tie_rule(tie_rule, i))
    return orders


def symmetrize(orders: np.ndarray, method: str) -> SymOrderMatrix:
    """Entrywise min, mean, or max of an ordering matrix and its transpose."""
    k = np.asarray(orders, dtype=float)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise ValueError("order matrix must be square")
    if method == "min":
        ent = np.minimum(k, k.T)
    elif method == "trans":
        ent = (k + k.T) / 2.0
    elif method == "max":
        ent = np.maximum(k, k.T)
    else:
        raise ValueError(f"unknown symmetrization method: {method!r}")
    return SymOrderMatrix(method, ent)


def neighborhood(sym: SymOrderMatrix, i: int, k: float) -> Neighborhood:
    """Members j != i with symmetrized order (i, j) <= k."""
    n = sym.n
    if not 0 <= i < n:
        raise ValueError(f"node {i} out of range for {n} points")
    row = sym.entries[i]
    members = frozenset(j for j in range(n) if j != i and row[j] <= k)
    return Neighborhood(center=i, level=float(k), members=members)


def is_knn_preserving(
    a: PointCloud,
    b: PointCloud,
    scope: str = SCOPE_GLOBAL,
    node: int | None = None,
    k_bound: float | None = None,
    tie_rule: TieRule = TieRule(),
) -> bool:
    """Whether the map a -> b leaves the selected neighbor orderings unchanged.

    Scopes: ``global`` compares all entries, ``local`` compares row ``node``,
    and the ``k-bounded`` variants restrict to entries whose order in ``a``
    is at most ``k_bound``.
    """
    if a.points.shape != b.points.shape:
        raise ValueError("clouds must have identical size and dimension")
    fa = ordering_function(a, tie_rule)
    fb = ordering_function(b, tie_rule)
    if scope == SCOPE_GLOBAL:
        mask = np.ones_like(fa, dtype=bool)
    elif scope == SCOPE_LOCAL:
        if node is None:
            raise ValueError("local scope requires a node")
        mask = np.zeros_like(fa, dtype=bool)
        mask[node] = True
    elif scope == SCOPE_K_BOUNDED:
        if k_bound is None:
            raise ValueError("k-bounded scope requires a bound")
        mask = fa <= k_bound
    elif scope == SCOPE_K_BOUNDED_LOCAL:
        if node is None or k_bound is None:
            raise ValueError("k-bounded-local scope requires a node and a bound")
        mask = np.zeros_like(fa, dtype=bool)
        mask[node] = fa[node] <= k_bound
    else:
        raise ValueError(f"unknown scope: {scope!r}")
    return bool(np.array_equal(fa[mask], fb[mask]))


def knn_equivalent(a: PointCloud, b: PointCloud, tie_rule: TieRule = TieRule()) -> bool:
    """F(a) == F(b): the clouds share every neighbor ordering."""
    return is_knn_preserving(a, b, scope=SCOPE_GLOBAL, tie_rule=tie_rule)


def orders_to_csv(orders: np.ndarray) -> str:
    """Order matrix as N rows of N comma-separated integers."""
    k = np.asarray(orders)
    return "\n".join(",".join(str(int(v)) for v in row) for row in k) + "\n"


def sym_to_csv(sym: SymOrderMatrix) -> str:
    """Symmetrized matrix as CSV; half-integers print as e.g. 1.5."""
    return "\n".join(",".join(f"{v:g}" for v in row) for row in sym.entries) + "\n"
