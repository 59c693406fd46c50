"""Filtered flag (clique) complexes from distance or order matrices.

One expansion routine serves both families: a symmetric matrix of edge
values (with +inf marking absent edges) is expanded into all cliques of
size <= dim_cap + 1 whose edges are all <= value_cap.  A simplex enters the
filtration at the max of its edge values (vertices at 0), the standard flag
convention, and simplices are stored sorted by (value, dimension, vertex
tuple) so faces always precede cofaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .knn import SymOrderMatrix

KIND_VR = "vr"


def knn_kind(method: str) -> str:
    return f"knn-{method}"


@dataclass(frozen=True)
class FilteredComplex:
    """Simplices with filtration values, sorted filtration-compatibly.

    ``simplices`` is a tuple of ``(vertices, value)`` pairs where vertices
    are strictly increasing tuples of node indices.
    """

    simplices: tuple[tuple[tuple[int, ...], float], ...]
    dim_cap: int
    kind: str = "custom"

    @property
    def n_vertices(self) -> int:
        return sum(1 for s, _ in self.simplices if len(s) == 1)

    def values(self) -> list[float]:
        return [v for _, v in self.simplices]

    def critical_values(self) -> list[float]:
        return sorted({v for _, v in self.simplices})

    def max_dimension(self) -> int:
        return max(len(s) - 1 for s, _ in self.simplices)


def _sorted_simplices(items):
    items.sort(key=lambda sv: (sv[1], len(sv[0]), sv[0]))
    return tuple(items)


def flag_expand(
    edge_values,
    dim_cap: int,
    value_cap: float = math.inf,
    kind: str = "custom",
) -> FilteredComplex:
    """Expand a symmetric edge-value matrix into a filtered flag complex.

    Every clique of size <= dim_cap + 1 with all edge values <= value_cap
    appears once, at filtration value max over its edges.  Vertices enter
    at 0.  Asymmetric input is an error; the diagonal is ignored.
    """
    w = np.asarray(edge_values, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("edge values must form a square matrix")
    off = ~np.eye(w.shape[0], dtype=bool)
    if not np.array_equal(w[off], w.T[off]):
        raise ValueError("edge values must be symmetric")
    if dim_cap < 0:
        raise ValueError("dim_cap must be >= 0")
    n = w.shape[0]

    items: list[tuple[tuple[int, ...], float]] = [((i,), 0.0) for i in range(n)]
    if dim_cap == 0 or n == 1:
        return FilteredComplex(_sorted_simplices(items), dim_cap, kind)

    adj = (w <= value_cap) & off
    # frontier holds the (d-1)-cliques as (vertex tuple, value); extend each by
    # common neighbors above its last vertex so every clique is found once.
    frontier: list[tuple[tuple[int, ...], float]] = []
    for i in range(n):
        for j in np.flatnonzero(adj[i][i + 1:]) + i + 1:
            frontier.append(((i, int(j)), float(w[i, j])))
    items.extend(frontier)
    dim = 1
    while frontier and dim < dim_cap:
        nxt: list[tuple[tuple[int, ...], float]] = []
        for verts, val in frontier:
            common = np.all(adj[list(verts)], axis=0)
            cands = np.flatnonzero(common[verts[-1] + 1:]) + verts[-1] + 1
            if cands.size == 0:
                continue
            new_vals = np.maximum(val, np.max(w[list(verts)][:, cands], axis=0))
            for c, v in zip(cands, new_vals):
                nxt.append((verts + (int(c),), float(v)))
        items.extend(nxt)
        frontier = nxt
        dim += 1
    return FilteredComplex(_sorted_simplices(items), dim_cap, kind)


def vr_filtered_complex(d: np.ndarray, dim_cap: int = 2, eps_max: float = math.inf) -> FilteredComplex:
    """Vietoris-Rips filtration from a distance matrix."""
    return flag_expand(d, dim_cap, value_cap=eps_max, kind=KIND_VR)


def knn_filtered_complex(
    sym: SymOrderMatrix, dim_cap: int = 2, k_max: float | None = None
) -> FilteredComplex:
    """kNN filtration from a symmetrized ordering matrix.

    An edge (i, j) enters at its symmetrized order value; ``k_max`` defaults
    to N - 1, the largest possible order.
    """
    n = sym.n
    if k_max is None:
        k_max = n - 1
    if k_max > n - 1:
        raise ValueError(f"k_max {k_max} exceeds the maximum order {n - 1}")
    return flag_expand(sym.entries, dim_cap, value_cap=k_max, kind=knn_kind(sym.method))


def skeleton(c: FilteredComplex, kappa: int) -> FilteredComplex:
    """Drop simplices of dimension > kappa."""
    if kappa > c.dim_cap:
        raise ValueError("kappa exceeds the complex dimension cap")
    kept = tuple((s, v) for s, v in c.simplices if len(s) - 1 <= kappa)
    return FilteredComplex(kept, min(kappa, c.dim_cap), c.kind)


def complex_to_dump(c: FilteredComplex) -> str:
    """One line per simplex: ``value<TAB>v0,v1,...,vk``, sorted as stored."""
    lines = [f"{v!r}\t" + ",".join(str(i) for i in s) for s, v in c.simplices]
    return "\n".join(lines) + "\n"
