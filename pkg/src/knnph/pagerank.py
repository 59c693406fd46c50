"""PageRank power iteration and rank-convergence times.

The Google matrix is G = alpha*P + (1 - alpha)*e*v^T with dangling rows of
P replaced by v.  ``power_iterate`` records every iterate of
x(t+1)^T = x(t)^T G up to the horizon and separately solves for the
stationary vector pi.  Rank orderings (1 = largest entry) and their
per-node convergence times t*_i are computed on top of the trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import TieRule, argsort_row


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    directed: bool = False
    labels: tuple[str, ...] | None = None

    def out_neighbors(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            nbrs[i].append(j)
            if not self.directed and i != j:
                nbrs[j].append(i)
        return [sorted(set(ns)) for ns in nbrs]


@dataclass(frozen=True)
class PageRankConfig:
    """Teleportation parameter, personalization vector, initial condition.

    ``v`` defaults to uniform and ``x0`` to the ramp x_i(0) = (i+1)/sum(j),
    the initial condition of the rank-convergence experiments.  ``x0`` is
    normalized to sum 1; ``v`` must already be a probability vector.
    """

    alpha: float = 0.85
    v: np.ndarray | None = None
    x0: np.ndarray | None = None
    max_iter: int = 100
    tol: float = 1e-14

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")


@dataclass(frozen=True)
class IterationTrace:
    """Iterates x(0..T) as a (T+1, n) array plus the stationary vector pi."""

    iterates: np.ndarray
    pi: np.ndarray
    labels: tuple[str, ...] | None = None

    @property
    def horizon(self) -> int:
        return self.iterates.shape[0] - 1

    @property
    def n(self) -> int:
        return self.iterates.shape[1]


def load_edge_list(text: str, undirected: bool = True) -> Graph:
    """Parse whitespace-separated token pairs, one or more pairs per line.

    ``#`` starts a comment line.  Tokens may be integers or names; names are
    mapped to indices in first-appearance order.  Edges are deduplicated.
    """
    tokens_by_line = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        toks = stripped.split()
        if len(toks) % 2 != 0:
            raise ValueError(f"line {lineno}: odd token count ({len(toks)})")
        tokens_by_line.append(toks)

    all_tokens = [t for toks in tokens_by_line for t in toks]
    numeric = all(t.lstrip("-").isdigit() for t in all_tokens)
    index: dict[str, int] = {}

    def node_id(tok: str) -> int:
        if numeric:
            i = int(tok)
            if i < 0:
                raise ValueError(f"negative node index {i}")
            return i
        if tok not in index:
            index[tok] = len(index)
        return index[tok]

    edges = []
    seen = set()
    for toks in tokens_by_line:
        for a, b in zip(toks[::2], toks[1::2]):
            i, j = node_id(a), node_id(b)
            key = (min(i, j), max(i, j)) if undirected else (i, j)
            if key not in seen:
                seen.add(key)
                edges.append(key)
    if not edges:
        raise ValueError("edge list is empty")
    n = max(max(i, j) for i, j in edges) + 1
    labels = None
    if not numeric:
        n = len(index)
        labels = tuple(sorted(index, key=index.get))
    return Graph(n=n, edges=tuple(edges), directed=not undirected, labels=labels)


def paper_initial_condition(n: int) -> np.ndarray:
    """The ramp x_i(0) = (i+1) / sum_{j=1..n} j (0-based indexing)."""
    return np.arange(1, n + 1, dtype=float) / (n * (n + 1) / 2)


def _check_probability(v: np.ndarray, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if (v < 0).any():
        raise ValueError(f"{name} has negative entries")
    if abs(v.sum() - 1.0) > 1e-12:
        raise ValueError(f"{name} must sum to 1 (got {v.sum()!r})")
    return v


def transition_row(g: Graph, i: int, v: np.ndarray) -> np.ndarray:
    """Row i of P: uniform over out-neighbors, or v for a dangling node."""
    nbrs = g.out_neighbors()[i]
    if not nbrs:
        return np.asarray(v, dtype=float).copy()
    row = np.zeros(g.n)
    row[nbrs] = 1.0 / len(nbrs)
    return row


def power_iterate(g: Graph, cfg: PageRankConfig = PageRankConfig()) -> IterationTrace:
    """Run the Google-matrix power iteration and solve for pi.

    Iterates are stored for t = 0..max_iter.  The stationary vector is
    iterated separately from x0 = v until the successive change is within
    ``cfg.tol`` in the max norm.
    """
    n = g.n
    v = _check_probability(cfg.v if cfg.v is not None else np.full(n, 1.0 / n), "v")
    x0 = np.asarray(cfg.x0 if cfg.x0 is not None else paper_initial_condition(n), dtype=float)
    if (x0 < 0).any():
        raise ValueError("x0 has negative entries")
    total = x0.sum()
    if total <= 0:
        raise ValueError("x0 must have positive mass")
    x0 = x0 / total

    nbrs = g.out_neighbors()
    p = np.zeros((n, n))
    dangling = np.zeros(n, dtype=bool)
    for i, ns in enumerate(nbrs):
        if ns:
            p[i, ns] = 1.0 / len(ns)
        else:
            dangling[i] = True
    alpha = cfg.alpha

    def step(x: np.ndarray) -> np.ndarray:
        # dangling mass rides along with teleportation to keep G row-stochastic;
        # the matvec avoids BLAS so results are bit-reproducible across machines
        return alpha * np.sum(p * x[:, None], axis=0) + (
            alpha * x[dangling].sum() + (1 - alpha) * x.sum()
        ) * v

    iterates = np.empty((cfg.max_iter + 1, n))
    iterates[0] = x0
    for t in range(cfg.max_iter):
        iterates[t + 1] = step(iterates[t])

    pi = v.copy()
    for _ in range(max(100 * cfg.max_iter, 100_000)):
        nxt = step(pi)
        done = np.max(np.abs(nxt - pi)) <= cfg.tol
        pi = nxt
        if done:
            break
    return IterationTrace(iterates=iterates, pi=pi, labels=g.labels)


def rank_order(x, tie_rule: TieRule = TieRule()) -> np.ndarray:
    """Ranks in {1..N} with 1 for the largest entry; ties per tie rule."""
    vals = np.asarray(x, dtype=float)
    if vals.ndim != 1 or vals.size == 0:
        raise ValueError("rank_order expects a nonempty vector")
    return argsort_row(-vals, tie_rule) + 1


def rank_convergence_times(trace: IterationTrace, tie_rule: TieRule = TieRule()) -> list[int | None]:
    """Per-node t*_i: first t with rank_i(x(s)) == rank_i(pi) for all s >= t.

    ``None`` marks nodes whose rank still differs at the trace horizon.
    """
    target = rank_order(trace.pi, tie_rule)
    horizon = trace.horizon
    tstar: list[int | None] = [0] * trace.n
    for t in range(horizon, -1, -1):
        ranks = rank_order(trace.iterates[t], tie_rule)
        for i in range(trace.n):
            if tstar[i] is not None and tstar[i] <= t and ranks[i] != target[i]:
                tstar[i] = None if t == horizon else t + 1
    return tstar
