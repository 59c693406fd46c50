"""Convergence analyzers over a PageRank iteration trace.

Iterates are embedded as 1-d point clouds (one coordinate per node) and
compared against the stationary vector through three lenses: vector norms,
rank orderings, and persistence diagrams under VR and kNN filtrations.
kNN-topology convergence times come in global, kappa-bounded, U-local, and
combined flavors; since orderings are integers, "within epsilon" collapses
to exact equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bottleneck import bottleneck
from .filtration import KIND_VR, knn_filtered_complex, vr_filtered_complex
from .geometry import PointCloud, TieRule, pairwise_distances
from .knn import SYM_METHODS, neighborhood, ordering_function, symmetrize
from .pagerank import IterationTrace, rank_convergence_times, rank_order
from .persistence import compute_persistence

PI_TIE_TOLERANCE = 1e-15


@dataclass(frozen=True)
class LocalScope:
    """Restriction of kNN convergence to a node subset and/or order bound.

    ``nodes=None`` means all nodes; ``kappa=None`` means unbounded.  The
    default is the global scope.
    """

    nodes: frozenset[int] | None = None
    kappa: float | None = None

    def __post_init__(self):
        if self.nodes is not None:
            nodes = frozenset(int(i) for i in self.nodes)
            if not nodes:
                raise ValueError("node subset must be nonempty")
            object.__setattr__(self, "nodes", nodes)


GLOBAL_SCOPE = LocalScope()


@dataclass
class ConvergenceReport:
    """Per-iteration series and headline convergence times for one trace."""

    horizon: int
    norm_curves: dict[str, np.ndarray]
    rank_diff: np.ndarray
    vr_curves: dict[int, np.ndarray]
    knn_curves: dict[tuple[str, int], np.ndarray]
    t_star_rank: int | None
    t_star_knn: dict[str, int | None]
    per_node_t_star: list[int | None] = field(default_factory=list)


def embed_1d(x, labels=None) -> PointCloud:
    """One point per vector entry, on the real line."""
    vals = np.asarray(x, dtype=float)
    if vals.ndim != 1 or vals.size == 0:
        raise ValueError("embed_1d expects a nonempty vector")
    return PointCloud(vals.reshape(-1, 1), labels=tuple(labels) if labels else None)


def restrict(trace: IterationTrace, nodes) -> IterationTrace:
    """Trace of subvectors over ``nodes`` (not renormalized), labels kept."""
    idx = sorted(set(int(i) for i in nodes))
    if not idx:
        raise ValueError("node subset must be nonempty")
    if idx[0] < 0 or idx[-1] >= trace.n:
        raise ValueError("node subset out of range")
    labels = tuple(trace.labels[i] for i in idx) if trace.labels else None
    return IterationTrace(
        iterates=trace.iterates[:, idx].copy(), pi=trace.pi[idx].copy(), labels=labels
    )


def _check_pi_ties(pi: np.ndarray) -> None:
    order = np.sort(pi)
    gaps = np.diff(order)
    if gaps.size and gaps.min() <= PI_TIE_TOLERANCE:
        raise ValueError(
            "stationary vector has entries tied within "
            f"{PI_TIE_TOLERANCE}; kNN convergence against it is ill-posed"
        )


def _scope_mask(scope: LocalScope, pi_orders: np.ndarray, method: str) -> np.ndarray:
    n = pi_orders.shape[0]
    mask = ~np.eye(n, dtype=bool)
    if scope.kappa is not None:
        # kappa-bounded entries come from the limit cloud's symmetrized
        # neighborhoods, the stable choice when iterates still move
        sym = symmetrize(pi_orders, method)
        kmask = np.zeros((n, n), dtype=bool)
        for i in range(n):
            for j in neighborhood(sym, i, scope.kappa).members:
                kmask[i, j] = True
        mask &= kmask
    if scope.nodes is not None:
        umask = np.zeros((n, n), dtype=bool)
        sel = sorted(scope.nodes)
        umask[np.ix_(sel, sel)] = True
        mask &= umask
    return mask


def knn_convergence_time(
    trace: IterationTrace,
    scope: LocalScope = GLOBAL_SCOPE,
    method: str = "min",
    tie_rule: TieRule = TieRule(),
) -> int | None:
    """Smallest t such that the scoped ordering entries match pi's from t on.

    Returns ``None`` when the entries still differ at the trace horizon.
    Orderings are integer-valued, so matching is exact equality.
    """
    if method not in SYM_METHODS:
        raise ValueError(f"unknown symmetrization method: {method!r}")
    _check_pi_ties(trace.pi)
    pi_orders = ordering_function(embed_1d(trace.pi), tie_rule)
    mask = _scope_mask(scope, pi_orders, method)
    tstar = 0
    for t in range(trace.horizon, -1, -1):
        orders = ordering_function(embed_1d(trace.iterates[t]), tie_rule)
        if not np.array_equal(orders[mask], pi_orders[mask]):
            return None if t == trace.horizon else t + 1
    return tstar


def _diagram_for(x: np.ndarray, family: str, max_dim: int, dim_cap: int, tie_rule: TieRule):
    cloud = embed_1d(x)
    if family == KIND_VR:
        comp = vr_filtered_complex(pairwise_distances(cloud), dim_cap=dim_cap)
    else:
        if not family.startswith("knn-"):
            raise ValueError(f"unknown filtration family: {family!r}")
        method = family[len("knn-"):]
        sym = symmetrize(ordering_function(cloud, tie_rule), method)
        comp = knn_filtered_complex(sym, dim_cap=dim_cap)
    return compute_persistence(comp, max_dim=max_dim)


def homological_curve(
    trace: IterationTrace,
    family: str = KIND_VR,
    dims: tuple[int, ...] = (0,),
    dim_cap: int | None = None,
    tie_rule: TieRule = TieRule(),
) -> dict[int, np.ndarray]:
    """Per-t bottleneck distance between diagrams of x(t) and of pi.

    ``family`` is ``"vr"`` or ``"knn-<method>"``.  The complex dimension cap
    defaults to max(dims) + 1, the smallest cap whose diagrams are complete
    in the requested dimensions.
    """
    dims = tuple(sorted(set(int(d) for d in dims)))
    max_dim = dims[-1]
    if dim_cap is None:
        dim_cap = max_dim + 1
    ref = _diagram_for(trace.pi, family, max_dim, dim_cap, tie_rule)
    curves = {d: np.zeros(trace.horizon + 1) for d in dims}
    for t in range(trace.horizon + 1):
        diag = _diagram_for(trace.iterates[t], family, max_dim, dim_cap, tie_rule)
        for d in dims:
            curves[d][t] = bottleneck(diag, ref, d)
    return curves


def rank_diff_curve(trace: IterationTrace, tie_rule: TieRule = TieRule()) -> np.ndarray:
    """Total rank displacement sum_i |R_i(pi) - R_i(x(t))| per iteration."""
    target = rank_order(trace.pi, tie_rule)
    out = np.zeros(trace.horizon + 1, dtype=int)
    for t in range(trace.horizon + 1):
        out[t] = int(np.abs(rank_order(trace.iterates[t], tie_rule) - target).sum())
    return out


_NORMS = {"l1": 1, "l2": 2, "linf": np.inf}


def norm_error_curve(trace: IterationTrace, norm: str = "l2") -> np.ndarray:
    """Per-t ||x(t) - pi|| in the requested norm (l1, l2, or linf)."""
    if norm not in _NORMS:
        raise ValueError(f"unknown norm: {norm!r}")
    return np.linalg.norm(trace.iterates - trace.pi, ord=_NORMS[norm], axis=1)


def build_report(
    trace: IterationTrace,
    methods: tuple[str, ...] = ("min", "max"),
    dims: tuple[int, ...] = (0,),
    tie_rule: TieRule = TieRule(),
) -> ConvergenceReport:
    """Assemble the full convergence report used by the CLI and scripts."""
    per_node = rank_convergence_times(trace, tie_rule)
    t_rank = None if any(t is None for t in per_node) else max(per_node)
    t_knn = {m: knn_convergence_time(trace, method=m, tie_rule=tie_rule) for m in methods}
    return ConvergenceReport(
        horizon=trace.horizon,
        norm_curves={k: norm_error_curve(trace, k) for k in ("l1", "l2", "linf")},
        rank_diff=rank_diff_curve(trace, tie_rule),
        vr_curves=homological_curve(trace, KIND_VR, dims, tie_rule=tie_rule),
        knn_curves={
            (m, d): curve
            for m in methods
            for d, curve in homological_curve(trace, f"knn-{m}", dims, tie_rule=tie_rule).items()
        },
        t_star_rank=t_rank,
        t_star_knn=t_knn,
        per_node_t_star=per_node,
    )
