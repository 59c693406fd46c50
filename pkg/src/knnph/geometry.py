"""Point clouds, Euclidean distances, and deterministic argsort.

Everything downstream (kNN orderings, VR filtrations) is built on the
primitives in this module.  Only the Euclidean metric is supported, and
distance matrices are computed once per unordered pair so that the result
is exactly symmetric (argsort must see identical values in both
directions).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TIE_BY_INDEX = "by-index"
TIE_SEEDED_RANDOM = "seeded-random"


@dataclass(frozen=True)
class TieRule:
    """How argsort resolves equal values.

    ``by-index`` (default) ranks equal values by position, which keeps every
    pipeline reproducible.  ``seeded-random`` assigns a uniformly random
    relative order to tied values, deterministic for a fixed seed.
    """

    mode: str = TIE_BY_INDEX
    seed: int = 0

    def __post_init__(self):
        if self.mode not in (TIE_BY_INDEX, TIE_SEEDED_RANDOM):
            raise ValueError(f"unknown tie rule mode: {self.mode!r}")


@dataclass(frozen=True)
class PointCloud:
    """N labeled points in R^p.

    ``points`` is an (n, p) float array; optional ``labels`` must be unique
    and of length n.  The array is copied and frozen at construction.
    """

    points: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("point cloud must be a nonempty (n, p) array")
        if not np.isfinite(pts).all():
            raise ValueError("point coordinates must be finite")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != pts.shape[0]:
                raise ValueError("labels length must match number of points")
            if len(set(labels)) != len(labels):
                raise ValueError("labels must be unique")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def pairwise_distances(cloud: PointCloud) -> np.ndarray:
    """Euclidean distance matrix of a cloud.

    Each unordered pair is computed once and mirrored, so the output is
    bitwise symmetric with an exactly-zero diagonal.
    """
    pts = cloud.points
    n = pts.shape[0]
    d = np.zeros((n, n), dtype=float)
    iu, ju = np.triu_indices(n, k=1)
    if iu.size:
        vals = np.sqrt(np.sum((pts[iu] - pts[ju]) ** 2, axis=1))
        d[iu, ju] = vals
        d[ju, iu] = vals
    return d


def argsort_row(values, tie_rule: TieRule = TieRule()) -> np.ndarray:
    """Rank positions of ``values`` in ascending order.

    Returns an integer array ``o`` with ``o[j]`` the rank of ``values[j]``,
    ranks in {0, ..., n-1}.  Ties resolve per ``tie_rule``.
    """
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1 or vals.size == 0:
        raise ValueError("values must be a nonempty 1-d sequence")
    if np.isnan(vals).any():
        raise ValueError("values contain NaN")
    n = vals.size
    if tie_rule.mode == TIE_BY_INDEX:
        order = np.argsort(vals, kind="stable")
    else:
        keys = np.random.default_rng(tie_rule.seed).random(n)
        order = np.lexsort((keys, vals))
    ranks = np.empty(n, dtype=int)
    ranks[order] = np.arange(n)
    return ranks


def row_tie_rule(tie_rule: TieRule, row: int) -> TieRule:
    """Derive an independent per-row tie rule from a base seed."""
    if tie_rule.mode == TIE_BY_INDEX:
        return tie_rule
    mixed = int(np.random.SeedSequence([tie_rule.seed, row]).generate_state(1)[0])
    return TieRule(TIE_SEEDED_RANDOM, mixed)


def linf_cloud_distance(a: PointCloud, b: PointCloud) -> float:
    """max_i ||a_i - b_i||_2 for two equally-enumerated clouds."""
    if a.points.shape != b.points.shape:
        raise ValueError("clouds must have identical size and dimension")
    diffs = np.sqrt(np.sum((a.points - b.points) ** 2, axis=1))
    return float(diffs.max())


def load_points_csv(text: str) -> PointCloud:
    """Parse the point-cloud CSV format.

    One point per row, comma-separated coordinates.  An optional first line
    ``# label,x1,...,xp`` declares a leading label column.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty point-cloud CSV")
    has_labels = False
    if lines[0].startswith("#"):
        header = lines[0].lstrip("#").strip()
        fields = [f.strip() for f in header.split(",")]
        has_labels = bool(fields) and fields[0] == "label"
        lines = lines[1:]
        if not lines:
            raise ValueError("point-cloud CSV has a header but no rows")
    rows = []
    labels = []
    for k, ln in enumerate(lines, start=1):
        parts = [p.strip() for p in ln.split(",")]
        if has_labels:
            labels.append(parts[0])
            parts = parts[1:]
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise ValueError(f"bad coordinate on row {k}: {exc}") from None
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError("rows have inconsistent dimension")
    return PointCloud(np.array(rows), tuple(labels) if has_labels else None)


def points_to_csv(cloud: PointCloud) -> str:
    """Inverse of :func:`load_points_csv`."""
    out = []
    if cloud.labels is not None:
        out.append("# label," + ",".join(f"x{i + 1}" for i in range(cloud.dim)))
        for lab, row in zip(cloud.labels, cloud.points):
            out.append(lab + "," + ",".join(repr(float(v)) for v in row))
    else:
        for row in cloud.points:
            out.append(",".join(repr(float(v)) for v in row))
    return "\n".join(out) + "\n"
