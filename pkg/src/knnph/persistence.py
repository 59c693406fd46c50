"""Persistent homology of filtered complexes over the two-element field.

``compute_persistence`` runs the standard boundary-matrix column reduction
(columns as integer bitsets, in stored filtration order) and extracts
birth-death pairs.  ``betti_numbers`` takes an independent route: dense
GF(2) rank computations on the boundary maps of a single sublevel complex,
with a union-find cross-check for the component count.  The two paths are
held against each other in the test suite.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .filtration import FilteredComplex


@dataclass(frozen=True)
class PersistencePoint:
    dim: int
    birth: float
    death: float  # math.inf for classes that never die
    multiplicity: int = 1

    def __post_init__(self):
        if not math.isfinite(self.birth):
            raise ValueError("birth must be finite")
        if self.death < self.birth:
            raise ValueError("death must be >= birth")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.death)


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of persistence points plus the source filtration context."""

    points: tuple[PersistencePoint, ...]
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def points_of_dim(self, dim: int) -> list[PersistencePoint]:
        return [p for p in self.points if p.dim == dim]

    def finite_points(self, dim: int) -> list[tuple[float, float]]:
        return [(p.birth, p.death) for p in self.points_of_dim(dim) if not p.is_infinite]

    def infinite_births(self, dim: int) -> list[float]:
        return sorted(p.birth for p in self.points_of_dim(dim) if p.is_infinite)

    def betti_at(self, level: float, dim: int) -> int:
        """Classes alive at ``level``: born at or before it, not yet dead."""
        return sum(1 for p in self.points_of_dim(dim) if p.birth <= level < p.death)


class UnionFind:
    """Plain union-find with path compression, used to count components."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.count = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        self.count -= 1
        return True


def _validate_complex(c: FilteredComplex) -> dict[tuple[int, ...], float]:
    """Check face closure and monotonicity; return the simplex -> value map."""
    value = {}
    for verts, val in c.simplices:
        if len(verts) > 1:
            for k in range(len(verts)):
                face = verts[:k] + verts[k + 1:]
                if face not in value:
                    raise ValueError(f"complex is not closed under faces: {face} missing")
                if value[face] > val:
                    raise ValueError(f"filtration values not monotone at {verts}")
        value[verts] = val
    return value


def compute_persistence(c: FilteredComplex, max_dim: int | None = None) -> PersistenceDiagram:
    """Persistence diagram of a filtered complex by GF(2) column reduction.

    Columns are processed in stored order; each reduced column pairs its low
    row (the creating simplex) with its own simplex (the destroyer).
    Unpaired creators give infinite bars.  Zero-length points are dropped.
    """
    _validate_complex(c)
    if max_dim is None:
        max_dim = max(c.dim_cap - 1, 0)

    simplices = c.simplices
    index = {verts: i for i, (verts, _) in enumerate(simplices)}
    values = [v for _, v in simplices]
    dims = [len(verts) - 1 for verts, _ in simplices]

    n = len(simplices)
    pivot_of_low: dict[int, int] = {}
    columns: list[int] = [0] * n
    paired = [False] * n
    creates = [False] * n  # column reduced to zero: its simplex creates a class
    points: list[PersistencePoint] = []

    for j in range(n):
        verts = simplices[j][0]
        col = 0
        if len(verts) > 1:
            for k in range(len(verts)):
                col |= 1 << index[verts[:k] + verts[k + 1:]]
        while col:
            low = col.bit_length() - 1
            holder = pivot_of_low.get(low)
            if holder is None:
                break
            col ^= columns[holder]
        columns[j] = col
        if col:
            low = col.bit_length() - 1
            pivot_of_low[low] = j
            paired[low] = True
            paired[j] = True
            birth, death = values[low], values[j]
            if dims[low] <= max_dim and birth < death:
                points.append(PersistencePoint(dims[low], birth, death))
        else:
            creates[j] = True

    for j in range(n):
        if creates[j] and not paired[j] and dims[j] <= max_dim:
            points.append(PersistencePoint(dims[j], values[j], math.inf))

    points.sort(key=lambda p: (p.dim, p.birth, p.death))
    params = {"dim_cap": c.dim_cap, "max_dim": max_dim}
    return PersistenceDiagram(tuple(points), kind=c.kind, params=params)


def _gf2_rank(rows: list[int]) -> int:
    """Rank of a GF(2) matrix given as bitset rows (Gaussian elimination)."""
    rank = 0
    pivots: list[int] = []
    for row in rows:
        for p in pivots:
            row = min(row, row ^ p)
        if row:
            pivots.append(row)
            rank += 1
    return rank


def _boundary_rows(faces: list[tuple[int, ...]], cofaces: list[tuple[int, ...]]) -> list[int]:
    """Boundary map as bitset columns-over-rows: one bitset per coface."""
    face_index = {f: i for i, f in enumerate(faces)}
    rows = []
    for verts in cofaces:
        bits = 0
        for k in range(len(verts)):
            bits |= 1 << face_index[verts[:k] + verts[k + 1:]]
        rows.append(bits)
    return rows


def betti_numbers(c: FilteredComplex, level: float, max_dim: int | None = None) -> list[int]:
    """Betti numbers of the sublevel complex at ``level``.

    beta_k = dim C_k - rank d_k - rank d_{k+1}, computed by dense GF(2)
    elimination.  beta_0 is cross-checked against a union-find component
    count.
    """
    if max_dim is None:
        max_dim = max(c.dim_cap - 1, 0)
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for verts, val in c.simplices:
        if val <= level:
            by_dim.setdefault(len(verts) - 1, []).append(verts)

    betti = []
    for k in range(max_dim + 1):
        sk = by_dim.get(k, [])
        if not sk:
            betti.append(0)
            continue
        rank_dk = 0
        if k > 0:
            rank_dk = _gf2_rank(_boundary_rows(by_dim.get(k - 1, []), sk))
        rank_dk1 = 0
        if by_dim.get(k + 1):
            rank_dk1 = _gf2_rank(_boundary_rows(sk, by_dim[k + 1]))
        betti.append(len(sk) - rank_dk - rank_dk1)

    vertices = by_dim.get(0, [])
    if vertices:
        uf = UnionFind(len(vertices))
        vid = {v[0]: i for i, v in enumerate(vertices)}
        for verts in by_dim.get(1, []):
            uf.union(vid[verts[0]], vid[verts[1]])
        if betti[0] != uf.count:
            raise AssertionError(
                f"betti_0 mismatch: elimination {betti[0]} vs union-find {uf.count}"
            )
    return betti


def _death_to_json(d: float):
    return "inf" if math.isinf(d) else d


def diagram_to_json(diag: PersistenceDiagram) -> str:
    obj = {
        "kind": diag.kind,
        "params": diag.params,
        "points": [
            {"dim": p.dim, "birth": p.birth, "death": _death_to_json(p.death)}
            for p in diag.points
            for _ in range(p.multiplicity)
        ],
    }
    return json.dumps(obj)


def diagram_from_json(text: str) -> PersistenceDiagram:
    obj = json.loads(text)
    pts = []
    for p in obj["points"]:
        death = math.inf if p["death"] == "inf" else float(p["death"])
        pts.append(PersistencePoint(int(p["dim"]), float(p["birth"]), death))
    return PersistenceDiagram(tuple(pts), kind=obj.get("kind", "custom"), params=obj.get("params", {}))


def diagram_to_csv(diag: PersistenceDiagram) -> str:
    lines = ["dim,birth,death"]
    for p in diag.points:
        death = "inf" if p.is_infinite else repr(p.death)
        for _ in range(p.multiplicity):
            lines.append(f"{p.dim},{p.birth!r},{death}")
    return "\n".join(lines) + "\n"
