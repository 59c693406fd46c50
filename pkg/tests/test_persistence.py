import itertools
import math

import numpy as np
import pytest

from knnph import (
    PointCloud,
    betti_numbers,
    compute_persistence,
    diagram_from_json,
    diagram_to_json,
    pairwise_distances,
    vr_filtered_complex,
)
from knnph.filtration import FilteredComplex, flag_expand
from knnph.persistence import PersistencePoint, diagram_to_csv

from conftest import random_cloud

UNIT_SQUARE = PointCloud([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)])
SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# independent GF(2) linear algebra for the oracle checks


def gf2_rank_rows(rows):
    rank = 0
    pivots = []
    for row in rows:
        for p in pivots:
            row = min(row, row ^ p)
        if row:
            pivots.append(row)
            rank += 1
    return rank


def gf2_nullspace(cols, nrows):
    """Null-space basis of a GF(2) matrix given as column bitsets."""
    m = len(cols)
    aug = [(cols[j], 1 << j) for j in range(m)]
    pivots = []
    basis = []
    for col, tag in aug:
        for pcol, ptag in pivots:
            if col & (1 << (pcol.bit_length() - 1)):
                col ^= pcol
                tag ^= ptag
        if col:
            pivots.append((col, tag))
        else:
            basis.append(tag)
    return basis


def boundary_columns(faces, cofaces):
    idx = {f: i for i, f in enumerate(faces)}
    cols = []
    for verts in cofaces:
        bits = 0
        for k in range(len(verts)):
            bits |= 1 << idx[verts[:k] + verts[k + 1:]]
        cols.append(bits)
    return cols


def sublevel(c, level):
    by_dim = {}
    for verts, val in c.simplices:
        if val <= level:
            by_dim.setdefault(len(verts) - 1, []).append(verts)
    return by_dim


def persistent_betti(c, dim, x, y):
    """dim img(H_dim(X_x) -> H_dim(X_y)) via GF(2) subspace ranks."""
    low, high = sublevel(c, x), sublevel(c, y)
    sk_low = low.get(dim, [])
    if not sk_low:
        return 0
    z_cols = boundary_columns(low.get(dim - 1, []), sk_low) if dim > 0 else [0] * len(sk_low)
    z_basis = gf2_nullspace(z_cols, len(low.get(dim - 1, [])))
    # express cycles of X_x in the simplex basis of X_y (prefix embedding)
    pos_in_high = {s: i for i, s in enumerate(high.get(dim, []))}
    embed = []
    for tag in z_basis:
        vec = 0
        for j, s in enumerate(sk_low):
            if tag & (1 << j):
                vec |= 1 << pos_in_high[s]
        embed.append(vec)
    b_cols = boundary_columns(high.get(dim, []), high.get(dim + 1, []))
    dim_z = len(embed)
    dim_zb = gf2_rank_rows(embed + b_cols)
    dim_b = gf2_rank_rows(list(b_cols))
    # dim (Z_x cap B_y) = dim Z_x + dim B_y - dim (Z_x + B_y)
    return dim_z - (dim_z + dim_b - dim_zb)


# ---------------------------------------------------------------------------


def test_single_vertex():
    c = flag_expand(np.zeros((1, 1)), dim_cap=0)
    diag = compute_persistence(c, max_dim=0)
    assert [(p.dim, p.birth, p.death) for p in diag.points] == [(0, 0.0, math.inf)]


def test_two_points_merge():
    d = pairwise_distances(PointCloud([(0.0,), (5.0,)]))
    diag = compute_persistence(vr_filtered_complex(d, dim_cap=1, eps_max=10), max_dim=0)
    pts = sorted((p.birth, p.death) for p in diag.points_of_dim(0))
    assert pts == [(0.0, 5.0), (0.0, math.inf)]


def test_unit_square_h1():
    c = vr_filtered_complex(pairwise_distances(UNIT_SQUARE), dim_cap=2)
    diag = compute_persistence(c, max_dim=1)
    h1 = diag.points_of_dim(1)
    assert len(h1) == 1
    assert h1[0].birth == pytest.approx(1.0)
    assert h1[0].death == pytest.approx(SQRT2)
    h0 = sorted((p.birth, p.death) for p in diag.points_of_dim(0))
    assert h0 == [(0.0, 1.0)] * 3 + [(0.0, math.inf)]


def test_betti_isolated_vertices():
    c = flag_expand(np.full((4, 4), 9.0), dim_cap=1, value_cap=10)
    assert betti_numbers(c, 0.5, max_dim=1) == [4, 0]


def test_betti_unit_square_cycle():
    c = vr_filtered_complex(pairwise_distances(UNIT_SQUARE), dim_cap=2)
    assert betti_numbers(c, 1.0, max_dim=1) == [1, 1]
    assert betti_numbers(c, SQRT2 + 1e-12, max_dim=1) == [1, 0]


def test_betti_full_simplex_contractible():
    c = flag_expand(np.ones((4, 4)), dim_cap=3, value_cap=2)
    assert betti_numbers(c, 1.0, max_dim=2) == [1, 0, 0]


def test_rejects_nonmonotone_complex():
    bad = FilteredComplex((((0,), 0.0), ((1,), 0.0), ((0, 1), 0.0), ((0,), 1.0)), 1)
    with pytest.raises(ValueError):
        compute_persistence(FilteredComplex((((0,), 1.0), ((1,), 0.0), ((0, 1), 0.5)), 1))
    with pytest.raises(ValueError):
        compute_persistence(FilteredComplex((((0,), 0.0), ((0, 1), 1.0)), 1))


def test_deterministic(rng):
    cloud = random_cloud(rng, n=7)
    c = vr_filtered_complex(pairwise_distances(cloud), dim_cap=2)
    assert compute_persistence(c) == compute_persistence(c)


def test_one_infinite_bar_per_component(rng):
    for _ in range(10):
        n = int(rng.integers(2, 9))
        w = np.full((n, n), np.inf)
        np.fill_diagonal(w, 0.0)
        # random forest-ish subset of edges
        for _ in range(int(rng.integers(0, n))):
            i, j = rng.integers(0, n, 2)
            if i != j:
                v = float(rng.uniform(0.1, 1.0))
                w[min(i, j), max(i, j)] = w[max(i, j), min(i, j)] = v
        c = flag_expand(w, dim_cap=2, value_cap=2.0)
        diag = compute_persistence(c, max_dim=1)
        components = betti_numbers(c, 2.0, max_dim=0)[0]
        assert sum(1 for p in diag.points_of_dim(0) if p.is_infinite) == components


def random_filtered_complex(rng, n_max=8):
    n = int(rng.integers(2, n_max + 1))
    pts = rng.uniform(0, 1, size=(n, int(rng.integers(1, 4))))
    w = pairwise_distances(PointCloud(pts))
    cap = float(rng.uniform(0.3, 1.5))
    dim_cap = int(rng.integers(1, 4))
    return flag_expand(w, dim_cap=dim_cap, value_cap=cap)


def test_diagram_betti_match_elimination_oracle(rng):
    for _ in range(30):
        c = random_filtered_complex(rng)
        diag = compute_persistence(c, max_dim=c.dim_cap)
        for level in c.critical_values():
            betti = betti_numbers(c, level, max_dim=c.dim_cap)
            for k in range(c.dim_cap + 1):
                assert diag.betti_at(level, k) == betti[k]


def test_euler_characteristic_identity(rng):
    for _ in range(20):
        c = random_filtered_complex(rng)
        for level in c.critical_values():
            counts = {}
            for s, v in c.simplices:
                if v <= level:
                    counts[len(s) - 1] = counts.get(len(s) - 1, 0) + 1
            chi_simplices = sum((-1) ** k * m for k, m in counts.items())
            betti = betti_numbers(c, level, max_dim=c.dim_cap)
            chi_betti = sum((-1) ** k * b for k, b in enumerate(betti))
            assert chi_simplices == chi_betti


def test_multiplicities_match_persistent_betti_formula(rng):
    # mu_i^j = b(x_{i-1}, y_j) - b(x_i, y_j) + b(x_i, y_{j-1}) - b(x_{i-1}, y_{j-1})
    for _ in range(10):
        c = random_filtered_complex(rng, n_max=6)
        diag = compute_persistence(c, max_dim=c.dim_cap)
        crit = c.critical_values()
        mids = [crit[0] - 1.0] + [
            (a + b) / 2 for a, b in zip(crit, crit[1:])
        ] + [crit[-1] + 1.0]
        for dim in range(c.dim_cap):
            for i, ai in enumerate(crit):
                for j, aj in enumerate(crit):
                    if ai >= aj:
                        continue
                    expected = sum(
                        1 for p in diag.points_of_dim(dim)
                        if p.birth == ai and p.death == aj
                    )
                    mu = (
                        persistent_betti(c, dim, mids[i], mids[j + 1])
                        - persistent_betti(c, dim, mids[i + 1], mids[j + 1])
                        + persistent_betti(c, dim, mids[i + 1], mids[j])
                        - persistent_betti(c, dim, mids[i], mids[j])
                    )
                    assert mu == expected


def test_diagram_json_round_trip(rng):
    cloud = random_cloud(rng, n=6)
    diag = compute_persistence(vr_filtered_complex(pairwise_distances(cloud), dim_cap=2))
    assert diagram_from_json(diagram_to_json(diag)).points == diag.points


def test_diagram_csv_has_inf_literal():
    c = flag_expand(np.zeros((1, 1)), dim_cap=0)
    text = diagram_to_csv(compute_persistence(c, max_dim=0))
    assert text.splitlines()[0] == "dim,birth,death"
    assert text.splitlines()[1] == "0,0.0,inf"


def test_point_validation():
    with pytest.raises(ValueError):
        PersistencePoint(0, 1.0, 0.5)
    with pytest.raises(ValueError):
        PersistencePoint(0, math.inf, math.inf)
    with pytest.raises(ValueError):
        PersistencePoint(0, 0.0, 1.0, multiplicity=0)
