import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mzforge.families import example27
from mzforge.geometry import (
    PointFamily,
    Region,
    classify_region,
    count_report,
    euclidean_ball_separation,
    hausdorff_ladder,
    hausdorff_trunc,
    in_inner_euclidean_disk,
    in_outer_euclidean_disk,
    in_pseudo_disk,
    project_torus,
    pseudo_dist,
    separation,
    separation_decompose,
)


def brute_min_pseudo(pts):
    pts = np.asarray(pts)
    best = math.inf
    for i in range(pts.size):
        for j in range(i + 1, pts.size):
            best = min(best, abs(pts[i] - pts[j]) / abs(1 - pts[i] * np.conj(pts[j])))
    return best


def test_pseudo_dist_examples():
    for w in (0.3, -0.5j, 0.9 * np.exp(1j)):
        assert pseudo_dist(0, w) == pytest.approx(abs(w))
    assert pseudo_dist(0.2 + 0.1j, 0.2 + 0.1j) == 0
    assert pseudo_dist(0.5, -0.5) == pytest.approx(0.8)
    assert pseudo_dist(0.3, 0.6j) == pytest.approx(pseudo_dist(0.6j, 0.3))
    with pytest.raises(ValueError):
        pseudo_dist(1.0, 0.2)


def test_classify_region_examples():
    n, g = 10, 1.0
    rho = 1 - g / n
    assert classify_region(0, n, g) is Region.BULK
    assert classify_region(rho, n, g) is Region.BOUNDARY_ANNULUS
    assert classify_region(rho * np.exp(0.7j), n, g) is Region.BOUNDARY_ANNULUS
    assert classify_region(1 / rho, n, g) is Region.TWO_SIDED_ANNULUS
    assert classify_region(1.0, n, g) is Region.TWO_SIDED_ANNULUS
    assert classify_region(1 / rho + 1e-9, n, g) is Region.EXTERIOR
    assert classify_region(complex("nan"), n, g) is Region.INVALID
    out = classify_region(np.array([0, 0.95]), n, g)
    assert list(out) == [Region.BULK, Region.BOUNDARY_ANNULUS]
    with pytest.raises(ValueError):
        classify_region(0.1, 1, 2.0)


def test_separation_decompose_examples():
    K, labels = separation_decompose(np.array([0, 0.5]), 0.4)
    assert K == 1 and list(labels) == [0, 0]
    K, _ = separation_decompose(np.array([0, 0]), 0.1)
    assert K == 2
    n = 64
    ring = (1 - 1 / n) * np.exp(2j * np.pi * np.arange(n) / n)
    K, _ = separation_decompose(ring, 0.1)
    assert (K == 1) == (brute_min_pseudo(ring) >= 0.1)
    assert K == 1


def test_separation_decompose_classes_are_separated():
    rng = np.random.default_rng(3)
    pts = np.sqrt(rng.uniform(0, 0.98, 300)) * np.exp(2j * np.pi * rng.uniform(0, 1, 300))
    delta = 0.3
    K, labels = separation_decompose(PointFamily(pts), delta)
    assert K > 1
    for c in range(K):
        cls = pts[labels == c]
        if cls.size > 1:
            assert brute_min_pseudo(cls) >= delta


def test_separation_matches_brute_force():
    rng = np.random.default_rng(4)
    pts = 0.9 * np.sqrt(rng.uniform(0, 1, 80)) * np.exp(2j * np.pi * rng.uniform(0, 1, 80))
    assert separation(pts) == pytest.approx(brute_min_pseudo(pts))
    assert math.isnan(separation(np.array([0.1])))


def test_euclidean_ball_separation_brute_force():
    rng = np.random.default_rng(5)
    pts = 0.95 * np.sqrt(rng.uniform(0, 1, 60)) * np.exp(2j * np.pi * rng.uniform(0, 1, 60))
    a = 1 - np.abs(pts)
    best = min(abs(pts[i] - pts[j]) / (a[i] + a[j]) for i in range(60) for j in range(i + 1, 60))
    assert euclidean_ball_separation(pts) == pytest.approx(min(best, 1.0))


def test_count_report_examples():
    empty = count_report(PointFamily([], n=10, gamma=1.0))
    assert (empty.bulk_count_max, empty.annulus_count, empty.cell_count_max) == (0, 0, 0)
    single = count_report(PointFamily([0], n=10, gamma=1.0))
    assert single.bulk_count_max == 1
    for n in (8, 16, 40):
        fam = example27(n, 1.0, 1 / n**2)
        assert count_report(fam).annulus_count == n
    with pytest.raises(ValueError):
        count_report(PointFamily([0]))


def test_count_report_coloring_mode():
    pts = np.array([0, 0, 0.5])
    rep = count_report(PointFamily(pts, n=10, gamma=1.0), delta=0.3)
    assert rep.K == 2
    assert rep.delta >= 0.3


def test_count_report_monotone_under_insertion():
    rng = np.random.default_rng(6)
    pts = 0.99 * np.sqrt(rng.uniform(0, 1, 200)) * np.exp(2j * np.pi * rng.uniform(0, 1, 200))
    a = count_report(PointFamily(pts[:150], n=20, gamma=1.0))
    b = count_report(PointFamily(pts, n=20, gamma=1.0))
    assert b.bulk_count_max >= a.bulk_count_max
    assert b.cell_count_max >= a.cell_count_max
    assert b.annulus_count >= a.annulus_count


def test_project_torus_examples():
    fam, inj = project_torus(PointFamily([0.5, 0.5j]))
    assert np.allclose(fam.points, [1, 1j]) and inj
    _, inj = project_torus(PointFamily([0.5, 2]))
    assert not inj
    fam, inj = project_torus(PointFamily([]))
    assert len(fam) == 0 and inj
    with pytest.raises(ValueError):
        project_torus(PointFamily([0, 0.5]))


def test_hausdorff_examples():
    E = np.array([0.1, 0.3j])
    assert hausdorff_trunc(E, E, 0.5) == 0
    assert hausdorff_trunc(np.array([0]), np.array([]), 0.5) == pytest.approx(0.5)
    assert hausdorff_trunc(np.array([0.1]), np.array([0.11]), 0.5) == pytest.approx(0.01)
    assert hausdorff_trunc(np.array([0.1]), np.array([0.11]), 0.5, metric="pseudo") > 0
    lad = hausdorff_ladder(E, E)
    assert set(lad) == {0.5, 0.9, 0.99} and all(v == 0 for v in lad.values())
    with pytest.raises(ValueError):
        hausdorff_trunc(E, E, 1.0)


def test_family_json_round_trip(tmp_path):
    fam = PointFamily([0.1, 1.05j], n=7, gamma=0.5, multiplicity=[1, 3], provenance={"recipe": "x"})
    path = tmp_path / "fam.json"
    fam.save(path)
    back = PointFamily.load(path)
    assert np.array_equal(back.points, fam.points)
    assert back.n == 7 and back.gamma == 0.5
    assert list(back.multiplicity) == [1, 3]
    assert back.provenance == {"recipe": "x"}
    assert len(back.expanded()) == 4


def test_family_rejects_bad_multiplicity():
    with pytest.raises(ValueError):
        PointFamily([0.1, 0.2], multiplicity=[1, 0])
    with pytest.raises(ValueError):
        PointFamily([complex("inf")])


disk_point = st.builds(lambda r, t: r * np.exp(1j * t), st.floats(0, 0.99), st.floats(0, 2 * math.pi))


@settings(max_examples=200, deadline=None)
@given(disk_point, disk_point, st.floats(0.01, 0.49))
def test_euclidean_inclusions(w, z, rho):
    if in_inner_euclidean_disk(z, w, rho):
        assert in_pseudo_disk(z, w, rho)
    if in_pseudo_disk(z, w, rho):
        assert in_outer_euclidean_disk(z, w, rho)


def test_euclidean_inclusions_dense_sample():
    rng = np.random.default_rng(8)
    m = 1000
    w = 0.99 * np.sqrt(rng.uniform(0, 1, m)) * np.exp(2j * np.pi * rng.uniform(0, 1, m))
    rho = rng.uniform(0.01, 0.49, m)
    z = w + rng.uniform(0, 1, m) * rho / (1 - rho) * (1 - np.abs(w) ** 2) * 1.2 * np.exp(2j * np.pi * rng.uniform(0, 1, m))
    z = np.where(np.abs(z) < 1, z, w)
    inner = in_inner_euclidean_disk(z, w, rho)
    hyp = in_pseudo_disk(z, w, rho)
    outer = in_outer_euclidean_disk(z, w, rho)
    assert np.all(~inner | hyp)
    assert np.all(~hyp | outer)


@settings(max_examples=60, deadline=None)
@given(st.lists(disk_point, max_size=6), st.lists(disk_point, max_size=6), st.lists(disk_point, max_size=6),
       st.floats(0.1, 0.95), st.sampled_from(["euclidean", "pseudo"]))
def test_hausdorff_pseudometric(a, b, c, r, metric):
    A, B, C = (np.array(x, dtype=complex) for x in (a, b, c))
    dab = hausdorff_trunc(A, B, r, metric)
    assert dab == pytest.approx(hausdorff_trunc(B, A, r, metric))
    assert dab <= hausdorff_trunc(A, C, r, metric) + hausdorff_trunc(C, B, r, metric) + 1e-12
