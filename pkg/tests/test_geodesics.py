"""Geodesic solver checked against closed forms and metric axioms."""

import math

import numpy as np
import pytest

from meanset import GeodesicError, distance, geodesic, load_bundled, midpoint, point_along

R2 = math.sqrt(2.0)
R3 = math.sqrt(3.0)


def _random_point(cx, rng):
    ids = cx.maximal_ids
    cell = cx.cell(ids[int(rng.integers(len(ids)))])
    lo, hi = cell.bounds()
    return tuple(rng.uniform(lo, hi))


# ---------------------------------------------------------------------------
# exact values


def test_single_cube_is_euclidean():
    cx, _ = load_bundled("cube_square")
    rng = np.random.default_rng(3)
    for _ in range(25):
        p = tuple(rng.uniform(0.0, 1.0, size=3))
        q = tuple(rng.uniform(0.0, 1.0, size=3))
        assert distance(cx, p, q) == pytest.approx(
            float(np.linalg.norm(np.subtract(p, q))), abs=1e-12)


def test_bundled_closed_forms(bundles):
    cx3, _ = bundles["squares3"]
    assert distance(cx3, (1, 0), (-1, 0)) == pytest.approx(2.0, abs=1e-12)
    assert distance(cx3, (1, 0), (0, 1)) == pytest.approx(2.0, abs=1e-12)
    assert distance(cx3, (-1, 0), (0, 1)) == pytest.approx(R2, abs=1e-12)

    cx5, _ = bundles["squares5"]
    assert distance(cx5, (1, -1, 0), (-1, 1, 0)) == pytest.approx(2 * R2, abs=1e-12)
    assert distance(cx5, (1, -1, 0), (0, 0, 1)) == pytest.approx(math.sqrt(5), abs=1e-12)
    assert distance(cx5, (-1, 1, 0), (0, 0, 1)) == pytest.approx(math.sqrt(5), abs=1e-12)

    cxq, _ = bundles["quadrant_window"]
    assert distance(cxq, (0, 1), (R3, 0)) == pytest.approx(1 + R3, abs=1e-12)


def test_cube_square_bent_geodesic(bundles):
    cx, _ = bundles["cube_square"]
    g = geodesic(cx, (-1.0, 0.0, 0.0), (1.0, 1.0, 1.0))
    assert g.length == pytest.approx((1 + R2) * math.sqrt(4 - 2 * R2), abs=1e-10)
    assert len(g.breakpoints) == 3
    assert np.allclose(g.breakpoints[1], (0.0, R2 - 1.0, 0.0), atol=1e-8)


def test_cube_square_crossing_formula(bundles):
    """Geodesics from the cube interior to the far square corner cross the
    shared edge at height y / (1 + hypot(x, z))."""
    cx, _ = bundles["cube_square"]
    rng = np.random.default_rng(19)
    for _ in range(20):
        c = rng.uniform(0.05, 0.95, size=3)
        g = geodesic(cx, tuple(c), (-1.0, 0.0, 0.0))
        cross = [p for p in g.breakpoints[1:-1]
                 if abs(p[0]) <= 1e-9 and abs(p[2]) <= 1e-9]
        assert len(cross) == 1
        want = c[1] / (1.0 + math.hypot(c[0], c[2]))
        assert cross[0][1] == pytest.approx(want, abs=1e-9)


def test_quadrant_geodesic_bends_at_window_corner(bundles):
    cx, _ = bundles["quadrant_window"]
    g = geodesic(cx, (0.0, 1.0), (R3, 0.0))
    assert any(np.allclose(p, (0.0, 0.0), atol=1e-9) for p in g.breakpoints)


# ---------------------------------------------------------------------------
# metric axioms, fuzzed


@pytest.mark.parametrize("name", ["tripod", "squares3", "squares5", "quadrant_window"])
def test_symmetry_and_identity(bundles, name):
    cx, _ = bundles[name]
    rng = np.random.default_rng(hash(name) % 2**32)
    for _ in range(15):
        p = _random_point(cx, rng)
        q = _random_point(cx, rng)
        dpq = distance(cx, p, q)
        assert dpq == pytest.approx(distance(cx, q, p), abs=1e-9)
        assert distance(cx, p, p) == pytest.approx(0.0, abs=1e-12)
        assert dpq >= float(np.linalg.norm(np.subtract(p, q))) - 1e-9


@pytest.mark.parametrize("name", ["squares3", "squares5"])
def test_triangle_inequality(bundles, name):
    cx, _ = bundles[name]
    rng = np.random.default_rng(len(name))
    for _ in range(20):
        p, q, r = (_random_point(cx, rng) for _ in range(3))
        assert distance(cx, p, r) <= distance(cx, p, q) + distance(cx, q, r) + 1e-9


def test_geodesic_breakpoint_consistency(bundles):
    """Length equals the polyline length and every breakpoint is in the complex."""
    for name, (cx, _) in bundles.items():
        rng = np.random.default_rng(101)
        for _ in range(8):
            p = _random_point(cx, rng)
            q = _random_point(cx, rng)
            g = geodesic(cx, p, q)
            pts = [np.asarray(b) for b in g.breakpoints]
            poly = sum(float(np.linalg.norm(u - v)) for u, v in zip(pts, pts[1:]))
            assert g.length == pytest.approx(poly, abs=1e-9)
            for b in g.breakpoints:
                cx.locate(b)   # raises if outside


def test_point_along_and_midpoint(bundles):
    cx, _ = bundles["squares3"]
    p, q = (1.0, 0.0), (-1.0, -1.0)
    g = geodesic(cx, p, q)
    assert point_along(g, 0.0) == pytest.approx(p)
    assert point_along(g, 1.0) == pytest.approx(q)
    m = midpoint(cx, p, q)
    assert distance(cx, p, m) == pytest.approx(g.length / 2, abs=1e-9)
    assert distance(cx, m, q) == pytest.approx(g.length / 2, abs=1e-9)
    # parameterization is by arclength fraction
    for s in (0.25, 0.7):
        x = point_along(g, s)
        assert distance(cx, p, x) == pytest.approx(s * g.length, abs=1e-9)


def test_geodesic_deterministic(bundles):
    cx, _ = bundles["squares5"]
    a = geodesic(cx, (1.0, -1.0, 0.0), (-1.0, 1.0, 0.0))
    b = geodesic(cx, (1.0, -1.0, 0.0), (-1.0, 1.0, 0.0))
    assert a == b


def test_geodesic_requires_points_inside():
    cx, _ = load_bundled("tripod")
    with pytest.raises(Exception):
        geodesic(cx, (5.0, 5.0), (0.0, 0.0))


def test_midpoint_matches_cn_inequality(bundles):
    """Midpoints satisfy the comparison (semi-parallelogram) bound."""
    cx, _ = bundles["squares5"]
    rng = np.random.default_rng(77)
    for _ in range(25):
        p = _random_point(cx, rng)
        q = _random_point(cx, rng)
        r = _random_point(cx, rng)
        m = midpoint(cx, q, r)
        lhs = distance(cx, p, m) ** 2
        rhs = (0.5 * distance(cx, p, q) ** 2 + 0.5 * distance(cx, p, r) ** 2
               - 0.25 * distance(cx, q, r) ** 2)
        assert lhs <= rhs + 1e-7
