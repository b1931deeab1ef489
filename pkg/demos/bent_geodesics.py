"""Geodesics that bend through shared faces, and the thin-triangle bound.

Two bundled complexes show the non-Euclidean behavior: in ``cube_square``
a unit cube and a unit square share an edge, so shortest paths between the
two pieces refract at the shared edge; in ``quadrant_window`` distances
around a missing square exceed the straight-line value.
"""

import numpy as np

from meanset import distance, geodesic, load_bundled, midpoint

cx, A = load_bundled("cube_square")
q, r = A.coords("q"), A.coords("r")
g = geodesic(cx, q, r)
print("cube_square: shortest path from the square to the cube")
print(f"  q = {q}, r = {r}")
print(f"  length {g.length:.12f}")
print(f"  polyline {[tuple(round(c, 12) for c in b) for b in g.breakpoints]}")
print(f"  cells traversed: {g.cells}")
print(f"  the bend sits at y = sqrt(2)-1 = {np.sqrt(2) - 1:.12f}")

cxq, _ = load_bundled("quadrant_window")
p1, p2 = (0.0, 1.0), (np.sqrt(3.0), 0.0)
print("\nquadrant_window: going around the missing quadrant")
print(f"  d({p1}, {p2}) = {distance(cxq, p1, p2):.12f}"
      f"  (= 1 + sqrt(3) = {1 + np.sqrt(3.0):.12f})")
print(f"  straight-line value would be {np.hypot(np.sqrt(3.0), 1.0):.12f}")

# midpoints satisfy the nonpositive-curvature comparison inequality
rng = np.random.default_rng(5)
ids = cx.maximal_ids
print("\nmidpoint comparison d(p,m)^2 <= d(p,q)^2/2 + d(p,r)^2/2 - d(q,r)^2/4")
for _ in range(3):
    pts = []
    for _ in range(3):
        lo, hi = cx.cell(ids[int(rng.integers(len(ids)))]).bounds()
        pts.append(tuple(rng.uniform(lo, hi)))
    p, q, r = pts
    m = midpoint(cx, q, r)
    lhs = distance(cx, p, m) ** 2
    rhs = (0.5 * distance(cx, p, q) ** 2 + 0.5 * distance(cx, p, r) ** 2
           - 0.25 * distance(cx, q, r) ** 2)
    print(f"  lhs {lhs:.6f} <= rhs {rhs:.6f}  slack {rhs - lhs:.2e}")
