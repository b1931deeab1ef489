"""Tour of certified mean recognition on the three-square planar complex.

The bundled ``squares3`` complex glues three unit squares around the origin
(an L missing its upper-right square) and carries the point set
a = (1, 0), b = (-1, 0), c = (0, 1).  Its mean set is known in closed form:
the triangle with corners (0,0), (-1,0), (0,1) together with the edge
segment from (0,0) to (1,0).  This script queries a handful of points and
prints the machine-checkable certificate either way.
"""

import json

from meanset import load_bundled, mean_deficit, recognize, verify_certificate

cx, A = load_bundled("squares3")
print(f"complex: {len(cx.maximal_ids)} squares, points "
      + ", ".join(f"{l}={A.coords(l)}" for l in A.labels))

probes = [
    (0.5, 0.0),     # on the segment toward a
    (-0.5, 0.25),   # inside the triangle
    (0.0, 0.0),     # the shared corner of all three squares
    (0.5, -0.5),    # center of the lower-right square, not a mean
    (-0.75, 0.8),   # upper-left, not a mean
]

for p in probes:
    result = recognize(A, p)
    print(f"\nquery {p}: {result.decision}")
    print("  certificate:", json.dumps(result.certificate.to_dict()))
    if result.decision == "member":
        check = verify_certificate(A, p, result.certificate, samples=200)
        print(f"  weighted variance inequality re-checked on "
              f"{check.samples} random points: ok={check.ok}")
    else:
        d_here = A.distances_from(p)
        d_wit = A.distances_from(result.certificate.witness)
        drops = {l: round(d_here[l] - d_wit[l], 6) for l in A.labels}
        print(f"  witness is strictly closer to every set point: {drops}")
    print(f"  mean deficit: {mean_deficit(A, p).value:.6f}")
