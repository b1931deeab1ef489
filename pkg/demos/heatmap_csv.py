"""Reproducible mean-deficit heat map, written as CSV.

Samples points uniformly (pick a maximal cell, then a uniform point in it),
computes each sample's mean deficit, and marks it light when the deficit is
below the threshold.  The sample streams are derived per index from the
seed, so the CSV is byte-identical no matter how many worker threads run.
"""

import pathlib

from meanset import load_bundled, run_heatmap, segment_probes, to_csv

cx, A = load_bundled("squares3")
eps = 0.1
samples = run_heatmap(A, 2000, seed=42, eps=eps)
light = sum(1 for s in samples if s.decision) / len(samples)
print(f"2000 samples on squares3, threshold {eps}")
print(f"light fraction {light:.4f} "
      "(the mean set fills 1/6 of the area; the rest is the eps-fringe)")

# probe points along the segment between the two horizontal set points
extra = segment_probes(A, A.coords("a"), A.coords("b"), 9, eps)
print("probes on [a, b]:",
      ["{:+.2f}:{}".format(p.point[0], "light" if p.decision else "dark")
       for p in extra])

out = pathlib.Path("heatmap_squares3.csv")
out.write_text(to_csv(samples + extra, cx.ambient_dim))
print(f"wrote {out} ({len(samples) + len(extra)} rows)")
print("same thing from the command line:")
print("  meanset heatmap --complex squares3 --set squares3 "
      "--samples 2000 --seed 42 --tol 0.1 --out heatmap_squares3.csv")
