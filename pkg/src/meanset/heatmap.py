"""Monte-Carlo sampling of the mean-deficit landscape, exported as CSV.

Each sample draws a maximal cell, then a uniform point inside it, and
records the deficit value plus a light/dark decision at a fixed threshold.
Per-sample random streams are derived from ``(seed, sample index)``, so the
output is byte-identical no matter how many worker threads run.
"""

from __future__ import annotations

import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .recognition import PointSetA, mean_deficit

__all__ = ["HeatMapSample", "run_heatmap", "segment_probes", "to_csv", "worker_count"]


@dataclass(frozen=True)
class HeatMapSample:
    cell: str
    point: tuple
    deficit: float
    decision: bool   # deficit strictly below the threshold


def worker_count() -> int:
    cap = os.environ.get("MEANSET_THREADS")
    if cap is not None:
        return max(1, int(cap))
    return min(8, os.cpu_count() or 1)


def _cell_weights(cx, by_volume: bool) -> np.ndarray:
    ids = cx.maximal_ids
    if not by_volume:
        return np.full(len(ids), 1.0 / len(ids))
    # maximal cells are unit cubes of their own dimension, measured in that
    # dimension each has volume 1, so the weighting coincides with uniform
    vols = np.array([1.0 for _ in ids])
    return vols / vols.sum()


def _one_sample(A: PointSetA, seed: int, index: int, eps: float,
                prob: np.ndarray) -> HeatMapSample:
    cx = A.cx
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
    ids = cx.maximal_ids
    cid = ids[int(rng.choice(len(ids), p=prob))]
    lo, hi = cx.bounds(cid)
    pt = tuple(np.asarray(lo, dtype=float) + (np.asarray(hi, dtype=float) - np.asarray(lo, dtype=float)) * rng.random(cx.ambient_dim))
    report = mean_deficit(A, pt)
    return HeatMapSample(cid, cx.snap(pt), report.value, bool(report.value < eps))


def run_heatmap(A: PointSetA, samples: int, seed: int, eps: float,
                by_volume: bool = False, threads: int = None) -> list:
    """Draw ``samples`` deficit evaluations; deterministic in ``seed``."""
    if samples < 1:
        raise ValueError("need at least one sample")
    prob = _cell_weights(A.cx, by_volume)
    workers = threads if threads is not None else worker_count()
    if workers <= 1:
        return [_one_sample(A, seed, i, eps, prob) for i in range(samples)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futs = [pool.submit(_one_sample, A, seed, i, eps, prob) for i in range(samples)]
        return [f.result() for f in futs]


def segment_probes(A: PointSetA, p, q, count: int, eps: float) -> list:
    """Deficit rows at ``count`` evenly spaced points strictly inside [p, q].

    The probe at fraction j/(count+1) is evaluated through the full
    boundary-aware deficit path; the straight segment must stay inside the
    complex.
    """
    cx = A.cx
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    out = []
    for j in range(1, count + 1):
        t = j / (count + 1)
        loc = cx.locate(tuple(p + t * (q - p)))
        report = mean_deficit(A, loc)
        out.append(HeatMapSample(loc.minimal_cell, loc.coords, report.value,
                                 bool(report.value < eps)))
    return out


def to_csv(samples: list, ambient_dim: int) -> str:
    buf = io.StringIO()
    cols = ",".join(f"x{i}" for i in range(ambient_dim))
    buf.write(f"cell,{cols},deficit,decision\n")
    for s in samples:
        coords = ",".join("%.12g" % c for c in s.point)
        buf.write(f"{s.cell},{coords},{'%.12g' % s.deficit},{1 if s.decision else 0}\n")
    return buf.getvalue()
