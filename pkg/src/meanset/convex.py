"""Convex kernels shared by the geometry modules.

Everything in here works on tiny dense problems (ambient dimension of a
handful, point sets of at most a few dozen), so the solvers favour exact
small linear algebra and finite enumeration over general-purpose iterative
machinery.  The public pieces are:

* :class:`SignCone` -- per-coordinate sign-constraint cones (tangent and
  normal cones of axis-aligned boxes live here).
* :func:`min_norm_point` -- Wolfe's algorithm for the nearest point of a
  convex hull to an anchor.
* :func:`box_segment_min` -- shortest broken path from ``a`` to ``b``
  through an axis-aligned box.
* :class:`Singleton` / :class:`ConeBall` -- compact convex sets used as
  one-sided derivative models, supporting exact linear maximisation.
* :func:`feasibility_min_norm` -- fully corrective Frank-Wolfe distance
  between a convex hull (or Minkowski sum) and a sign cone.
* :func:`shared_certificate_weights` -- alternating solve for a single
  weight vector feasible for several conic problems at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

__all__ = [
    "FREE",
    "ZERO",
    "NONNEG",
    "NONPOS",
    "SignCone",
    "MinNormResult",
    "min_norm_point",
    "box_segment_min",
    "Singleton",
    "ConeBall",
    "ProductSet",
    "FeasibilityResult",
    "feasibility_min_norm",
    "simplex_least_squares",
    "shared_certificate_weights",
    "ConvergenceError",
]


class ConvergenceError(RuntimeError):
    """An iterative solve failed to reach its target tolerance."""


# ---------------------------------------------------------------------------
# sign cones

FREE = "free"
ZERO = "zero"
NONNEG = "nonneg"
NONPOS = "nonpos"

_ALL_SIGNS = (FREE, ZERO, NONNEG, NONPOS)
_POLAR = {FREE: ZERO, ZERO: FREE, NONNEG: NONPOS, NONPOS: NONNEG}
_NEGATE = {FREE: FREE, ZERO: ZERO, NONNEG: NONPOS, NONPOS: NONNEG}


@dataclass(frozen=True)
class SignCone:
    """A cone cut out by per-coordinate sign constraints.

    Each coordinate is one of ``free`` (unconstrained), ``zero`` (pinned to
    0), ``nonneg`` or ``nonpos``.  Tangent and normal cones of axis-aligned
    boxes are exactly of this shape, which keeps projection and polarity
    exact coordinate-wise operations.
    """

    signs: tuple

    def __post_init__(self):
        for s in self.signs:
            if s not in _ALL_SIGNS:
                raise ValueError(f"unknown sign constraint {s!r}")

    @property
    def dim(self) -> int:
        return len(self.signs)

    def contains(self, v, tol: float = 1e-9) -> bool:
        for s, vi in zip(self.signs, v):
            if s == ZERO and abs(vi) > tol:
                return False
            if s == NONNEG and vi < -tol:
                return False
            if s == NONPOS and vi > tol:
                return False
        return True

    def project(self, v) -> np.ndarray:
        """Euclidean projection, a per-coordinate clamp."""
        out = np.array(v, dtype=float)
        for i, s in enumerate(self.signs):
            if s == ZERO:
                out[i] = 0.0
            elif s == NONNEG:
                if out[i] < 0.0:
                    out[i] = 0.0
            elif s == NONPOS:
                if out[i] > 0.0:
                    out[i] = 0.0
        return out

    def polar(self) -> "SignCone":
        return SignCone(tuple(_POLAR[s] for s in self.signs))

    def negate(self) -> "SignCone":
        return SignCone(tuple(_NEGATE[s] for s in self.signs))


# ---------------------------------------------------------------------------
# Wolfe min-norm point


@dataclass(frozen=True)
class MinNormResult:
    point: np.ndarray   # nearest point of the hull to the anchor
    weights: np.ndarray  # convex weights over the input points
    gap: float          # max_a <x, x - q_a>, a bound on suboptimality


def _affine_min_norm(Q: np.ndarray) -> np.ndarray:
    """Affine-hull minimiser weights for the rows of ``Q`` (may be negative)."""
    k = Q.shape[0]
    if k == 1:
        return np.ones(1)
    G = Q @ Q.T
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = G
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    try:
        sol = np.linalg.solve(kkt, rhs)
        bad = not np.all(np.isfinite(sol)) or abs(sol[:k].sum() - 1.0) > 1e-6
    except np.linalg.LinAlgError:
        bad = True
        sol = None
    if bad:
        sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
    v = sol[:k]
    s = v.sum()
    if abs(s - 1.0) > 1e-12 and abs(s) > 1e-12:
        v = v / s
    return v


def min_norm_point(points, anchor=None, tol: float = 1e-12, max_iter=None) -> MinNormResult:
    """Nearest point of ``conv(points)`` to ``anchor`` (Wolfe's algorithm).

    Returns the optimal point, convex weights over the inputs, and the
    final variational gap ``max_a <x-anchor, (x-anchor) - (p_a-anchor)>``
    which is nonpositive-up-to-tolerance at the optimum.
    """
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P[None, :]
    m = P.shape[0]
    if anchor is None:
        Q = P.copy()
        anchor_arr = np.zeros(P.shape[1])
    else:
        anchor_arr = np.asarray(anchor, dtype=float)
        Q = P - anchor_arr
    sq = np.einsum("ij,ij->i", Q, Q)
    scale = max(1.0, float(sq.max(initial=0.0)))
    if max_iter is None:
        max_iter = 64 * m + 256

    corral = [int(np.argmin(sq))]
    w = np.ones(1)
    x = Q[corral[0]].copy()
    for _ in range(max_iter):
        dots = Q @ x
        xx = float(x @ x)
        j = int(np.argmin(dots))
        if xx - dots[j] <= tol * scale:
            break
        if j in corral:
            break  # numerically stuck; gap is reported below
        corral.append(j)
        w = np.append(w, 0.0)
        while True:
            v = _affine_min_norm(Q[corral])
            if np.all(v > 1e-12):
                w = v
                break
            # step from w toward v until the first weight hits zero
            theta = 1.0
            for i in range(len(corral)):
                if v[i] <= 1e-12 and w[i] > v[i]:
                    theta = min(theta, w[i] / (w[i] - v[i]))
            w = (1.0 - theta) * w + theta * v
            w[w < 1e-13] = 0.0
            keep = w > 0.0
            corral = [c for c, k in zip(corral, keep) if k]
            w = w[keep]
            w = w / w.sum()
        x = w @ Q[corral]

    weights = np.zeros(m)
    for c, wi in zip(corral, w):
        weights[c] += wi
    dots = Q @ x
    gap = float((x @ x) - dots.min())
    return MinNormResult(point=x + anchor_arr, weights=weights, gap=gap)


# ---------------------------------------------------------------------------
# shortest path from a to b through an axis-aligned box


def _path_value(a, b, x) -> float:
    return float(np.linalg.norm(x - a) + np.linalg.norm(x - b))


def box_segment_min(a, b, lo, hi):
    """Minimise ``|a-x| + |x-b|`` over the box ``{lo <= x <= hi}``.

    Returns ``(value, x)``.  When the straight segment meets the box the
    value is exactly ``|a-b|`` and ties among on-segment minimisers are
    broken by the point of smallest Euclidean norm.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    n = a.shape[0]
    d = b - a

    # fast path: clip the segment against the box slabs
    t0, t1 = 0.0, 1.0
    hit = True
    for i in range(n):
        di = d[i]
        if abs(di) <= 1e-14:
            if a[i] < lo[i] - 1e-12 or a[i] > hi[i] + 1e-12:
                hit = False
                break
        else:
            s0 = (lo[i] - a[i]) / di
            s1 = (hi[i] - a[i]) / di
            if s0 > s1:
                s0, s1 = s1, s0
            if s0 > t0:
                t0 = s0
            if s1 < t1:
                t1 = s1
            if t0 > t1 + 1e-12:
                hit = False
                break
    if hit and t0 <= t1 + 1e-12:
        if t1 < t0:
            t0 = t1 = 0.5 * (t0 + t1)
        dd = float(d @ d)
        if dd <= 0.0:
            tt = t0
        else:
            tt = min(max(-float(a @ d) / dd, t0), t1)
        x = np.clip(a + tt * d, lo, hi)
        return float(np.linalg.norm(d)), x

    if np.linalg.norm(d) <= 1e-13:
        x = np.clip(a, lo, hi)
        return _path_value(a, b, x), x

    freed = [i for i in range(n) if hi[i] - lo[i] > 1e-12]
    base = 0.5 * (lo + hi)  # equals lo == hi on pinned coordinates

    if not freed:
        return _path_value(a, b, base), base

    if len(freed) == 1:
        # reflection closed form: flatten both perpendicular offsets into a
        # plane, the optimal crossing splits [a_j, b_j] by the offset ratio
        j = freed[0]
        ca = cb = 0.0
        for i in range(n):
            if i != j:
                ca += (a[i] - base[i]) ** 2
                cb += (b[i] - base[i]) ** 2
        P = math.sqrt(ca)
        Q = math.sqrt(cb)
        alpha, beta = float(a[j]), float(b[j])
        if P + Q <= 1e-15:
            m1, m2 = min(alpha, beta), max(alpha, beta)
            l1, l2 = max(m1, lo[j]), min(m2, hi[j])
            if l1 <= l2:
                t = min(max(0.0, l1), l2)
            else:
                t = hi[j] if hi[j] < m1 else lo[j]
        else:
            t = min(max((alpha * Q + beta * P) / (P + Q), lo[j]), hi[j])
        x = base.copy()
        x[j] = t
        return _path_value(a, b, x), x

    # several free coordinates: quasi-Newton with an exact-Newton polish
    def fun_grad(x):
        ra = x - a
        rb = x - b
        na = float(np.linalg.norm(ra))
        nb = float(np.linalg.norm(rb))
        g = ra / max(na, 1e-18) + rb / max(nb, 1e-18)
        return na + nb, g

    bounds = [(lo[i], hi[i]) for i in range(n)]
    starts = [np.clip(0.5 * (a + b), lo, hi)]
    y = np.clip(a, lo, hi)
    dd = float(d @ d)
    tproj = min(max(float((y - a) @ d) / dd, 0.0), 1.0)
    starts.append(np.clip(a + tproj * d, lo, hi))
    best_val, best_x = math.inf, None
    for x0 in starts:
        res = _scipy_minimize(
            fun_grad, x0, jac=True, method="L-BFGS-B", bounds=bounds,
            options={"ftol": 1e-18, "gtol": 1e-14, "maxiter": 300},
        )
        if res.fun < best_val:
            best_val, best_x = float(res.fun), np.asarray(res.x)
    x = np.clip(best_x, lo, hi)

    # projected Newton polish for the last digits
    for _ in range(12):
        ra = x - a
        rb = x - b
        na = float(np.linalg.norm(ra))
        nb = float(np.linalg.norm(rb))
        if na < 1e-14 or nb < 1e-14:
            break
        u = ra / na
        v = rb / nb
        g = u + v
        free_idx = []
        for i in freed:
            at_lo = x[i] <= lo[i] + 1e-13
            at_hi = x[i] >= hi[i] - 1e-13
            if (at_lo and g[i] > 0) or (at_hi and g[i] < 0):
                continue
            free_idx.append(i)
        pg = math.sqrt(sum(g[i] ** 2 for i in free_idx))
        if pg <= 1e-13:
            break
        H = (np.eye(n) - np.outer(u, u)) / na + (np.eye(n) - np.outer(v, v)) / nb
        Hf = H[np.ix_(free_idx, free_idx)] + 1e-14 * np.eye(len(free_idx))
        gf = np.array([g[i] for i in free_idx])
        try:
            step = np.linalg.solve(Hf, -gf)
        except np.linalg.LinAlgError:
            break
        f0 = na + nb
        improved = False
        scale_step = 1.0
        for _ in range(25):
            xt = x.copy()
            for k, i in enumerate(free_idx):
                xt[i] = x[i] + scale_step * step[k]
            xt = np.clip(xt, lo, hi)
            ft = _path_value(a, b, xt)
            if ft < f0 - 1e-18:
                x = xt
                improved = True
                break
            scale_step *= 0.5
        if not improved:
            break
    return _path_value(a, b, x), x


# ---------------------------------------------------------------------------
# compact convex sets with exact support oracles


@dataclass(frozen=True)
class Singleton:
    """A one-point set ``{scale * g}`` with ``|g| <= 1``."""

    g: tuple
    scale: float = 1.0

    def __post_init__(self):
        if np.linalg.norm(self.g) > 1.0 + 1e-7:
            raise ValueError("singleton derivative model must lie in the unit ball")

    def support(self, d) -> float:
        return self.scale * float(np.dot(self.g, d))

    def support_point(self, d) -> np.ndarray:
        return self.scale * np.asarray(self.g, dtype=float)

    def anchor_point(self) -> np.ndarray:
        return self.scale * np.asarray(self.g, dtype=float)

    def scaled(self, c: float) -> "Singleton":
        return Singleton(self.g, self.scale * c)

    def simplify(self):
        return self


@dataclass(frozen=True)
class ConeBall:
    """The set ``scale * ((N - u) ∩ B(0,1))`` for a sign cone ``N``, ``|u| = 1``.

    Support maximisation is exact: enumerate which sign-constrained
    coordinates of ``n`` are pinned to zero, solve the remaining ball
    restriction in closed form, and keep the best sign-feasible candidate.
    """

    u: tuple
    cone: SignCone
    scale: float = 1.0

    def __post_init__(self):
        nu = np.linalg.norm(self.u)
        if abs(nu - 1.0) > 1e-7:
            raise ValueError("cone-ball offset must be a unit vector")

    def _argmax_shift(self, d: np.ndarray) -> np.ndarray:
        """Maximise ``<d, n>`` over ``n in N`` with ``|n - u| <= 1``."""
        u = np.asarray(self.u, dtype=float)
        signs = self.cone.signs
        n_dim = len(signs)
        pinned = [i for i in range(n_dim) if signs[i] == ZERO]
        signed = [i for i in range(n_dim) if signs[i] in (NONNEG, NONPOS)]
        best_val = 0.0
        best_n = np.zeros(n_dim)  # n = 0 is always feasible: |0 - u| = 1
        for mask in range(1 << len(signed)):
            zeroed = list(pinned)
            live = []
            for k, i in enumerate(signed):
                if mask >> k & 1:
                    zeroed.append(i)
                else:
                    live.append(i)
            live += [i for i in range(n_dim) if signs[i] == FREE]
            rad2 = 1.0 - sum(u[i] * u[i] for i in zeroed)
            if rad2 < -1e-12:
                continue
            rad = math.sqrt(max(rad2, 0.0))
            dl = np.array([d[i] for i in live])
            nd = float(np.linalg.norm(dl))
            if nd <= 1e-15:
                continue
            cand = np.zeros(n_dim)
            ok = True
            val = 0.0
            for k, i in enumerate(live):
                ni = u[i] + rad * dl[k] / nd
                if signs[i] == NONNEG and ni < -1e-12:
                    ok = False
                    break
                if signs[i] == NONPOS and ni > 1e-12:
                    ok = False
                    break
                cand[i] = ni
                val += d[i] * ni
            if ok and val > best_val + 1e-15:
                best_val = val
                best_n = cand
        return best_n

    def support_point(self, d) -> np.ndarray:
        d = np.asarray(d, dtype=float)
        n = self._argmax_shift(d)
        return self.scale * (n - np.asarray(self.u, dtype=float))

    def support(self, d) -> float:
        d = np.asarray(d, dtype=float)
        return float(np.dot(d, self.support_point(d)))

    def anchor_point(self) -> np.ndarray:
        return -self.scale * np.asarray(self.u, dtype=float)

    def scaled(self, c: float) -> "ConeBall":
        return ConeBall(self.u, self.cone, self.scale * c)

    def simplify(self):
        """Collapse to a :class:`Singleton` when the set has zero diameter."""
        n_dim = len(self.u)
        pts = []
        for i in range(n_dim):
            e = np.zeros(n_dim)
            e[i] = 1.0
            pts.append(self.support_point(e))
            pts.append(self.support_point(-e))
        pts = np.array(pts)
        diam = 0.0
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                diam = max(diam, float(np.linalg.norm(pts[i] - pts[j])))
        if diam <= 1e-9:
            centre = pts.mean(axis=0) / max(self.scale, 1e-300)
            return Singleton(tuple(centre), self.scale)
        return self


# ---------------------------------------------------------------------------
# distance from a hull / Minkowski sum to a sign cone


@dataclass(frozen=True)
class ProductSet:
    """A product of convex model sets, one per equally-sized block.

    Supports the same atom interface as its factors; the support point of a
    stacked direction is the stack of blockwise support points.
    """

    blocks: tuple
    block_dim: int

    def support_point(self, d) -> np.ndarray:
        d = np.asarray(d, dtype=float)
        n = self.block_dim
        return np.concatenate([
            blk.support_point(d[i * n:(i + 1) * n]) for i, blk in enumerate(self.blocks)
        ])

    def support(self, d) -> float:
        d = np.asarray(d, dtype=float)
        return float(np.dot(d, self.support_point(d)))

    def anchor_point(self) -> np.ndarray:
        return np.concatenate([blk.anchor_point() for blk in self.blocks])

    def scaled(self, c: float) -> "ProductSet":
        return ProductSet(tuple(b.scaled(c) for b in self.blocks), self.block_dim)

    def simplify(self):
        return self


@dataclass(frozen=True)
class FeasibilityResult:
    residual: float       # distance achieved
    point: np.ndarray     # optimal point of the search set
    cone_point: np.ndarray  # its projection onto the target cone
    weights: np.ndarray   # convex weights over the sets
    selectors: tuple      # per-set components q_a with point = sum q_a
    status: str           # "zero" | "positive" | "stalled"
    iterations: int
    gap: float
    history: tuple        # squared residual after each outer iteration


def feasibility_min_norm(sets, target: SignCone, weights=None,
                         tol: float = 1e-8, max_iter: int = 100000) -> FeasibilityResult:
    """Distance between a set built from ``sets`` and the cone ``target``.

    With ``weights=None`` the search set is ``conv(union of the sets)`` and
    the convex weights are free; with a fixed weight vector it is the
    Minkowski sum of the scaled sets.  Uses fully corrective Frank-Wolfe:
    each outer round adds the support atom of the current gradient and then
    re-solves exactly over the collected atoms (alternating Wolfe min-norm
    against the cone projection).  The squared residual is nonincreasing.
    """
    m = len(sets)
    if m == 0:
        raise ValueError("need at least one set")
    fixed = weights is not None
    if fixed:
        wv = np.asarray(weights, dtype=float)
        if wv.shape != (m,) or wv.min() < -1e-12:
            raise ValueError("weights must be a nonnegative vector, one per set")
    n_dim = target.dim

    def lmo(direction):
        """Minimise <direction, x> over the search set; return (point, parts)."""
        if fixed:
            parts = []
            total = np.zeros(n_dim)
            for k in range(m):
                if wv[k] <= 1e-15:
                    parts.append(np.zeros(n_dim))
                    continue
                p = wv[k] * sets[k].support_point(-direction)
                parts.append(p)
                total = total + p
            return total, tuple(parts)
        best = None
        for k in range(m):
            p = sets[k].support_point(-direction)
            val = float(np.dot(direction, p))
            if best is None or val < best[0] - 1e-15:
                best = (val, p, k)
        _, p, k = best
        parts = tuple(p if j == k else None for j in range(m))
        return p, parts

    # initial atom: canonical points
    if fixed:
        parts0 = tuple(wv[k] * sets[k].anchor_point() for k in range(m))
        z = np.sum(parts0, axis=0) if m > 1 else np.array(parts0[0])
        atoms = [(np.asarray(z, dtype=float), parts0)]
    else:
        p0 = sets[0].anchor_point()
        atoms = [(np.asarray(p0, dtype=float), tuple(p0 if j == 0 else None for j in range(m)))]
    z = atoms[0][0].copy()
    lam = np.ones(1)

    history = []
    gap = math.inf
    status = "stalled"
    it = 0
    stall = 0
    f_last = math.inf
    while it < max_iter:
        it += 1
        mpt = target.project(z)
        g = z - mpt
        f = float(g @ g)
        history.append(f)
        if f <= max(1e-22, 0.25 * tol * tol):
            gap = 0.0
            break
        # rounds that no longer move the squared residual cannot help
        if f_last - f <= 1e-15 * max(f, 1e-12):
            stall += 1
            if stall >= 10:
                mpt = target.project(z)
                g = z - mpt
                gap = 2.0 * float(g @ (z - lmo(g)[0]))
                break
        else:
            stall = 0
        f_last = f
        s, parts = lmo(g)
        gap = 2.0 * float(g @ (z - s))
        if gap <= max(1e-18, 1e-13 * f):
            break
        atoms.append((np.asarray(s, dtype=float), parts))
        pts = np.array([p for p, _ in atoms])
        f_prev = f
        lam = None
        for _ in range(80):
            mpt = target.project(z)
            res = min_norm_point(pts, anchor=mpt, tol=1e-14)
            z = res.point
            lam = res.weights
            mpt = target.project(z)
            f_new = float((z - mpt) @ (z - mpt))
            if f_prev - f_new <= 1e-19 * max(1.0, f_new):
                f_prev = f_new
                break
            f_prev = f_new
        keep = lam > 1e-14
        atoms = [a for a, k in zip(atoms, keep) if k]
        lam = lam[keep]
        if lam.sum() > 0:
            lam = lam / lam.sum()
        if not atoms:  # defensive; cannot normally happen
            atoms = [(z.copy(), parts)]
            lam = np.ones(1)

    mpt = target.project(z)
    g = z - mpt
    f = float(g @ g)
    residual = math.sqrt(max(f, 0.0))

    # reconstruct weights and per-set components from the atom decomposition
    if fixed:
        v_out = wv.copy()
        selectors = [np.zeros(n_dim) for _ in range(m)]
        for (pt, parts), li in zip(atoms, lam):
            for k in range(m):
                selectors[k] = selectors[k] + li * parts[k]
    else:
        v_out = np.zeros(m)
        selectors = [np.zeros(n_dim) for _ in range(m)]
        for (pt, parts), li in zip(atoms, lam):
            for k in range(m):
                if parts[k] is not None:
                    v_out[k] += li
                    selectors[k] = selectors[k] + li * parts[k]

    if residual <= tol:
        status = "zero"
    elif f - gap > tol * tol:
        status = "positive"
    else:
        status = "stalled"
    return FeasibilityResult(
        residual=residual,
        point=z,
        cone_point=mpt,
        weights=v_out,
        selectors=tuple(selectors),
        status=status,
        iterations=it,
        gap=gap,
        history=tuple(history),
    )


# ---------------------------------------------------------------------------
# simplex-constrained least squares (exact active-set enumeration)


def simplex_least_squares(B: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Minimise ``|B v - y|`` over the probability simplex, exactly.

    Enumerates the support of the optimum (columns allowed to be nonzero),
    solves each equality-constrained least squares via its KKT system, and
    keeps the best feasible candidate.  Intended for a handful of columns.
    """
    B = np.asarray(B, dtype=float)
    y = np.asarray(y, dtype=float)
    m = B.shape[1]
    if m > 16:
        raise ValueError("simplex_least_squares is exponential in columns; got too many")
    best_obj = math.inf
    best_v = None
    for mask in range(1, 1 << m):
        idx = [i for i in range(m) if mask >> i & 1]
        Bi = B[:, idx]
        k = len(idx)
        G = Bi.T @ Bi + 1e-14 * np.eye(k)
        kkt = np.zeros((k + 1, k + 1))
        kkt[:k, :k] = G
        kkt[:k, k] = 1.0
        kkt[k, :k] = 1.0
        rhs = np.zeros(k + 1)
        rhs[:k] = Bi.T @ y
        rhs[k] = 1.0
        try:
            sol = np.linalg.solve(kkt, rhs)
        except np.linalg.LinAlgError:
            sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
        vi = sol[:k]
        if not np.all(np.isfinite(vi)) or vi.min() < -1e-9:
            continue
        v = np.zeros(m)
        v[idx] = np.clip(vi, 0.0, None)
        s = v.sum()
        if s <= 0:
            continue
        v = v / s
        obj = float(np.linalg.norm(B @ v - y) ** 2)
        if obj < best_obj - 1e-18:
            best_obj = obj
            best_v = v
    if best_v is None:  # all candidates degenerate; fall back to uniform
        best_v = np.full(m, 1.0 / m)
    return best_v


# ---------------------------------------------------------------------------
# one weight vector feasible for several conic problems at once


def shared_certificate_weights(problems, tol: float = 1e-8, max_iter: int = 20000):
    """Find simplex weights ``v`` with ``sum_a v_a S_a^C`` meeting cone ``M_C`` for every ``C``.

    ``problems`` is a list of ``(sets, target)`` pairs sharing the same set
    count.  Stacking each set's copies across problems into one block vector
    turns the joint search into a single free-weight conic feasibility: a
    convex combination of the stacked sets uses the same ``v`` in every
    block, so one Frank-Wolfe run solves all problems simultaneously.

    Returns ``(v, residuals)`` with one residual per problem; raises
    :class:`ConvergenceError` when the stacked residual misses the tolerance.
    """
    if not problems:
        raise ValueError("need at least one conic problem")
    m = len(problems[0][0])
    for sets, _ in problems:
        if len(sets) != m:
            raise ValueError("all problems must share the same number of sets")
    n = problems[0][1].dim

    stacked = [
        ProductSet(tuple(sets[k] for sets, _ in problems), n) for k in range(m)
    ]
    signs = []
    for _, M in problems:
        signs.extend(M.signs)
    target = SignCone(tuple(signs))

    r = feasibility_min_norm(stacked, target, tol=tol, max_iter=max_iter)
    res = []
    for j, (_, M) in enumerate(problems):
        zc = r.point[j * n:(j + 1) * n]
        res.append(float(np.linalg.norm(zc - M.project(zc))))
    if max(res) > tol:
        raise ConvergenceError(
            "no shared weight vector reached tolerance "
            f"{tol:g}; per-problem residuals {res}"
        )
    v = np.clip(r.weights, 0.0, None)
    s = v.sum()
    v = v / s if s > 0 else np.full(m, 1.0 / m)
    return v, res
