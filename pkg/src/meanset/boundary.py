"""Membership certification at cell boundaries.

At a query point on a face shared by several maximal cells the distance
functions are only directionally differentiable.  Inside each maximal cell
``C`` the one-sided derivative of the distance to a set point ``a`` is the
support function of a compact convex model set: either a single unit
vector (geodesic leaves through the cell interior) or a cone-ball slice
(geodesic leaves through a face).  The query is a mean exactly when, for
every ``C``, some convex combination of the model sets meets the negated
normal cone of ``C`` -- a conic feasibility problem solved exactly by
:func:`meanset.convex.feasibility_min_norm`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geodesics
from .complexes import CubicalComplex, LocatedPoint, TangentConeDescriptor
from .convex import (
    ConeBall,
    ConvergenceError,
    Singleton,
    box_segment_min,
    feasibility_min_norm,
    shared_certificate_weights,
)
from .recognition import (
    CertificateError,
    DeficitReport,
    MembershipCertificate,
    NonMembershipCertificate,
    PointSetA,
    RecognitionResult,
    recognize_interior,
)

__all__ = [
    "DirectionalDerivativeModel",
    "PCOutcome",
    "build_model",
    "build_models",
    "directional_derivative",
    "solve_PC",
    "recognize_general",
    "general_deficit",
    "conic_residual",
    "consistency_check_relint",
]


@dataclass(frozen=True)
class DirectionalDerivativeModel:
    """One-sided derivative data of ``d(., a)`` at a point, within one cell."""

    label: str
    cell: str                # maximal cell the model is valid in
    distance: float          # d_a at the query point
    probe: tuple             # first geodesic breakpoint toward a
    via_cell: str            # minimal cell of the initial geodesic segment
    gate: str                # shared face of cell and via_cell
    subdiff: object          # Singleton or ConeBall
    tangent: TangentConeDescriptor


def build_model(A: PointSetA, loc: LocatedPoint, cell_id: str, label: str,
                _geo=None) -> DirectionalDerivativeModel:
    cx = A.cx
    g = _geo if _geo is not None else geodesics.geodesic(cx, loc, A.points[label])
    if g.length <= 1e-12:
        raise CertificateError("derivative model undefined at a set point")
    x = np.asarray(loc.coords, dtype=float)
    x_a, via = geodesics.initial_direction(cx, loc, A.points[label])
    gate_cell = cx.face_between(cell_id, via)
    if gate_cell is None:
        raise CertificateError(
            f"cells {cell_id} and {via} share no face at the query point"
        )
    lo, hi = gate_cell.bounds()
    xa = np.asarray(x_a, dtype=float)
    _, xstar = box_segment_min(xa, x, lo, hi)
    if np.linalg.norm(xstar - x) > 1e-7:
        gdir = (x - xstar) / np.linalg.norm(x - xstar)
        sub = Singleton(tuple(gdir))
    else:
        u = (xa - x) / np.linalg.norm(xa - x)
        normal = cx.normal_cone(gate_cell.ident, loc.coords)
        sub = ConeBall(tuple(u), normal)
    return DirectionalDerivativeModel(
        label=label,
        cell=cell_id,
        distance=g.length,
        probe=tuple(x_a),
        via_cell=via,
        gate=gate_cell.ident,
        subdiff=sub,
        tangent=cx.tangent_cone(cell_id, loc.coords),
    )


def build_models(A: PointSetA, loc: LocatedPoint, cell_id: str) -> list:
    cx = A.cx
    out = []
    for lbl in A.labels:
        g = geodesics.geodesic(cx, loc, A.points[lbl])
        out.append(build_model(A, loc, cell_id, lbl, _geo=g))
    return out


def directional_derivative(model: DirectionalDerivativeModel, u) -> float:
    """One-sided derivative of ``d(., a)`` along ``u`` from within the cell.

    Returns ``+inf`` for directions leaving the cell's tangent cone.
    Positively homogeneous in ``u``.
    """
    u = np.asarray(u, dtype=float)
    if not model.tangent.contains(u, 1e-9):
        return math.inf
    return float(model.subdiff.support(u))


@dataclass(frozen=True)
class PCOutcome:
    """Result of the per-cell conic feasibility problem."""

    cell: str
    value0: bool
    residual: float
    weights: np.ndarray       # convex weights over the set labels
    direction: tuple = None   # unit decrease direction when infeasible
    margin: float = None      # max one-sided derivative along that direction


def solve_PC(A: PointSetA, xbar, cell_id: str, tol: float = 1e-8,
             _models=None) -> PCOutcome:
    """Decide whether the first-order mean condition holds in one cell.

    Feasible (value 0): some convex combination of the derivative model
    sets meets the negated normal cone.  Infeasible: returns a unit
    direction in the tangent cone along which every ``d_a`` strictly
    decreases, with rate at least half the residual.
    """
    cx = A.cx
    loc = cx.locate(xbar)
    models = _models if _models is not None else build_models(A, loc, cell_id)
    sets = [m.subdiff for m in models]
    tangent = models[0].tangent
    target = tangent.cone.polar().negate()
    res = feasibility_min_norm(sets, target, tol=tol)
    if res.status == "stalled":
        raise ConvergenceError(
            f"conic feasibility stalled in cell {cell_id} "
            f"(residual {res.residual:g}, gap {res.gap:g})"
        )
    if res.residual <= tol:
        return PCOutcome(cell_id, True, res.residual, res.weights)

    rho = res.residual
    r = np.asarray(res.point) - np.asarray(res.cone_point)
    u = tangent.cone.project(-r)
    nu = np.linalg.norm(u)
    if nu <= 1e-15:
        raise CertificateError(
            f"degenerate descent direction in cell {cell_id}; residual {rho:g}"
        )
    u = u / nu
    margin = max(directional_derivative(m, u) for m in models)
    if not margin <= -0.5 * rho:
        raise CertificateError(
            f"descent direction check failed in cell {cell_id}: "
            f"max derivative {margin:g} vs residual {rho:g}"
        )
    return PCOutcome(cell_id, False, rho, res.weights,
                     direction=tuple(u), margin=margin)


def _witness_from_direction(A: PointSetA, loc: LocatedPoint, cell_id: str,
                            direction) -> NonMembershipCertificate:
    cx = A.cx
    x = np.asarray(loc.coords, dtype=float)
    u = np.asarray(direction, dtype=float)
    d_ref = A.distances_from(loc)
    cell = cx.cell(cell_id)
    step = u.copy()
    for _ in range(60):
        cand = x + step
        if cell.contains(cand):
            d_cand = A.distances_from(tuple(cand))
            margins = {l: d_ref[l] - d_cand[l] for l in A.labels}
            if min(margins.values()) > 0.0:
                return NonMembershipCertificate(tuple(cx.snap(cand)), margins)
        step = 0.5 * step
    raise CertificateError(
        f"failed to realise a strictly-closer witness from cell {cell_id}"
    )


def recognize_general(A: PointSetA, xbar, tol: float = 1e-8) -> RecognitionResult:
    """Decide membership at any query point, including cell boundaries.

    Runs the per-cell conic solve in every maximal cell containing the
    query.  All feasible: a single weight vector feasible for every cell
    simultaneously is extracted and converted into membership weights.
    Any infeasible cell yields a strictly-closer witness point.
    """
    cx = A.cx
    loc = cx.locate(xbar)
    hit = A.label_of(loc)
    if hit is not None:
        cert = MembershipCertificate(
            {l: (1.0 if l == hit else 0.0) for l in A.labels}, 0.0
        )
        return RecognitionResult("member", cert, {}, 0.0)

    cells = sorted(cx.maximal_cells_containing(loc))
    models = {cid: build_models(A, loc, cid) for cid in cells}
    outcomes = {}
    for cid in cells:
        outcomes[cid] = solve_PC(A, loc, cid, tol, _models=models[cid])
    per_cell = {cid: (o.value0, o.residual) for cid, o in outcomes.items()}

    for cid in cells:
        if not outcomes[cid].value0:
            cert = _witness_from_direction(A, loc, cid, outcomes[cid].direction)
            return RecognitionResult("non-member", cert, per_cell)

    problems = []
    target_by_cell = {}
    for cid in cells:
        sets = [m.subdiff for m in models[cid]]
        target = models[cid][0].tangent.cone.polar().negate()
        problems.append((sets, target))
        target_by_cell[cid] = target
    try:
        v, residuals = shared_certificate_weights(problems, tol=tol)
    except ConvergenceError as exc:
        raise CertificateError(
            f"per-cell problems are feasible but no shared weights found: {exc}"
        ) from exc
    dists = {m.label: m.distance for m in models[cells[0]]}
    w = np.array([v[i] / max(dists[l], 1e-300) for i, l in enumerate(A.labels)])
    w = np.clip(w, 0.0, None)
    w = w / w.sum()
    weights = {l: float(wi) for l, wi in zip(A.labels, w)}
    cert = MembershipCertificate(weights, 0.0)
    return RecognitionResult("member", cert, per_cell)


def general_deficit(A: PointSetA, xbar, with_weights: bool = True) -> DeficitReport:
    """Mean deficit at any query point via per-cell scaled conic distances.

    In each maximal cell containing the query the model sets are scaled by
    the distances ``d_a``; the deficit is the largest distance from the
    scaled hull to the negated normal cone, over the cells.
    """
    cx = A.cx
    loc = cx.locate(xbar)
    cells = sorted(cx.maximal_cells_containing(loc))
    per_cell = {}
    worst = (None, -1.0, None)
    for cid in cells:
        models = build_models(A, loc, cid)
        sets = [m.subdiff.scaled(m.distance) for m in models]
        target = models[0].tangent.cone.polar().negate()
        res = feasibility_min_norm(sets, target)
        per_cell[cid] = res.residual
        if res.residual > worst[1]:
            r = np.asarray(res.point) - np.asarray(res.cone_point)
            worst = (cid, res.residual, r)
    value = max(per_cell.values())

    weights = None
    direction = None
    if value <= 1e-8:
        if with_weights:
            try:
                result = recognize_general(A, loc)
                if result.decision == "member":
                    weights = result.certificate.weights
            except (CertificateError, ConvergenceError):
                weights = None
        value = max(value, 0.0)
    else:
        cid, rho, r = worst
        tangent = cx.tangent_cone(cid, loc.coords)
        u = tangent.cone.project(-r)
        nu = np.linalg.norm(u)
        if nu > 1e-15:
            direction = tuple(u / nu)
    return DeficitReport(value, per_cell, weights=weights, direction=direction)


def conic_residual(A: PointSetA, xbar, cell_id: str, weights: dict) -> float:
    """First-order residual of given membership weights within one cell.

    Rescales the weights by the distances (the conic problem sees
    ``v_a proportional to w_a * d_a``) and measures how far the resulting
    fixed combination is from the negated normal cone.
    """
    cx = A.cx
    loc = cx.locate(xbar)
    dists = A.distances_from(loc)
    pairs = [(l, weights.get(l, 0.0) * dists[l]) for l in A.labels]
    live = [(l, v) for l, v in pairs if v > 0.0]
    if not live:
        # all weight sits on coincident set points; stationarity is vacuous
        return 0.0
    models = [build_model(A, loc, cell_id, l) for l, _ in live]
    v = np.array([vi for _, vi in live])
    v = v / v.sum()
    sets = [m.subdiff for m in models]
    target = models[0].tangent.cone.polar().negate()
    res = feasibility_min_norm(sets, target, weights=v)
    return res.residual


def consistency_check_relint(A: PointSetA, xbar, tol: float = 1e-7):
    """Compare the interior and boundary code paths at an interior point.

    Returns ``(ok, interior_deficit, general_deficit_value, decisions)``.
    """
    report, cert = recognize_interior(A, xbar)
    gen = recognize_general(A, xbar)
    gdef = general_deficit(A, xbar, with_weights=False)
    d_int = "member" if cert.kind == "membership" else "non-member"
    ok = (d_int == gen.decision) and abs(report.value - gdef.value) <= tol
    return ok, report.value, gdef.value, (d_int, gen.decision)
