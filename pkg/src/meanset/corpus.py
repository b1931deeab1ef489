"""Bundled example complexes with their point sets and frozen expectations."""

from __future__ import annotations

import json
from importlib import resources

from .complexes import ComplexError, CubicalComplex, load_complex
from .recognition import PointSetA

BUNDLED = ("tripod", "squares3", "squares5", "cube_square", "quadrant_window")

__all__ = ["BUNDLED", "data_path", "load_point_set", "load_bundled", "expected"]


def data_path(filename: str):
    """Filesystem path of a bundled data file."""
    p = resources.files("meanset").joinpath("data", filename)
    if not p.is_file():
        raise FileNotFoundError(f"no bundled data file named {filename!r}")
    return str(p)


def load_point_set(cx: CubicalComplex, path) -> PointSetA:
    """Read a labelled point set ``{"points": {label: coords}}`` from JSON."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict) or "points" not in doc:
        raise ComplexError(f"{path}: point set document needs a 'points' object")
    pts = doc["points"]
    if not isinstance(pts, dict) or not pts:
        raise ComplexError(f"{path}: 'points' must be a nonempty object")
    coords = [tuple(float(c) for c in v) for v in pts.values()]
    return PointSetA.from_coords(cx, coords, labels=list(pts.keys()))


def load_bundled(name: str):
    """The bundled complex and point set for one corpus entry."""
    if name not in BUNDLED:
        raise KeyError(f"unknown corpus entry {name!r}; have {', '.join(BUNDLED)}")
    cx = load_complex(data_path(f"{name}.json"))
    A = load_point_set(cx, data_path(f"{name}_points.json"))
    return cx, A


def expected(name: str) -> dict:
    """Frozen expected results for one corpus entry."""
    if name not in BUNDLED:
        raise KeyError(f"unknown corpus entry {name!r}; have {', '.join(BUNDLED)}")
    with open(data_path(f"{name}_expected.json"), "r", encoding="utf-8") as fh:
        return json.load(fh)
