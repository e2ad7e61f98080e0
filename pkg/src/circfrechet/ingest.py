"""Reading measures from angle files, weighted CSVs and density specs."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from .measures import DEFAULT_GRID, CircularMeasure
from .uniqueness import boundary_hemisphere_measure


class InputError(ValueError):
    """Unreadable or malformed user input."""


def _to_radians(values, degrees: bool):
    return np.radians(values) if degrees else np.asarray(values, dtype=float)


def _parse_float(text: str, where: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise InputError(f"{where}: cannot parse {text.strip()!r} as a number") from None
    if not math.isfinite(v):
        raise InputError(f"{where}: value {text.strip()!r} is not finite")
    return v


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def read_angles(path, degrees: bool = False) -> np.ndarray:
    """One angle per line; ``#`` starts a comment, blank lines are skipped."""
    vals = []
    for lineno, line in enumerate(_read_text(path).splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if body:
            vals.append(_parse_float(body, f"{path}:{lineno}"))
    if not vals:
        raise InputError(f"{path}: no angles found")
    return _to_radians(np.array(vals), degrees)


def read_weighted_csv(path, degrees: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """CSV with header ``angle,weight``; weights are normalised."""
    rows = csv.reader(_read_text(path).splitlines())
    try:
        header = [h.strip().lower() for h in next(rows)]
    except StopIteration:
        raise InputError(f"{path}: empty file") from None
    if header != ["angle", "weight"]:
        raise InputError(f"{path}:1: expected header 'angle,weight', got {','.join(header)!r}")
    angles, weights = [], []
    for lineno, row in enumerate(rows, start=2):
        if not row or all(not c.strip() for c in row) or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 2:
            raise InputError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
        a = _parse_float(row[0], f"{path}:{lineno}")
        w = _parse_float(row[1], f"{path}:{lineno}")
        if w <= 0:
            raise InputError(f"{path}:{lineno}: weight must be positive, got {w}")
        angles.append(a)
        weights.append(w)
    if not angles:
        raise InputError(f"{path}: no rows")
    return _to_radians(np.array(angles), degrees), np.array(weights)


def _kwargs(body: str, spec: str, allowed: Tuple[str, ...]) -> Dict[str, float]:
    out: Dict[str, float] = {}
    if not body:
        return out
    for part in body.split(","):
        if "=" not in part:
            raise InputError(f"density spec {spec!r}: expected key=value, got {part!r}")
        k, v = (s.strip() for s in part.split("=", 1))
        if k not in allowed:
            raise InputError(f"density spec {spec!r}: unknown parameter {k!r} (allowed: {', '.join(allowed)})")
        out[k] = _parse_float(v, f"density spec {spec!r}")
    return out


def parse_density_spec(spec: str, grid: int = DEFAULT_GRID, degrees: bool = False) -> CircularMeasure:
    """Build a measure from a spec string.

    ``uniform``, ``vonmises:kappa=K,mu=M``, ``box:mu=M,width=W``,
    ``hemisphere:theta=T`` (the degenerate two-atom family) and
    ``mixture:SPEC@W;SPEC@W;...``. Angle parameters follow ``degrees``.
    """
    spec = spec.strip()
    name, _, body = spec.partition(":")
    name = name.strip().lower()
    ang = (lambda v: math.radians(v)) if degrees else (lambda v: v)
    try:
        if name == "uniform":
            if body.strip():
                raise InputError(f"density spec {spec!r}: uniform takes no parameters")
            return CircularMeasure.uniform(grid)
        if name == "vonmises":
            kw = _kwargs(body, spec, ("kappa", "mu"))
            if "kappa" not in kw:
                raise InputError(f"density spec {spec!r}: kappa is required")
            return CircularMeasure.vonmises(kw["kappa"], ang(kw.get("mu", 0.0)), grid)
        if name == "box":
            kw = _kwargs(body, spec, ("mu", "width"))
            if "width" not in kw:
                raise InputError(f"density spec {spec!r}: width is required")
            return CircularMeasure.box(ang(kw.get("mu", 0.0)), ang(kw["width"]), grid)
        if name == "hemisphere":
            kw = _kwargs(body, spec, ("theta",))
            return boundary_hemisphere_measure(ang(kw.get("theta", 0.0)))
        if name == "mixture":
            parts = [p for p in body.split(";") if p.strip()]
            if not parts:
                raise InputError(f"density spec {spec!r}: empty mixture")
            comps: List[Tuple[CircularMeasure, float]] = []
            for p in parts:
                sub, at, w = p.rpartition("@")
                if not at:
                    sub, w = p, "1"
                comps.append((parse_density_spec(sub, grid, degrees), _parse_float(w, f"mixture weight in {spec!r}")))
            return CircularMeasure.mixture(comps)
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"density spec {spec!r}: {exc}") from None
    raise InputError(f"unknown density spec {spec!r}")


def load_measure(angles: Optional[str] = None, weights_csv: Optional[str] = None,
                 density: Optional[str] = None, degrees: bool = False,
                 grid: int = DEFAULT_GRID) -> CircularMeasure:
    """Exactly one of the three sources must be given."""
    given = [s for s in (angles, weights_csv, density) if s is not None]
    if len(given) != 1:
        raise InputError("give exactly one of --angles, --weights-csv, --density")
    if angles is not None:
        return CircularMeasure.atomic(read_angles(angles, degrees))
    if weights_csv is not None:
        a, w = read_weighted_csv(weights_csv, degrees)
        return CircularMeasure.atomic(a, w)
    return parse_density_spec(density, grid, degrees)
