"""Command-line front end.

Exit status: 0 on success, 1 on input errors, 2 when the solver and the
uniqueness certificate disagree.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .consistency import SimulationConfig, simulate
from .criterion import CriterionParams, alpha_delta, guarantee_existence, mean_bound, phi_alpha, satisfies_P
from .frechet import NotCriticalError, derivative_values, functional_values
from .geometry import PI, TWO_PI, wrap, wrap_array
from .ingest import InputError, load_measure
from .measures import DEFAULT_GRID
from .solver import DEFAULT_TIE_TOL, frechet_mean, grid_oracle
from .uniqueness import VerdictMismatch, certify, find_mean_and_certify

SUBCOMMANDS = ("mean", "scan", "unique", "criterion", "simulate")


@dataclass
class RunConfig:
    subcommand: str
    angles: Optional[str] = None
    weights_csv: Optional[str] = None
    density: Optional[str] = None
    degrees: bool = False
    grid: int = DEFAULT_GRID
    tie_tol: float = DEFAULT_TIE_TOL
    fmt: str = "json"
    seed: int = 0
    output: Optional[str] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise InputError(f"unknown subcommand {self.subcommand!r}")
        n_sources = sum(s is not None for s in (self.angles, self.weights_csv, self.density))
        if n_sources != 1:
            raise InputError("give exactly one of --angles, --weights-csv, --density")
        if self.tie_tol <= 0:
            raise InputError("--tie-tol must be positive")
        if self.grid < 8:
            raise InputError("--grid must be at least 8")

    def measure(self):
        return load_measure(self.angles, self.weights_csv, self.density, self.degrees, self.grid)

    def angle(self, value: float) -> float:
        return wrap(math.radians(value) if self.degrees else value)


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def cmd_mean(cfg: RunConfig) -> str:
    mu = cfg.measure()
    if mu.is_atomic:
        res = frechet_mean(mu, cfg.tie_tol)
    else:
        res = grid_oracle(mu, max(cfg.grid, 8192), cfg.tie_tol, polish=True)
    if cfg.fmt == "csv":
        return _csv(["angle", "F"], [(cp.angle, cp.value) for cp in res.argmins])
    return _json(res.to_dict())


def cmd_scan(cfg: RunConfig) -> str:
    mu = cfg.measure()
    points = cfg.extra.get("points") or DEFAULT_GRID
    center = cfg.angle(cfg.extra.get("center") or 0.0)
    nu = mu.chart(center)
    theta = -PI + TWO_PI * np.arange(points) / points
    if nu.atom_pos.size:
        # points whose cut locus is an atom, so the derivative jumps show up exactly
        theta = np.concatenate([theta, wrap_array(nu.atom_pos + PI)])
    theta = np.unique(theta)
    F = functional_values(nu, theta)
    left, right = derivative_values(nu, theta)
    if cfg.fmt == "json":
        return _json({"center": center, "theta": theta.tolist(), "F": F.tolist(),
                      "F_left_derivative": left.tolist(), "F_right_derivative": right.tolist()})
    return _csv(["theta", "F", "F_left_derivative", "F_right_derivative"], zip(theta, F, left, right))


def cmd_unique(cfg: RunConfig) -> str:
    if cfg.fmt != "json":
        raise InputError("unique only writes JSON")
    mu = cfg.measure()
    at = cfg.extra.get("at")
    if at is not None:
        cert = certify(mu, cfg.angle(at))
        return _json(cert.to_dict())
    res, cert = find_mean_and_certify(mu, cfg.tie_tol)
    out = cert.to_dict()
    out["argmins"] = [cp.angle for cp in res.argmins[:64]]
    out["n_argmins"] = len(res.argmins)
    out["runner_up_gap"] = None if math.isinf(res.runner_up_gap) else res.runner_up_gap
    return _json(out)


def cmd_criterion(cfg: RunConfig) -> str:
    if cfg.fmt != "json":
        raise InputError("criterion only writes JSON")
    mu = cfg.measure()
    delta = cfg.extra.get("delta")
    explicit = [cfg.extra.get(k) for k in ("center", "alpha", "phi")]
    out: dict = {}
    if delta is not None:
        if any(v is not None for v in explicit):
            raise InputError("give either --delta or --center/--alpha/--phi, not both")
        try:
            params = guarantee_existence(mu, delta)
            a_d = alpha_delta(delta)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        out.update(delta=delta, alpha_delta=a_d, phi_alpha_delta=phi_alpha(a_d),
                   witness=None if params is None else params.to_dict())
    else:
        if any(v is None for v in explicit):
            raise InputError("criterion needs --delta, or all of --center, --alpha and --phi")
        c, a, phi = explicit
        try:
            params = CriterionParams(cfg.angle(c), a, math.radians(phi) if cfg.degrees else phi)
            ok = satisfies_P(mu, params)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        out.update(params=params.to_dict(), satisfied=ok, phi_alpha=phi_alpha(params.alpha),
                   sufficient=ok and params.phi < phi_alpha(params.alpha),
                   mean_bound=mean_bound(params))
    if params is not None:
        out["phi_alpha"] = phi_alpha(params.alpha)
        if delta is not None:
            res, cert = find_mean_and_certify(mu, cfg.tie_tol)
            out["mean"] = res.best.angle
            out["certificate_holds"] = cert.holds
    return _json(out)


def cmd_simulate(cfg: RunConfig) -> str:
    mu = cfg.measure()
    n_values = cfg.extra.get("n") or [50, 200, 800]
    x_values = cfg.extra.get("x") or [1.0, 2.0, 4.0]
    try:
        sim = SimulationConfig(tuple(n_values), cfg.extra.get("trials") or 400, cfg.seed,
                               tuple(x_values), cfg.tie_tol)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    params = None
    if cfg.extra.get("delta") is not None and not mu.has_atoms:
        params = guarantee_existence(mu, cfg.extra["delta"])
    try:
        rep = simulate(mu, params=params, config=sim)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if cfg.fmt == "csv":
        return rep.to_csv()
    out = rep.to_dict()
    out["support_diameter_metric"] = "arclength"
    out["witness"] = None if params is None else params.to_dict()
    return _json(out)


COMMANDS = {"mean": cmd_mean, "scan": cmd_scan, "unique": cmd_unique,
            "criterion": cmd_criterion, "simulate": cmd_simulate}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--angles", metavar="FILE", help="text file, one angle per line")
    src.add_argument("--weights-csv", metavar="FILE", help="CSV with header angle,weight")
    src.add_argument("--density", metavar="SPEC", help="uniform | vonmises:kappa=K,mu=M | box:mu=M,width=W | "
                                                      "hemisphere:theta=T | mixture:SPEC@W;SPEC@W")
    common.add_argument("--degrees", action="store_true", help="input angles are in degrees")
    common.add_argument("--grid", type=int, default=DEFAULT_GRID, help="density grid cells")
    common.add_argument("--tie-tol", type=float, default=DEFAULT_TIE_TOL)
    common.add_argument("--seed", type=int, default=0)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    common.add_argument("-o", "--output", metavar="FILE", help="write here instead of stdout")

    p = argparse.ArgumentParser(prog="circfrechet", description="Fréchet means on the circle.")
    sub = p.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("mean", parents=[common], help="global argmins of the Fréchet functional")
    sc = sub.add_parser("scan", parents=[common], help="F and its one-sided derivatives on a grid")
    sc.add_argument("--points", type=int, default=DEFAULT_GRID)
    sc.add_argument("--center", type=float, help="chart centre (default 0)")
    un = sub.add_parser("unique", parents=[common], help="uniqueness certificate")
    un.add_argument("--at", type=float, help="certify this critical point instead of the computed mean")
    cr = sub.add_parser("criterion", parents=[common], help="P(alpha, phi) check or witness search")
    cr.add_argument("--delta", type=float)
    cr.add_argument("--center", type=float)
    cr.add_argument("--alpha", type=float)
    cr.add_argument("--phi", type=float)
    si = sub.add_parser("simulate", parents=[common], help="empirical mean concentration")
    si.add_argument("--n", type=_ints, help="sample sizes, e.g. 50,200,800")
    si.add_argument("--trials", type=int)
    si.add_argument("--x", type=_floats, help="confidence parameters, e.g. 1,2,4")
    si.add_argument("--delta", type=float, help="also report the rate envelope of a witness")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    default_fmt = "csv" if ns.subcommand == "scan" else "json"
    extra = {k: getattr(ns, k) for k in ("points", "center", "at", "delta", "alpha", "phi", "n", "trials", "x")
             if hasattr(ns, k)}
    return RunConfig(ns.subcommand, ns.angles, ns.weights_csv, ns.density, ns.degrees, ns.grid,
                     ns.tie_tol, ns.fmt or default_fmt, ns.seed, ns.output, extra)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        cfg = config_from_args(ns)
        text = COMMANDS[cfg.subcommand](cfg)
        _write(text, cfg.output)
    except VerdictMismatch as exc:
        diag = {"error": "verdict_mismatch", "detail": str(exc),
                "solver": exc.result.to_dict(), "certificate": exc.certificate.to_dict()}
        sys.stderr.write(_json(diag))
        return 2
    except (InputError, NotCriticalError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
