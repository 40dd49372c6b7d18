"""Command-line experiment harness.

    sphereadvect run      single simulation, snapshot CSVs + manifest
    sphereadvect converge mesh-refinement sweep, error CSV
    sphereadvect figure   preset reproducing one of the published experiments

Exit codes: 0 success, 2 invalid arguments, 3 numerical domain error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import _backend
from .exceptions import DomainError
from .flowmap import VelocityField
from .metrics import ErrorReport, error_l1, error_l2, masked_error
from .solver import Scheme, SolverConfig, exact_solution, iter_run

log = logging.getLogger("sphereadvect")

DIGITS_ENV = "SPHEREADVECT_DIGITS"
ALL_SCHEMES = [s.value for s in Scheme]
SPHERICAL = ["slerp", "seno2", "seno3"]

FIGURES = {
    "smooth": dict(ic="smooth", velocity="cosine-time", n=128),
    "kinks": dict(ic="kinks", velocity="cosine-time", n=128),
    "discontinuous": dict(ic="discontinuous", velocity="constant", n=512),
    "convergence-smooth": dict(ic="smooth", velocity="cosine-time", schemes=ALL_SCHEMES),
    "convergence-kinks": dict(ic="kinks", velocity="cosine-time", schemes=SPHERICAL, masked=True),
}


class UsageError(Exception):
    pass


def _digits() -> int:
    raw = os.environ.get(DIGITS_ENV, "17")
    try:
        d = int(raw)
    except ValueError:
        raise UsageError(f"{DIGITS_ENV} must be an integer, got {raw!r}") from None
    if not 1 <= d <= 17:
        raise UsageError(f"{DIGITS_ENV} must be between 1 and 17")
    return d


def write_curve_csv(path: Path, curve, digits: int) -> None:
    pts = curve.points
    table = np.column_stack([curve.s, pts, np.linalg.norm(pts, axis=1)])
    np.savetxt(path, table, fmt=f"%.{digits}g", delimiter=",", header="s,x,y,z,norm", comments="")


def read_curve_csv(path) -> np.ndarray:
    """Return the ``(N, 5)`` table ``s, x, y, z, norm`` of a snapshot file."""
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def make_velocity(kind: str, speed: float = 1.0, period: float = 4.0) -> VelocityField:
    if kind == "constant":
        return VelocityField.constant(speed)
    if kind in ("cosine-space", "cosine-time"):
        return VelocityField.reversible_cosine(period, kind.split("-")[1])
    raise UsageError(f"unknown velocity {kind!r}")


def _config(args, n: int, scheme: str | None = None) -> SolverConfig:
    try:
        return SolverConfig(
            n=n,
            scheme=scheme or args.scheme,
            ic=args.ic,
            velocity=make_velocity(args.velocity, args.speed, args.period),
            t_final=args.tfinal,
            dt_macro=args.dt,
            substep=args.substep,
            samples=args.samples,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write_manifest(out: Path, configs, files, timings) -> None:
    manifest = {
        "configs": [c.as_dict() for c in configs],
        "backend": _backend.NAME,
        "output_dir": str(out),
        "files": [str(f.name) for f in files],
        "timings_s": timings,
        "created": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _final(config: SolverConfig):
    curve = None
    for curve in iter_run(config):
        pass
    return curve


def cmd_run(args) -> int:
    digits = _digits()
    config = _config(args, args.n)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    t0 = time.perf_counter()
    nsteps = len(config.time_levels()) - 1
    for k, curve in enumerate(iter_run(config)):
        if args.snapshots == "final" and k != nsteps:
            continue
        path = out / f"snapshot_{k:05d}.csv"
        write_curve_csv(path, curve, digits)
        files.append(path)
    elapsed = time.perf_counter() - t0
    _write_manifest(out, [config], files, {"run": elapsed})
    log.info("wrote %d snapshots to %s in %.2fs", len(files), out, elapsed)
    return 0


def _powers_of_two(nmin: int, nmax: int) -> list[int]:
    for v in (nmin, nmax):
        if v < 1 or v & (v - 1):
            raise UsageError(f"mesh sizes must be powers of two, got {v}")
    if nmin > nmax:
        raise UsageError("--nmin exceeds --nmax")
    ns = []
    n = nmin
    while n <= nmax:
        ns.append(n)
        n *= 2
    if len(ns) < 2:
        raise UsageError("a sweep needs at least two mesh sizes")
    return ns


def sweep(args, scheme: str, ns, masked: bool = False) -> ErrorReport:
    e1, e2 = [], []
    for n in ns:
        config = _config(args, n, scheme)
        final = _final(config)
        exact = exact_solution(config)
        if masked:
            e1.append(masked_error(final, exact, norm="l1"))
            e2.append(masked_error(final, exact, norm="l2"))
        else:
            e1.append(error_l1(final, exact))
            e2.append(error_l2(final, exact))
        log.info("%s N=%d E1=%.3e E2=%.3e", scheme, n, e1[-1], e2[-1])
    return ErrorReport(list(ns), e1, e2)


def cmd_converge(args) -> int:
    digits = _digits()
    ns = _powers_of_two(args.nmin, args.nmax)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    report = sweep(args, args.scheme, ns, args.masked)
    path = out / f"errors_{args.scheme}.csv"
    path.write_text(report.to_csv(digits))
    _write_manifest(
        out, [_config(args, n) for n in ns], [path], {"sweep": time.perf_counter() - t0}
    )
    print(f"{args.scheme}: {report.summary()}")
    return 0


def cmd_figure(args) -> int:
    digits = _digits()
    preset = FIGURES[args.name]
    args.ic = preset["ic"]
    args.velocity = preset["velocity"]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files, timings, configs = [], {}, []

    if "schemes" in preset:
        ns = _powers_of_two(args.nmin, args.nmax)
        for scheme in preset["schemes"]:
            t0 = time.perf_counter()
            report = sweep(args, scheme, ns, preset.get("masked", False))
            timings[scheme] = time.perf_counter() - t0
            path = out / f"errors_{scheme}.csv"
            path.write_text(report.to_csv(digits))
            files.append(path)
            configs.append(_config(args, ns[-1], scheme))
            print(f"{scheme}: {report.summary()}")
    else:
        n = args.n or preset["n"]
        for scheme in ALL_SCHEMES:
            config = _config(args, n, scheme)
            t0 = time.perf_counter()
            final = _final(config)
            timings[scheme] = time.perf_counter() - t0
            path = out / f"{scheme}.csv"
            write_curve_csv(path, final, digits)
            files.append(path)
            configs.append(config)
        path = out / "exact.csv"
        write_curve_csv(path, exact_solution(configs[0]), digits)
        files.append(path)
    _write_manifest(out, configs, files, timings)
    return 0


def _common(p: argparse.ArgumentParser, with_ic: bool = True) -> None:
    if with_ic:
        p.add_argument("--ic", choices=["smooth", "kinks", "discontinuous"], default="smooth")
        p.add_argument(
            "--velocity", choices=["constant", "cosine-space", "cosine-time"], default="cosine-time"
        )
    p.add_argument("--speed", type=float, default=1.0, help="speed of the constant velocity")
    p.add_argument("--period", type=float, default=4.0, help="period T of the cosine velocity")
    p.add_argument("--tfinal", type=float, default=4.0)
    p.add_argument("--dt", type=float, default=0.1, help="macro time step")
    p.add_argument("--substep", type=float, default=1e-3, help="RK4 substep")
    p.add_argument("--samples", type=int, default=16, help="SENO variation samples per cell")
    p.add_argument("--out", default="out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sphereadvect", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one simulation")
    p.add_argument("--scheme", choices=ALL_SCHEMES, default="seno3")
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--snapshots", choices=["all", "final"], default="all")
    _common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("converge", help="mesh-refinement study")
    p.add_argument("--scheme", choices=ALL_SCHEMES, default="seno3")
    p.add_argument("--nmin", type=int, default=64)
    p.add_argument("--nmax", type=int, default=4096)
    p.add_argument("--masked", action="store_true", help="only count nodes with exact z > 0.5")
    _common(p)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("figure", help="reproduce an experiment preset")
    p.add_argument("name", choices=sorted(FIGURES))
    p.add_argument("--n", type=int, default=None, help="override the preset mesh size")
    p.add_argument("--nmin", type=int, default=64)
    p.add_argument("--nmax", type=int, default=4096)
    _common(p, with_ic=False)
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s"
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sphereadvect: error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"sphereadvect: numerical domain error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
