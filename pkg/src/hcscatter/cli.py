"""Command-line front end.

Subcommands: single (one closed-form evaluation), sweep-mu (d and entropy
as a function of mu1 at fixed width ratio), ellipse (exact and
approximate outgoing-ellipse geometry with boundary points), transient
(entropy along a time grid from the image solution), oracle-check
(Schmidt entropy of the sampled state against the closed form).

Outputs are CSV (scalars in '#' header lines, 17 significant digits) or
JSON; identical configurations produce byte-identical files.  Exit codes:
0 success, 2 validation error, 3 I/O error, 4 oracle-check failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .covariance import MassFractions, d_closed_form, entropy_from_d, purity_from_d
from .ellipse import (
    QuadraticForm2,
    approx_final_ellipse,
    ellipse_from_form,
    scattered_form,
)
from .gridsim import CoverageError, reflected_state, schmidt_entropy, transient_curve
from .scattering import ScatterParams, d_asymptotic, is_zero_entanglement

__all__ = ["SweepConfig", "main", "entrypoint",
           "run_single", "run_sweep_mu", "run_ellipse", "run_transient",
           "run_oracle_check"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_ORACLE = 4

ORACLE_TOL_BITS = 1e-3

MODES = ("single", "sweep-mu", "ellipse", "transient", "oracle-check")

_FIELD_TYPES = {
    "mu1": float,
    "mass1": float,
    "mass2": float,
    "sigma1_sq": float,
    "sigma2_sq": float,
    "ratio": float,
    "core_radius": float,
    "momentum": float,
    "q1": float,
    "q2": float,
    "grid_n": int,
    "coverage": float,
    "points": int,
    "t_start": float,
    "t_stop": float,
    "out": str,
    "format": str,
}

# Baseline defaults; entries under a mode name override them.
_DEFAULTS = {
    "sigma2_sq": 1.0,
    "ratio": 10.0,
    "mu1": 0.25,
    "momentum": 1.0,
    "core_radius": 0.5,
    "grid_n": 512,
    "coverage": 6.0,
    "format": "csv",
    "sweep-mu": {"points": 99},
    "ellipse": {"points": 64},
    "transient": {"points": 25, "ratio": 4.0, "momentum": 4.0,
                  "mass1": 1.0, "mass2": 3.0},
}


@dataclass
class SweepConfig:
    """Fully resolved run configuration for one CLI invocation."""

    mode: str
    mu1: float
    mass1: float
    mass2: float
    sigma1_sq: float
    sigma2_sq: float
    core_radius: float
    momentum: float
    q1: float | None
    q2: float | None
    grid_n: int
    coverage: float
    points: int
    t_start: float | None
    t_stop: float | None
    out: str | None
    fmt: str

    @property
    def fractions(self) -> MassFractions:
        return MassFractions.from_masses(self.mass1, self.mass2)

    @property
    def width_ratio(self) -> float:
        return math.sqrt(self.sigma1_sq / self.sigma2_sq)

    def scatter_params(self) -> ScatterParams:
        return ScatterParams(
            self.mass1,
            self.mass2,
            self.sigma1_sq,
            self.sigma2_sq,
            momentum=self.momentum,
            core_radius=self.core_radius,
            q1=self.q1,
            q2=self.q2,
        )


def parse_config_file(path: str) -> dict:
    """Read a flat key=value file; '#' starts a comment, blank lines skipped."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _FIELD_TYPES:
                raise ValueError(f"{path}:{lineno}: unknown configuration key {key!r}")
            values[key] = _FIELD_TYPES[key](value.strip())
    return values


def _resolve(mode: str, supplied: dict) -> SweepConfig:
    """Merge mode defaults with supplied values and validate the result."""
    merged = {k: v for k, v in _DEFAULTS.items() if not isinstance(v, dict)}
    merged.update(_DEFAULTS.get(mode, {}))
    explicit = {k for k, v in supplied.items() if v is not None}
    merged.update({k: v for k, v in supplied.items() if v is not None})

    if "sigma1_sq" in explicit and "ratio" in explicit:
        raise ValueError("give either --sigma1-sq or --ratio, not both")
    if ("mass1" in explicit) != ("mass2" in explicit):
        raise ValueError("--mass1 and --mass2 must be given together")
    if "mu1" in explicit and "mass1" in explicit:
        raise ValueError("give either --mu1 or --mass1/--mass2, not both")

    sigma2_sq = merged["sigma2_sq"]
    if "sigma1_sq" in explicit:
        sigma1_sq = merged["sigma1_sq"]
    else:
        sigma1_sq = merged["ratio"] ** 2 * sigma2_sq

    if "mass1" in explicit or ("mu1" not in explicit and "mass1" in merged):
        mass1, mass2 = merged["mass1"], merged["mass2"]
    else:
        mu = MassFractions(merged["mu1"])
        mass1, mass2 = mu.mu1, mu.mu2

    fmt = merged["format"]
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {fmt!r}")

    points = int(merged.get("points", 0))
    if mode == "sweep-mu" and points < 2:
        raise ValueError(f"sweep-mu needs at least 2 points, got {points}")
    if mode in ("transient", "ellipse") and points < 1:
        raise ValueError(f"{mode} needs at least 1 point, got {points}")

    t_start = merged.get("t_start")
    t_stop = merged.get("t_stop")
    if t_start is not None and t_stop is not None and not t_stop > t_start:
        raise ValueError("t_stop must exceed t_start")

    return SweepConfig(
        mode=mode,
        mu1=MassFractions.from_masses(mass1, mass2).mu1,
        mass1=mass1,
        mass2=mass2,
        sigma1_sq=sigma1_sq,
        sigma2_sq=sigma2_sq,
        core_radius=merged["core_radius"],
        momentum=merged["momentum"],
        q1=merged.get("q1"),
        q2=merged.get("q2"),
        grid_n=merged["grid_n"],
        coverage=merged["coverage"],
        points=points,
        t_start=t_start,
        t_stop=t_stop,
        out=merged.get("out"),
        fmt=fmt,
    )


def run_single(cfg: SweepConfig) -> dict:
    """One closed-form evaluation of the collision entanglement."""
    params = cfg.scatter_params()
    mu = params.fractions
    d_exact = d_closed_form(mu, cfg.sigma1_sq, cfg.sigma2_sq)
    return {
        "mu1": mu.mu1,
        "mu2": mu.mu2,
        "sigma1_sq": cfg.sigma1_sq,
        "sigma2_sq": cfg.sigma2_sq,
        "d_exact": d_exact,
        "d_asymptotic": d_asymptotic(mu, cfg.width_ratio),
        "entropy_bits": entropy_from_d(d_exact),
        "purity": purity_from_d(d_exact),
        "classification": is_zero_entanglement(params).value,
    }


def run_sweep_mu(cfg: SweepConfig) -> dict:
    """Tabulate exact and leading-order d over a uniform mu1 grid.

    The grid spans [0.01, 0.99]; the exact pipeline needs mu1 strictly
    inside the open interval, and the leading-order value at the closed
    endpoint mu1 = 1 is reported separately in the metadata.
    """
    ratio = cfg.width_ratio
    rows = []
    for mu1 in np.linspace(0.01, 0.99, cfg.points):
        mu = MassFractions(float(mu1))
        d_exact = d_closed_form(mu, cfg.sigma1_sq, cfg.sigma2_sq)
        rows.append(
            {
                "mu1": float(mu1),
                "d_exact": d_exact,
                "d_asymptotic": d_asymptotic(mu, ratio),
                "entropy_bits": entropy_from_d(d_exact),
                "purity": purity_from_d(d_exact),
            }
        )
    meta = {
        "sigma1_sq": cfg.sigma1_sq,
        "sigma2_sq": cfg.sigma2_sq,
        "width_ratio": ratio,
        "points": cfg.points,
        "d_asymptotic_at_mu1_1": d_asymptotic(1.0, ratio),
    }
    return {"meta": meta, "rows": rows}


def run_ellipse(cfg: SweepConfig) -> dict:
    """Exact and approximate outgoing-ellipse geometry plus boundary points."""
    mu = cfg.fractions
    exact = ellipse_from_form(scattered_form(mu, cfg.sigma1_sq, cfg.sigma2_sq))
    approx = approx_final_ellipse(
        mu, math.sqrt(cfg.sigma1_sq), math.sqrt(cfg.sigma2_sq)
    )
    initial = ellipse_from_form(
        QuadraticForm2(np.diag([1.0 / cfg.sigma1_sq, 1.0 / cfg.sigma2_sq]))
    )
    return {
        "mu1": mu.mu1,
        "sigma1_sq": cfg.sigma1_sq,
        "sigma2_sq": cfg.sigma2_sq,
        "initial_semi_major": initial.semi_major,
        "initial_semi_minor": initial.semi_minor,
        "initial_angle_rad": initial.angle_rad,
        "exact_semi_major": exact.semi_major,
        "exact_semi_minor": exact.semi_minor,
        "exact_angle_rad": exact.angle_rad,
        "approx_semi_major": approx.semi_major,
        "approx_semi_minor": approx.semi_minor,
        "approx_angle_rad": approx.angle_rad,
        "initial_area": initial.area,
        "final_area": exact.area,
        "boundary_initial": [[float(x), float(y)] for x, y in initial.boundary_points(cfg.points)],
        "boundary_final": [[float(x), float(y)] for x, y in exact.boundary_points(cfg.points)],
    }


def run_transient(cfg: SweepConfig) -> dict:
    """Entropy along a time grid, with the analytic asymptote for reference.

    The default window runs from 0 to 2.5 times the estimated collision
    time (packet separation over the relative velocity).
    """
    params = cfg.scatter_params()
    reduced_mass = params.mass1 * params.mass2
    t_collision = (params.q1 + params.q2 - params.core_radius) * reduced_mass / params.momentum
    t_start = 0.0 if cfg.t_start is None else cfg.t_start
    t_stop = 2.5 * t_collision if cfg.t_stop is None else cfg.t_stop
    if not t_stop > t_start:
        raise ValueError("t_stop must exceed t_start")
    times = np.linspace(t_start, t_stop, cfg.points)
    curve = transient_curve(params, times, grid_n=cfg.grid_n, coverage=cfg.coverage)
    asymptote = entropy_from_d(
        d_closed_form(params.fractions, cfg.sigma1_sq, cfg.sigma2_sq)
    )
    meta = {
        "mu1": params.fractions.mu1,
        "sigma1_sq": cfg.sigma1_sq,
        "sigma2_sq": cfg.sigma2_sq,
        "momentum": cfg.momentum,
        "core_radius": cfg.core_radius,
        "q1": params.q1,
        "q2": params.q2,
        "grid_n": cfg.grid_n,
        "coverage": cfg.coverage,
        "analytic_entropy_bits": asymptote,
        "estimated_collision_time": t_collision,
    }
    rows = [
        {"time": t, "entropy_bits": s}
        for t, s in zip(curve.times, curve.entropies)
    ]
    return {"meta": meta, "rows": rows}


def run_oracle_check(cfg: SweepConfig) -> dict:
    """Compare the Schmidt entropy of the sampled outgoing state with the
    closed form; passes when they agree within 1e-3 bits."""
    params = cfg.scatter_params()
    analytic = entropy_from_d(
        d_closed_form(params.fractions, cfg.sigma1_sq, cfg.sigma2_sq)
    )
    wave = reflected_state(params, grid_n=cfg.grid_n, coverage=cfg.coverage)
    schmidt = schmidt_entropy(wave)
    difference = abs(schmidt - analytic)
    return {
        "analytic_entropy_bits": analytic,
        "schmidt_entropy_bits": schmidt,
        "abs_difference_bits": difference,
        "grid_n": cfg.grid_n,
        "passed": bool(difference <= ORACLE_TOL_BITS),
    }


_RUNNERS = {
    "single": run_single,
    "sweep-mu": run_sweep_mu,
    "ellipse": run_ellipse,
    "transient": run_transient,
    "oracle-check": run_oracle_check,
}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _csv_lines(record: dict, mode: str) -> list[str]:
    lines = []
    if mode in ("single", "oracle-check"):
        lines.append(",".join(record))
        lines.append(",".join(_fmt(v) for v in record.values()))
    elif mode in ("sweep-mu", "transient"):
        for key, value in record["meta"].items():
            lines.append(f"# {key} = {_fmt(value)}")
        columns = list(record["rows"][0])
        lines.append(",".join(columns))
        for row in record["rows"]:
            lines.append(",".join(_fmt(row[c]) for c in columns))
    elif mode == "ellipse":
        for key, value in record.items():
            if key.startswith("boundary_"):
                continue
            lines.append(f"# {key} = {_fmt(value)}")
        lines.append("ellipse,idx,x1,x2")
        for name in ("initial", "final"):
            for idx, (x, y) in enumerate(record[f"boundary_{name}"]):
                lines.append(f"{name},{idx},{_fmt(x)},{_fmt(y)}")
    else:  # pragma: no cover
        raise ValueError(f"unknown mode {mode!r}")
    return lines


def _emit(record: dict, cfg: SweepConfig) -> None:
    if cfg.fmt == "json":
        text = json.dumps(record, indent=2) + "\n"
    else:
        text = "\n".join(_csv_lines(record, cfg.mode)) + "\n"
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("scenario")
    group.add_argument("--mu1", type=float, help="mass fraction of particle 1")
    group.add_argument("--mass1", type=float, help="raw mass of particle 1")
    group.add_argument("--mass2", type=float, help="raw mass of particle 2")
    group.add_argument("--sigma1-sq", type=float, dest="sigma1_sq",
                       help="squared width of packet 1")
    group.add_argument("--sigma2-sq", type=float, dest="sigma2_sq",
                       help="squared width of packet 2 (default 1)")
    group.add_argument("--ratio", type=float,
                       help="width ratio sigma1/sigma2 (alternative to --sigma1-sq)")
    group.add_argument("--core-radius", type=float, dest="core_radius",
                       help="hard-core radius a")
    group.add_argument("--momentum", type=float, help="approach momentum K")
    group.add_argument("--q1", type=float, help="initial center of packet 1 (> a)")
    group.add_argument("--q2", type=float, help="initial center distance of packet 2 (> a)")
    numerics = common.add_argument_group("numerics and output")
    numerics.add_argument("--grid-n", type=int, dest="grid_n",
                          help="grid points per axis (default 512)")
    numerics.add_argument("--coverage", type=float,
                          help="grid half-width in density standard deviations (default 6)")
    numerics.add_argument("--points", type=int,
                          help="number of sweep/time/boundary points")
    numerics.add_argument("--t-start", type=float, dest="t_start", help="first time point")
    numerics.add_argument("--t-stop", type=float, dest="t_stop", help="last time point")
    numerics.add_argument("--out", help="output path (default: stdout)")
    numerics.add_argument("--format", choices=("csv", "json"), dest="format",
                          help="output format (default csv)")
    numerics.add_argument("--config", help="flat key=value configuration file; "
                                           "explicit flags win")

    parser = argparse.ArgumentParser(
        prog="hcscatter",
        description="Entanglement from 1D hard-core scattering of two Gaussian packets.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    sub.add_parser("single", parents=[common],
                   help="closed-form evaluation of one scenario")
    sub.add_parser("sweep-mu", parents=[common],
                   help="d, entropy and purity over a mu1 grid at fixed width ratio")
    sub.add_parser("ellipse", parents=[common],
                   help="outgoing-ellipse geometry with boundary points")
    sub.add_parser("transient", parents=[common],
                   help="entropy along a time grid from the image solution")
    sub.add_parser("oracle-check", parents=[common],
                   help="Schmidt entropy of the sampled state vs the closed form")
    return parser


# Parameter pairs that select the same quantity two ways; a flag on one
# side silences file-supplied values on the other.
_ALTERNATIVES = (({"sigma1_sq"}, {"ratio"}), ({"mu1"}, {"mass1", "mass2"}))


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    flags = {key: getattr(args, key) for key in _FIELD_TYPES}
    try:
        supplied = dict(flags)
        if args.config is not None:
            file_values = parse_config_file(args.config)
            for left, right in _ALTERNATIVES:
                if any(flags.get(k) is not None for k in left):
                    for k in right:
                        file_values.pop(k, None)
                if any(flags.get(k) is not None for k in right):
                    for k in left:
                        file_values.pop(k, None)
            for key, value in file_values.items():
                if supplied.get(key) is None:
                    supplied[key] = value
        cfg = _resolve(args.mode, supplied)
        record = _RUNNERS[cfg.mode](cfg)
        _emit(record, cfg)
    except CoverageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if cfg.mode == "oracle-check" and not record["passed"]:
        print(
            f"oracle check failed: |schmidt - analytic| = "
            f"{record['abs_difference_bits']:.3e} bits exceeds {ORACLE_TOL_BITS}",
            file=sys.stderr,
        )
        return EXIT_ORACLE
    return EXIT_OK


def entrypoint() -> None:  # pragma: no cover
    sys.exit(main())
