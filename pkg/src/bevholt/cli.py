"""Command line interface.

Exit codes: 0 success, 2 configuration error, 3 singularity truncation,
4 invariant violation (closed-form mismatch or non-zero symmetry residual).
Floating symmetry residuals are judged relative to the larger of the two
terms they compare (floored at 1).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .analysis import (
    certify_period,
    classify,
    detect_period,
    equilibria,
    sufficient_stability,
)
from .config import RunConfig, load_config
from .core import BevHoltError, ConfigError, DomainError, SingularityError
from .figures import FIGURES
from .output import format_scalar, render_csv, render_plot_data, render_svg, write_atomic
from .solver import compare_methods, iterate
from .symmetry import build_family, characteristic_value, symmetry_residual, zeta1_obstruction

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SINGULAR = 3
EXIT_VIOLATION = 4

SYMMETRY_TOLERANCE = 1e-10


def _write_outputs(config: RunConfig, traj, out: Path, title: str = "") -> list[Path]:
    suffixes = {"csv": ".csv", "plot-data": ".dat", "svg": ".svg"}
    written = []
    for kind in config.outputs:
        path = out / f"{config.name}{suffixes[kind]}"
        if kind == "csv":
            write_atomic(path, render_csv(traj))
        elif kind == "plot-data":
            write_atomic(path, render_plot_data(traj))
        else:
            write_atomic(path, render_svg(traj, title or config.name))
        written.append(path)
    return written


def cmd_simulate(config: RunConfig, args) -> int:
    model = config.model()
    traj = iterate(model, config.initial_values(model), config.horizon)
    for path in _write_outputs(config, traj, Path(args.out)):
        print(f"wrote {path}")
    if not traj.complete:
        print(
            f"error: singularity, trajectory truncated at n={traj.truncated_at} ({traj.reason})",
            file=sys.stderr,
        )
        return EXIT_SINGULAR
    return EXIT_OK


def cmd_compare(config: RunConfig, args) -> int:
    model = config.model()
    report = compare_methods(model, config.initial_values(model), config.horizon, config.tolerance)
    print(f"iterate: {report.trajectory.status}, {len(report.trajectory)} terms, backend {model.backend.value}")
    print(report.table())
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_symmetry(config: RunConfig, args) -> int:
    model = config.model()
    spec = config.symmetry
    seeds = spec.seeds if spec.seeds is not None else ("1",) * model.k
    seeds = [model.backend.convert(s) for s in seeds]
    family = build_family(model, spec.family, seeds, spec.n_points + model.k, spec.p)
    tol = args.tolerance if args.tolerance is not None else SYMMETRY_TOLERANCE
    worst = worst_rel = 0.0
    points = skipped = 0
    for n in range(spec.n_points):
        for z in spec.z:
            z = model.backend.convert(z)
            try:
                r = symmetry_residual(model, family, n, z)
            except DomainError:
                skipped += 1
                continue
            points += 1
            worst = max(worst, abs(r))
            if not model.backend.exact:
                worst_rel = max(worst_rel, abs(r) / _residual_scale(model, family, n, z))
    label = spec.family + (f" (p={spec.p})" if spec.family == "zeta3" else "")
    print(f"family: {label}")
    print(f"grid points: {points} evaluated, {skipped} singular skipped")
    print(f"max |residual|: {format_scalar(worst) if model.backend.exact else f'{float(worst):.3e}'}")
    if not model.backend.exact:
        print(f"max relative residual: {worst_rel:.3e}")
    if spec.family == "zeta1":
        bad = zeta1_obstruction(model, spec.n_points)
        if bad:
            print(f"zeta1 needs B[n+k] = -A[n+k] B[n]; violated at {len(bad)} of {spec.n_points + 1} indices")
    exact = model.backend.exact and (spec.family != "zeta3" or spec.p == 0)
    # floating coefficients can grow geometrically, so judge them relative to the terms compared
    ok = worst == 0 if exact else worst_rel <= tol
    print("status: ok" if ok else "status: VIOLATION")
    return EXIT_OK if ok else EXIT_VIOLATION


def _residual_scale(model, family, n: int, z) -> float:
    den = model.a(n) + model.b(n) * z
    left = characteristic_value(family, n + model.k, z / den)
    right = model.a(n) / (den * den) * characteristic_value(family, n, z)
    return max(abs(left), abs(right), 1.0)


def cmd_stability(config: RunConfig, args) -> int:
    model = config.model()
    rows = [("equilibrium", "multiplier", "|root|", "classification", "sum|p|<1")]
    for z in equilibria(model):
        report = classify(model, z)
        moduli = report.root_moduli
        rows.append(
            (
                format_scalar(report.equilibrium),
                format_scalar(report.multiplier),
                f"{max(moduli):.6g}",
                report.classification.value,
                "yes" if sufficient_stability(report.coefficients) else "no",
            )
        )
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for row in rows:
        print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return EXIT_OK


def cmd_period(config: RunConfig, args) -> int:
    model = config.model()
    ic = config.initial_values(model)
    traj = iterate(model, ic, config.horizon)
    report = detect_period(traj, tolerance=config.tolerance)
    print(report)
    structural = certify_period(model, ic)
    if structural is not None:
        print(f"predicted period: {structural.minimal_period} ({structural.certified_by.value})")
    if not traj.complete:
        print(f"note: trajectory truncated at n={traj.truncated_at}; report covers the defined prefix", file=sys.stderr)
        return EXIT_SINGULAR
    return EXIT_OK


def cmd_figures(args) -> int:
    out = Path(args.out)
    for name, config in FIGURES.items():
        model = config.model()
        traj = iterate(model, config.initial_values(model), config.horizon)
        _write_outputs(config, traj, out)
        period = detect_period(traj, tolerance=config.tolerance).minimal_period
        summary = f"period {period}" if period is not None else f"z[{len(traj) - 1}] = {format_scalar(traj[-1])}"
        print(f"{name}: {len(traj)} terms, {summary}")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "symmetry": cmd_symmetry,
    "stability": cmd_stability,
    "period": cmd_period,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bevholt",
        description="Higher-order Beverton-Holt recurrence z[n+k] = z[n] / (A[n] + B[n] z[n]).",
    )
    parser.add_argument("command", choices=[*COMMANDS, "figures"])
    parser.add_argument("--config", help="YAML run configuration (not needed for 'figures')")
    parser.add_argument("--backend", choices=["rational", "float", "complex"])
    parser.add_argument("--horizon", type=int, help="number of terms N")
    parser.add_argument("--out", default=".", help="output directory (default: current)")
    parser.add_argument("--tolerance", type=float, help="floating comparison tolerance")
    parser.add_argument("--dump-config", action="store_true", help="print the normalised config and exit")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "figures":
            if args.dump_config:
                for config in FIGURES.values():
                    print("---")
                    print(config.dump(), end="")
                return EXIT_OK
            return cmd_figures(args)
        if not args.config:
            raise ConfigError(f"{args.command}: --config is required")
        config = load_config(args.config)
        if args.horizon is not None and args.horizon < config.order:
            raise ConfigError(f"--horizon: must be at least order={config.order}")
        config = config.with_overrides(backend=args.backend, horizon=args.horizon, tolerance=args.tolerance)
        config.model()
        if args.dump_config:
            print(config.dump(), end="")
            return EXIT_OK
        return COMMANDS[args.command](config, args)
    except SingularityError as exc:
        print(f"error: singularity: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (BevHoltError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
