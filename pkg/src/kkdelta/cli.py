"""Command-line front end: ``kkdelta <command> [options]``.

Exit codes: 0 success, 1 domain error (physically invalid input), 2 usage error.
Data files are written atomically and carry no timestamps; every file written
with ``--out`` gets a ``<out>.manifest.json`` sidecar that ``kkdelta replay``
can re-run.
"""
from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .core import CompactGeometry, PhysicalConfig, load_config, make_setup
from .currents import PARTS, current_closed_form, region_points, surface_grid
from .inference import AssignmentFailure, MeasuredLevel, assign_modes, fit_radius, fit_torus
from .oracle import ConvergenceError, delta_limit_study
from .scattering import coefficients, sweep_coefficients
from .spectrum import ClosedChannel, axial_wavenumber, enumerate_levels


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def atomic_write(path, text: str) -> None:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# --- flag parsing helpers -------------------------------------------------

def parse_complex(text: str) -> complex:
    """"re:im" or a plain real number."""
    try:
        if ":" in text:
            re_part, im_part = text.split(":")
            return complex(float(re_part), float(im_part))
        return complex(float(text), 0.0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're:im' or a real number, got {text!r}") from None


def parse_grid(text: str) -> tuple[int, int]:
    try:
        n_phi, n_z = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"--grid must look like NPHIxNZ, got {text!r}") from None
    if n_phi < 1 or n_z < 1:
        raise UsageError(f"--grid sizes must be positive, got {text!r}")
    return n_phi, n_z


def parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"--zrange must look like zmin:zmax, got {text!r}") from None
    if not lo < hi:
        raise UsageError(f"--zrange needs zmin < zmax, got {text!r}")
    return lo, hi


def parse_floats(text: str, flag: str) -> list[float]:
    items = [x for x in text.replace(" ", "").split(",") if x]
    if not items:
        raise UsageError(f"{flag} needs at least one value")
    try:
        return [float(x) for x in items]
    except ValueError:
        raise UsageError(f"{flag} must be a comma-separated list of numbers, got {text!r}") from None


def resolve_units(args) -> tuple[PhysicalConfig, CompactGeometry]:
    hbar, mass, radii = 1.0, 1.0, (1.0,)
    if args.config is not None:
        path = Path(args.config)
        if not path.is_file():
            raise UsageError(f"config file not found: {path}")
        try:
            cfg, geo = load_config(path)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file {path} is not valid JSON: {exc}") from None
        hbar, mass, radii = cfg.hbar, cfg.mass, geo.radii
    if args.hbar is not None:
        hbar = args.hbar
    if args.mass is not None:
        mass = args.mass
    if getattr(args, "radius", None) is not None:
        radii = (args.radius,)
    if getattr(args, "radii", None) is not None:
        radii = tuple(parse_floats(args.radii, "--radii"))
    return PhysicalConfig(hbar, mass), CompactGeometry(radii)


# --- commands --------------------------------------------------------------
# Each returns (text, parameters). Text goes to --out or standard output.

def cmd_amplitudes(args):
    config, geometry = resolve_units(args)
    amps = coefficients(make_setup(args.lam, args.k1, config=config, geometry=geometry))
    payload = {
        "r": [amps.r.real, amps.r.imag],
        "t": [amps.t.real, amps.t.imag],
        "R1": amps.R1,
        "T1": amps.T1,
    }
    params = {"lambda": args.lam, "k1": args.k1, "hbar": config.hbar, "mass": config.mass,
              "radii": list(geometry.radii)}
    return json_text(payload), params


SWEEP_HEADER = ["k1", "E_axial", "R1", "T1", "re_r", "im_r", "re_t", "im_t"]


def cmd_sweep(args):
    if args.steps < 1:
        raise UsageError("--steps must be at least 1")
    if args.k1_max < args.k1_min or (args.steps > 1 and args.k1_max == args.k1_min):
        raise UsageError("--k1-min/--k1-max do not form an increasing range")
    config, geometry = resolve_units(args)
    grid = np.linspace(args.k1_min, args.k1_max, args.steps)
    rows = sweep_coefficients(args.lam, grid, config, geometry)
    text = csv_text(SWEEP_HEADER, [
        [fmt(r.k1), fmt(r.E_axial), fmt(r.R1), fmt(r.T1),
         fmt(r.r.real), fmt(r.r.imag), fmt(r.t.real), fmt(r.t.imag)]
        for r in rows
    ])
    params = {"lambda": args.lam, "k1_min": args.k1_min, "k1_max": args.k1_max,
              "steps": args.steps, "hbar": config.hbar, "mass": config.mass}
    return text, params


CURRENT_HEADER = ["part", "phi", "z", "j_phi", "j_z"]


def cmd_currents(args):
    n_phi, n_z = parse_grid(args.grid)
    z_min, z_max = parse_range(args.zrange)
    config, geometry = resolve_units(args)
    setup = make_setup(args.lam, args.k1, args.n, args.F1, args.G1, config, geometry)
    amps = coefficients(setup)
    points = surface_grid(n_phi, n_z, z_min, z_max)
    rows = []
    for part in PARTS:
        for p in region_points(part, points):
            j = current_closed_form(part, p, setup, amps)
            rows.append([part, fmt(p.phi), fmt(p.z), fmt(j.j_phi), fmt(j.j_z)])
    params = {"lambda": args.lam, "k1": args.k1, "n": args.n,
              "F1": [args.F1.real, args.F1.imag], "G1": [args.G1.real, args.G1.imag],
              "grid": [n_phi, n_z], "zrange": [z_min, z_max],
              "hbar": config.hbar, "mass": config.mass, "radii": list(geometry.radii)}
    return csv_text(CURRENT_HEADER, rows), params


SPECTRUM_HEADER = ["modes", "compact_energy", "degeneracy", "open", "k1_or_kappa"]


def cmd_spectrum(args):
    config, geometry = resolve_units(args)
    energy = args.energy if args.energy is not None else args.emax
    levels = enumerate_levels(args.emax, config, geometry, energy=energy)
    rows = []
    for level in levels:
        k = axial_wavenumber(energy, level.modes, config, geometry)
        k_value = k.kappa if isinstance(k, ClosedChannel) else k
        rows.append([";".join(str(n) for n in level.modes), fmt(level.compact_energy),
                     level.degeneracy, "true" if level.open else "false", fmt(k_value)])
    params = {"emax": args.emax, "energy": energy, "hbar": config.hbar, "mass": config.mass,
              "radii": list(geometry.radii)}
    return csv_text(SPECTRUM_HEADER, rows), params


ORACLE_HEADER = ["a", "V0", "R_barrier", "T_barrier", "R_delta", "T_delta", "err"]


def cmd_oracle(args):
    widths = parse_floats(args.widths, "--widths")
    config, _ = resolve_units(args)
    rows = delta_limit_study(args.k1, args.lam, widths, config, threshold=args.threshold)
    text = csv_text(ORACLE_HEADER, [
        [fmt(r.a), fmt(r.V0), fmt(r.R_barrier), fmt(r.T_barrier),
         fmt(r.R_delta), fmt(r.T_delta), fmt(r.err)]
        for r in rows
    ])
    params = {"lambda": args.lam, "k1": args.k1, "widths": widths, "threshold": args.threshold,
              "hbar": config.hbar, "mass": config.mass}
    return text, params


def _read_inference_input(path: Path) -> dict:
    if not path.is_file():
        raise UsageError(f"input file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"input file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("offsets"), list):
        raise UsageError(f"input file {path} must hold an object with an 'offsets' list")
    n = len(data["offsets"])
    for key in ("sigmas", "modes"):
        if data.get(key) is not None and len(data[key]) != n:
            raise UsageError(f"'{key}' must have the same length as 'offsets'")
    return data


def cmd_infer_radius(args):
    path = Path(args.input)
    data = _read_inference_input(path)
    config, _ = resolve_units(args)
    offsets = [float(x) for x in data["offsets"]]
    sigmas = [float(s) for s in data.get("sigmas") or [0.0] * len(offsets)]
    modes = data.get("modes")

    if modes is None:
        assigned = assign_modes(offsets, args.tol_rel, sigmas)
        if isinstance(assigned, AssignmentFailure):
            raise DomainError(str(assigned))
        modes = [[lv.n] for lv in assigned]
    modes = [[int(m)] if isinstance(m, (int, float)) else [int(x) for x in m] for m in modes]

    if all(len(m) == 1 for m in modes):
        fit = fit_radius([MeasuredLevel(m[0], e, s) for m, e, s in zip(modes, offsets, sigmas)],
                         config)
        payload = {"radii": [fit.radius], "rms_residual": fit.rms_residual,
                   "assignment": [m[0] for m in modes], "coeffs": [fit.curvature_coeff]}
    else:
        fit = fit_torus(list(zip(modes, offsets, sigmas)), config)
        payload = {"radii": list(fit.radii), "rms_residual": fit.rms_residual,
                   "assignment": modes, "coeffs": list(fit.coeffs)}
    params = {"input": str(path), "data": data, "tol_rel": args.tol_rel,
              "hbar": config.hbar, "mass": config.mass}
    return json_text(payload), params


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--hbar", type=float, help="reduced Planck constant (default 1)")
    common.add_argument("--mass", type=float, help="particle mass (default 1)")
    common.add_argument("--config", help='JSON file {"hbar": .., "mass": .., "radii": [..]}')
    common.add_argument("--out", help="write output here instead of standard output")

    parser = argparse.ArgumentParser(prog="kkdelta", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amplitudes", parents=[common], help="r, t, R1, T1 as JSON")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--k1", type=float, required=True)
    p.add_argument("--radius", type=float)
    p.set_defaults(func=cmd_amplitudes)

    p = sub.add_parser("sweep", parents=[common], help="coefficients over a k1 grid as CSV")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--k1-min", type=float, required=True)
    p.add_argument("--k1-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--radius", type=float)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("currents", parents=[common], help="current field on a phi x z grid as CSV")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--k1", type=float, required=True)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--F1", type=parse_complex, default=complex(1.0), help="re:im")
    p.add_argument("--G1", type=parse_complex, default=complex(0.0), help="re:im")
    p.add_argument("--grid", default="8x3", help="NPHIxNZ")
    p.add_argument("--zrange", default="-1:1", help="zmin:zmax (use --zrange=-1:1)")
    p.add_argument("--radius", type=float)
    p.set_defaults(func=cmd_currents)

    p = sub.add_parser("spectrum", parents=[common], help="compact-mode levels as CSV")
    p.add_argument("--emax", type=float, required=True)
    p.add_argument("--radii", help="comma-separated radii, one per compact dimension")
    p.add_argument("--energy", type=float, help="beam energy for the open flag (default emax)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("oracle", parents=[common], help="square-barrier convergence table as CSV")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--k1", type=float, required=True)
    p.add_argument("--widths", required=True, help="comma-separated, strictly decreasing")
    p.add_argument("--threshold", type=float, help="fail if the last error exceeds this")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("infer-radius", parents=[common], help="fit radii to energy offsets")
    p.add_argument("--input", required=True, help='JSON {"offsets": [..], "sigmas"?: [..], "modes"?: [..]}')
    p.add_argument("--tol-rel", type=float, default=0.05)
    p.set_defaults(func=cmd_infer_radius)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest")
    p.add_argument("--out", help="write to this path instead of the recorded one")
    p.set_defaults(func=None)
    return parser


def _replay_argv(args) -> list[str]:
    path = Path(args.manifest)
    if not path.is_file():
        raise UsageError(f"manifest not found: {path}")
    manifest = json.loads(path.read_text(encoding="utf-8"))
    argv = list(manifest["argv"])
    if args.out is not None:
        if "--out" in argv:
            i = argv.index("--out")
            argv[i + 1] = args.out
        else:
            argv = [a for a in argv if not a.startswith("--out=")] + ["--out", args.out]
    return argv


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            return main(_replay_argv(args))
        text, params = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (DomainError, ValueError, ArithmeticError, ConvergenceError) as exc:
        print(f"kkdelta {args.command}: error: {exc}", file=sys.stderr)
        return 1

    if args.out is None:
        sys.stdout.write(text)
    else:
        atomic_write(args.out, text)
        manifest = {
            "command": args.command,
            "argv": argv,
            "parameters": params,
            "version": __version__,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        }
        atomic_write(f"{args.out}.manifest.json", json_text(manifest))
    return 0


if __name__ == "__main__":
    sys.exit(main())
