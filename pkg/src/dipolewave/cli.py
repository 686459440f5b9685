"""Command-line front end.

Every subcommand writes its tables into the output directory (``--output-dir``,
else ``$DIPOLEWAVE_OUTPUT_DIR``, else the working directory) and prints a
short summary. Parameters may also come from a flat ``key = value`` file
given with ``--config``; flags on the command line win.
"""

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import acceptance, tables
from .beam import (
    Polarization,
    PupilMap,
    compensation_phase,
    ideal_profile,
    optimize_lg_waist,
    phase_overlap_penalty,
)
from .cavity import Cavity, cavity_report
from .coupling import CouplingReport, axial_hole_extension, pupil_to_angular, spatial_overlap
from .dipole import FULL_WEIGHTED_SOLID_ANGLE, DipoleKind, coverage_fraction, weighted_solid_angle
from .errors import DipoleWaveError, DataError
from .mirror import ParabolicMirror, coverage_domain
from .temporal import TwoLevelAtom, excite, make_envelope
from .transitions import TransitionCandidate, check_two_level, find, load_registry

OUTPUT_ENV = "DIPOLEWAVE_OUTPUT_DIR"


def _kinds(value):
    if value == "both":
        return list(DipoleKind)
    return [DipoleKind.parse(value)]


def _emit(args, stem, header, rows, metadata=None):
    out = Path(args.output_dir)
    rows = [list(r) for r in rows]
    if args.format == "json":
        records = [dict(zip(header, r)) for r in rows]
        path = tables.write_json(out / f"{stem}.json", {"metadata": metadata or {}, "rows": records})
    else:
        path = tables.write_csv(out / f"{stem}.csv", header, rows, metadata)
    print(f"wrote {path}")
    return path


def cmd_coverage(args):
    if args.depth is not None:
        depths = [args.depth]
    else:
        depths = np.linspace(args.depth_min, args.depth_max, args.steps)
    rows = []
    for kind in _kinds(args.dipole):
        for d in depths:
            mirror = ParabolicMirror(args.f, float(d) * args.f)
            domain = coverage_domain(mirror)
            frac = coverage_fraction(kind, domain)
            rows.append((kind.value, float(d), np.degrees(domain.theta_max), frac))
            print(f"{kind.value:5s} depth={tables.fmt(float(d))}f "
                  f"rim={np.degrees(domain.theta_max):.4f}deg fraction={frac:.6f}")
    _emit(args, "coverage", ["dipole", "depth_over_f", "rim_angle_deg", "coverage_fraction"], rows)
    return 0


def cmd_profile(args):
    mirror = ParabolicMirror(args.f, args.depth * args.f)
    for kind in _kinds(args.dipole):
        profile = ideal_profile(kind, mirror, args.samples)
        if args.normalize:
            profile = profile.normalized()
        rows = zip(profile.radius / args.f, profile.intensity * args.f**2)
        _emit(args, f"profile_{kind.value}", ["radius", "intensity"], rows,
              {"units": "focal_length", "dipole": kind.value, "depth_over_f": args.depth})
    if args.lg_fit:
        waist, eta = optimize_lg_waist(mirror)
        print(f"LG01 best waist={waist / args.f:.6f}f overlap={eta:.6f}")
    return 0


def cmd_overlap(args):
    kind = DipoleKind.parse(args.dipole)
    mirror = ParabolicMirror(args.f, args.depth * args.f)
    polarization = Polarization(args.polarization)
    if args.pupil_csv:
        pupil = PupilMap.read_csv(args.pupil_csv, polarization)
        # pupil grids are stored in units of f
        pupil = PupilMap(pupil.rho * args.f, pupil.phi, pupil.phase, polarization)
    else:
        pupil = PupilMap.flat(mirror, polarization)
    if args.compensate:
        pupil = pupil.compose(compensation_phase(pupil))
    profile = ideal_profile(kind, mirror, args.samples)
    amplitude = pupil_to_angular(profile, pupil, mirror)
    eta = spatial_overlap(amplitude, kind)
    coverage = weighted_solid_angle(kind, coverage_domain(mirror))
    report = CouplingReport(coverage, eta, eta)
    if args.axial_efficiency:
        report = axial_hole_extension(report, kind, coverage_domain(mirror).complement(),
                                      args.axial_efficiency)
    payload = report.to_dict()
    payload["coverage_fraction"] = coverage / FULL_WEIGHTED_SOLID_ANGLE
    payload["phase_penalty"] = phase_overlap_penalty(pupil, kind, mirror)
    path = tables.write_json(Path(args.output_dir) / "overlap.json", payload)
    for key, value in payload.items():
        print(f"{key}={tables.fmt(value)}")
    print(f"wrote {path}")
    return 0


def cmd_excite(args):
    atom = TwoLevelAtom(args.wavelength, 1.0 / args.lifetime)
    pulse = make_envelope(args.shape, args.time_constant)
    result = excite(atom, pulse, args.eta, detuning=args.detuning, n_points=args.points)
    meta = {"shape": args.shape, "time_constant_over_tau": args.time_constant,
            "eta": args.eta, "detuning_over_gamma": args.detuning, "lifetime_s": args.lifetime,
            "max_P_e": result.max_probability, "t_max_over_tau": result.t_max}
    _emit(args, "excitation", ["t_over_tau", "P_e"], zip(result.t, result.probability), meta)
    print(f"max P_e={result.max_probability:.8f} at t={result.t_max:.6f} tau "
          f"({atom.to_seconds(result.t_max):.6g} s)")
    return 0


def cmd_cavity(args):
    cavity = Cavity(args.R, args.L, args.w0)
    report = cavity_report(args.wavelength, cavity, args.linewidth)
    path = tables.write_json(Path(args.output_dir) / "cavity.json", report)
    figs = report["figures"]
    print(f"F_Omega={tables.fmt(figs['F_Omega'])} F_g={tables.fmt(figs['F_g'])} "
          f"P_abs_cav={tables.fmt(report['p_abs_cav'])} ratio={tables.fmt(report['identity_ratio'])}")
    print(f"wrote {path}")
    return 0


def cmd_transitions(args):
    registry = load_registry(args.registry)
    if args.action == "list":
        candidates = registry
    elif args.species:
        candidates = [find(args.species, registry)]
    else:
        missing = [k for k in ("protons", "neutrons", "nuclear_spin", "j_ground",
                               "j_excited", "wavelength_nm", "channels")
                   if getattr(args, k) is None]
        if missing:
            raise ValueError("transitions check needs --species or all of: "
                             + ", ".join("--" + m.replace("_", "-") for m in missing))
        candidates = [TransitionCandidate(
            species=args.label, proton_count=args.protons, neutron_count=args.neutrons,
            nuclear_spin=args.nuclear_spin, j_ground=args.j_ground, j_excited=args.j_excited,
            wavelength=args.wavelength_nm * 1e-9, decay_channels=args.channels)]
    rows = []
    failed = False
    for cand in candidates:
        verdict = check_two_level(cand)
        failed |= not verdict.passed
        status = "pass" if verdict.passed else "fail"
        rows.append((cand.species, cand.transition or "-", cand.wavelength * 1e9, status,
                     ";".join(verdict.violations) or "-"))
        print(f"{cand.species:12s} {cand.transition or '-':10s} "
              f"{cand.wavelength * 1e9:8.2f} nm  {status}  {';'.join(verdict.violations)}")
    _emit(args, "transitions", ["species", "transition", "wavelength_nm", "verdict", "violations"], rows)
    return 1 if (failed and args.action == "check") else 0


def cmd_reproduce(args):
    results = acceptance.run_all()
    for r in results:
        print(r.line())
    acceptance.write_artifacts(results, args.output_dir)
    n_ok = sum(r.passed for r in results)
    print(f"{n_ok}/{len(results)} criteria passed")
    return 0 if n_ok == len(results) else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file; flags override it")
    common.add_argument("--output-dir", default=os.environ.get(OUTPUT_ENV, "."))
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(prog="dipolewave", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coverage", parents=[common], help="power fraction covered by the mirror")
    p.add_argument("--f", type=float, default=1.0, help="focal length")
    p.add_argument("--depth", type=float, help="single mirror depth in units of f")
    p.add_argument("--depth-min", type=float, default=0.0)
    p.add_argument("--depth-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--dipole", choices=("pi", "sigma", "both"), default="pi")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("profile", parents=[common], help="ideal pupil intensity profiles")
    p.add_argument("--f", type=float, default=1.0)
    p.add_argument("--depth", type=float, default=6.0, help="in units of f")
    p.add_argument("--dipole", choices=("pi", "sigma", "both"), default="both")
    p.add_argument("--samples", type=int, default=4001)
    p.add_argument("--normalize", action="store_true", help="scale to unit power")
    p.add_argument("--lg-fit", action="store_true", help="also fit an LG01 mode")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("overlap", parents=[common], help="coupling report for a pupil map")
    p.add_argument("--f", type=float, default=1.0)
    p.add_argument("--depth", type=float, default=6.0)
    p.add_argument("--dipole", choices=("pi", "sigma"), default="pi")
    p.add_argument("--pupil-csv", help="rho,phi,phase_rad table, rho in units of f")
    p.add_argument("--polarization", choices=("radial", "circular"), default="radial")
    p.add_argument("--compensate", action="store_true", help="apply the conjugate phase plate")
    p.add_argument("--axial-efficiency", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=4001)
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("excite", parents=[common], help="single-photon excitation dynamics")
    p.add_argument("--shape", choices=("rising", "falling", "gaussian"), default="rising")
    p.add_argument("--time-constant", type=float, default=1.0, help="in lifetimes")
    p.add_argument("--eta", type=float, default=1.0, help="spatial efficiency")
    p.add_argument("--detuning", type=float, default=0.0, help="in units of Gamma")
    p.add_argument("--lifetime", type=float, default=1.0, help="seconds")
    p.add_argument("--wavelength", type=float, default=657e-9)
    p.add_argument("--points", type=int, default=2001)
    p.set_defaults(func=cmd_excite)

    p = sub.add_parser("cavity", parents=[common], help="cavity figures of merit")
    p.add_argument("--lambda", dest="wavelength", type=float, default=1e-6)
    p.add_argument("--w0", type=float, default=1e-5)
    p.add_argument("--R", type=float, default=0.99999)
    p.add_argument("--L", type=float, default=0.01)
    p.add_argument("--linewidth", type=float, help="decay rate in 1/s")
    p.set_defaults(func=cmd_cavity)

    p = sub.add_parser("transitions", parents=[common], help="two-level transition registry")
    p.add_argument("action", choices=("list", "check"))
    p.add_argument("--registry", help="alternative registry table")
    p.add_argument("--species")
    p.add_argument("--label", default="custom")
    p.add_argument("--protons", type=int)
    p.add_argument("--neutrons", type=int)
    p.add_argument("--nuclear-spin")
    p.add_argument("--j-ground")
    p.add_argument("--j-excited")
    p.add_argument("--wavelength-nm", type=float)
    p.add_argument("--channels", type=int)
    p.set_defaults(func=cmd_transitions)

    p = sub.add_parser("reproduce", parents=[common], help="run the acceptance table")
    p.set_defaults(func=cmd_reproduce)
    return parser


def read_config(path):
    values = {}
    for n, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{n}: expected key=value")
        values[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return values


def _apply_config(parser, argv):
    """Re-parse with config-file values installed as defaults."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        values = read_config(args.config)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest: a for a in subparser._actions}
    for key, raw in values.items():
        if key not in known or key in ("help", "config", "func"):
            parser.error(f"unknown config key {key!r} for {args.command}")
        action = known[key]
        if action.type is not None:
            value = action.type(raw)
        elif action.const is True:
            value = raw.lower() in ("1", "true", "yes", "on")
        else:
            value = raw
        if action.choices is not None and value not in action.choices:
            parser.error(f"config {key}={raw!r} not in {sorted(action.choices)}")
        subparser.set_defaults(**{key: value})
    return parser.parse_args(argv)


def main(argv=None):
    parser = build_parser()
    args = _apply_config(parser, argv)
    try:
        return args.func(args)
    except (DataError, ArithmeticError, OSError) as exc:
        print(f"dipolewave: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        parser.print_usage(sys.stderr)
        print(f"dipolewave: error: {exc}", file=sys.stderr)
        return 2
    except DipoleWaveError as exc:
        print(f"dipolewave: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
