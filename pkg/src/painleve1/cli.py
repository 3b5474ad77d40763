"""Command-line surface: classify, params, integrate, compare, poles, fit,
appendix-b.  Emits the CSV/JSON artifacts the figure pipeline consumes.

Exit codes: 0 success, 2 flag/usage error, 3 numerical failure (the error
class name goes to stderr).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import asymptotics as asym
from .errors import Painleve1Error
from .harness import fit_params, preset_by_name, run_compare, appendix_b_stokes
from .ode import IntegratorConfig, PoleData, State, Trajectory, integrate
from .specfun import arg_gamma
from .stokes import (PHASE_LOG_COEFF, SolutionClass, StokesMultipliers,
                     classify, constraint_residual, invert_osc, invert_sing,
                     osc_params, sing_params)


def _parse_complex(text: str) -> complex:
    try:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected RE,IM pair, got {text!r}") from exc


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo_s, hi_s = text.split("..")
        lo, hi = int(lo_s), int(hi_s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected LO..HI range, got {text!r}") from exc
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


_CONFIG_KEYS = {"rtol": float, "atol": float, "h_init": float, "y_detect": float,
                "fit_band_lo": float, "fit_band_hi": float, "restart_offset": float,
                "series_degree": int, "max_poles": int}


def _load_config(path: str | None, rtol: float | None, atol: float | None) -> IntegratorConfig:
    kw: dict = {}
    if path:
        band = list(IntegratorConfig().fit_band)
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, value = line.partition("=")
                key = key.strip()
                if key not in _CONFIG_KEYS:
                    raise ValueError(f"unknown config key {key!r}")
                parsed = _CONFIG_KEYS[key](value.strip())
                if key == "fit_band_lo":
                    band[0] = parsed
                elif key == "fit_band_hi":
                    band[1] = parsed
                else:
                    kw[key] = parsed
        kw["fit_band"] = tuple(band)
    if rtol is not None:
        kw["rtol"] = rtol
    if atol is not None:
        kw["atol"] = atol
    return IntegratorConfig(**kw)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _params_dict(s2: complex) -> dict:
    # classification needs s2 only; the full set is degenerate at |s2| = 1
    cls = classify(StokesMultipliers(0.0, 0.0, 0.0, 0.0, s2))
    out: dict = {"class": cls.value, "abs_s2": abs(s2)}
    if cls is SolutionClass.OSCILLATORY:
        p = osc_params(s2)
        out.update(a=p.a, phi=p.phi, phi_applicable=p.phi_applicable)
    elif cls is SolutionClass.SINGULAR:
        p = sing_params(s2)
        out.update(b=p.b, psi=p.psi)
    return out


def _cmd_classify(args) -> int:
    _emit(_params_dict(args.s2))
    return 0


def _cmd_params(args) -> int:
    d = _params_dict(args.s2)
    d.pop("class", None)
    _emit(d)
    return 0


def _cmd_integrate(args) -> int:
    cfg = _load_config(args.config, args.rtol, args.atol)
    if args.y0 is not None:
        init: State | PoleData = State(0.0 if args.x0 is None else args.x0, args.y0, args.dy0)
    else:
        init = PoleData(args.pole_p, args.pole_h)
    traj = integrate(init, args.x_end, cfg)
    traj.to_csv(args.out)
    traj.poles_to_csv(args.poles_out)
    final, h_final = traj.samples[-1]
    _emit({"x": final.x, "y": final.y, "dy": final.dy, "H": h_final,
           "n_poles": len(traj.poles), "files": {"traj": args.out, "poles": args.poles_out}})
    return 0


def _cmd_compare(args) -> int:
    cfg = _load_config(args.config, args.rtol, args.atol)
    preset = preset_by_name(args.preset)
    report = run_compare(preset, args.x_min, cfg, mask_eps=args.mask_eps)
    report.write_grid_csv(args.grid_out)
    files = {"traj": "", "grid": args.grid_out}
    if args.traj_out:
        report.trajectory.to_csv(args.traj_out)
        files["traj"] = args.traj_out
    report.write_json(args.out, files)
    _emit(report.to_json_dict(files))
    return 0


def _cmd_poles(args) -> int:
    params = sing_params(args.s2)
    rows = asym.predict_poles(params, args.n[0], args.n[1])
    lines = ["n,x"] + [f"{n},{x:.17g}" for n, x in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _read_trajectory(traj_path: str, poles_path: str | None) -> Trajectory:
    samples = []
    with open(traj_path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "x,y,dy,H":
            raise ValueError(f"bad trajectory header {header!r}")
        for line in fh:
            x, y, dy, h = (float(v) for v in line.strip().split(","))
            samples.append((State(x, y, dy), h))
    poles = []
    if poles_path:
        with open(poles_path, encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header != "n,p,h":
                raise ValueError(f"bad poles header {header!r}")
            for line in fh:
                _, p, h = line.strip().split(",")
                poles.append(PoleData(float(p), float(h)))
    direction = -1 if samples[-1][0].x < samples[0][0].x else 1
    return Trajectory(samples=samples, poles=poles, direction=direction,
                      config_echo=IntegratorConfig())


def _cmd_fit(args) -> int:
    traj = _read_trajectory(args.traj, args.poles)
    if args.solution_class == "osc":
        p = fit_params(traj, SolutionClass.OSCILLATORY)
        arg_s2 = p.phi + PHASE_LOG_COEFF * p.a + arg_gamma(complex(0.0, -p.a / 2.0)) + math.pi / 4.0
        s2 = invert_osc(p, arg_s2)
        _emit({"class": "osc", "a": p.a, "phi": p.phi,
               "s2": [s2.real, s2.imag], "abs_s2": abs(s2)})
    else:
        p = fit_params(traj, SolutionClass.SINGULAR)
        arg_s2 = 2.0 * (p.psi - PHASE_LOG_COEFF * p.b
                        - 0.5 * arg_gamma(complex(0.5, -p.b)) - math.pi / 4.0)
        s2 = invert_sing(p, arg_s2)
        _emit({"class": "sing", "b": p.b, "psi": p.psi,
               "s2": [s2.real, s2.imag], "abs_s2": abs(s2)})
    return 0


def _cmd_appendix_b(args) -> int:
    s = appendix_b_stokes()
    _emit({"multipliers": s.to_json_dict(), "constraint_residual": constraint_residual(s)})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="painleve1",
        description="Real Painleve I transcendents: integration through poles, "
                    "connection formulas, and asymptotic comparison.")
    parser.add_argument("--config", help="key=value integrator config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="solution class and constants from s2")
    p.add_argument("--s2", type=_parse_complex, required=True, metavar="RE,IM")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("params", help="connection constants from s2")
    p.add_argument("--s2", type=_parse_complex, required=True, metavar="RE,IM")
    p.set_defaults(func=_cmd_params)

    p = sub.add_parser("integrate", help="integrate from initial data or pole data")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--y0", type=float)
    group.add_argument("--pole-p", type=float)
    p.add_argument("--x0", type=float, help="start abscissa for --y0 (default 0)")
    p.add_argument("--dy0", type=float)
    p.add_argument("--pole-h", type=float)
    p.add_argument("--x-end", type=float, required=True)
    p.add_argument("--rtol", type=float)
    p.add_argument("--atol", type=float)
    p.add_argument("--out", default="traj.csv")
    p.add_argument("--poles-out", default="poles.csv")
    p.set_defaults(func=_cmd_integrate)

    p = sub.add_parser("compare", help="numeric vs asymptotic comparison report")
    p.add_argument("--preset", choices=["zero-ic", "zero-pole"], required=True)
    p.add_argument("--x-min", type=float, required=True)
    p.add_argument("--rtol", type=float)
    p.add_argument("--atol", type=float)
    p.add_argument("--mask-eps", type=float, default=asym.DEFAULT_MASK_EPS)
    p.add_argument("--out", default="report.json")
    p.add_argument("--grid-out", default="grid.csv")
    p.add_argument("--traj-out", help="also write the trajectory CSV here")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("poles", help="predicted pole lattice of a singular solution")
    p.add_argument("--s2", type=_parse_complex, required=True, metavar="RE,IM")
    p.add_argument("--n", type=_parse_range, required=True, metavar="LO..HI")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_poles)

    p = sub.add_parser("fit", help="recover connection constants from a trajectory CSV")
    p.add_argument("--traj", required=True)
    p.add_argument("--class", dest="solution_class", choices=["osc", "sing"], required=True)
    p.add_argument("--poles", help="poles CSV (required for --class sing)")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("appendix-b", help="Stokes multipliers of the zero-pole solution")
    p.set_defaults(func=_cmd_appendix_b)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "integrate" and args.y0 is not None and args.dy0 is None:
        parser.error("--y0 requires --dy0")
    if args.command == "integrate" and args.pole_p is not None and args.pole_h is None:
        parser.error("--pole-p requires --pole-h")
    if args.command == "fit" and args.solution_class == "sing" and not args.poles:
        parser.error("--class sing requires --poles")
    try:
        return args.func(args)
    except Painleve1Error as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
