"""Command-line front end: ``faraday-bell {simulate,fig2,fig3,plan,cavity-sweep}``.

Data files are CSV (or JSON with ``--format json``). When ``--output`` names
a file, a ``<output>.provenance.json`` sidecar records every resolved input.
Exit codes: 0 success, 2 invalid input, 3 computation error.
"""

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np
import yaml

from . import __version__, bell, cavity, diqkd, feasibility, protocol, qstate
from .protocol import Convention, InteractionParams

EXIT_OK, EXIT_INVALID, EXIT_COMPUTE = 0, 2, 3


class ValidationError(ValueError):
    pass


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.9g}"
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, Convention):
        return x.value
    return x


def dumps_json(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def dumps_csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _table(columns, rows, fmt):
    if fmt == "json":
        return dumps_json([dict(zip(columns, row)) for row in rows])
    return dumps_csv(columns, rows)


def _emit(args, text, provenance):
    if args.output in (None, "-"):
        sys.stdout.write(text)
        return
    out = Path(args.output)
    out.write_text(text)
    sidecar = out.with_name(out.name + ".provenance.json")
    sidecar.write_text(dumps_json({"tool": "faraday-bell", "version": __version__, **provenance}))


def _angle(args, value):
    return math.radians(value) if args.degrees else value


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from exc


def _resolve_profile(args):
    try:
        profile = feasibility.load_profile(args.profile)
    except feasibility.ProfileError as exc:
        raise ValidationError(str(exc)) from exc
    overrides = {}
    for item in args.set or []:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep:
            raise ValidationError(f"override {item!r} is not KEY=VALUE")
        if key not in feasibility.PROFILE_KEYS:
            raise ValidationError(f"unknown profile key: {key}")
        overrides[key] = yaml.safe_load(raw)
    if overrides:
        try:
            profile = profile.with_overrides(**overrides)
        except (ValueError, TypeError) as exc:
            raise ValidationError(str(exc)) from exc
    return profile


def _convention(text):
    try:
        return Convention.parse(text)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


# ---- simulate ---------------------------------------------------------------

def simulate(alpha_a, alpha_b, t_over_tau=0.0, convention=Convention.TWO_TRANSITION,
             analyser="compensated"):
    """Full chain for one pair of interaction angles, as a JSON-ready dict."""
    if t_over_tau < 0:
        raise ValidationError("t_over_tau must be non-negative")
    try:
        params = InteractionParams(alpha_a, alpha_b, convention)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    herald = protocol.evolve_and_herald(params, analyser=analyser)
    rho = protocol.decohere(herald.state, t_over_tau, 1.0)
    max_value, settings = bell.horodecki_max(rho, return_settings=True)
    mean_eff, delta_eff = protocol.effective_angles(params)
    try:
        closed = bell.violation_boundary(mean_eff, delta_eff)
    except protocol.HeraldingError:
        closed = None
    return {
        "inputs": {"alpha_a": params.alpha_a, "alpha_b": params.alpha_b,
                   "t_over_tau": t_over_tau, "convention": params.convention.value,
                   "analyser": analyser},
        "mean_alpha": params.mean_alpha,
        "delta_alpha": params.delta_alpha,
        "effective_angles": {"mean_alpha": mean_eff, "delta_alpha": delta_eff},
        "bell_coefficients": qstate.bell_coefficients(herald.state),
        "herald_probability": herald.herald_probability,
        "concurrence": qstate.concurrence(herald.state),
        "chsh_max": max_value,
        "violating": max_value > 2,
        "optimal_settings": settings.as_dict(),
        "chsh_at_optimal_settings": bell.chsh_value(rho, settings),
        "violation_boundary_t_over_tau": bell.violation_boundary_numeric(herald.state),
        "violation_boundary_closed_form": closed,
    }


def quoted_chsh_comparison():
    """Computed CHSH maxima beside the two quoted example values, for both conventions."""
    cases = (("low-q Bell test", 0.4 * math.pi, math.pi / 10, 2.32),
             ("telecom dot DI-QKD", 0.1 * math.pi, math.pi / 50, 2.45))
    rows = []
    for label, mean, delta, quoted in cases:
        for conv in Convention:
            params = InteractionParams.from_mean_delta(mean, delta, conv)
            state = protocol.evolve_and_herald(params).state
            computed = bell.horodecki_max(qstate.density_from_pure(state))
            rows.append({"case": label, "mean_alpha": mean, "delta_alpha": delta,
                         "convention": conv.value, "chsh_computed_pure": computed,
                         "chsh_closed_form": bell.heralded_chsh_max(*protocol.effective_angles(params)),
                         "chsh_quoted": quoted,
                         "t_over_tau_matching_quote": math.log(computed / quoted)})
    return rows


def _cmd_simulate(args):
    if args.compare_quoted:
        sys.stdout.write(dumps_json(quoted_chsh_comparison()))
        return
    report = simulate(_angle(args, args.alpha_a), _angle(args, args.alpha_b), args.t_over_tau,
                      _convention(args.convention), args.analyser)
    _emit(args, dumps_json(report), {"command": "simulate", "inputs": report["inputs"]})


# ---- tables -----------------------------------------------------------------

def _cmd_fig2(args):
    deltas = [_angle(args, d) for d in args.delta_alphas]
    grid = bell.default_mean_alpha_grid(args.n_mean)
    rows = bell.figure2_curves(deltas, grid)
    _emit(args, _table(bell.FIG2_COLUMNS, rows, args.format),
          {"command": "fig2", "delta_alphas": deltas, "mean_alpha_grid": grid.tolist()})


def _cmd_fig3(args):
    base = _resolve_profile(args)
    profile = diqkd.telecom_dot_profile(args.eta_c, args.eta_d, base=base)
    interaction = InteractionParams.from_mean_delta(
        _angle(args, args.mean_alpha), _angle(args, args.delta_alpha), profile.convention)
    n = int(round(args.max_km / args.step_km))
    distances = [i * args.step_km for i in range(n + 1)]
    points = diqkd.figure3_sweep(profile, interaction, distances, args.t_over_tau, args.chsh)
    _emit(args, _table(diqkd.FIG3_COLUMNS, [p.row() for p in points], args.format),
          {"command": "fig3", "profile": profile.to_dict(),
           "interaction": {"alpha_a": interaction.alpha_a, "alpha_b": interaction.alpha_b},
           "t_over_tau": args.t_over_tau, "chsh_override": args.chsh, "distances_km": distances})


def _cmd_plan(args):
    profile = _resolve_profile(args)
    interaction = profile.interaction(_angle(args, args.delta_alpha))
    report = feasibility.plan(profile, interaction, d=args.distance, n_runs=args.n_runs,
                              t_logic=args.t_logic_ns * 1e-9, dark_count_rate=args.dark_count_rate)
    data = report.as_dict()
    if args.format == "json":
        text = dumps_json(data)
    else:
        flat = {k: v for k, v in data.items() if k not in ("constraints_ok", "errors", "warnings")}
        flat.update({f"constraint_{k}": v for k, v in report.constraints_ok.items()})
        text = dumps_csv(list(flat), [list(flat.values())])
    _emit(args, text, {"command": "plan", "profile": profile.to_dict(),
                       "delta_alpha": interaction.delta_alpha, "distance": args.distance,
                       "n_runs": args.n_runs, "t_logic_ns": args.t_logic_ns,
                       "dark_count_rate": args.dark_count_rate})


def _cmd_cavity_sweep(args):
    profile = _resolve_profile(args)
    rows = cavity.kappa_ratio_sweep(profile.cavity, args.ratios)
    _emit(args, _table(cavity.SWEEP_COLUMNS, rows, args.format),
          {"command": "cavity-sweep", "profile": profile.to_dict(), "ratios": args.ratios})


def build_parser():
    parser = argparse.ArgumentParser(prog="faraday-bell", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, profile=None):
        p.add_argument("-o", "--output", help="output file (default: standard output)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--degrees", action="store_true", help="angles given in degrees")
        if profile:
            p.add_argument("--profile", default=profile,
                           help="bundled profile name (atoms, nv, dots, low-q) or YAML path")
            p.add_argument("--set", action="append", metavar="KEY=VALUE",
                           help="override a profile key (repeatable)")
        p.set_defaults(func=_COMMANDS[p.prog.split()[-1]])

    p = sub.add_parser("simulate", help="heralded state, CHSH and boundary for one angle pair")
    common(p)
    p.add_argument("--alpha-a", type=float, default=math.pi / 2)
    p.add_argument("--alpha-b", type=float, default=math.pi / 2)
    p.add_argument("--t-over-tau", type=float, default=0.0)
    p.add_argument("--convention", default="two-transition")
    p.add_argument("--analyser", choices=("compensated", "fixed"), default="compensated")
    p.add_argument("--compare-quoted", action="store_true",
                   help="print computed CHSH values beside the quoted examples")

    p = sub.add_parser("fig2", help="CHSH = 2 contours in (mean alpha, t/tau)")
    common(p)
    p.add_argument("--delta-alphas", type=_float_list, default=list(bell.DEFAULT_DELTA_ALPHAS))
    p.add_argument("--n-mean", type=int, default=200)

    p = sub.add_parser("fig3", help="DI-QKD key rate against distance")
    common(p, profile="dots")
    p.add_argument("--eta-c", type=float, default=0.3)
    p.add_argument("--eta-d", type=float, default=0.5)
    p.add_argument("--mean-alpha", type=float, default=diqkd.TELECOM_DOT_MEAN_ALPHA)
    p.add_argument("--delta-alpha", type=float, default=diqkd.TELECOM_DOT_DELTA_ALPHA)
    p.add_argument("--t-over-tau", type=float, default=None)
    p.add_argument("--chsh", type=float, default=None, help="override the modeled CHSH value")
    p.add_argument("--max-km", type=float, default=150.0)
    p.add_argument("--step-km", type=float, default=5.0)

    p = sub.add_parser("plan", help="loophole-free feasibility report for a platform")
    common(p, profile="low-q")
    p.set_defaults(format="json")
    p.add_argument("--distance", type=float, default=None, help="separation in metres")
    p.add_argument("--delta-alpha", type=float, default=math.pi / 10)
    p.add_argument("--n-runs", type=float, default=1e5)
    p.add_argument("--t-logic-ns", type=float, default=feasibility.DEFAULT_LOGIC_DELAY * 1e9)
    p.add_argument("--dark-count-rate", type=float, default=None)

    p = sub.add_parser("cavity-sweep", help="max Faraday rotation against kappa:kappa_s")
    common(p, profile="low-q")
    p.add_argument("--ratios", type=_float_list,
                   default=[0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0, 20.0, 50.0, 100.0])
    return parser


_COMMANDS = {"simulate": _cmd_simulate, "fig2": _cmd_fig2, "fig3": _cmd_fig3,
             "plan": _cmd_plan, "cavity-sweep": _cmd_cavity_sweep}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ValidationError, feasibility.ProfileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ArithmeticError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_COMPUTE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
