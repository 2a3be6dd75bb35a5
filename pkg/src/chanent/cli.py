"""Command-line entry point: ``chanent <subcommand> [options]``.

Exit codes: 0 success, 1 a verification check failed, 2 bad input,
3 channel not CPTP, 4 precondition violated (e.g. not a unital qubit
channel), 5 numerical failure.
"""

import argparse
import json
import math
import sys

from . import __version__, asymptotics, entropy, qubit_unital
from .channels import SCHMIDT_KINDS, named_channel, random_channel, sample_schmidt
from .errors import (
    ConvergenceFailure,
    InvalidParameter,
    NotCPTP,
    NotQubit,
    NotUnital,
    ParseError,
    POutOfRange,
    SingularMarginal,
)
from .serialize import channel_to_dict, load_channel, to_csv

DEFAULT_SEED = 0xC0FFEE

DEFAULT_TOLERANCES = {
    "symmetry": qubit_unital.TOL_SYMMETRY,
    "concavity": qubit_unital.TOL_CONCAVE,
    "p_star": 1e-6,
    "theorem2": 1e-4,
    "theorem2_profile": 1e-8,
}

EXIT_CODES = [
    ((ParseError, InvalidParameter, json.JSONDecodeError), 2),
    ((NotCPTP,), 3),
    ((NotUnital, NotQubit, POutOfRange), 4),
    ((ConvergenceFailure, SingularMarginal), 5),
]


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _tolerances(text):
    out = {}
    for item in filter(None, (text or "").split(",")):
        key, sep, value = item.partition("=")
        if not sep or key not in DEFAULT_TOLERANCES:
            raise argparse.ArgumentTypeError(f"bad tolerance {item!r}; keys: {sorted(DEFAULT_TOLERANCES)}")
        out[key] = float(value)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--channel", help="channel JSON document or path to one")
    common.add_argument("--named", help="named channel constructor")
    common.add_argument("--params", default="{}", help="JSON parameters for --named")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--trials", type=int, default=20)
    common.add_argument("--d", type=int, default=None)
    common.add_argument("--d-list", type=_int_list, default=None)
    common.add_argument("--k", type=int, default=None, help="Kraus rank of random channels (default d^2)")
    common.add_argument("--nu", default=None, help=f"Schmidt distribution(s): {','.join(SCHMIDT_KINDS)}")
    common.add_argument("--restarts", type=int, default=entropy.DEFAULT_RESTARTS)
    common.add_argument("--log-base", choices=["e", "2"], default="e")
    common.add_argument("--tol", type=_tolerances, default={}, help="overrides, e.g. symmetry=1e-9,theorem2=1e-4")
    common.add_argument("--per-trial", action="store_true", help="also emit per-trial rows (fig1)")
    common.add_argument("--out", default=None, help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="chanent", description="Quantum channel entropy toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("entropy", "map entropy, channel entropy and their gap"),
        ("verify-unital", "symmetry, concavity and saturation checks for a unital qubit channel"),
        ("fig1", "mean D(sigma||gamma) for the four Schmidt distributions"),
        ("conjecture", "map entropy and D at the maximally entangled input vs dimension"),
        ("spectrum", "output spectrum for one channel and Schmidt vector"),
        ("free-moments", "free multiplicative convolution moment check"),
        ("random-channel", "sample a random channel and print it as JSON"),
    ]:
        sub.add_parser(name, parents=[common], help=help_)
    return parser


def _channel(args):
    if args.channel:
        return load_channel(args.channel)
    if args.named:
        try:
            params = json.loads(args.params)
        except json.JSONDecodeError as exc:
            raise ParseError(f"--params: invalid JSON at char {exc.pos}: {exc.msg}") from exc
        if args.d is not None:
            params.setdefault("d", args.d)
        if args.k is not None:
            params.setdefault("k", args.k)
        return named_channel(args.named, params, seed=args.seed)
    raise ParseError("give --channel or --named")


def _metadata(args, **extra) -> dict:
    meta = {
        "version": __version__,
        "command": args.command,
        "seed": args.seed,
        "log_base": args.log_base,
        "tolerances": {**DEFAULT_TOLERANCES, **args.tol},
    }
    meta.update(extra)
    return meta


def _scale(args) -> float:
    return 1.0 if args.log_base == "e" else 1.0 / math.log(2.0)


def _nu_kinds(args, default):
    kinds = (args.nu or default).split(",")
    for k in kinds:
        if k not in SCHMIDT_KINDS:
            raise InvalidParameter(f"unknown Schmidt distribution {k!r}")
    return kinds


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_entropy(args):
    phi = _channel(args)
    report = entropy.lemma1_gap(phi, restarts=args.restarts, seed=args.seed)
    out = report.to_dict(log_base=math.e if args.log_base == "e" else 2.0)
    out["log_base"] = args.log_base
    out["metadata"] = _metadata(args, channel=phi.name)
    return 0, _dump(out)


def cmd_verify_unital(args):
    phi = _channel(args)
    tol = {**DEFAULT_TOLERANCES, **args.tol}
    sym = qubit_unital.verify_symmetry(phi)
    conc = qubit_unital.verify_concavity(phi)
    t2 = qubit_unital.verify_theorem2(phi, restarts=args.restarts, seed=args.seed)
    checks = [
        ("symmetry", sym, tol["symmetry"]),
        ("concavity", conc, tol["concavity"]),
        ("p_star", abs(t2.p_star - 0.5), tol["p_star"]),
        ("theorem2", abs(t2.delta), tol["theorem2"]),
        ("theorem2_profile", abs(t2.delta_profile), tol["theorem2_profile"]),
    ]
    results = [{"check": n, "measured": v, "tolerance": t, "pass": bool(v <= t)} for n, v, t in checks]
    c = _scale(args)
    out = {
        "checks": results,
        "h_channel": t2.lhs * c,
        "h_channel_profile": t2.lhs_profile * c,
        "h_map_minus_log2": t2.rhs * c,
        "p_star": t2.p_star,
        "all_pass": all(r["pass"] for r in results),
        "metadata": _metadata(args, channel=phi.name),
    }
    return (0 if out["all_pass"] else 1), _dump(out)


def cmd_fig1(args):
    d_list = args.d_list or [4, 8, 16]
    kinds = _nu_kinds(args, ",".join(SCHMIDT_KINDS))
    c = _scale(args)
    rows = []
    for d in d_list:
        for kind in kinds:
            vals = asymptotics.fig1_trial_values(d, kind, args.trials, args.seed)
            if args.per_trial:
                for t, v in enumerate(vals):
                    rows.append(["fig1", d, kind, t, 1, v * c, 0.0, (math.log(d) - v) * c, (math.log(d) - 0.5) * c, args.seed])
            p = asymptotics.CurvePoint(d, kind, *asymptotics.mean_stderr(vals), args.trials)
            rows.append(
                ["fig1", d, kind, "aggregate", p.trials, p.mean_D * c, p.stderr * c, p.entropy_estimate * c, p.reference * c, args.seed]
            )
    columns = ["experiment", "d", "nu_kind", "row", "trials", "mean_D", "stderr", "entropy_estimate", "reference", "seed"]
    return 0, to_csv(_metadata(args, trials=args.trials), columns, rows)


def cmd_conjecture(args):
    d_list = args.d_list or [2, 4, 8, 16, 32]
    c = _scale(args)
    rows = [
        ["conjecture", r.d, "aggregate", r.trials, r.mean_h_map * c, r.h_map_deviation * c, r.h_map_stderr * c,
         r.mean_d_phi_plus * c, r.d_phi_plus_deviation * c, r.d_phi_plus_stderr * c, args.seed]
        for r in asymptotics.conjecture_sweep(d_list, args.trials, args.seed, args.k)
    ]
    columns = ["experiment", "d", "row", "trials", "mean_h_map", "h_map_deviation", "h_map_stderr",
               "mean_d_phi_plus_lower_bound", "d_phi_plus_deviation", "d_phi_plus_stderr", "seed"]
    return 0, to_csv(_metadata(args, trials=args.trials), columns, rows)


def cmd_spectrum(args):
    if args.channel or args.named:
        phi = _channel(args)
    else:
        phi = random_channel(args.d or 4, args.k, seed=args.seed)
    kind = _nu_kinds(args, "delta")[0]
    lam = sample_schmidt(phi.dim_in, kind, args.seed)
    sample = asymptotics.output_spectrum(phi, lam)
    ev = sample.eigenvalues[::-1]
    rows = [["spectrum", sample.d, kind, i, v, v * sample.d**2, args.seed] for i, v in enumerate(ev)]
    meta = _metadata(args, identity_deviation=sample.identity_deviation, channel=phi.name)
    return 0, to_csv(meta, ["experiment", "d", "nu_kind", "index", "eigenvalue", "rescaled", "seed"], rows)


def cmd_free_moments(args):
    kind = _nu_kinds(args, "dir_d_1")[0]
    report = asymptotics.free_moment_check(args.d or 16, args.k, kind, args.trials, args.seed)
    out = report.as_dict()
    out["metadata"] = _metadata(args, normalization="mean-1 rescaled spectra")
    return 0, _dump(out)


def cmd_random_channel(args):
    phi = random_channel(args.d or 2, args.k, seed=args.seed)
    doc = channel_to_dict(phi)
    doc["seed"] = args.seed
    return 0, json.dumps(doc) + "\n"


COMMANDS = {
    "entropy": cmd_entropy,
    "verify-unital": cmd_verify_unital,
    "fig1": cmd_fig1,
    "conjecture": cmd_conjecture,
    "spectrum": cmd_spectrum,
    "free-moments": cmd_free_moments,
    "random-channel": cmd_random_channel,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text = COMMANDS[args.command](args)
    except Exception as exc:
        for types, code in EXIT_CODES:
            if isinstance(exc, types):
                print(f"chanent: {type(exc).__name__}: {exc}", file=sys.stderr)
                return code
        raise
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
