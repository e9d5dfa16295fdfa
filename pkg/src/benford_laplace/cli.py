"""Command-line interface.

Exit status is 0 on success, 1 for usage and domain errors, and 2 when a
computation was numerically unstable (an unstable inversion or a failed
evaluation).
"""

import argparse
import json
import sys
import warnings

import numpy as np

from . import __version__
from .cm import CATALOG_FORMS, build, cm_catalog
from .conformity import check_file, classify
from .digits import DigitSpec, benford_term, delta_extrema, delta_tilde
from .distributions import (
    CompletelyMonotone,
    Exponential,
    LogNormal,
    LogUniform,
    Normal,
    UniformFromOne,
    digit_prob_oracle,
    load_tabulated,
    sample,
)
from .errors import AccuracyWarning, DomainError, NumericError, StateError
from .experiments import load_config, run_experiment
from .laplace import error_bound, f_tilde_profile, invert, l1_norm, stehfest_weights, total_error

EXIT_OK, EXIT_USAGE, EXIT_UNSTABLE = 0, 1, 2

FAMILIES = {
    "exponential": (Exponential, ("rate",)),
    "lognormal": (LogNormal, ("mu", "sigma")),
    "uniform": (UniformFromOne, ("upper",)),
    "normal": (Normal, ("mean", "sd")),
    "loguniform": (LogUniform, ("decades", "base")),
}


class UsageError(Exception):
    pass


class Unstable(Exception):
    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_params(items):
    params = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"parameter {item!r} is not of the form key=value")
        params[key.strip()] = value.strip()
    return params


def _number(key, value):
    try:
        return float(value)
    except ValueError:
        raise UsageError(f"parameter {key}={value!r} is not a number") from None


def make_distribution(family, params):
    """Distribution from a family name and string parameters."""
    params = dict(params)
    if family == "tabulated":
        if set(params) != {"path"}:
            raise UsageError("tabulated takes path=<csv>")
        return load_tabulated(params["path"])
    if family == "cm":
        if set(params) != {"path"}:
            raise UsageError("cm takes path=<json expression>")
        with open(params["path"], encoding="utf-8") as fh:
            return CompletelyMonotone(build(fh.read()))
    if family in CATALOG_FORMS:
        return cm_catalog(family, **{k: _number(k, v) for k, v in params.items()})
    if family not in FAMILIES:
        known = sorted(FAMILIES) + sorted(CATALOG_FORMS) + ["tabulated", "cm"]
        raise UsageError(f"unknown family {family!r}; choose from {known}")
    cls, names = FAMILIES[family]
    extra = set(params) - set(names)
    if extra:
        raise UsageError(f"{family} takes parameters {names}, got {sorted(params)}")
    values = {k: _number(k, v) for k, v in params.items()}
    if family == "loguniform":
        values = {k: int(v) if v == int(v) else v for k, v in values.items()}
    return cls(**values)


def _spec(args):
    return DigitSpec(args.base, args.digit, args.run)


def _emit(args, payload, lines):
    if args.json:
        print(json.dumps(payload, indent=2, default=float))
    else:
        for line in lines:
            print(line)


def cmd_term(args):
    digits = [args.digit] if args.digit else range(1, args.base)
    rows = [(d, benford_term(DigitSpec(args.base, d, args.run))) for d in digits]
    payload = {"base": args.base, "run": args.run, "terms": {str(d): p for d, p in rows}}
    _emit(args, payload, ["digit  benford_term"] + [f"{d:5d}  {p:.10f}" for d, p in rows])


def cmd_delta(args):
    spec = _spec(args)
    lo, hi = delta_extrema(spec, args.grid_points)
    payload = {"base": spec.base, "digit": spec.digit, "run": spec.run, "benford_term": benford_term(spec),
               "delta_min": lo, "delta_max": hi, "delta_max_abs": max(-lo, hi)}
    lines = [f"benford term    {payload['benford_term']:.10f}",
             f"min delta       {lo:.10f}", f"max delta       {hi:.10f}", f"max |delta|     {max(-lo, hi):.10f}"]
    if args.s is not None:
        payload["delta_at_s"] = float(delta_tilde(spec, args.s))
        lines.append(f"delta({args.s:g})  {payload['delta_at_s']:.10f}")
    _emit(args, payload, lines)


def cmd_prob(args):
    pdf = make_distribution(args.dist, _parse_params(args.params))
    spec = _spec(args)
    p = digit_prob_oracle(pdf, spec, args.tol)
    term = benford_term(spec)
    payload = {"distribution": pdf.describe(), "probability": p, "benford_term": term, "deviation": p - term}
    _emit(args, payload, [f"distribution    {pdf.describe()}", f"probability     {p:.10f}",
                          f"benford term    {term:.10f}", f"deviation       {p - term:+.10f}"])


def cmd_bound(args):
    pdf = make_distribution(args.dist, _parse_params(args.params))
    spec = _spec(args)
    weights = stehfest_weights(args.order)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", AccuracyWarning)
        bound = error_bound(pdf, spec, weights)
        term = total_error(pdf, spec, weights)
    deviation = digit_prob_oracle(pdf, spec) - benford_term(spec)
    payload = {"distribution": pdf.describe(), "l1": bound.l1, "bound_lo": bound.lo, "bound_hi": bound.hi,
               "certified": bound.certified, "error_term": term.value, "method": term.method,
               "oracle_deviation": deviation, "unstable": term.unstable, "reason": term.reason,
               "warnings": [str(w.message) for w in caught]}
    lines = [f"distribution    {pdf.describe()}", f"L1 norm         {bound.l1:.6g}",
             f"bound           [{bound.lo:+.6f}, {bound.hi:+.6f}]" + ("  (certified)" if bound.certified else ""),
             f"error term      {term.value:+.6f}  ({term.method})", f"oracle dev.     {deviation:+.6f}"]
    if term.unstable:
        raise Unstable(f"inversion unstable: {term.reason}", (payload, lines))
    _emit(args, payload, lines)


def cmd_classify(args):
    pdf = make_distribution(args.dist, _parse_params(args.params))
    verdict = classify(pdf, _spec(args))
    payload = {"distribution": pdf.describe(), "classification": verdict.tag, "evidence": verdict.evidence}
    lines = [f"{pdf.describe()}: {verdict.tag}"] + [f"  {k}: {v}" for k, v in verdict.evidence.items()]
    _emit(args, payload, lines)


def cmd_check(args):
    report = check_file(args.file, args.base, args.second_digit, args.column)
    lines = [f"records {report.sample_size} (skipped {report.skipped}), base {report.base}, "
             f"{'second' if args.second_digit else 'first'} digit",
             "digit  count        observed   expected   deviation"]
    for d, c, f, e in report.rows():
        lines.append(f"{d:5d}  {c:11d}  {f:.6f}   {e:.6f}   {f - e:+.6f}")
    lines += [f"max |deviation|  {report.max_abs_deviation:.6f}", f"chi-square       {report.chi_square:.4f}"]
    _emit(args, report.to_dict(), lines)


def cmd_sweep(args):
    config = load_config(args.config) if args.config else None
    data = run_experiment(args.experiment, config, jobs=args.jobs)
    if args.out in (None, "-"):
        data.to_csv(sys.stdout)
    else:
        data.to_csv(args.out)
        print(f"wrote {len(data.rows)} rows to {args.out}", file=sys.stderr)


def _builtin_transform(name, a):
    if name == "inv-s":
        return (lambda s: 1.0 / s), (lambda t: np.ones_like(t))
    if name == "inv-s2":
        return (lambda s: 1.0 / s**2), (lambda t: t)
    if name == "shifted-pole":
        return (lambda s: 1.0 / (s + a)), (lambda t: np.exp(-a * t))
    raise UsageError(f"unknown transform {name!r}")


def cmd_invert(args):
    transform, exact = _builtin_transform(args.transform, args.a)
    t = np.array(args.t, dtype=float)
    if np.any(t <= 0):
        raise UsageError("times must be positive")
    values = np.atleast_1d(invert(transform, t, stehfest_weights(args.order)))
    truth = exact(t)
    rows = [{"t": float(x), "value": float(v), "exact": float(e), "abs_error": float(abs(v - e))}
            for x, v, e in zip(t, values, truth)]
    payload = {"transform": args.transform, "order": args.order, "a": args.a, "points": rows}
    lines = ["t           stehfest          exact             abs error"]
    lines += [f"{r['t']:<10g}  {r['value']:<16.10g}  {r['exact']:<16.10g}  {r['abs_error']:.3e}" for r in rows]
    _emit(args, payload, lines)


def cmd_profile(args):
    pdf = make_distribution(args.dist, _parse_params(args.params))
    profile = f_tilde_profile(pdf, weights=stehfest_weights(args.order))
    profile.to_csv(args.out)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        norm = l1_norm(profile)
    print(f"wrote {len(profile.spectrum)} points ({profile.method}) to {args.out}; L1 norm {norm.value:.6g}",
          file=sys.stderr)


def cmd_sample(args):
    pdf = make_distribution(args.dist, _parse_params(args.params))
    drawn = sample(pdf, args.n, args.seed)
    np.savetxt(args.out, drawn.values, fmt="%.17g")
    print(f"wrote {len(drawn)} samples ({drawn.method}) to {args.out}", file=sys.stderr)


def _add_digit_args(p, digit_default=1):
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--digit", type=int, default=digit_default)
    p.add_argument("--run", type=int, default=1)


def _add_dist_args(p):
    p.add_argument("--dist", required=True, help="family name, catalog form, 'tabulated' or 'cm'")
    p.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")


def build_parser():
    parser = _Parser(prog="benford-laplace", description="Digit laws through the Laplace transform.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("term", help="Benford term log_b(1 + l/d)")
    _add_digit_args(p, digit_default=None)
    p.set_defaults(func=cmd_term)

    p = sub.add_parser("delta", help="extrema of the spectral fluctuation")
    _add_digit_args(p)
    p.add_argument("--s", type=float, help="also evaluate the fluctuation at this log-scale point")
    p.add_argument("--grid-points", type=int, default=4096)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("prob", help="exact digit probability of a distribution")
    _add_dist_args(p)
    _add_digit_args(p)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("bound", help="L1 error bound and error term")
    _add_dist_args(p)
    _add_digit_args(p)
    p.add_argument("--order", type=int, default=12)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("classify", help="error-term category of a distribution")
    _add_dist_args(p)
    _add_digit_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("check", help="digit conformity of a data file")
    p.add_argument("file")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--second-digit", action="store_true")
    p.add_argument("--column", help="CSV column (0-based index or header name)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="reproduction sweeps as CSV")
    p.add_argument("--experiment", required=True, choices=("table1", "fig6", "fig8"))
    p.add_argument("--out", help="CSV path; stdout when omitted")
    p.add_argument("--config", help="key = value file overriding the default grid")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("invert", help="Stehfest inversion of a built-in transform")
    p.add_argument("--transform", required=True, choices=("inv-s", "inv-s2", "shifted-pole"),
                   help="1/s, 1/s^2 or 1/(s + a)")
    p.add_argument("--order", type=int, default=12)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--t", type=float, nargs="+", default=[0.1, 1.0, 10.0])
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("profile", help="write the inverse Laplace profile as CSV")
    _add_dist_args(p)
    p.add_argument("--order", type=int, default=12)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("sample", help="draw seeded variates, one per line")
    _add_dist_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)
    for choice in sub.choices.values():
        # accept --json after the subcommand too, without clobbering a leading one
        choice.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except Unstable as exc:
        if exc.payload:
            _emit(args, exc.payload[0], exc.payload[1])
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except (NumericError, FloatingPointError) as exc:
        print(f"error: numerically unstable: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except (UsageError, DomainError, StateError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
