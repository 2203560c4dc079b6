"""Command-line interface: ``skewinfo <command> [flags]``.

Tabular output is CSV with a header row. Exit status is 0 on success, 1 when
a property check fails and 2 on usage errors (bad flags, parameters or
matrix files).
"""

import argparse
import csv
import io
import sys

import numpy as np

from .errors import SkewInfoError, UnsupportedMetricError
from .harness import SUITES, SamplerConfig, default_metrics, run_suite
from .matrixio import MatrixFileError, parse_matrix_spec
from .mcfunc import (
    KernelGrid,
    builtin,
    builtin_names,
    eval_c,
    eval_c_hat,
    eval_d,
    eval_f_lambda,
    metric_constant,
    numeric_metric_constant,
)
from .qig import correlation, skew_info, variance
from .representation import h_repr_of, measure_of, reconstruct_from_h, reconstruct_from_measure

__all__ = ["main", "build_parser", "metric_from_args"]

# which flag carries each family's parameter
_PARAM_FLAG = {"wyd": ("p", "p"), "variant_bridge": ("p", "p"), "bridge": ("gamma", "gamma"), "extreme": ("lam", "lam")}

# claim checked by each suite, for the summary table
CLAIMS = {
    "axioms": "MC-function axioms",
    "reconstruction-measure": "c = int c_lam dmu_c",
    "reconstruction-h": "c = C0/(x+y) exp int w h",
    "metric-constant": "m(c) = 1/int (1+lam)^2/(2 lam) dmu_c",
    "sandwich": "0 <= I <= Var",
    "pure-equality": "I = Var on pure states",
    "convexity": "I convex and Var concave",
    "additivity": "I additive on tensor products",
    "time-invariance": "I invariant under commuting evolution",
    "metric-monotonicity": "K contracts under channels",
    "correlation": "Corr identities and Cauchy-Schwarz",
    "mixture": "I = int I_lam dmu_c",
    "variant-bridge": "variant bridge derivative in p",
    "oracle-equivalence": "I equals trace formula and commutator route",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _dims(text):
    try:
        dims = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("dims must be comma-separated integers") from None
    if not dims or min(dims) < 2:
        raise argparse.ArgumentTypeError("every dimension must be at least 2")
    return dims


def _grid(text):
    try:
        lo, hi, n = text.split(",")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError("grid must be lo,hi,n") from None


def _metric_flags(p):
    p.add_argument("--metric", required=True, help="one of " + ", ".join(builtin_names()))
    p.add_argument("--p", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--lambda", dest="lam", type=float)


def _out_flag(p):
    p.add_argument("--out", help="write output here instead of stdout")


def build_parser():
    parser = _Parser(prog="skewinfo", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate c, c_hat, d and f_lambda at (x, y)", allow_abbrev=False)
    _metric_flags(p)
    p.add_argument("x", type=float)
    p.add_argument("y", type=float)
    _out_flag(p)

    p = sub.add_parser("constant", help="metric constant m(c)", allow_abbrev=False)
    _metric_flags(p)
    _out_flag(p)

    p = sub.add_parser("measure", help="representing measure: density samples, atoms, mass", allow_abbrev=False)
    _metric_flags(p)
    p.add_argument("--samples", type=int, default=9, help="density sample points in (0, 1)")
    _out_flag(p)

    p = sub.add_parser("reconstruct", help="max relative reconstruction error on a grid", allow_abbrev=False)
    _metric_flags(p)
    p.add_argument("--route", choices=("measure", "h"), default="measure")
    p.add_argument("--grid", type=_grid, default=(1e-3, 1e3, 7), help="lo,hi,n log-spaced grid")
    p.add_argument("--tol", type=float)
    _out_flag(p)

    p = sub.add_parser("skew", help="skew information and variance", allow_abbrev=False)
    _metric_flags(p)
    p.add_argument("--rho", required=True, help="density file or inline spec such as diag(0.9,0.1)")
    p.add_argument("--obs", required=True, help="observable file or sigmax, sigmay, sigmaz")
    _out_flag(p)

    p = sub.add_parser("corr", help="metric adjusted correlation of two observables", allow_abbrev=False)
    _metric_flags(p)
    p.add_argument("--rho", required=True)
    p.add_argument("--obs", required=True)
    p.add_argument("--obs2", required=True)
    _out_flag(p)

    for name, helptext in (("verify", "run one property suite"), ("report", "run every suite")):
        p = sub.add_parser(name, help=helptext, allow_abbrev=False)
        if name == "verify":
            p.add_argument("--suite", required=True, choices=tuple(SUITES))
            p.add_argument("--metric")
            p.add_argument("--p", type=float)
            p.add_argument("--gamma", type=float)
            p.add_argument("--lambda", dest="lam", type=float)
            p.add_argument("--fault", type=float, help="perturb every kernel c by this amount")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--dims", type=_dims, default=(2, 3, 4, 6))
        _out_flag(p)
    return parser


def metric_from_args(args):
    name = args.metric.lower().replace("-", "_")
    params = {}
    if name in _PARAM_FLAG:
        key, attr = _PARAM_FLAG[name]
        value = getattr(args, attr)
        if value is None:
            flag = "--lambda" if attr == "lam" else f"--{attr}"
            raise UsageError(f"metric {name} needs {flag}")
        params[key] = value
    return builtin(name, **params)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return repr(float(v))


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _cmd_eval(args):
    mc = metric_from_args(args)
    lam = args.lam if args.lam is not None else 1.0
    m = metric_constant(mc)
    d = float(eval_d(mc, args.x, args.y)) if m else None
    row = (mc.label, args.x, args.y, float(eval_c(mc, args.x, args.y)),
           float(eval_c_hat(mc, args.x, args.y)), d, lam, float(eval_f_lambda(lam, args.x, args.y)))
    return _csv(("metric", "x", "y", "c", "c_hat", "d", "lambda", "f_lambda"), [row]), 0


def _cmd_constant(args):
    mc = metric_from_args(args)
    m = metric_constant(mc)
    numeric = numeric_metric_constant(mc)
    show = lambda v: ("%.12g" % v) if v else "non-regular"  # noqa: E731
    return _csv(("metric", "m", "numeric_m"), [(mc.label, show(m), show(numeric))]), 0


def _cmd_measure(args):
    mc = metric_from_args(args)
    measure = measure_of(mc)
    rows = []
    if measure.density is not None:
        for lam in np.linspace(0.0, 1.0, args.samples + 2)[1:-1]:
            rows.append(("density", lam, float(measure.pdf(lam))))
    for loc, mass in measure.atoms:
        rows.append(("atom", float(loc), float(mass)))
    rows.append(("total_mass", "", measure.total_mass()))
    return _csv(("kind", "lambda", "value"), rows), 0


def _cmd_reconstruct(args):
    mc = metric_from_args(args)
    lo, hi, n = args.grid
    grid = KernelGrid.log_spaced(lo, hi, n)
    rep = measure_of(mc) if args.route == "measure" else h_repr_of(mc)
    recon = reconstruct_from_measure if args.route == "measure" else reconstruct_from_h
    worst = 0.0
    for x, y in grid.points:
        exact = eval_c(mc, x, y)
        worst = max(worst, abs(recon(rep, x, y) - exact) / exact)
    tol = args.tol if args.tol is not None else (1e-6 if args.route == "measure" else 1e-5)
    ok = worst <= tol
    out = _csv(("metric", "route", "points", "max_rel_error", "tol", "passed"),
               [(mc.label, args.route, str(len(grid)), worst, tol, str(ok).lower())])
    return out, 0 if ok else 1


def _cmd_skew(args):
    mc = metric_from_args(args)
    rho = parse_matrix_spec(args.rho, "density")
    a = parse_matrix_spec(args.obs, "observable")
    if a.shape != rho.shape:
        raise UsageError("state and observable dimensions differ")
    val, var = skew_info(mc, rho, a), variance(rho, a)
    ratio = val / var if var > 0 else None
    return _csv(("metric", "I", "Var", "I_over_Var"), [(mc.label, val, var, ratio)]), 0


def _cmd_corr(args):
    mc = metric_from_args(args)
    rho = parse_matrix_spec(args.rho, "density")
    a = parse_matrix_spec(args.obs, "observable")
    b = parse_matrix_spec(args.obs2, "observable")
    if not a.shape == b.shape == rho.shape:
        raise UsageError("state and observable dimensions differ")
    z = correlation(mc, rho, a, b)
    return _csv(("metric", "re", "im"), [(mc.label, z.real, z.imag)]), 0


def _config(args):
    try:
        return SamplerConfig(seed=args.seed, dims=args.dims, trials=args.trials)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cmd_verify(args):
    cfg = _config(args)
    metrics = [metric_from_args(args)] if args.metric else None
    report = run_suite(args.suite, cfg, metrics, fault=args.fault)
    return report.to_json() + "\n", 0 if report.passed else 1


def _cmd_report(args):
    cfg = _config(args)
    rows = []
    failed = False
    for suite, (_, default, _) in SUITES.items():
        if default == "none":
            groups = [("variant_bridge", None)]
        elif default == "oracle":
            groups = [(mc.label, [mc]) for mc in default_metrics("regular")]
        else:
            groups = [(mc.label, [mc]) for mc in default_metrics(default)]
        for label, metrics in groups:
            if metrics is not None and suite.startswith("reconstruction"):
                try:
                    (measure_of if suite.endswith("measure") else h_repr_of)(metrics[0])
                except UnsupportedMetricError:
                    continue
            rep = run_suite(suite, cfg, metrics)
            if rep.trials == 0:
                continue
            failed |= not rep.passed
            rows.append((suite, label, CLAIMS[suite], str(rep.trials), str(rep.failures),
                         rep.max_violation, str(rep.passed).lower()))
    header = ("suite", "metric", "claim", "trials", "failures", "max_violation", "passed")
    return _csv(header, rows), 1 if failed else 0


_COMMANDS = {
    "eval": _cmd_eval,
    "constant": _cmd_constant,
    "measure": _cmd_measure,
    "reconstruct": _cmd_reconstruct,
    "skew": _cmd_skew,
    "corr": _cmd_corr,
    "verify": _cmd_verify,
    "report": _cmd_report,
}


def main(argv=None):
    """Run the CLI and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text, code = _COMMANDS[args.command](args)
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 2
    except (UsageError, MatrixFileError, SkewInfoError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code
