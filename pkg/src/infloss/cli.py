"""Command line entry point.

Every subcommand writes CSV to ``--out`` (stdout by default).  Usage errors
exit with status 2, failures during computation with status 1.
"""

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import pointwise as pw
from .dataio import LibsvmFormatError, csv_text, read_libsvm
from .experiments import (
    CSV_HEADER,
    TASKS,
    ConsistencyConfig,
    ExperimentConfig,
    consistency_sweep,
    default_config,
    parse_config_lines,
    run_experiment,
)
from .fas import fas_lp
from .kendall import n_pairs
from .weak import rng_stream


class UsageError(Exception):
    pass


# the three-output instance used by ``pointwise-demo``
DEMO_LABELS = ("a", "b", "c")
DEMO_LOSS = np.array([[0, 1, 1], [1, 0, 2], [1, 2, 0]], dtype=float)
DEMO_TAU = {(0, 1, 2): 5 / 8, (2,): 1 / 8, (0, 2): 1 / 8, (1, 2): 1 / 8}


def pointwise_rows():
    rows = []
    for rule, fn in (("IL", pw.infimum_risk), ("AC", pw.average_risk), ("SP", pw.supremum_risk)):
        for z, name in enumerate(DEMO_LABELS):
            rows.append((f"risk_{rule}", name, fn(z, DEMO_TAU, DEMO_LOSS)))
    for name, p in zip(DEMO_LABELS, pw.ac_marginal(DEMO_TAU, 3)):
        rows.append(("rho_ac", name, p))
    for rule in pw.RULES:
        rows.append((f"predict_{rule}", DEMO_LABELS[pw.predict(DEMO_TAU, DEMO_LOSS, rule)], 1))
    rows.append(("eta", "", pw.ambiguity_eta(DEMO_TAU, 3)))
    rows.append(("nu", "", pw.discrepancy_nu(DEMO_LOSS)))
    rows.append(("comparison_constant", "", pw.comparison_constant(DEMO_LOSS, DEMO_TAU)))
    rows.append(("tightest_constant", "", pw.tightest_constant(DEMO_LOSS, DEMO_TAU)))
    return ("quantity", "output", "value"), rows


def fas_bench_rows(m_min, m_max, trials, seed):
    """Fraction of standard-normal objectives whose LP vertex is integral."""
    if not 2 <= m_min <= m_max:
        raise UsageError("need 2 <= --m-min <= --m-max")
    if trials < 1:
        raise UsageError("--trials must be positive")
    rows = []
    for m in range(m_min, m_max + 1):
        rng = rng_stream(seed, "fas-bench", m)
        hits = sum(fas_lp(rng.standard_normal(n_pairs(m)), m=m).integral for _ in range(trials))
        rows.append((m, trials, hits / trials))
    return ("m", "trials", "integral_fraction"), rows


def libsvm_rows(path, dense):
    ds = read_libsvm(path)
    if dense:
        X, y = ds.to_dense()
        header = ("label",) + tuple(f"f{j + 1}" for j in range(X.shape[1]))
        return header, [(int(lab),) + tuple(float(v) for v in row) for lab, row in zip(y, X)]
    rows = [(r, lab, i, v) for r, (lab, feats) in enumerate(zip(ds.labels, ds.rows))
            for i, v in feats]
    return ("row", "label", "index", "value"), rows


def _read_config(path, cls):
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_lines(fh, cls)
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _experiment_config(args):
    kw = _read_config(args.config, ExperimentConfig)
    for flag, key in (("seed", "seed"), ("folds", "folds"), ("corruption", "corruption"),
                      ("c", "c_grid"), ("methods", "methods"), ("n", "n"), ("m", "m"),
                      ("out", "out")):
        val = getattr(args, flag, None)
        if val is not None:
            kw[key] = tuple(val) if isinstance(val, list) else val
    kw.pop("task", None)
    try:
        return default_config(args.task, **kw)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _consistency_kw(args):
    kw = _read_config(args.config, ConsistencyConfig)
    if args.seed is not None:
        kw["seed"] = args.seed
    if args.n_list is not None:
        kw["n_list"] = tuple(args.n_list)
    if args.c is not None:
        kw["c"] = args.c
    kw.pop("task", None)
    try:
        replace(ConsistencyConfig(task=args.task), **kw)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    return kw


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    common.add_argument("--folds", type=int, default=None, help="cross-validation folds (default 8)")
    common.add_argument("--out", default=None, help="output CSV path (default stdout)")
    common.add_argument("--config", default=None, metavar="FILE",
                        help="file of key=value lines overriding defaults")

    p = argparse.ArgumentParser(prog="infloss", description="Weakly supervised structured prediction with the infimum loss.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("pointwise-demo", parents=[common],
                   help="exact risks and constants on a three-output example")

    fb = sub.add_parser("fas-bench", parents=[common],
                        help="integrality rate of the feedback arc set LP relaxation")
    fb.add_argument("--m-min", type=int, default=3)
    fb.add_argument("--m-max", type=int, default=6)
    fb.add_argument("--trials", type=int, default=100)

    ex = sub.add_parser("experiment", parents=[common], help="cross-validated corruption sweep")
    ex.add_argument("task", choices=TASKS)
    ex.add_argument("--corruption", default=None)
    ex.add_argument("--c", type=float, nargs="+", default=None, help="corruption levels")
    ex.add_argument("--methods", nargs="+", choices=("IL", "AC", "SP"), default=None)
    ex.add_argument("--n", type=int, default=None)
    ex.add_argument("--m", type=int, default=None)

    co = sub.add_parser("consistency", parents=[common], help="learning curve with lambda = n^-1/2")
    co.add_argument("task", choices=TASKS)
    co.add_argument("--n-list", type=int, nargs="+", default=None)
    co.add_argument("--c", type=float, default=None, help="corruption level")

    pl = sub.add_parser("parse-libsvm", parents=[common], help="parse a LIBSVM file to CSV")
    pl.add_argument("file")
    pl.add_argument("--dense", action="store_true", help="one column per feature")
    return p


def run(args):
    """Header and rows for the parsed arguments, plus the output path."""
    seed = 0 if args.seed is None else args.seed
    if args.command == "pointwise-demo":
        return pointwise_rows() + (args.out,)
    if args.command == "fas-bench":
        return fas_bench_rows(args.m_min, args.m_max, args.trials, seed) + (args.out,)
    if args.command == "experiment":
        cfg = _experiment_config(args)
        return CSV_HEADER, run_experiment(cfg), cfg.out
    if args.command == "consistency":
        kw = _consistency_kw(args)
        n_list = kw.pop("n_list", ConsistencyConfig.n_list)
        kw.setdefault("seed", seed)
        return ("n", "risk", "slope"), consistency_sweep(args.task, n_list, **kw), args.out
    if args.command == "parse-libsvm":
        return libsvm_rows(args.file, args.dense) + (args.out,)
    raise UsageError(f"unknown command {args.command!r}")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        header, rows, out = run(args)
        text = csv_text(rows, header)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, LibsvmFormatError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"infloss: error: {exc}", file=sys.stderr)
        return 1
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            with open(out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"infloss: error: {exc}", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
