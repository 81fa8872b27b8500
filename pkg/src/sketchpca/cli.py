"""Command line interface.

Subcommands: simgen (generate data), pca (exact basis), approx (one
sketch method), compare (error grids), bounds (theorem and corollary
bounds for one cell), bench (timing grids).

Exit codes: 0 success, 1 usage error, 2 data or format error.
"""

import argparse
import csv
import math
import sys
from pathlib import Path

from .approx import METHOD_AXIS, METHOD_TAGS, compute_method, truncate
from .bounds import coherence, corollary_bounds, cs_bound, nystrom_bound
from .exceptions import FormatError
from .harness import (
    ExperimentConfig,
    format_timing_table,
    plot_relative_error,
    run_experiment,
    time_methods,
    write_results_csv,
)
from .linalg import center_columns, exact_pca
from .matio import read_matrix, read_matrix_csv, write_matrix
from .sketching import sample_uniform
from .simulate import PrecisionSpec, precision_band, precision_random, sample_mvn

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit code 2; this remaps them to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _int_list(text):
    return [int(tok) for tok in text.split(",") if tok != ""]


def _tag_list(text):
    tags = [tok.strip() for tok in text.split(",") if tok.strip()]
    for t in tags:
        if t not in METHOD_TAGS:
            raise argparse.ArgumentTypeError(f"unknown method tag {t!r}")
    return tags


def _l_grid(text):
    if text == "auto":
        return "auto"
    return _int_list(text)


def _model(text):
    kind, _, param = text.partition(":")
    if kind == "random":
        return ("random", float(param))
    if kind == "band":
        return ("band", int(param))
    raise argparse.ArgumentTypeError(f"model must be random:<x> or band:<b>, got {text!r}")


def _load(path):
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_matrix_csv(path)
    return read_matrix(path)


def _condition(args, parser):
    if getattr(args, "infile", None) is not None and getattr(args, "model", None) is not None:
        parser.error("give either --in or --model, not both")
    if getattr(args, "infile", None) is not None:
        return args.infile
    if getattr(args, "model", None) is None:
        parser.error("one of --in or --model is required")
    if args.p is None or args.n is None:
        parser.error("--model needs --p and --n")
    kind, param = args.model
    if kind == "random":
        return PrecisionSpec(model="random", p=args.p, x=param)
    return PrecisionSpec(model="band", p=args.p, b=param)


def _cmd_simgen(args):
    if args.model[0] == "random":
        omega, spec = precision_random(args.p, args.model[1], args.seed)
    else:
        omega, spec = precision_band(args.p, args.model[1])
    x = sample_mvn(args.n, omega, args.seed)
    write_matrix(args.out, x)
    print(f"wrote {args.n}x{args.p} sample for {spec.label} (pd_shift={spec.pd_shift:.6g}) to {args.out}")
    return 0


def _cmd_pca(args):
    x = center_columns(_load(args.infile))
    basis = exact_pca(x, args.d)
    write_matrix(args.out, basis.vectors)
    print(f"wrote exact rank-{args.d} basis to {args.out}")
    return 0


def _cmd_approx(args):
    x = center_columns(_load(args.infile))
    n, p = x.shape
    axis = METHOD_AXIS[args.method]
    if args.method == "exact":
        basis = exact_pca(x, args.d if args.d else min(n, p))
    else:
        q = p if axis == "columns" else n
        sel = sample_uniform(q, args.l, args.seed, axis)
        basis = compute_method(args.method, x, sel, route=args.route)
    if args.d:
        basis = truncate(basis, args.d)
    write_matrix(args.out, basis.vectors)
    print(f"wrote {args.method} basis ({basis.vectors.shape[0]}x{basis.vectors.shape[1]}) to {args.out}")
    return 0


def _cmd_compare(args, parser):
    cfg = ExperimentConfig(
        condition=_condition(args, parser),
        d_list=args.d,
        n=args.n,
        l_grid=args.l_grid,
        methods=args.methods,
        seeds=args.seeds,
        route=args.route,
        compute_bounds=args.bounds,
    )
    rows = run_experiment(cfg)
    write_results_csv(rows, args.csv)
    print(f"wrote {len(rows)} rows to {args.csv}")
    if args.plot:
        plot_relative_error(rows, args.plot)
        print(f"wrote plot to {args.plot}")
    return 0


def _cmd_bounds(args):
    x = center_columns(_load(args.infile))
    p = x.shape[1]
    sel = sample_uniform(p, args.l, args.seed, "columns")
    thm1 = nystrom_bound(x, sel, args.d)
    thm2 = cs_bound(x, sel, args.d)
    coh = coherence(x[:, sel.permutation], sel.l)
    vnys = compute_method("v_nys", x, sel)
    # drop the uniform sqrt(l/p) column scale so the Gram trace measures
    # the extension's orthonormality defect rather than the scale
    vnys_d = truncate(vnys, args.d).vectors * math.sqrt(p / sel.l)
    cor_nys, cor_cs = corollary_bounds(coh, p, sel.l, x.shape[0], thm2.gap, vnys_d)
    with open(args.csv, "w", encoding="ascii", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["kind", "d", "l", "gap", "coherence", "term1", "term2", "total", "clamped"])
        for rep in (thm1, thm2, cor_nys, cor_cs):
            w.writerow([
                rep.kind, rep.d, rep.l, repr(rep.gap),
                "" if rep.coherence is None else repr(rep.coherence),
                repr(rep.term1), repr(rep.term2), repr(rep.total),
                int(rep.clamped),
            ])
    print(f"wrote 4 bound rows to {args.csv}")
    return 0


def _cmd_bench(args, parser):
    cfg = ExperimentConfig(
        condition=_condition(args, parser),
        d_list=args.d,
        n=args.n,
        l_grid=args.l_grid,
        methods=args.methods,
        seeds=args.seeds,
        route=args.route,
        runs=args.runs,
    )
    rows = time_methods(cfg)
    if args.csv:
        write_results_csv(rows, args.csv)
        print(f"wrote {len(rows)} rows to {args.csv}")
    print(format_timing_table(rows))
    return 0


def _add_grid_options(sp):
    sp.add_argument("--in", dest="infile", metavar="PATH", help="stored data matrix")
    sp.add_argument("--model", type=_model, help="random:<x> or band:<b> (needs --p and --n)")
    sp.add_argument("--p", type=int, help="feature count for --model")
    sp.add_argument("--n", type=int, help="sample count for --model")
    sp.add_argument("--d", type=_int_list, required=True, help="target dimensions, comma separated")
    sp.add_argument("--l-grid", type=_l_grid, default="auto",
                    help="'auto' or comma separated sketch sizes")
    sp.add_argument("--methods", type=_tag_list, default=["v_nys", "v_cs"],
                    help="comma separated method tags")
    sp.add_argument("--seeds", type=_int_list, default=[0], help="comma separated seeds")
    sp.add_argument("--route", choices=("stable", "space"), default="stable")


def _build_parser():
    parser = _Parser(prog="sketchpca", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    sp = sub.add_parser("simgen", help="generate a seeded sample matrix")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--model", type=_model, required=True, help="random:<x> or band:<b>")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_simgen)

    sp = sub.add_parser("pca", help="exact principal basis of a stored matrix")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_pca)

    sp = sub.add_parser("approx", help="one sketch approximation of a stored matrix")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--method", choices=METHOD_TAGS, required=True)
    sp.add_argument("--l", type=int, default=None, help="sketch size (ignored for exact)")
    sp.add_argument("--d", type=int, default=None, help="truncate the basis to d vectors")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--route", choices=("stable", "space"), default="stable")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_approx)

    sp = sub.add_parser("compare", help="error grid over (d, l, method, seed)")
    _add_grid_options(sp)
    sp.add_argument("--bounds", action="store_true", help="also evaluate theorem bounds")
    sp.add_argument("--csv", required=True, help="output rows")
    sp.add_argument("--plot", default=None, help="optional figure path (svg/pdf/png)")
    sp.set_defaults(func=lambda a: _cmd_compare(a, parser))

    sp = sub.add_parser("bounds", help="theorem and corollary bounds for one cell")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--csv", required=True)
    sp.set_defaults(func=_cmd_bounds)

    sp = sub.add_parser("bench", help="median wall-clock timing grid")
    _add_grid_options(sp)
    sp.add_argument("--runs", type=int, default=4, help="repetitions per cell")
    sp.add_argument("--csv", default=None, help="optional output rows")
    sp.set_defaults(func=lambda a: _cmd_bench(a, parser))

    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.cmd == "approx" and args.method != "exact" and args.l is None:
            parser.error("--l is required for sketch methods")
        if args.cmd == "approx" and args.method == "exact" and args.d is None:
            parser.error("--d is required for method exact")
        return int(args.func(args) or 0)
    except SystemExit as e:
        return int(e.code or 0)
    except (FormatError, OSError, ValueError, ZeroDivisionError, ArithmeticError) as e:
        print(f"sketchpca: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
