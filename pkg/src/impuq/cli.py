"""Command-line interface.

Subcommands: entropy-bounds, decompose, pbox, contaminate, demo-dependency,
focal-select, alphas. Every command prints a human table to stdout; with
--out it also writes line-delimited JSON records and renders a PNG figure
alongside (override the figure path with --fig). All numeric output uses 9
significant digits and every command is deterministic given its inputs,
flags, and seed.

Exit codes: 0 success, 1 internal/convergence failure, 2 input validation
failure. The default seed is 42, overridable with the IMPUQ_SEED environment
variable; an explicit --seed wins.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .core import (
    ConvergenceError,
    ImpuqError,
    Tolerance,
    ValidationError,
)
from .credal import CredalSet
from .contamination import ContaminationModel
from .decomposition import (
    additive_tu,
    contnn_decompose_instances,
    dependency_experiment,
    estimate_alphas_for_bundle,
    weighted_tu,
)
from .formats import (
    format_float,
    load_alphas,
    load_bundle,
    load_cdf,
    load_ellipsoids,
    load_gamble,
    load_probability_intervals,
    write_ndjson,
)
from .interval import IntervalModel
from .pbox import PBox
from .randomset import select_focal_budget

_LN2 = float(np.log(2.0))


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("IMPUQ_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"IMPUQ_SEED must be an integer, got {env!r}")
    return 42


def _tolerance(args) -> Tolerance:
    return Tolerance(abs_tol=args.tol, opt_tol=args.opt_tol, grid_resolution=args.grid)


def _entropy_scale(args) -> tuple[float, str]:
    if args.entropy_base == "2":
        return 1.0 / _LN2, "bits"
    return 1.0, "nats"


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [
        max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
        for i, h in enumerate(header)
    ]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
    return lines


def _emit(args, lines: list[str], records: list[dict], figure=None) -> None:
    for line in lines:
        print(line)
    if args.out:
        write_ndjson(records, args.out)
    fig_path = args.fig
    if fig_path is None and args.out:
        fig_path = str(Path(args.out).with_suffix(".png"))
    if fig_path and figure is not None:
        figure(fig_path)


def _instance_entropy_splits(bundle, tolerance) -> list[tuple[float, float]]:
    """Per-instance (aleatoric, epistemic) parts for a prediction bundle.

    Interval kinds use the credal entropy split (lower entropy, entropy gap).
    Sample kinds use the mean sampled entropy plus the entropy gap of the
    per-class min/max envelope.
    """
    from .core import shannon_entropy
    from .credal import ProbabilityIntervals

    out = []
    if bundle.kind in ("credal", "inn-intervals"):
        for i in range(bundle.instance_count):
            credal = CredalSet.from_intervals(
                ProbabilityIntervals(bundle.lowers[i], bundle.uppers[i]), tolerance
            )
            eb = credal.entropy_bounds(tolerance)
            out.append((eb.lower, max(eb.upper - eb.lower, 0.0)))
    else:
        for i in range(bundle.instance_count):
            rows = bundle.samples[i]
            au = float(np.mean([shannon_entropy(r) for r in rows]))
            credal = CredalSet.from_intervals(
                ProbabilityIntervals(rows.min(axis=0), rows.max(axis=0)), tolerance
            )
            eb = credal.entropy_bounds(tolerance)
            out.append((au, max(eb.upper - eb.lower, 0.0)))
    return out


def cmd_entropy_bounds(args) -> int:
    tolerance = _tolerance(args)
    scale, unit = _entropy_scale(args)
    intervals = load_probability_intervals(args.input)
    credal = CredalSet.from_intervals(intervals, tolerance)
    bounds = credal.entropy_bounds(tolerance)
    eu = max(bounds.upper - bounds.lower, 0.0)
    rows = [
        ["upper entropy", format_float(bounds.upper * scale)],
        ["lower entropy", format_float(bounds.lower * scale)],
        ["epistemic gap", format_float(eu * scale)],
        ["argmax", " ".join(format_float(p) for p in bounds.argmax.probs)],
        ["argmin", " ".join(format_float(p) for p in bounds.argmin.probs)],
    ]
    records = [
        {
            "record": "entropy-bounds",
            "entropy_base": args.entropy_base,
            "upper": bounds.upper * scale,
            "lower": bounds.lower * scale,
            "eu": eu * scale,
            "argmax": list(bounds.argmax.probs),
            "argmin": list(bounds.argmin.probs),
        }
    ]

    def figure(path):
        from . import plotting

        plotting.save_entropy_bounds(bounds, path, unit=unit)

    _emit(args, _table([f"quantity ({unit})", "value"], rows), records, figure)
    return 0


def cmd_decompose(args) -> int:
    tolerance = _tolerance(args)
    scale, unit = _entropy_scale(args)

    if args.rule == "contnn":
        if not (args.bnn and args.inn) or args.eps is None:
            raise ValidationError("contnn rule needs --bnn, --inn, and --eps")
        bnn = load_bundle(args.bnn)
        inn = load_bundle(args.inn)
        decomps = contnn_decompose_instances(
            bnn, inn, args.eps, convention=args.contnn_eps_convention, tolerance=tolerance
        )
    else:
        if not args.input:
            raise ValidationError(f"{args.rule} rule needs --input")
        bundle = load_bundle(args.input)
        splits = _instance_entropy_splits(bundle, tolerance)
        if args.rule == "additive":
            decomps = [additive_tu(au, eu) for au, eu in splits]
        else:
            if args.alphas:
                alphas = load_alphas(args.alphas)
            elif args.alphas_method:
                alphas = estimate_alphas_for_bundle(bundle, args.alphas_method, tolerance)
            else:
                raise ValidationError(
                    "weighted rule needs --alphas FILE or --alphas-method"
                )
            print(
                f"alphas: alpha1={format_float(alphas.alpha1)} "
                f"alpha2={format_float(alphas.alpha2)} method={alphas.method}"
            )
            for key, value in sorted(alphas.evidence.items()):
                if isinstance(value, float):
                    print(f"  {key}: {format_float(value)}")
            decomps = [weighted_tu(au, eu, alphas) for au, eu in splits]

    display = [
        {"instance": i, "tu": d.tu * scale, "au": d.au * scale, "eu": d.eu * scale}
        for i, d in enumerate(decomps)
    ]
    aggregate = {
        "instance": "mean",
        "tu": float(np.mean([d["tu"] for d in display])),
        "au": float(np.mean([d["au"] for d in display])),
        "eu": float(np.mean([d["eu"] for d in display])),
    }
    rows = [
        [str(d["instance"]), format_float(d["tu"]), format_float(d["au"]),
         format_float(d["eu"])]
        for d in display + [aggregate]
    ]
    records = [
        {
            "record": "decomposition",
            "rule": decomps[0].rule,
            "entropy_base": args.entropy_base,
            "params": decomps[min(i, len(decomps) - 1)].params,
            **{k: d[k] for k in ("instance", "tu", "au", "eu")},
        }
        for i, d in enumerate(display + [aggregate])
    ]

    def figure(path):
        from . import plotting

        plotting.save_decomposition(display, path, unit=unit)

    _emit(args, _table(["instance", f"tu ({unit})", f"au ({unit})", f"eu ({unit})"], rows),
          records, figure)
    return 0


def cmd_pbox(args) -> int:
    lower_cdf = load_cdf(args.lower_cdf)
    upper_cdf = load_cdf(args.upper_cdf)
    gamble = load_gamble(args.gamble)
    box = PBox(lower_cdf=lower_cdf, upper_cdf=upper_cdf)
    ns = args.n
    if len(ns) > 1 and any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValidationError("partition counts must be strictly increasing")
    report = box.convergence_report(gamble, ns, literal=args.pbox_literal)
    rows = [[str(n), format_float(lo), format_float(up)] for n, lo, up in report]
    records = [
        {"record": "pbox-bounds", "n": n, "lower": lo, "upper": up,
         "literal": bool(args.pbox_literal)}
        for n, lo, up in report
    ]

    def figure(path):
        from . import plotting

        plotting.save_pbox_convergence(report, path)

    _emit(args, _table(["n", "lower", "upper"], rows), records, figure)
    return 0


def cmd_contaminate(args) -> int:
    cdf = load_cdf(args.cdf)
    gamble = load_gamble(args.gamble)
    a, b = args.interval
    model = ContaminationModel(
        epsilon=args.eps, precise=cdf, imprecise=IntervalModel(a, b)
    )
    result = {
        "epsilon": args.eps,
        "precise": model.precise_expectation(gamble),
        "lower": model.lower_expectation(gamble),
        "upper": model.upper_expectation(gamble),
    }
    rows = [[k, format_float(v)] for k, v in result.items()]
    records = [{"record": "contamination", **result}]

    def figure(path):
        from . import plotting

        plotting.save_contamination(result, path)

    _emit(args, _table(["quantity", "value"], rows), records, figure)
    return 0


def cmd_demo_dependency(args) -> int:
    seeds = args.seeds if args.seeds else [_resolve_seed(args)]
    rows = dependency_experiment(
        f_spec=args.f_spec,
        sigma1=args.sigma1,
        sigma2=args.sigma2,
        sizes=args.sizes,
        removals=args.removals,
        seeds=seeds,
        mu1=args.mu1,
        mu2=args.mu2,
        bootstrap=args.bootstrap,
    )
    table_rows = [
        [
            str(r.seed),
            str(r.size),
            str(r.removed),
            format_float(r.mean_difference),
            format_float(r.sigma1_hat),
            format_float(r.sigma2_hat),
            format_float(r.noise_estimate),
            format_float(r.bootstrap_spread),
        ]
        for r in rows
    ]
    records = [
        {
            "record": "dependency",
            "seed": r.seed,
            "size": r.size,
            "removed": r.removed,
            "mean_difference": r.mean_difference,
            "sigma1_hat": r.sigma1_hat,
            "sigma2_hat": r.sigma2_hat,
            "noise_estimate": r.noise_estimate,
            "bootstrap_spread": r.bootstrap_spread,
        }
        for r in rows
    ]

    plot_data = args.plot_data
    if plot_data is None and args.out:
        plot_data = str(Path(args.out).with_suffix(".dat"))
    if plot_data:
        by_key: dict[tuple[int, int], list[float]] = {}
        for r in rows:
            by_key.setdefault((r.size, r.removed), []).append(r.bootstrap_spread)
        lines = ["# size removed bootstrap_spread"]
        for (size, removed), spreads in sorted(by_key.items()):
            lines.append(
                f"{size} {removed} {format_float(float(np.mean(spreads)))}"
            )
        Path(plot_data).write_text("\n".join(lines) + "\n", encoding="utf-8")

    def figure(path):
        from . import plotting

        plotting.save_dependency(rows, path)

    header = ["seed", "size", "removed", "mean_diff", "sigma1_hat", "sigma2_hat",
              "noise_est", "boot_spread"]
    _emit(args, _table(header, table_rows), records, figure)
    return 0


def cmd_focal_select(args) -> int:
    ellipsoids = load_ellipsoids(args.input)
    seed = _resolve_seed(args)
    chosen = select_focal_budget(
        ellipsoids,
        args.budget,
        samples=args.samples,
        seed=seed,
        max_cardinality=args.max_cardinality,
    )
    rows = [
        ["{" + ",".join(map(str, s.labels)) + "}", format_float(s.score),
         format_float(s.standard_error)]
        for s in chosen
    ]
    records = [
        {
            "record": "focal-set",
            "labels": list(s.labels),
            "score": s.score,
            "standard_error": s.standard_error,
        }
        for s in chosen
    ]
    records.append(
        {
            "record": "focal-summary",
            "classes": len(ellipsoids),
            "budget": args.budget,
            "selected": len(chosen),
            "outputs": len(ellipsoids) + len(chosen),
        }
    )
    summary = (
        f"{len(ellipsoids)} singletons + {len(chosen)} focal sets = "
        f"{len(ellipsoids) + len(chosen)} outputs"
    )

    def figure(path):
        from . import plotting

        plotting.save_focal_scores(chosen, path)

    _emit(args, _table(["subset", "score", "std_error"], rows) + [summary], records, figure)
    return 0


def cmd_alphas(args) -> int:
    tolerance = _tolerance(args)
    if args.method == "credal":
        intervals = load_probability_intervals(args.input)
        from .decomposition import estimate_alpha2_credal

        estimate = estimate_alpha2_credal(CredalSet.from_intervals(intervals, tolerance),
                                          tolerance)
    else:
        bundle = load_bundle(args.input)
        estimate = estimate_alphas_for_bundle(bundle, args.method, tolerance)
    rows = [
        ["alpha1", format_float(estimate.alpha1)],
        ["alpha2", format_float(estimate.alpha2)],
        ["method", estimate.method],
    ]
    evidence = {
        k: v for k, v in sorted(estimate.evidence.items()) if isinstance(v, (int, float))
    }
    rows += [[k, format_float(float(v))] for k, v in evidence.items()]
    records = [
        {
            "record": "alpha-estimate",
            "alpha1": estimate.alpha1,
            "alpha2": estimate.alpha2,
            "method": estimate.method,
            "evidence": evidence,
        }
    ]

    def figure(path):
        from . import plotting

        plotting.save_alphas(estimate, path)

    _emit(args, _table(["field", "value"], rows), records, figure)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9,
                        help="absolute comparison tolerance (default 1e-9)")
    common.add_argument("--opt-tol", type=float, default=1e-8,
                        help="optimizer stopping tolerance (default 1e-8)")
    common.add_argument("--grid", type=int, default=4096,
                        help="default tabulation grid resolution (default 4096)")
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (default 42; IMPUQ_SEED overrides the default)")
    common.add_argument("--entropy-base", choices=("e", "2"), default="e",
                        help="entropy reporting base (computation is always natural log)")
    common.add_argument("--pbox-literal", action="store_true",
                        help="use the uncorrected band pairing for p-box bounds")
    common.add_argument("--contnn-eps-convention", choices=("definition", "eq12"),
                        default="definition",
                        help="which term epsilon weights in the contnn blend")
    common.add_argument("--out", default=None,
                        help="write line-delimited JSON records to this path")
    common.add_argument("--fig", default=None,
                        help="render a PNG figure to this path "
                             "(default: alongside --out)")

    parser = argparse.ArgumentParser(
        prog="impuq",
        description="Imprecise-probability uncertainty quantification toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy-bounds", parents=[common],
                       help="entropy bounds of an interval-induced credal set")
    p.add_argument("--input", required=True, help="probability-intervals JSON file")
    p.set_defaults(func=cmd_entropy_bounds)

    p = sub.add_parser("decompose", parents=[common],
                       help="total-uncertainty decomposition of prediction bundles")
    p.add_argument("--rule", choices=("additive", "weighted", "contnn"), required=True)
    p.add_argument("--input", help="bundle JSON file (additive/weighted rules)")
    p.add_argument("--alphas", help="alpha-weights JSON file (weighted rule)")
    p.add_argument("--alphas-method", choices=("credal", "inn-width", "ensemble"),
                   help="derive alpha weights from the input bundle (weighted rule)")
    p.add_argument("--bnn", help="bnn-samples bundle JSON file (contnn rule)")
    p.add_argument("--inn", help="inn-intervals bundle JSON file (contnn rule)")
    p.add_argument("--eps", type=float, help="contamination weight (contnn rule)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("pbox", parents=[common],
                       help="p-box expectation bounds with a convergence sweep")
    p.add_argument("--lower-cdf", required=True, help="pointwise-lower CDF CSV file")
    p.add_argument("--upper-cdf", required=True, help="pointwise-upper CDF CSV file")
    p.add_argument("--gamble", required=True, help="gamble CSV file")
    p.add_argument("--n", type=int, nargs="+", default=[10, 100, 1000],
                   help="partition counts (default: 10 100 1000)")
    p.set_defaults(func=cmd_pbox)

    p = sub.add_parser("contaminate", parents=[common],
                       help="contamination-model expectation bounds")
    p.add_argument("--cdf", required=True, help="precise CDF CSV file")
    p.add_argument("--gamble", required=True, help="gamble CSV file")
    p.add_argument("--interval", type=float, nargs=2, required=True,
                   metavar=("A", "B"), help="interval component endpoints")
    p.add_argument("--eps", type=float, required=True, help="contamination weight")
    p.set_defaults(func=cmd_contaminate)

    p = sub.add_parser("demo-dependency", parents=[common],
                       help="show the coupling between data size and noise estimates")
    p.add_argument("--f-spec", choices=("linear", "sine"), default="sine",
                   help="underlying signal f(x) (default: sine, i.e. sin(2*pi*x))")
    p.add_argument("--sigma1", type=float, default=0.1)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--mu1", type=float, default=0.0)
    p.add_argument("--mu2", type=float, default=0.0)
    p.add_argument("--sizes", type=int, nargs="+", default=[50, 500, 5000])
    p.add_argument("--removals", type=int, nargs="+", default=[0])
    p.add_argument("--seeds", type=int, nargs="+", default=None,
                   help="experiment seeds (default: the resolved --seed)")
    p.add_argument("--bootstrap", type=int, default=200,
                   help="bootstrap resamples per estimate (default 200)")
    p.add_argument("--plot-data", default=None,
                   help="columnar plot-data path (default: alongside --out)")
    p.set_defaults(func=cmd_demo_dependency)

    p = sub.add_parser("focal-select", parents=[common],
                       help="select the best-overlapping non-singleton label subsets")
    p.add_argument("--input", required=True, help="ellipsoids JSON file")
    p.add_argument("--budget", type=int, required=True, help="number of focal sets")
    p.add_argument("--samples", type=int, default=10_000,
                   help="Monte-Carlo samples per subset (default 10000)")
    p.add_argument("--max-cardinality", type=int, default=None)
    p.set_defaults(func=cmd_focal_select)

    p = sub.add_parser("alphas", parents=[common],
                       help="estimate weighted-rule alpha coefficients")
    p.add_argument("--method", choices=("credal", "inn-width", "ensemble"), required=True)
    p.add_argument("--input", required=True,
                   help="probability-intervals file (credal) or bundle file")
    p.set_defaults(func=cmd_alphas)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:  # includes ParseError
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ImpuqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
