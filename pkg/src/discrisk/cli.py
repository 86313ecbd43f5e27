"""Command-line interface.

Every command builds a report dict with a ``columns``/``rows`` table plus
metadata (version, seed, k, input digest) and renders it as an aligned
text table, JSON or CSV.  Exit status is 0 on success, 1 on domain or
input errors and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from pathlib import Path


from . import __version__
from ._streams import fresh_seed
from .asymptotics import normal_ci, quantile_covariance
from .bootstrap import bootstrap_quantiles
from .datasets import DATASETS, dataset_text
from .distributions import parse_model
from .empirical import DiscreteSample
from .errors import ConvergenceError, DomainError
from .risk import METHODS, c5ns_summary, tail_prob_bootstrap, var_classical
from .simulation import MODES, StudyConfig, run_study
from .smoothing import quantile_curve
from .truncation import (
    coverage_bound,
    empirical_design,
    k_label,
    population_design,
    resolve_k,
)

FORMATS = ("text", "json", "csv")


# -- argument helpers --------------------------------------------------------


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _method_list(text: str) -> list[str]:
    methods = [x.strip() for x in text.split(",") if x.strip()]
    bad = [x for x in methods if x not in METHODS]
    if bad or not methods:
        raise argparse.ArgumentTypeError(f"methods must be among {METHODS}")
    return methods


def _k_arg(text: str) -> float:
    try:
        return resolve_k(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _n_arg(text: str) -> int | None:
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return None
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"n must be an integer or 'inf', got {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError("n must be positive")
    return value


def load_data(spec: str) -> tuple[DiscreteSample, str]:
    """Read a CSV file, or a bundled data set by name; return sample and digest."""
    path = Path(spec)
    if path.exists():
        raw = path.read_bytes()
        sample = DiscreteSample.from_text(raw.decode("utf-8"))
    elif Path(spec).stem.upper() in DATASETS:
        text = dataset_text(Path(spec).stem)
        raw = text.encode("utf-8")
        sample = DiscreteSample.from_text(text)
    else:
        raise FileNotFoundError(f"no such data file: {spec}")
    return sample, hashlib.sha256(raw).hexdigest()


# -- rendering ---------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def render_text(report: dict) -> str:
    meta = [f"{report['command']}  (discrisk {report['version']})"]
    for key in ("data", "model", "k", "seed", "input_digest"):
        if report.get(key) is not None:
            value = report[key]
            if key == "k":
                value = f"{report.get('k_label', value)} = {value!r}"
            meta.append(f"  {key}: {value}")
    for key, value in sorted(report.get("params", {}).items()):
        meta.append(f"  {key}: {value}")
    cols = report["columns"]
    cells = [[_fmt(v) for v in row] for row in report["rows"]]
    widths = [max(len(c), *(len(r[i]) for r in cells)) if cells else len(c)
              for i, c in enumerate(cols)]
    lines = meta + [""]
    lines.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells)
    for note in report.get("notes", []):
        lines.append(note)
    return "\n".join(lines) + "\n"


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def render_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(report["columns"])
    writer.writerows(["" if v is None else v for v in row] for row in report["rows"])
    return buf.getvalue()


RENDERERS = {"text": render_text, "json": render_json, "csv": render_csv}


def _base_report(command: str, **meta) -> dict:
    report = {"command": command, "version": __version__}
    report.update(meta)
    if report.get("k") is not None:
        report["k_label"] = k_label(report["k"])
    return report


# -- commands ----------------------------------------------------------------


def cmd_quantile(args) -> dict:
    sample, digest = load_data(args.data)
    design = empirical_design(sample, args.k, clip_to_data=args.window == "observed")
    qc = quantile_covariance(design, args.u, sample.n)
    ci = normal_ci(qc, args.conf)
    rows = [[float(u), float(q), float(se), float(lo), float(hi)]
            for u, q, se, (lo, hi) in zip(qc.levels, qc.estimates, qc.standard_errors, ci)]
    return _base_report(
        "quantile", data=args.data, k=args.k, seed=None, input_digest=digest,
        params={"confidence": args.conf, "window": args.window, "n": sample.n,
                "d": design.d},
        columns=["u", "quantile", "se", "lower", "upper"], rows=rows,
    )


def cmd_quantile_curve(args) -> dict:
    if (args.data is None) == (args.model is None):
        raise DomainError("give exactly one of --data or --model")
    if args.data is not None:
        sample, digest = load_data(args.data)
        design = empirical_design(sample, args.k, clip_to_data=args.window == "observed")
        meta = {"data": args.data, "input_digest": digest}
    else:
        model = parse_model(args.model)
        design = population_design(model, args.k)
        meta = {"model": model.spec_string(),
                "input_digest": hashlib.sha256(model.spec_string().encode()).hexdigest()}
    curve = quantile_curve(design, args.points)
    return _base_report(
        "quantile-curve", k=args.k, seed=None, **meta,
        params={"points": args.points, "d": design.d},
        columns=["u", "quantile"], rows=[[float(u), float(q)] for u, q in curve],
    )


def cmd_c5ns(args) -> dict:
    sample, digest = load_data(args.data)
    res = c5ns_summary(sample, args.p, args.k, args.conf,
                       clip_to_data=args.window == "observed")
    rows = [[float(u), float(q), float(se), float(lo), float(hi)]
            for u, q, se, (lo, hi) in zip(res.levels, res.quantiles,
                                           res.standard_errors, res.intervals)]
    return _base_report(
        "c5ns", data=args.data, k=args.k, seed=None, input_digest=digest,
        params={"p": args.p, "confidence": args.conf, "window": args.window,
                "n": sample.n, "classical_var": var_classical(sample, args.p)},
        columns=["level", "quantile", "se", "lower", "upper"], rows=rows,
    )


def cmd_tailprob(args) -> dict:
    sample, digest = load_data(args.data)
    seed = args.seed if args.seed is not None else fresh_seed()
    rows = []
    for method in args.method:
        for est in tail_prob_bootstrap(sample, args.a, method, args.m, args.k, seed,
                                       args.threads, clip_to_data=args.window == "observed"):
            rows.append([est.threshold, method, est.effective_threshold, est.mean,
                         est.sd, est.cv])
    return _base_report(
        "tailprob", data=args.data, k=args.k, seed=seed, input_digest=digest,
        params={"m": args.m, "window": args.window, "n": sample.n},
        columns=["a", "method", "a_star", "mean", "sd", "cv"], rows=rows,
    )


def cmd_bootstrap(args) -> dict:
    sample, digest = load_data(args.data)
    seed = args.seed if args.seed is not None else fresh_seed()
    summary = bootstrap_quantiles(sample, args.m, args.k, args.levels, seed, args.threads,
                                  clip_to_data=args.window == "observed")
    n = sample.n
    cols = ["level", "mean"] + [f"n_cov_{j + 1}" for j in range(len(args.levels))]
    rows = [[float(u), float(mu)] + [float(v) for v in row * n]
            for u, mu, row in zip(summary.levels, summary.col_means, summary.cov)]
    return _base_report(
        "bootstrap", data=args.data, k=args.k, seed=seed, input_digest=digest,
        params={"m": args.m, "n": n, "skipped": summary.skipped, "window": args.window},
        columns=cols, rows=rows,
    )


def cmd_simulate(args) -> dict:
    model = parse_model(args.model)
    seed = None
    if args.mode != "theoretical":
        seed = args.seed if args.seed is not None else fresh_seed()
    cfg = StudyConfig(model, args.k, args.n, args.reps, tuple(args.levels), seed,
                      args.mode, args.threads)
    rep = run_study(cfg)
    cols = ["level", "mean", "mean_se"] + [f"n_cov_{j + 1}" for j in range(len(args.levels))]
    rows = []
    for i, u in enumerate(cfg.levels):
        cov_row = [None] * len(cfg.levels) if rep.scaled_cov is None else \
            [float(v) for v in rep.scaled_cov[i]]
        se = None if rep.mean_se is None else float(rep.mean_se[i])
        rows.append([u, float(rep.means[i]), se] + cov_row)
    return _base_report(
        "simulate", model=model.spec_string(), k=args.k, seed=seed,
        input_digest=hashlib.sha256(model.spec_string().encode()).hexdigest(),
        params={"mode": args.mode,
                "n": "inf" if args.mode == "theoretical" else args.n,
                "reps": None if args.mode == "theoretical" else args.reps,
                "skipped": rep.skipped},
        columns=cols, rows=rows,
    )


def cmd_coverage(args) -> dict:
    rows = []
    for n in args.n or [None]:
        rows.append(["inf" if n is None else n, coverage_bound(n, args.k)])
    return _base_report(
        "coverage", k=args.k, seed=None, params={},
        columns=["n", "bound"], rows=rows,
    )


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed for randomized commands")
    common.add_argument("--out", default=None, help="write the report to FILE instead of stdout")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--threads", type=int, default=1, help="maximum worker processes")

    parser = argparse.ArgumentParser(prog="discrisk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"discrisk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def data_cmd(name, help_text, window_default="observed"):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--data", required=name != "quantile-curve",
                       help=f"CSV file (value,count or one value per line) or one of {DATASETS}")
        p.add_argument("--k", type=_k_arg, default=resolve_k("pi3"),
                       help="window half-width: pi, pi2, pi3 or a number")
        p.add_argument("--window", choices=("observed", "chebyshev"), default=window_default,
                       help="'observed' caps the window at the observed data range")
        return p

    p = data_cmd("quantile", "smoothed quantiles with normal confidence intervals")
    p.add_argument("--u", type=_float_list, default=[0.5])
    p.add_argument("--conf", type=float, default=0.95)
    p.set_defaults(func=cmd_quantile)

    p = data_cmd("quantile-curve", "(u, Q(u)) pairs for plotting")
    p.add_argument("--model", default=None, help="e.g. poisson:lambda=9")
    p.add_argument("--points", type=int, default=199)
    p.set_defaults(func=cmd_quantile_curve, format_default="csv")

    p = data_cmd("c5ns", "conditional five number summary beyond VaR_p")
    p.add_argument("--p", type=float, default=0.90)
    p.add_argument("--conf", type=float, default=0.95)
    p.set_defaults(func=cmd_c5ns)

    p = data_cmd("tailprob", "bootstrap tail probabilities")
    p.add_argument("--a", type=_float_list, required=True)
    p.add_argument("--method", type=_method_list, default=list(METHODS))
    p.add_argument("--m", type=int, default=1000)
    p.set_defaults(func=cmd_tailprob)

    p = data_cmd("bootstrap", "bootstrap means and covariance of smoothed quantiles",
                 window_default="chebyshev")
    p.add_argument("--m", type=int, default=10_000)
    p.add_argument("--levels", type=_float_list, default=[0.25, 0.5, 0.75])
    p.set_defaults(func=cmd_bootstrap)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo study of one model")
    p.add_argument("--model", required=True, help="e.g. zinb:r=1,beta=1,c=0.8")
    p.add_argument("--k", type=_k_arg, default=resolve_k("pi3"))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--levels", type=_float_list, default=[0.25, 0.5, 0.75])
    p.add_argument("--mode", choices=MODES, default="simulate")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("coverage", parents=[common], help="window coverage probability bound")
    p.add_argument("--k", type=_k_arg, required=True)
    p.add_argument("--n", type=_n_arg, action="append", default=None,
                   help="sample size (repeatable); 'inf' or omitted for Chebyshev's bound")
    p.set_defaults(func=cmd_coverage)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    if args.threads < 1:
        print("discrisk: error: --threads must be at least 1", file=sys.stderr)
        return 2
    try:
        report = args.func(args)
        text = RENDERERS[args.format](report)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8", newline="\n")
        else:
            sys.stdout.write(text)
    except (DomainError, ConvergenceError, OSError, UnicodeDecodeError) as exc:
        print(f"discrisk: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
