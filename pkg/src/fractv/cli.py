"""Command-line interface.

Exit codes: 0 success, 1 usage error (bad flags, unreadable input),
2 numerical failure, 3 at least one verification experiment failed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from fractv.grid import FracTVError, NumericalError

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_orders(ladder: str) -> list[float]:
    """``a:b:step`` to an inclusive ladder; ``b`` is kept when ``step``
    divides the span within ``1e-12``. A single number is a one-item ladder."""
    parts = ladder.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"bad orders ladder {ladder!r}; expected a:b:step") from None
    if len(nums) == 1:
        return nums
    if len(nums) != 3:
        raise UsageError(f"bad orders ladder {ladder!r}; expected a:b:step")
    a, b, step = nums
    if not step > 0 or b < a:
        raise UsageError(f"bad orders ladder {ladder!r}; need a <= b and step > 0")
    count = (b - a) / step
    m = round(count)
    last = m if abs(count - m) <= 1e-12 * max(1.0, count) else math.floor(count)
    return [round(a + i * step, 12) for i in range(last + 1)]


def _lp(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid exponent {text!r}") from None
    if not p >= 1:
        raise argparse.ArgumentTypeError(f"exponent must be >= 1, got {text}")
    return p


def _nonneg(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not v >= 0 or math.isinf(v):
        raise argparse.ArgumentTypeError(f"expected a finite number >= 0, got {text}")
    return v


def _positive(text: str) -> float:
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("expected a positive number")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fractv", description="Fractional-order total variation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_input(p):
        p.add_argument("--input", required=True, type=Path, help="CSV or PGM file")

    def add_output(p):
        p.add_argument("--output", type=Path, help="output file (CSV or PGM); default stdout")

    p = sub.add_parser("deriv", help="fractional derivative of a signal or field")
    add_input(p)
    p.add_argument("--order", required=True, type=_nonneg)
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.add_argument("--kind", choices=("rl", "caputo", "revised"), default="rl")
    p.add_argument("--axis", type=int, choices=(1, 2), default=1, help="coordinate axis for 2D input")
    add_output(p)

    p = sub.add_parser("integral", help="fractional integral of a signal or field")
    add_input(p)
    p.add_argument("--order", required=True, type=_positive)
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.add_argument("--axis", type=int, choices=(1, 2), default=1)
    add_output(p)

    p = sub.add_parser("tv", help="r-order total variation")
    add_input(p)
    p.add_argument("--order", required=True, type=_nonneg)
    p.add_argument("--lp", type=_lp, default=1.0)
    p.add_argument("--method", choices=("primal", "dual"), default="primal")
    p.add_argument("--trials", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="print the full result as JSON")

    p = sub.add_parser("denoise", help="ROF denoising with an r-order TV term")
    add_input(p)
    p.add_argument("--alpha", required=True, type=_positive)
    p.add_argument("--order", type=_positive, default=1.0)
    p.add_argument("--lp", type=_lp, default=2.0)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--tol", type=_positive, default=1e-6)
    p.add_argument("--eps", type=_positive, default=1e-3)
    add_output(p)
    p.add_argument("--report", type=Path, help="write <report>.csv/.json/.png (energy trace)")

    p = sub.add_parser("order-search", help="grid search over the regularization order")
    p.add_argument("--orders", required=True, type=parse_orders, help="a:b:step, inclusive")
    p.add_argument("--dataset", required=True, type=Path, help="directory of *.clean.* / *.noisy.* pairs")
    p.add_argument("--alpha", type=_positive, default=0.01)
    p.add_argument("--lp", type=_lp, default=2.0)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--tol", type=_positive, default=1e-6)
    p.add_argument("--eps", type=_positive, default=1e-3)
    p.add_argument("--beta0", type=_nonneg, default=1.0)
    p.add_argument("--beta1", type=_nonneg, default=1.0)
    p.add_argument("--loss-lp", type=_lp, default=1.0)
    p.add_argument("--loss-order", type=_nonneg, help="order of the TV term in the loss; default: the candidate")
    p.add_argument("--report", type=Path, help="write <report>.csv/.json/.png")

    p = sub.add_parser("verify", help="run the verification experiments")
    p.add_argument("--suite", default="all", help="'all' or a comma-separated list of experiments")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", type=Path, help="write <report>.csv/.json and figures")
    return parser


def _read(path: Path) -> np.ndarray:
    from fractv.io import read_array

    return read_array(path)


def _emit(values: np.ndarray, output: Path | None) -> None:
    from fractv.io import format_float, write_array

    if output is not None:
        write_array(output, values)
        return
    values = np.atleast_2d(values.T).T if values.ndim == 1 else values
    for row in values:
        print(",".join(format_float(v) for v in row))


def _cmd_deriv(args) -> int:
    from fractv.frac1d import frac_derivative_caputo, frac_derivative_revised, frac_derivative_rl
    from fractv.grid import numpy_axis

    w = _read(args.input)
    if args.kind == "rl":
        out = frac_derivative_rl(w, args.order, args.side, axis=numpy_axis(args.axis, w.ndim))
    elif w.ndim != 1:
        raise UsageError(f"--kind {args.kind} needs a 1D signal")
    elif args.kind == "caputo":
        out = frac_derivative_caputo(w, args.order, args.side)
    else:
        if args.side != "left":
            raise UsageError("--kind revised is left-sided")
        out = frac_derivative_revised(w, args.order)
    _emit(out, args.output)
    return EXIT_OK


def _cmd_integral(args) -> int:
    from fractv.frac1d import frac_integral
    from fractv.grid import numpy_axis

    w = _read(args.input)
    _emit(frac_integral(w, args.order, args.side, axis=numpy_axis(args.axis, w.ndim)), args.output)
    return EXIT_OK


def _cmd_tv(args) -> int:
    from fractv.io import format_float
    from fractv.tvr import tv_dual_estimate, tv_primal

    u = _read(args.input)
    if not np.all(np.isfinite(u)):
        raise NumericalError(f"{args.input}: input contains non-finite values")
    if args.method == "primal":
        res = tv_primal(u, args.order, args.lp)
    else:
        res = tv_dual_estimate(u, args.order, args.lp, args.trials, args.seed)
    if not math.isfinite(res.value):
        raise NumericalError("total variation is not finite")
    print(res.to_json() if args.json else format_float(res.value))
    return EXIT_OK


def _write_table(path: Path, header: list[str], rows) -> None:
    from fractv.io import format_float

    def cell(v):
        return format_float(v) if isinstance(v, float) else str(v)

    lines = [",".join(header)] + [",".join(cell(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def _stem(path: Path) -> Path:
    return path.with_suffix("") if path.suffix in (".csv", ".json", ".png") else path


def _sibling(stem: Path, ext: str) -> Path:
    return stem.parent / (stem.name + ext)


def _cmd_denoise(args) -> int:
    from fractv.denoise import DenoiseConfig, denoise
    from fractv.plotting import plot_energy_trace

    u_eta = _read(args.input)
    cfg = DenoiseConfig(alpha=args.alpha, r=args.order, p=args.lp, eps=args.eps,
                        max_iters=args.iters, tol=args.tol)
    rep = denoise(u_eta, cfg)
    _emit(rep.u, args.output)
    if args.report is not None:
        stem = _stem(args.report)
        stem.parent.mkdir(parents=True, exist_ok=True)
        _write_table(_sibling(stem, ".csv"), ["iteration", "energy"], enumerate(rep.energy))
        doc = {"config": cfg.to_dict(), "iterations": rep.iterations,
               "converged": rep.converged, "energy": rep.energy}
        _sibling(stem, ".json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        plot_energy_trace(rep.energy, _sibling(stem, ".png"))
    print(f"iterations={rep.iterations} converged={rep.converged} energy={rep.energy[-1]:.6g}",
          file=sys.stderr)
    return EXIT_OK


def _cmd_order_search(args) -> int:
    from fractv.denoise import Dataset, DenoiseConfig, LossSpec, order_search
    from fractv.io import format_float
    from fractv.plotting import plot_order_search

    try:
        ds = Dataset.load(args.dataset)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from None
    cfg = DenoiseConfig(alpha=args.alpha, p=args.lp, eps=args.eps, max_iters=args.iters, tol=args.tol)
    loss = LossSpec(beta0=args.beta0, beta1=args.beta1, p=args.loss_lp, r_loss=args.loss_order)
    res = order_search(ds, args.orders, cfg, loss)
    if args.report is not None:
        stem = _stem(args.report)
        stem.parent.mkdir(parents=True, exist_ok=True)
        rows = [[row["r"], row["total_loss"], *row["per_pair"]] for row in res.table]
        _write_table(_sibling(stem, ".csv"), ["r", "total_loss", *ds.names], rows)
        _sibling(stem, ".json").write_text(json.dumps(res.to_dict(), sort_keys=True, indent=2) + "\n")
        plot_order_search(res.table, res.best_r, _sibling(stem, ".png"))
    print(format_float(res.best_r))
    return EXIT_OK


def _cmd_verify(args) -> int:
    from fractv.plotting import plot_verify_summary
    from fractv.verify import resolve_names, run_suite, write_reports

    try:
        names = resolve_names(args.suite)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.n < 64:
        raise UsageError(f"--n must be at least 64, got {args.n}")
    reports = run_suite(names, args.n, args.seed, workers=None)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.label}: measured={r.measured:.6g} bound={r.bound:.6g} margin={r.margin:.3g}")
    if args.report is not None:
        stem = _stem(args.report)
        write_reports(reports, stem)
        if reports:
            plot_verify_summary(reports, _sibling(stem, ".png"))
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} experiments passed")
    return EXIT_FAILED if failed else EXIT_OK


COMMANDS = {
    "deriv": _cmd_deriv,
    "integral": _cmd_integral,
    "tv": _cmd_tv,
    "denoise": _cmd_denoise,
    "order-search": _cmd_order_search,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, FracTVError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
