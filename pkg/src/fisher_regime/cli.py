"""Command-line entry point.

Exit status: 0 on success, 1 on usage or domain errors, 2 when a golden
comparison fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import directional, dynamics, expfam, harness, regime, spectral
from .errors import FisherRegimeError
from .hypergraph import TopologyId

EXIT_OK, EXIT_ERROR, EXIT_GOLDEN = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _topology(text: str) -> TopologyId:
    try:
        return TopologyId.parse(text)
    except FisherRegimeError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _tolerances(text: str) -> dict[str, float]:
    out = {}
    for item in filter(None, text.split(",")):
        name, _, value = item.partition("=")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad tolerance {item!r}; want column=value") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fisher-regime", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def observer_args(p):
        p.add_argument("--topology", type=_topology, required=True, help="catalog id, e.g. K3, P6")
        p.add_argument("--J", type=float, required=True, help="uniform edge coupling")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    def model_args(p):
        p.add_argument("--w", type=float, default=1.0, help="exponent of the W model")
        p.add_argument("--hessian", choices=regime.HESSIAN_MODES, default="isotropic")

    p = sub.add_parser("fisher", help="Fisher matrix and its spectrum")
    observer_args(p)

    p = sub.add_parser("regime", help="closed-form and numeric regime parameter")
    observer_args(p)
    p.add_argument("--model", choices=regime.KINDS, default="A")
    model_args(p)

    p = sub.add_parser("directional", help="directional alpha and deviation tensor")
    observer_args(p)
    p.add_argument("--beta", type=float, default=None, help="default: beta of the predicted alpha")

    p = sub.add_parser("dynamics", help="measured flow iterations across an alpha grid")
    observer_args(p)
    p.add_argument("--alpha-grid", default="0:0.99:0.01", help="start:stop:step")
    p.add_argument("--eta-policy", choices=dynamics.ETA_POLICIES, default="normalized")
    p.add_argument("--svg", type=Path, default=None, help="write the iteration curve as SVG")

    p = sub.add_parser("sweep", help="full topology x coupling sweep")
    p.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    p.add_argument("--json", action="store_true", help="same as --format json")
    p.add_argument("--golden", type=Path, default=None, help="golden CSV to compare against")
    p.add_argument("--tol", type=_tolerances, default={}, help="column=tol,... for --golden")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("models", help="T(c) minimizers for every convergence model")
    observer_args(p)
    model_args(p)
    return parser


def _fisher_and_spectrum(args):
    F = expfam.fisher(expfam.ExpFamilyModel.uniform(args.topology, args.J))
    return F, spectral.eig_sym(F)


def _fmt_row(values) -> str:
    return " ".join(f"{v: .6f}" for v in values)


def cmd_fisher(args, out, err):
    F, spec = _fisher_and_spectrum(args)
    if args.json:
        json.dump(
            {
                "topology": str(args.topology),
                "J": args.J,
                "fisher": F.tolist(),
                "eigenvalues": spec.eigenvalues.tolist(),
                "eigenvectors": spec.eigenvectors.tolist(),
                "cond_F": spectral.cond(spec),
            },
            out,
        )
        out.write("\n")
        return EXIT_OK
    out.write(f"Fisher matrix for {args.topology} at J={args.J:g}\n")
    for row in F:
        out.write(_fmt_row(row) + "\n")
    out.write(f"eigenvalues: {_fmt_row(spec.eigenvalues)}\n")
    out.write(f"cond_F: {spectral.cond(spec):.6f}\n")
    return EXIT_OK


def _model(args, kind="A"):
    if kind == "A" and args.w != 1.0:
        kind = "W"
    return regime.ConvergenceModel(kind, args.w, args.hessian)


def cmd_regime(args, out, err):
    _, spec = _fisher_and_spectrum(args)
    ra = regime.analyze(spec, _model(args, args.model), topology=str(args.topology), J=args.J)
    data = ra.to_dict()
    data["shifted_condition_at_c_star"] = regime.shifted_condition(spec, ra.c_star)
    data["metric_condition_at_c_star"] = float(
        regime.convergence_time(spec, ra.c_star, regime.ConvergenceModel("B"))
    )
    if args.json:
        json.dump(data, out)
        out.write("\n")
        return EXIT_OK
    for key, value in data.items():
        out.write(f"{key:<28} {value:.6f}\n" if isinstance(value, float) else f"{key:<28} {value}\n")
    return EXIT_OK


def cmd_directional(args, out, err):
    F, spec = _fisher_and_spectrum(args)
    beta = args.beta
    if beta is None:
        beta = harness.directional_beta(regime.alpha_of_c(regime.c_star(spec)))
    _, report = directional.deviation_tensor(F, beta=beta, spectrum=spec)
    if args.json:
        data = report.to_dict()
        data["multiplets"] = [list(m) for m in report.multiplets()]
        json.dump(data, out)
        out.write("\n")
        return EXIT_OK
    out.write(f"{args.topology} at J={args.J:g}, beta={beta:.6f}\n")
    out.write(f"trace_ratio        {report.trace_ratio:.6f}\n")
    out.write(f"alpha_mean         {report.alpha_mean:.6f}\n")
    out.write(f"alpha_spread       {report.alpha_spread:.6f}\n")
    out.write(f"deviation_fraction {report.deviation_fraction:.6f}\n")
    out.write("eigenvalue   mult  alpha_dir  deviation  class\n")
    for lam, mult, label in report.multiplets():
        k = int(np.argmin(np.abs(report.eigenvalues - lam)))
        out.write(
            f"{lam:.6f}  {mult:>4}  {report.alpha_dir[k]:.6f}  "
            f"{report.deviation_eigs[k]: .6f}  {label}\n"
        )
    return EXIT_OK


def cmd_dynamics(args, out, err):
    _, spec = _fisher_and_spectrum(args)
    grid = dynamics.parse_grid(args.alpha_grid)
    result = dynamics.empirical_alpha(spec, args.eta_policy, grid)
    alpha_pred = regime.alpha_of_c(regime.c_star(spec))
    if args.svg is not None:
        label = f"{args.topology} J={args.J:g} {args.eta_policy}"
        args.svg.write_text(harness.render_iteration_curve(grid, result.iterations, label))
    if args.json:
        json.dump(
            {
                "topology": str(args.topology),
                "J": args.J,
                "eta_policy": args.eta_policy,
                "alpha_empirical": result.alpha,
                "alpha_pred": alpha_pred,
                "alpha": result.grid.tolist(),
                "iterations": result.iterations.tolist(),
                "converged": result.converged.tolist(),
            },
            out,
        )
        out.write("\n")
        return EXIT_OK
    out.write("alpha,iterations\n")
    for a, n in zip(result.grid, result.iterations):
        out.write(f"{a:.10g},{n}\n")
    out.write(f"# empirical argmin alpha={result.alpha:.4f}, closed-form alpha_pred={alpha_pred:.4f}\n")
    return EXIT_OK


def cmd_sweep(args, out, err):
    golden = None
    if args.golden is not None:
        try:
            golden = args.golden.read_bytes()
        except OSError as exc:
            raise UsageError(f"cannot read golden file: {exc}") from None
    records, summary = harness.run_sweep(workers=max(1, args.workers))
    fmt = "json" if args.json else args.format
    payload = harness.emit_report(records, fmt)
    if args.out is not None:
        args.out.write_bytes(payload)
    else:
        out.write(payload.decode())
    err.write(
        f"{summary.runs} runs: mean |err| {summary.mean_abs_err:.3g}, max |err| "
        f"{summary.max_abs_err:.3g}, classical {summary.classical}, mixed {summary.mixed}\n"
    )
    if golden is not None:
        ok, diffs = harness.compare_golden(records, golden, args.tol)
        for line in diffs:
            err.write(line + "\n")
        if not ok:
            err.write(f"golden comparison failed: {len(diffs)} difference(s)\n")
            return EXIT_GOLDEN
        err.write("golden comparison passed\n")
    return EXIT_OK


def cmd_models(args, out, err):
    _, spec = _fisher_and_spectrum(args)
    alpha_pred = regime.alpha_of_c(regime.c_star(spec, 1.0))
    kinds = [("A", 1.0), ("B", 1.0), ("C", 1.0), ("D", 1.0), ("W", args.w)]
    rows = []
    for kind, w in kinds:
        model = regime.ConvergenceModel(kind, w, args.hessian)
        alpha_num, t_min = regime.minimize_alpha_numeric(spec, model)
        at_edge = alpha_num <= 1e-6 or alpha_num >= regime.ALPHA_MAX - 1e-6
        rows.append(
            {
                "model": model.label,
                "alpha_num": alpha_num,
                "c_num": regime.beta_of_alpha(alpha_num),
                "T_min": t_min,
                "T_at_0": regime.convergence_time(spec, 0.0, model),
                "boundary": at_edge,
            }
        )
    if args.json:
        json.dump({"topology": str(args.topology), "J": args.J, "alpha_pred": alpha_pred, "models": rows}, out)
        out.write("\n")
        return EXIT_OK
    out.write(f"{args.topology} at J={args.J:g}: closed-form alpha_pred (model A) = {alpha_pred:.6f}\n")
    out.write(f"{'model':<10} {'alpha_num':>10} {'c':>12} {'T_min':>14} {'T(0)':>14}  boundary\n")
    for r in rows:
        out.write(
            f"{r['model']:<10} {r['alpha_num']:>10.6f} {r['c_num']:>12.6g} {r['T_min']:>14.6g} "
            f"{r['T_at_0']:>14.6g}  {'yes' if r['boundary'] else 'no'}\n"
        )
    return EXIT_OK


COMMANDS = {
    "fisher": cmd_fisher,
    "regime": cmd_regime,
    "directional": cmd_directional,
    "dynamics": cmd_dynamics,
    "sweep": cmd_sweep,
    "models": cmd_models,
}


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_ERROR
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return COMMANDS[args.verb](args, out, err)
    except (FisherRegimeError, UsageError) as exc:
        err.write(parser.format_usage())
        err.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
