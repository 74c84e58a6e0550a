"""Catalog sweep, report emission and golden-file comparison."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import directional, expfam, regime, spectral
from .errors import DomainError, FisherRegimeError, SchemaError
from .hypergraph import CATALOG, TopologyId, catalog_graph
from .regime import ALPHA_MAX, ConvergenceModel

DEFAULT_COUPLINGS = (0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5)

COLUMNS = (
    "topology",
    "n_nodes",
    "n_edges",
    "J",
    "lambda_min",
    "lambda_max",
    "cond_F",
    "gap",
    "c_star",
    "alpha_pred",
    "alpha_num",
    "abs_err",
    "speedup",
    "alpha_spread",
    "trace_ratio",
    "deviation_fraction",
    "boundary_flag",
)
_BOUNDARY_EPS = 1e-6


@dataclass(frozen=True)
class SweepConfig:
    topologies: tuple[TopologyId, ...] = CATALOG
    couplings: tuple[float, ...] = DEFAULT_COUPLINGS
    model: ConvergenceModel = field(default_factory=ConvergenceModel)

    def __post_init__(self):
        if not self.topologies or not self.couplings:
            raise DomainError("sweep needs at least one topology and one coupling")
        bad = [j for j in self.couplings if not 0.1 <= j <= 1.5]
        if bad:
            raise DomainError(f"couplings outside [0.1, 1.5]: {bad}")

    @property
    def run_count(self) -> int:
        return len(self.topologies) * len(self.couplings)


@dataclass(frozen=True)
class SweepRecord:
    topology: str
    n_nodes: int
    n_edges: int
    J: float
    lambda_min: float
    lambda_max: float
    cond_F: float
    gap: float
    c_star: float
    alpha_pred: float
    alpha_num: float
    abs_err: float
    speedup: float
    alpha_spread: float
    trace_ratio: float
    deviation_fraction: float
    boundary_flag: int


@dataclass(frozen=True)
class SweepSummary:
    runs: int
    mean_abs_err: float
    max_abs_err: float
    classical: int
    mixed: int


def directional_beta(alpha_pred: float) -> float:
    """beta used for directional reports; 1 when the observer sits at alpha = 0."""
    return regime.beta_of_alpha(alpha_pred) if alpha_pred > 0 else 1.0


def analyze_config(topology: TopologyId, J: float, model: ConvergenceModel) -> SweepRecord:
    host = catalog_graph(topology)
    F = expfam.fisher(expfam.ExpFamilyModel.uniform(host, J))
    spec = spectral.eig_sym(F)
    ra = regime.analyze(spec, model, topology=str(topology), J=J)
    _, report = directional.deviation_tensor(F, beta=directional_beta(ra.alpha_pred), spectrum=spec)
    at_edge = ra.alpha_num <= _BOUNDARY_EPS or ra.alpha_num >= ALPHA_MAX - _BOUNDARY_EPS
    return SweepRecord(
        topology=str(topology),
        n_nodes=host.node_count,
        n_edges=host.edge_count,
        J=float(J),
        lambda_min=ra.lambda_min,
        lambda_max=ra.lambda_max,
        cond_F=ra.cond_f,
        gap=ra.gap,
        c_star=ra.c_star,
        alpha_pred=ra.alpha_pred,
        alpha_num=ra.alpha_num,
        abs_err=ra.abs_err,
        speedup=ra.speedup,
        alpha_spread=float(report.alpha_spread),
        trace_ratio=report.trace_ratio,
        deviation_fraction=report.deviation_fraction,
        boundary_flag=int(ra.c_star == 0.0 or at_edge),
    )


def _run_one(args):
    topology, J, model = args
    try:
        return analyze_config(topology, J, model)
    except FisherRegimeError as exc:
        raise type(exc)(f"sweep aborted at {topology} J={J}: {exc}") from exc


def summarize(records) -> SweepSummary:
    errs = [r.abs_err for r in records]
    classical = sum(1 for r in records if r.cond_F <= 2.0)
    return SweepSummary(
        runs=len(records),
        mean_abs_err=math.fsum(errs) / len(errs),
        max_abs_err=max(errs),
        classical=classical,
        mixed=len(records) - classical,
    )


def run_sweep(config: SweepConfig | None = None, workers: int = 1):
    """Analyze every (topology, J) pair; returns (records, summary) in catalog then J order."""
    config = SweepConfig() if config is None else config
    jobs = [(t, j, config.model) for t in config.topologies for j in sorted(config.couplings)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_one, jobs))
    else:
        records = [_run_one(job) for job in jobs]
    return records, summarize(records)


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, str):
        return value
    return f"{float(value):.10g}"


def emit_report(records, fmt: str = "csv") -> bytes:
    """Serialize records as CSV, JSON, or an SVG chart of T(c) curves."""
    records = list(records)
    if not records:
        raise DomainError("no records to report")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for r in records:
            writer.writerow([_fmt(getattr(r, c)) for c in COLUMNS])
        return buf.getvalue().encode()
    if fmt == "json":
        return (json.dumps([asdict(r) for r in records], indent=1) + "\n").encode()
    if fmt == "svg":
        return render_time_curves(records).encode()
    raise DomainError(f"unknown report format {fmt!r}")


def parse_json_records(data: bytes | str) -> list[SweepRecord]:
    rows = json.loads(data)
    names = {f.name for f in fields(SweepRecord)}
    out = []
    for row in rows:
        if set(row) != names:
            raise SchemaError(f"record fields {sorted(row)} do not match schema")
        out.append(SweepRecord(**row))
    return out


def _polyline_svg(series, title, xlabel, ylabel, width=640, height=400, log_y=True) -> str:
    pad = 50
    xs = np.concatenate([np.asarray(x, float) for _, x, _ in series])
    ys = np.concatenate([np.asarray(y, float) for _, _, y in series])
    ty = np.log10 if log_y else (lambda v: v)
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ty(ys).min()), float(ty(ys).max())
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0
    palette = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{width / 2}" y="{height - 8}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="14" y="{height / 2}" font-size="12" transform="rotate(-90 14 {height / 2})"'
        f' text-anchor="middle">{ylabel}</text>',
        f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}"'
        ' fill="none" stroke="black"/>',
    ]
    for k, (label, x, y) in enumerate(series):
        px = pad + (np.asarray(x, float) - x0) / (x1 - x0) * (width - 2 * pad)
        py = height - pad - (ty(np.asarray(y, float)) - y0) / (y1 - y0) * (height - 2 * pad)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = palette[k % len(palette)]
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        parts.append(
            f'<text x="{width - pad + 4}" y="{pad + 14 * (k + 1)}" font-size="10"'
            f' fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_time_curves(records, model: ConvergenceModel | None = None, points: int = 200) -> str:
    """T(c) against alpha for each record, on a log scale."""
    model = ConvergenceModel() if model is None else model
    alphas = np.linspace(0.0, 0.95, points)
    cs = alphas**2 / (1.0 - alphas)
    series = []
    for r in records:
        spec = spectral.Spectrum.from_eigenvalues([r.lambda_min, r.lambda_max])
        series.append((f"{r.topology} J={r.J:g}", alphas, regime.convergence_time(spec, cs, model)))
    return _polyline_svg(series, f"Convergence time, model {model.label}", "alpha", "log10 T")


def render_iteration_curve(grid, iterations, label: str) -> str:
    return _polyline_svg([(label, grid, iterations)], "Iterations to tolerance", "alpha", "log10 iterations")


def _golden_tolerance(row, column, tolerances):
    override = row.get(f"tol_{column}", "")
    if override not in ("", None):
        return float(override)
    return float(tolerances.get(column, 0.0))


def compare_golden(records, golden: bytes | str, tolerances: dict | None = None):
    """Compare records cell-by-cell against a golden CSV.

    The golden file may carry any subset of the report columns (``topology``
    and ``J`` are required as the row key) plus optional ``tol_<column>``
    columns giving per-row absolute tolerances. Blank golden cells are
    skipped. Actual values are rounded to the report's 10 significant digits
    before comparison. Returns (passed, diff lines).
    """
    tolerances = tolerances or {}
    text = golden.decode() if isinstance(golden, bytes) else golden
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    data_cols = [c for c in header if not c.startswith("tol_")]
    unknown = [c for c in data_cols if c not in COLUMNS]
    unknown += [c for c in header if c.startswith("tol_") and c[4:] not in COLUMNS]
    if unknown or "topology" not in header or "J" not in header:
        raise SchemaError(f"golden columns {header} do not match report schema")
    bad_tol = [c for c in tolerances if c not in COLUMNS]
    if bad_tol:
        raise SchemaError(f"tolerances given for unknown columns {bad_tol}")
    by_key = {(r.topology, round(float(r.J), 10)): r for r in records}
    diffs = []
    for row in reader:
        key = (row["topology"], round(float(row["J"]), 10))
        rec = by_key.get(key)
        if rec is None:
            diffs.append(f"{key[0]} J={key[1]:g}: missing from records")
            continue
        for col in data_cols:
            if col in ("topology", "J") or row[col] in ("", None):
                continue
            expected = float(row[col])
            actual = float(_fmt(getattr(rec, col)))
            tol = _golden_tolerance(row, col, tolerances)
            if not abs(actual - expected) <= tol:
                diffs.append(
                    f"{key[0]} J={key[1]:g} {col}: expected {expected:.10g}, "
                    f"actual {actual:.10g}, |diff| {abs(actual - expected):.3g} > tol {tol:g}"
                )
    return not diffs, diffs
