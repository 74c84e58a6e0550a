"""Regime parameter analysis under the combined metric g(c) = F^2 + cF.

The metric shift c and the regime parameter alpha are related by
c = alpha^2 / (1 - alpha). Convergence-time functionals are built from the
extreme eigenvalues of g(c) (isotropic loss Hessian) or from the extreme
rates of g(c)^-1 F (Fisher loss Hessian).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DegeneracyError, DomainError
from .spectral import SINGULAR_TOL, Spectrum, cond

ALPHA_MAX = 0.999
GRID_POINTS = 1000
ALPHA_TOL = 1e-6
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

KINDS = ("A", "B", "C", "D", "W")
HESSIAN_MODES = ("isotropic", "fisher")


@dataclass(frozen=True)
class ConvergenceModel:
    kind: str = "A"
    w: float = 1.0
    hessian_mode: str = "isotropic"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown convergence model {self.kind!r}")
        if self.hessian_mode not in HESSIAN_MODES:
            raise DomainError(f"unknown hessian mode {self.hessian_mode!r}")
        if not self.w > 0:
            raise DomainError(f"w must be positive, got {self.w}")
        if self.kind == "A" and self.w != 1.0:
            raise DomainError("model A has w = 1; use kind 'W' for other exponents")

    @property
    def exponent(self) -> float:
        return self.w if self.kind == "W" else 1.0

    @property
    def label(self) -> str:
        base = f"W({self.w:g})" if self.kind == "W" else self.kind
        return base if self.hessian_mode == "isotropic" else f"{base}/H=F"


MODEL_A = ConvergenceModel()


def beta_of_alpha(alpha: float) -> float:
    """Metric shift c = alpha^2 / (1 - alpha)."""
    if not 0.0 <= alpha < 1.0:
        raise DomainError(f"alpha must lie in [0, 1), got {alpha}")
    return alpha * alpha / (1.0 - alpha)


def alpha_of_c(c: float) -> float:
    """Inverse of :func:`beta_of_alpha`."""
    if c < 0:
        raise DomainError(f"c must be non-negative, got {c}")
    if c == 0:
        return 0.0
    # 2c / (c + sqrt(c(c+4))) is the cancellation-free form of (-c + sqrt(c(c+4))) / 2
    return 2.0 * c / (c + math.sqrt(c * (c + 4.0)))


def _check_positive(spectrum: Spectrum) -> tuple[float, float]:
    lo, hi = spectrum.lambda_min, spectrum.lambda_max
    if hi <= 0 or not lo > SINGULAR_TOL * hi:
        raise DegeneracyError(f"spectrum is not positive definite (min {lo:g}, max {hi:g})")
    return lo, hi


def c_star(spectrum: Spectrum, w: float = 1.0) -> float:
    """Minimizer of T_w(c) over c >= 0: max(0, w lambda_max - (w + 1) lambda_min)."""
    if not w > 0:
        raise DomainError(f"w must be positive, got {w}")
    lo, hi = _check_positive(spectrum)
    return max(0.0, w * hi - (w + 1.0) * lo)


def gap(spectrum: Spectrum) -> float:
    return spectrum.lambda_max - 2.0 * spectrum.lambda_min


def _extremes(lo, hi, c, hessian_mode):
    """Largest and smallest relevant eigenvalue for the convergence functionals."""
    if hessian_mode == "fisher":
        # rates of g(c)^-1 F are lambda_k / mu_k = 1 / (lambda_k + c)
        return 1.0 / (lo + c), 1.0 / (hi + c)
    return hi * (hi + c), lo * (lo + c)


def convergence_time(spectrum: Spectrum, c, model: ConvergenceModel = MODEL_A):
    """Convergence-time functional T(c); ``c`` may be a scalar or an array."""
    c_arr = np.asarray(c, dtype=np.float64)
    if np.any(c_arr < 0):
        raise DomainError("metric shift c must be non-negative")
    lo, hi = _check_positive(spectrum)
    top, bottom = _extremes(lo, hi, c_arr, model.hessian_mode)
    ratio = top / bottom
    if model.kind == "A":
        t = ratio * top
    elif model.kind == "B":
        t = ratio
    elif model.kind == "C":
        t = top
    elif model.kind == "D":
        t = top / np.sqrt(bottom)
    else:
        t = ratio**model.w * top
    return float(t) if np.ndim(t) == 0 else t


def _time_of_alpha(spectrum, model, alpha):
    alpha = np.asarray(alpha, dtype=np.float64)
    return convergence_time(spectrum, alpha * alpha / (1.0 - alpha), model)


def golden_section(f, lo: float, hi: float, tol: float = ALPHA_TOL, max_iter: int = 200):
    """Minimize a unimodal f on [lo, hi]; returns (x, f(x))."""
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f2 > f1:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
    x = 0.5 * (lo + hi)
    return x, f(x)


def minimize_alpha_numeric(
    spectrum: Spectrum, model: ConvergenceModel = MODEL_A
) -> tuple[float, float]:
    """Numerically minimize T(beta_of_alpha(alpha)) over alpha in [0, ALPHA_MAX].

    A 1000-point grid picks the basin, golden-section search refines it to
    ALPHA_TOL. Minima on the boundary are reported at the boundary value.
    """
    grid = np.linspace(0.0, ALPHA_MAX, GRID_POINTS)
    values = _time_of_alpha(spectrum, model, grid)
    i = int(np.argmin(values))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, GRID_POINTS - 1)]
    x, fx = golden_section(lambda a: float(_time_of_alpha(spectrum, model, a)), lo, hi)
    candidates = [(fx, x)]
    if i == 0:
        candidates.append((float(values[0]), 0.0))
    if i == GRID_POINTS - 1:
        candidates.append((float(values[-1]), ALPHA_MAX))
    best_f, best_x = min(candidates, key=lambda p: p[0])
    return float(best_x), float(best_f)


def speedup_at_optimum(spectrum: Spectrum) -> float:
    """T_A(0) / T_A(c*) in closed form, kappa^2 / (4 (kappa - 1))."""
    kappa = cond(spectrum)
    if kappa <= 2.0:
        raise DomainError(f"no interior optimum for condition number {kappa:g} <= 2")
    return kappa * kappa / (4.0 * (kappa - 1.0))


def shifted_condition(spectrum: Spectrum, c: float) -> float:
    """(lambda_max + c) / (lambda_min + c), the condition number of F + cI."""
    return (spectrum.lambda_max + c) / (spectrum.lambda_min + c)


@dataclass(frozen=True)
class RegimeAnalysis:
    topology: str | None
    J: float | None
    lambda_min: float
    lambda_max: float
    cond_f: float
    gap: float
    alpha_pred: float
    alpha_num: float
    abs_err: float
    c_star: float
    speedup: float
    model: str = "A"

    def to_dict(self) -> dict:
        return asdict(self)


def analyze(
    spectrum: Spectrum,
    model: ConvergenceModel = MODEL_A,
    topology: str | None = None,
    J: float | None = None,
) -> RegimeAnalysis:
    """Closed-form prediction against numeric minimization for one spectrum."""
    cs = c_star(spectrum, model.exponent)
    alpha_pred = alpha_of_c(cs)
    alpha_num, _ = minimize_alpha_numeric(spectrum, model)
    t0 = convergence_time(spectrum, 0.0, model)
    speedup = t0 / convergence_time(spectrum, cs, model)
    return RegimeAnalysis(
        topology=None if topology is None else str(topology),
        J=J,
        lambda_min=spectrum.lambda_min,
        lambda_max=spectrum.lambda_max,
        cond_f=cond(spectrum),
        gap=gap(spectrum),
        alpha_pred=alpha_pred,
        alpha_num=alpha_num,
        abs_err=abs(alpha_pred - alpha_num),
        c_star=cs,
        speedup=speedup,
        model=model.label,
    )
