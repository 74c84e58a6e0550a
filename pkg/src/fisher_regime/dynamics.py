"""Explicit-Euler gradient flows on quadratic losses.

The loss is L(theta) = 1/2 (theta - theta*)^T H (theta - theta*) and a step
under metric G is theta - eta G^-1 H (theta - theta*). Metrics are applied
through a Cholesky factorization, never an explicit inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import DegeneracyError, DomainError, InstabilityError
from .regime import ALPHA_MAX, beta_of_alpha
from .spectral import Spectrum, combined_metric

TOL = 1e-6
MAX_ITER = 1_000_000
DIVERGENCE_STEPS = 10
ETA_POLICIES = ("fixed", "normalized")


@dataclass(frozen=True)
class QuadraticProblem:
    hessian: np.ndarray
    target: np.ndarray
    start: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.target)

    @classmethod
    def excited(cls, hessian, target=None) -> "QuadraticProblem":
        """Start at target + the normalized all-ones vector, exciting every mode."""
        hessian = np.asarray(hessian, dtype=np.float64)
        d = hessian.shape[0]
        target = np.zeros(d) if target is None else np.asarray(target, dtype=np.float64)
        return cls(hessian, target, target + np.ones(d) / math.sqrt(d))

    def loss(self, theta) -> float:
        r = np.asarray(theta) - self.target
        return 0.5 * float(r @ self.hessian @ r)

    def gradient(self, theta) -> np.ndarray:
        return self.hessian @ (np.asarray(theta) - self.target)


@dataclass
class FlowTrace:
    iterates: list[np.ndarray]
    step_size: float
    iterations_to_tol: int
    converged: bool
    distances: list[float] = field(default_factory=list)


def _factor(metric, dim):
    if metric is None:
        return None
    g = np.asarray(metric, dtype=np.float64)
    if g.shape != (dim, dim):
        raise DomainError(f"metric shape {g.shape} does not match dimension {dim}")
    try:
        return linalg.cho_factor(g)
    except linalg.LinAlgError as exc:
        raise DegeneracyError("metric is not positive definite") from exc


def _apply(factor, grad):
    return grad if factor is None else linalg.cho_solve(factor, grad)


def gradient_step(theta, problem: QuadraticProblem, metric=None, eta: float = 1.0) -> np.ndarray:
    """One step theta - eta metric^-1 grad L; ``metric=None`` is the ordinary gradient."""
    if not eta > 0:
        raise DomainError(f"step size must be positive, got {eta}")
    theta = np.asarray(theta, dtype=np.float64)
    return theta - eta * _apply(_factor(metric, problem.dim), problem.gradient(theta))


def run_flow(
    problem: QuadraticProblem,
    metric=None,
    eta: float = 1.0,
    tol: float = TOL,
    max_iter: int = MAX_ITER,
    keep_iterates: bool = False,
) -> FlowTrace:
    """Iterate until the distance to the target shrinks by ``tol`` relative to the start.

    Only the final iterate is kept unless ``keep_iterates`` is set.
    """
    if not eta > 0:
        raise DomainError(f"step size must be positive, got {eta}")
    if not 0 < tol < 1:
        raise DomainError(f"tol must lie in (0, 1), got {tol}")
    factor = _factor(metric, problem.dim)
    theta = np.array(problem.start, dtype=np.float64)
    target = problem.target
    d0 = float(np.linalg.norm(theta - target))
    iterates = [theta.copy()]
    distances = [d0]
    if d0 == 0.0:
        return FlowTrace(iterates, eta, 0, True, distances)
    goal = tol * d0
    dist = d0
    growing = 0
    for it in range(1, max_iter + 1):
        theta = theta - eta * _apply(factor, problem.hessian @ (theta - target))
        new = float(np.linalg.norm(theta - target))
        growing = growing + 1 if new > dist else 0
        if growing >= DIVERGENCE_STEPS or not math.isfinite(new):
            raise InstabilityError(f"flow diverged at iteration {it} (distance {new:g})")
        dist = new
        if keep_iterates:
            iterates.append(theta.copy())
            distances.append(dist)
        if dist <= goal:
            break
    else:
        it = max_iter
    if not keep_iterates:
        iterates.append(theta.copy())
        distances.append(dist)
    return FlowTrace(iterates, eta, it, dist <= goal, distances)


def predicted_iterations(rates, eta: float, tol: float = TOL) -> int:
    """Slowest-mode closed form: ceil(ln tol / ln max_k |1 - eta r_k|)."""
    factor = float(np.max(np.abs(1.0 - eta * np.asarray(rates))))
    if factor == 0.0:
        return 1
    return math.ceil(math.log(tol) / math.log(factor))


def _pushforward(a, matrix):
    """A^-T X A^-1 for symmetric X, via two triangular-free solves."""
    left = np.linalg.solve(a.T, matrix)
    out = np.linalg.solve(a.T, left.T).T
    return 0.5 * (out + out.T)


def reparam_invariance_check(
    problem: QuadraticProblem,
    fisher,
    a,
    steps: int = 50,
    eta: float = 0.1,
    natural: bool = True,
) -> float:
    """max_t ||phi_t - A theta_t|| for the flow run in theta and in phi = A theta.

    With ``natural`` the metric is F in theta and its pushforward A^-T F A^-1
    in phi; otherwise both flows use the ordinary gradient.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.shape != (problem.dim, problem.dim):
        raise DomainError(f"reparameterization shape {a.shape} does not match {problem.dim}")
    if np.linalg.matrix_rank(a) < problem.dim:
        raise DegeneracyError("reparameterization matrix is singular")
    phi_problem = QuadraticProblem(
        _pushforward(a, problem.hessian), a @ problem.target, a @ problem.start
    )
    f_theta = _factor(fisher, problem.dim) if natural else None
    f_phi = _factor(_pushforward(a, np.asarray(fisher)), problem.dim) if natural else None
    theta = np.array(problem.start, dtype=np.float64)
    phi = np.array(phi_problem.start, dtype=np.float64)
    worst = float(np.linalg.norm(phi - a @ theta))
    for _ in range(steps):
        theta = theta - eta * _apply(f_theta, problem.gradient(theta))
        phi = phi - eta * _apply(f_phi, phi_problem.gradient(phi))
        worst = max(worst, float(np.linalg.norm(phi - a @ theta)))
    return worst


def parse_grid(text: str) -> np.ndarray:
    """Parse ``start:stop:step`` (stop inclusive within half a step)."""
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise DomainError(f"grid must be start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise DomainError(f"empty or malformed grid {text!r}")
    n = int(math.floor((stop - start) / step + 0.5)) + 1
    return np.round(start + step * np.arange(n), 12)


@dataclass
class EmpiricalAlpha:
    alpha: float
    grid: np.ndarray
    iterations: np.ndarray
    converged: np.ndarray
    eta_policy: str


def empirical_alpha(
    spectrum: Spectrum,
    eta_policy: str = "normalized",
    alpha_grid=None,
    tol: float = TOL,
    max_iter: int = MAX_ITER,
) -> EmpiricalAlpha:
    """Measure flow iterations to tolerance under g(beta_of_alpha(alpha)) for each alpha.

    The loss Hessian is the identity. ``normalized`` sets eta to the inverse
    of the fastest rate of g^-1 per alpha (eta = mu_min); ``fixed`` uses the
    single eta that is stable for every alpha in the grid.
    """
    if eta_policy not in ETA_POLICIES:
        raise DomainError(f"unknown eta policy {eta_policy!r}")
    grid = np.linspace(0.0, ALPHA_MAX, 100) if alpha_grid is None else np.asarray(alpha_grid, float)
    if grid.size == 0:
        raise DomainError("empty alpha grid")
    if np.any(grid < 0) or np.any(grid > ALPHA_MAX):
        raise DomainError(f"alpha grid must lie in [0, {ALPHA_MAX}]")
    fisher = spectrum.reconstruct()
    problem = QuadraticProblem.excited(np.eye(spectrum.dim))
    shifts = [beta_of_alpha(float(a)) for a in grid]
    mu_min = [spectrum.lambda_min * (spectrum.lambda_min + c) for c in shifts]
    fixed_eta = min(mu_min)
    iters = np.empty(len(grid), dtype=np.int64)
    ok = np.empty(len(grid), dtype=bool)
    for k, c in enumerate(shifts):
        eta = mu_min[k] if eta_policy == "normalized" else fixed_eta
        trace = run_flow(problem, combined_metric(fisher, c), eta, tol, max_iter)
        iters[k] = trace.iterations_to_tol
        ok[k] = trace.converged
    best = int(np.argmin(iters))
    return EmpiricalAlpha(float(grid[best]), grid, iters, ok, eta_policy)
