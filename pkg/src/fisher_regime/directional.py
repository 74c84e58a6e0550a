"""Per-eigendirection regime structure and the deviation tensor.

``trace_ratio`` is tr(M)/tr(F); it is deliberately not called a condition
number even though the same Greek letter is customary for it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .spectral import Spectrum, eig_sym, frobenius

OVER = "over-massive"
UNDER = "under-massive"
BALANCED = "balanced"
CLASSIFY_TOL = 1e-10


def directional_alpha(lambda_k, beta: float):
    """lambda / (lambda + beta); accepts scalars or arrays of eigenvalues."""
    lam = np.asarray(lambda_k, dtype=np.float64)
    if np.any(lam <= 0) or not beta > 0:
        raise DomainError("directional alpha needs positive eigenvalues and beta")
    out = lam / (lam + beta)
    return float(out) if out.ndim == 0 else out


def alpha_spread(spectrum: Spectrum, beta: float) -> float:
    """alpha_max - alpha_min, written in the cancellation-free product form."""
    lo, hi = spectrum.lambda_min, spectrum.lambda_max
    if lo <= 0 or not beta > 0:
        raise DomainError("alpha spread needs a positive definite spectrum and beta > 0")
    return beta * (hi - lo) / ((hi + beta) * (lo + beta))


@dataclass
class DeviationReport:
    eigenvalues: np.ndarray
    trace_ratio: float
    deviation_eigs: np.ndarray
    deviation_fraction: float
    m_norm: float = 0.0
    beta: float | None = None
    alpha_dir: np.ndarray | None = None
    alpha_mean: float | None = None
    alpha_spread: float | None = None
    classification: list[str] = field(default_factory=list)

    def multiplets(self, tol: float = 1e-9) -> list[tuple[float, int, str]]:
        """(eigenvalue, multiplicity, label) with degenerate directions merged."""
        spec = Spectrum(np.asarray(self.eigenvalues), np.eye(len(self.eigenvalues)))
        return [
            (float(self.eigenvalues[g[0]]), len(g), self.classification[g[0]])
            for g in spec.multiplets(tol)
        ]

    def to_dict(self) -> dict:
        def plain(x):
            return x.tolist() if isinstance(x, np.ndarray) else x

        return {k: plain(v) for k, v in self.__dict__.items()}


def classify_directions(report: DeviationReport) -> list[str]:
    """Label each eigendirection by the sign of its deviation eigenvalue.

    Deviations within CLASSIFY_TOL * ||M||_F of zero count as balanced.
    """
    d = np.asarray(report.deviation_eigs)
    tol = CLASSIFY_TOL * report.m_norm
    labels = []
    for dk in d:
        if dk > tol:
            labels.append(OVER)
        elif dk < -tol:
            labels.append(UNDER)
        else:
            labels.append(BALANCED)
    return labels


def deviation_tensor(F, M=None, beta: float | None = None, spectrum: Spectrum | None = None):
    """Return (Delta, report) with Delta = M - (tr M / tr F) F.

    ``M`` defaults to F @ F. The per-direction deviations are the diagonal of
    Delta in the eigenbasis of F; for M = F^2 they equal lambda_k (lambda_k - trace_ratio).
    """
    F = np.asarray(F, dtype=np.float64)
    M = F @ F if M is None else np.asarray(M, dtype=np.float64)
    if F.shape != M.shape or F.ndim != 2 or F.shape[0] != F.shape[1]:
        raise DomainError(f"dimension mismatch: F {F.shape}, M {M.shape}")
    tr_f = float(np.trace(F))
    if tr_f <= 0:
        raise DomainError("trace of F must be positive")
    ratio = float(np.trace(M)) / tr_f
    delta = M - ratio * F
    spec = eig_sym(F) if spectrum is None else spectrum
    v = spec.eigenvectors
    dev = np.einsum("ik,ij,jk->k", v, delta, v)
    norm_m = frobenius(M)
    report = DeviationReport(
        eigenvalues=spec.eigenvalues.copy(),
        trace_ratio=ratio,
        deviation_eigs=dev,
        deviation_fraction=frobenius(delta) / norm_m if norm_m > 0 else 0.0,
        m_norm=norm_m,
    )
    if beta is not None:
        report.beta = float(beta)
        report.alpha_dir = directional_alpha(spec.eigenvalues, beta)
        report.alpha_mean = ratio / (ratio + beta)
        report.alpha_spread = alpha_spread(spec, beta)
    report.classification = classify_directions(report)
    return delta, report


def deviation_fraction_spectral(F, M=None) -> float:
    """Deviation fraction from eigenvalues alone (the second, independent route)."""
    F = np.asarray(F, dtype=np.float64)
    if M is None:
        lam = eig_sym(F).eigenvalues
        ratio = float(np.sum(lam**2) / np.sum(lam))
        return float(np.sqrt(np.sum((lam * (lam - ratio)) ** 2)) / np.sqrt(np.sum(lam**4)))
    M = np.asarray(M, dtype=np.float64)
    ratio = float(np.trace(M) / np.trace(F))
    dev = eig_sym(M - ratio * F).eigenvalues
    mu = eig_sym(M).eigenvalues
    return float(np.sqrt(np.sum(dev**2)) / np.sqrt(np.sum(mu**2)))
