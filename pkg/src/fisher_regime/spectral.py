"""Dense symmetric linear algebra for small matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegeneracyError, DomainError, NumericError

SYMMETRY_TOL = 1e-10
JACOBI_TOL = 1e-14
MAX_SWEEPS = 100
SINGULAR_TOL = 1e-10
MULTIPLET_TOL = 1e-9


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues ascending; column k of ``eigenvectors`` pairs with ``eigenvalues[k]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def from_eigenvalues(cls, values) -> "Spectrum":
        """Diagonal spectrum, convenient for closed-form checks."""
        vals = np.sort(np.asarray(values, dtype=np.float64))
        return cls(vals, np.eye(len(vals)))

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T

    def multiplets(self, tol: float = MULTIPLET_TOL) -> list[list[int]]:
        """Group eigenvalue indices whose values agree within tol * |lambda_max|."""
        scale = max(abs(self.lambda_max), abs(self.lambda_min))
        groups: list[list[int]] = []
        for k, lam in enumerate(self.eigenvalues):
            if groups and lam - self.eigenvalues[groups[-1][-1]] <= tol * scale:
                groups[-1].append(k)
            else:
                groups.append([k])
        return groups


def eig_sym(a, backend: str | None = None) -> Spectrum:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Eigenvectors are sign-normalized so the largest-magnitude component of
    each is positive, making the output deterministic.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    norm = np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > SYMMETRY_TOL * max(norm, 1.0):
        raise DomainError("matrix is not symmetric")
    diag, vecs, _, converged = kernels.get(backend).jacobi_eigh(
        0.5 * (a + a.T), JACOBI_TOL, MAX_SWEEPS
    )
    if not converged:
        raise NumericError(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")
    order = np.argsort(diag, kind="stable")
    vals = diag[order]
    vecs = vecs[:, order]
    pivots = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[pivots, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return Spectrum(vals, vecs * signs)


def cond(spectrum: Spectrum) -> float:
    lo, hi = spectrum.lambda_min, spectrum.lambda_max
    if not lo > SINGULAR_TOL * hi or hi <= 0:
        raise DegeneracyError(f"spectrum is not positive definite (min {lo:g}, max {hi:g})")
    return hi / lo


def combined_metric(F, c: float) -> np.ndarray:
    """F^2 + cF, the metric whose eigenvalues are lambda_k (lambda_k + c)."""
    if c < 0:
        raise DomainError(f"metric shift must be non-negative, got {c}")
    F = np.asarray(F, dtype=np.float64)
    g = F @ F + c * F
    return 0.5 * (g + g.T)


def frobenius(a) -> float:
    return float(np.sqrt(np.sum(np.square(np.asarray(a, dtype=np.float64)))))
