"""Dense Hermitian numerics with structured failures.

Thin kernel shared by everything downstream: a pivot-gated Cholesky
factorization, Hermitian eigendecomposition, the definite generalized
eigenproblem, and polynomial roots via the companion matrix.  The heavy
lifting is delegated to LAPACK through numpy/scipy; what this module
adds is the error contract (NotPositiveDefinite with the failing pivot
index, ConvergenceFailure with the offending label) and the exact
reductions used by the callers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .polynomials import as_coeffs

__all__ = [
    "ConvergenceFailure",
    "HermEig",
    "NotPositiveDefinite",
    "cholesky",
    "companion_roots",
    "gen_eig_definite",
    "herm_eig",
]

#: a Schur pivot at or below this fraction of the original diagonal entry
#: marks the section as numerically singular
PIVOT_RTOL = 1e-14
#: companion-root residual budget: |p(root)| <= this * max|coeff| * (1+|root|)^deg
ROOT_RESIDUAL_TOL = 1e-8


class NotPositiveDefinite(Exception):
    """Cholesky pivot failure; ``index`` is the first bad pivot."""

    def __init__(self, index: int, label: str = ""):
        self.index = index
        self.label = label
        where = f" of {label}" if label else ""
        super().__init__(f"pivot {index}{where} is not positive")


class ConvergenceFailure(Exception):
    """An iterative LAPACK driver failed to converge."""

    def __init__(self, label: str = ""):
        self.label = label
        super().__init__(f"eigensolver failed to converge on {label or 'input'}")


@dataclass(frozen=True)
class HermEig:
    """Ascending eigenvalues and matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _square(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    return m


def cholesky(g, label: str = "") -> np.ndarray:
    """Lower-triangular L with G = L L^* and positive real diagonal.

    Raises NotPositiveDefinite(k) as soon as the k-th Schur pivot drops
    to PIVOT_RTOL times the k-th original diagonal entry (or below),
    which covers indefinite, singular, and numerically singular input.
    The relative test is per column so that graded but well-posed Gram
    sections (diagonals spanning many orders of magnitude) pass.
    """
    a = _square(g)
    n = a.shape[0]
    diag = a.diagonal().real
    lower = np.zeros((n, n), dtype=complex)
    for k in range(n):
        pivot = a[k, k].real - np.real(lower[k, :k] @ np.conj(lower[k, :k]))
        if pivot <= PIVOT_RTOL * max(diag[k], 0.0):
            raise NotPositiveDefinite(k, label)
        lkk = np.sqrt(pivot)
        lower[k, k] = lkk
        if k + 1 < n:
            lower[k + 1 :, k] = (
                a[k + 1 :, k] - lower[k + 1 :, :k] @ np.conj(lower[k, :k])
            ) / lkk
    return lower


def herm_eig(m, label: str = "") -> HermEig:
    """Full eigendecomposition of a Hermitian matrix, ascending order."""
    a = _square(m)
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(label) from exc
    return HermEig(eigenvalues=vals, eigenvectors=vecs)


def gen_eig_definite(q, g, label: str = "") -> np.ndarray:
    """Ascending eigenvalues of the pencil (Q, G) with G Hermitian
    positive definite: reduce to L^{-1} Q L^{-*} via the Cholesky factor
    of G and diagonalize.  Propagates NotPositiveDefinite from G.
    """
    qm = _square(q)
    lower = cholesky(g, label)
    y = scipy.linalg.solve_triangular(lower, qm, lower=True)
    b = scipy.linalg.solve_triangular(lower, y.conj().T, lower=True).conj().T
    b = 0.5 * (b + b.conj().T)
    try:
        return np.linalg.eigvalsh(b)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(label) from exc


def companion_roots(v) -> np.ndarray:
    """All roots (with multiplicity) of a degree >= 1 polynomial.

    Eigenvalues of the companion matrix of the monic rescaling, returned
    sorted by (real, imag) for reproducible output.
    """
    c = as_coeffs(v)
    deg = len(c) - 1
    if deg < 1:
        raise ValueError("root finding needs degree at least 1")
    monic = c / c[-1]
    comp = np.zeros((deg, deg), dtype=complex)
    if deg > 1:
        comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -monic[:-1]
    try:
        roots = np.linalg.eigvals(comp)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - tiny inputs
        raise ConvergenceFailure("companion matrix") from exc
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]
