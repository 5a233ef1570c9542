"""Infinite Hermitian moment matrices represented by entry rules.

A matrix is a rule (i, j) -> entry plus a label and a hint about strict
positive definiteness of its finite sections.  Finite n x n sections are
materialized on demand; the strict lower triangle is always filled by
conjugating the upper one, so sections are Hermitian by construction
even if the supplied rule is only approximately so.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import measures
from .polynomials import as_coeffs

__all__ = [
    "MomentMatrix",
    "delete_first",
    "derivative_conjugate",
    "inner_product",
    "is_toeplitz",
    "norm_sq",
    "of_measure",
    "section",
    "section_csv",
    "toeplitz_rule",
    "zero_matrix",
]

#: absolute entry tolerance for the constant-diagonal (Toeplitz) test
TOEPLITZ_TOL = 1e-13


@dataclass(eq=False)
class MomentMatrix:
    """Entry rule for an infinite Hermitian matrix.

    ``hpd_hint`` records whether every finite section is expected to be
    strictly positive definite (true for matrices of measures with
    infinite support); consumers use it only to pick test corpora, never
    to skip numerical gates.
    """

    entry: Callable[[int, int], complex]
    label: str = ""
    hpd_hint: bool = False
    _sections: dict = field(default_factory=dict, init=False, repr=False)

    def section(self, n: int) -> np.ndarray:
        return section(self, n)


def section(m: MomentMatrix, n: int) -> np.ndarray:
    """Dense n x n leading section, exactly Hermitian by mirroring."""
    if n < 1:
        raise ValueError("section size must be at least 1")
    cached = m._sections.get(n)
    if cached is None:
        a = np.empty((n, n), dtype=complex)
        for i in range(n):
            for j in range(i, n):
                v = complex(m.entry(i, j))
                a[i, j] = v
                if i != j:
                    a[j, i] = np.conj(v)
        d = a.diagonal()
        a[np.diag_indices(n)] = d.real
        m._sections[n] = a
        cached = a
    return cached.copy()


def of_measure(mu: measures.Measure) -> MomentMatrix:
    """Moment matrix of a measure; the label records the measure JSON."""
    return MomentMatrix(
        entry=lambda i, j: measures.moment(mu, i, j),
        label=json.dumps(measures.to_json(mu), separators=(",", ":")),
        hpd_hint=measures.has_infinite_support(mu),
    )


def zero_matrix() -> MomentMatrix:
    return MomentMatrix(entry=lambda i, j: 0.0 + 0.0j, label="zero", hpd_hint=False)


def toeplitz_rule(coeffs, label: str = "toeplitz") -> MomentMatrix:
    """Hermitian Toeplitz rule from diagonal values: entry(i, j) = c[j - i].

    Missing negative frequencies fall back to the conjugate of the
    positive one, so {0: c0, 1: c1, ...} suffices.
    """
    c = {int(k): complex(v) for k, v in dict(coeffs).items()}

    def entry(i: int, j: int) -> complex:
        k = j - i
        if k in c:
            return c[k]
        if -k in c:
            return complex(np.conj(c[-k]))
        return 0.0 + 0.0j

    return MomentMatrix(entry=entry, label=label, hpd_hint=False)


def derivative_conjugate(m1: MomentMatrix) -> MomentMatrix:
    """Matrix of the form A * M1 * A^* for the formal-derivative map A.

    Row and column 0 vanish and entry (i, j) equals i * j * M1[i-1, j-1],
    so quadratic forms against it compute the M1-norm of the derivative:
    v B v^* == ||p'||^2_{M1}.
    """

    def entry(i: int, j: int) -> complex:
        if i < 1 or j < 1:
            return 0.0 + 0.0j
        return float(i * j) * complex(m1.entry(i - 1, j - 1))

    return MomentMatrix(entry=entry, label=f"dconj({m1.label})", hpd_hint=False)


def delete_first(m: MomentMatrix) -> MomentMatrix:
    """Remove row and column 0: entry (i, j) -> M[i+1, j+1]."""
    return MomentMatrix(
        entry=lambda i, j: m.entry(i + 1, j + 1),
        label=f"delete_first({m.label})",
        hpd_hint=m.hpd_hint,
    )


def is_toeplitz(m: MomentMatrix, n: int) -> bool:
    """True when the n x n section is constant along diagonals."""
    if n < 2:
        raise ValueError("Toeplitz test needs a section of size at least 2")
    a = section(m, n)
    return bool(np.all(np.abs(a[:-1, :-1] - a[1:, 1:]) <= TOEPLITZ_TOL))


def inner_product(a: np.ndarray, v, w) -> complex:
    """<p, q> against a Hermitian section: v A w^* in the row convention."""
    vc = as_coeffs(v)
    wc = as_coeffs(w)
    n = a.shape[0]
    if len(vc) > n or len(wc) > n:
        raise ValueError("coefficient vector longer than section")
    vp = np.zeros(n, dtype=complex)
    wp = np.zeros(n, dtype=complex)
    vp[: len(vc)] = vc
    wp[: len(wc)] = wc
    return complex(vp @ a @ np.conj(wp))


def norm_sq(a: np.ndarray, v) -> float:
    """Quadratic form v A v^*; real for Hermitian sections."""
    return inner_product(a, v, v).real


def section_csv(a: np.ndarray) -> str:
    """Row-major CSV dump with 're+imi' cells and a column-index header."""
    n, mcols = a.shape
    lines = [",".join(f"col_{j}" for j in range(mcols))]
    for i in range(n):
        lines.append(",".join(_complex_cell(a[i, j]) for j in range(mcols)))
    return "\n".join(lines) + "\n"


def _complex_cell(z: complex) -> str:
    return "%.12e%+.12ei" % (z.real, z.imag)
