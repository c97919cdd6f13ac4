"""Dense complex matrix kernels.

Hermitian eigendecomposition (cyclic Jacobi, in-repo), spectral
projections with reproducible endpoint snapping, operator/trace norms,
and functional calculus.  Everything downstream builds on these.

All functions accept plain ``np.ndarray`` (or an `Operator`) and treat
inputs as immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._kernels import BACKEND, jacobi_sweep, sweep_for
from .config import DEFAULT_TOL, Tolerances
from .exceptions import ConvergenceFailure, DimensionMismatch, NonHermitianInput

__all__ = [
    "Operator",
    "EigenDecomposition",
    "RealInterval",
    "as_matrix",
    "hermiticity_defect",
    "herm_eig",
    "spectral_projection",
    "op_norm",
    "trace_norm",
    "frob_norm",
    "herm_fun",
    "expi",
    "commutator",
    "BACKEND",
]


def as_matrix(A) -> np.ndarray:
    """Coerce to a 2-d complex128 array with finite entries."""
    if isinstance(A, Operator):
        return A.mat
    m = np.asarray(A, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix has non-finite entries")
    return m


def hermiticity_defect(A) -> float:
    """max |A[i,j] - conj(A[j,i])|."""
    m = as_matrix(A)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch("hermiticity defect needs a square matrix")
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def _check_hermitian(m: np.ndarray, tol: Tolerances) -> None:
    scale = 1.0 + (float(np.max(np.abs(m))) if m.size else 0.0)
    defect = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if defect > tol.hermitian_flag * scale:
        raise NonHermitianInput(
            f"hermiticity defect {defect:.3e} exceeds {tol.hermitian_flag:.1e} * (1 + max|entry|)"
        )


@dataclass(frozen=True)
class Operator:
    """Dense complex matrix with an optional Hermitian flag.

    The flag is validated at construction: flagged matrices must satisfy
    max |A - A*| <= hermitian_flag * (1 + max |entry|).
    """

    mat: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=np.complex128)
        if m.ndim != 2:
            raise DimensionMismatch("Operator entries must form a matrix")
        if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
            raise ValueError("Operator entries must be finite")
        object.__setattr__(self, "mat", m)
        if self.hermitian:
            _check_hermitian(m, DEFAULT_TOL)

    @property
    def rows(self) -> int:
        return self.mat.shape[0]

    @property
    def cols(self) -> int:
        return self.mat.shape[1]


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and a unitary matrix of column eigenvectors."""

    eigenvalues: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.eigenvalues) @ self.vectors.conj().T

    def unitarity_defect(self) -> float:
        n = self.vectors.shape[0]
        return float(np.linalg.norm(self.vectors.conj().T @ self.vectors - np.eye(n)))


def herm_eig(A, tol: Tolerances = DEFAULT_TOL, backend: str | None = None) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Deterministic for identical input: fixed (p, q) rotation order, sweep
    cap ``tol.jacobi_sweep_cap``, convergence when the off-diagonal
    Frobenius mass drops below ``tol.jacobi_off * ||A||_F``.

    Raises NonHermitianInput if the input fails the Hermitian check, and
    ConvergenceFailure if the sweep cap is exhausted.
    """
    m = as_matrix(A)
    n = m.shape[0]
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch("eigendecomposition needs a square matrix")
    _check_hermitian(m, tol)
    if n == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))

    # Work on the exactly Hermitian part; the perturbation is inside the flag tolerance.
    W = (m + m.conj().T) / 2.0
    W = np.ascontiguousarray(W, dtype=np.complex128)
    U = np.eye(n, dtype=np.complex128)
    if n == 1:
        return EigenDecomposition(W.real.diagonal().copy(), U)

    fro = float(np.linalg.norm(W))
    threshold = tol.jacobi_off * fro
    skip = threshold / (n * n)
    sweep = jacobi_sweep if backend is None else sweep_for(backend)

    def _off2(M: np.ndarray) -> float:
        # cancellation-free off-diagonal Frobenius mass
        B = np.abs(M) ** 2
        np.fill_diagonal(B, 0.0)
        return float(B.sum())

    converged = False
    for _ in range(tol.jacobi_sweep_cap):
        off2 = _off2(W)
        if off2 <= threshold * threshold:
            converged = True
            break
        sweep(W, U, skip)
    else:
        off2 = _off2(W)
        converged = off2 <= threshold * threshold
    if not converged:
        raise ConvergenceFailure(
            f"Jacobi did not converge in {tol.jacobi_sweep_cap} sweeps (off-norm^2 {off2:.3e})"
        )

    w = W.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], np.ascontiguousarray(U[:, order]))


@dataclass(frozen=True)
class RealInterval:
    """Real interval with open/closed endpoints and endpoint snapping.

    ``contains(x, snap)`` moves values within ``snap`` of an endpoint
    onto that endpoint before applying the open/closed semantics (the
    lower endpoint is checked first), so spectral projections at cut
    points are reproducible.
    """

    lo: float = -np.inf
    hi: float = np.inf
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @classmethod
    def at_most(cls, c: float) -> "RealInterval":
        return cls(-np.inf, c, True, True)

    @classmethod
    def above(cls, c: float) -> "RealInterval":
        return cls(c, np.inf, False, True)

    @classmethod
    def below(cls, c: float) -> "RealInterval":
        return cls(-np.inf, c, True, False)

    @classmethod
    def at_least(cls, c: float) -> "RealInterval":
        return cls(c, np.inf, True, True)

    def contains(self, x, snap: float = 0.0):
        x = np.asarray(x, dtype=float)
        near_lo = np.isfinite(self.lo) & (np.abs(x - self.lo) <= snap)
        near_hi = np.isfinite(self.hi) & (np.abs(x - self.hi) <= snap)
        above_lo = (x >= self.lo) if self.lo_closed else (x > self.lo)
        below_hi = (x <= self.hi) if self.hi_closed else (x < self.hi)
        plain = above_lo & below_hi
        return np.where(near_lo, self.lo_closed, np.where(near_hi, self.hi_closed, plain))


def spectral_projection(A, interval: RealInterval, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projection onto the eigenspaces with eigenvalue in `interval`."""
    eig = herm_eig(A, tol)
    if eig.eigenvalues.size == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    snap = tol.eig_snap * (1.0 + float(np.max(np.abs(eig.eigenvalues))))
    mask = interval.contains(eig.eigenvalues, snap)
    V = eig.vectors[:, np.asarray(mask, dtype=bool)]
    return V @ V.conj().T


def op_norm(A, tol: Tolerances = DEFAULT_TOL) -> float:
    """Largest singular value: sqrt of the top eigenvalue of A*A."""
    m = as_matrix(A)
    if m.size == 0:
        return 0.0
    H = m.conj().T @ m
    w = herm_eig(H, tol).eigenvalues
    return float(np.sqrt(max(float(w[-1]), 0.0)))


def trace_norm(A, tol: Tolerances = DEFAULT_TOL) -> float:
    """Sum of singular values."""
    m = as_matrix(A)
    if m.size == 0:
        return 0.0
    H = m.conj().T @ m
    w = np.clip(herm_eig(H, tol).eigenvalues, 0.0, None)
    return float(np.sum(np.sqrt(w)))


def frob_norm(A) -> float:
    return float(np.linalg.norm(as_matrix(A)))


def herm_fun(A, f: Callable[[np.ndarray], np.ndarray], tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix: U f(Lambda) U*."""
    eig = herm_eig(A, tol)
    fw = np.asarray(f(eig.eigenvalues), dtype=np.complex128)
    if fw.shape != eig.eigenvalues.shape:
        fw = np.array([f(x) for x in eig.eigenvalues], dtype=np.complex128)
    return (eig.vectors * fw) @ eig.vectors.conj().T


def expi(D, t: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Unitary exp(i t D) for Hermitian D, via eigendecomposition."""
    return herm_fun(D, lambda w: np.exp(1j * t * w), tol)


def commutator(A, B) -> np.ndarray:
    a, b = as_matrix(A), as_matrix(B)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"commutator needs equal square shapes, got {a.shape} and {b.shape}")
    return a @ b - b @ a
