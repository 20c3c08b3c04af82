"""Wigner smallest and Wishart largest eigenpairs, with interlacing checks.

Eigenpairs come from a cyclic Jacobi solver compiled with numba.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import DegenerateEigenspace, NoConvergence, SizeExceeded
from .laws import Law

EIGEN_CAP = 512
MAX_SWEEPS = 60
GAUGE_TOL = 1e-12


def sample_wigner(n: int, law: Law, rng: np.random.Generator) -> np.ndarray:
    iu, ju = np.triu_indices(n)
    A = np.zeros((n, n))
    A[iu, ju] = law.sample(rng, iu.size)
    A[ju, iu] = A[iu, ju]
    return A


def sample_wishart(m: int, n: int, law: Law, rng: np.random.Generator) -> np.ndarray:
    return law.sample(rng, (m, n))


@numba.njit(cache=True)
def _jacobi_sweeps(A, V, target, max_sweeps):
    """Cyclic-by-row Jacobi in place; returns sweeps used, or -1 if the cap was hit."""
    n = A.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += A[i, j] * A[i, j]
        if math.sqrt(off) < target:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = A[k, p]; akq = A[k, q]
                    A[k, p] = c * akp - s * akq
                    A[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = A[p, k]; aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
                A[p, q] = 0.0; A[q, p] = 0.0
                for k in range(n):
                    vkp = V[k, p]; vkq = V[k, q]
                    V[k, p] = c * vkp - s * vkq
                    V[k, q] = s * vkp + c * vkq
    return -1


def symmetric_eigen(A, tol: float = 1e-10, max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a symmetric matrix.

    Iterates until the off-diagonal Frobenius norm is below ``tol * ||A||_F``.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if n > EIGEN_CAP:
        raise SizeExceeded(f"eigen solver is capped at n={EIGEN_CAP}")
    A = np.ascontiguousarray(0.5 * (A + A.T))
    V = np.eye(n)
    norm = np.linalg.norm(A)
    if n == 1 or norm == 0:
        return np.diag(A).copy(), V
    if _jacobi_sweeps(A, V, tol * norm, max_sweeps) < 0:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def gauge_vector(v) -> np.ndarray:
    """Sign representative: first coordinate positive (first non-negligible one if v[0] ~ 0)."""
    v = np.asarray(v, dtype=float)
    big = np.flatnonzero(np.abs(v) > GAUGE_TOL)
    if big.size and v[big[0]] < 0:
        return -v
    return v.copy()


def vector_metric(v1, v2) -> float:
    return float(np.linalg.norm(np.asarray(v1) - np.asarray(v2)))


@dataclass
class Eigenpair:
    value: float
    vector: np.ndarray
    residual: float
    gap: float


def extreme_eigenpair(M, which: str) -> Eigenpair:
    """``wigner_min``: smallest eigenpair of symmetric M; ``wishart_max``: largest of M^T M."""
    M = np.asarray(M, dtype=float)
    if which == "wigner_min":
        w, V = symmetric_eigen(M)
        lam, v = w[0], V[:, 0]
        gap = w[1] - w[0] if w.size > 1 else math.inf
        residual = float(np.linalg.norm(M @ v - lam * v))
    elif which == "wishart_max":
        w, V = symmetric_eigen(M.T @ M)
        lam, v = w[-1], V[:, -1]
        gap = w[-1] - w[-2] if w.size > 1 else math.inf
        residual = float(np.linalg.norm(M.T @ (M @ v) - lam * v))
    else:
        raise ValueError(which)
    if gap < 1e-10:
        warnings.warn(f"extreme eigenvalue gap {gap:.3g} below 1e-10", DegenerateEigenspace)
    v = v / np.linalg.norm(v)
    return Eigenpair(float(lam), gauge_vector(v), residual, float(gap))


@dataclass
class InterlacingReport:
    n: int
    interlacing_margin: float  # min over k of both slacks; >= -tol means it holds
    gap_margins: dict = field(default_factory=dict)  # epsilon -> slack of the gap bound
    tol: float = 0.0

    @property
    def passed(self) -> bool:
        return self.interlacing_margin >= -self.tol and all(m >= -self.tol for m in self.gap_margins.values())


def interlacing_check(A, epsilons=(0.0, 0.1, 0.5)) -> InterlacingReport:
    """Check mu^-_{n-k+1} <= lambda_k <= mu^+_k over leading principal minors, and the gap bound

    lambda_n - mu_{n-1} >= 2 sqrt(e(1-e)) |a.x| - e mu_{n-1} + e a_nn

    with mu_{n-1} the top eigenvalue of the leading (n-1)-minor and x its eigenvector.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if n > 64:
        raise SizeExceeded("interlacing check is capped at n=64")
    lam, _ = symmetric_eigen(A)
    mu_minus, mu_plus, top_vecs = {}, {}, {}
    for k in range(1, n + 1):
        w, V = symmetric_eigen(A[:k, :k])
        mu_minus[k], mu_plus[k] = w[0], w[-1]
        top_vecs[k] = V[:, -1]
    margin = math.inf
    for k in range(1, n + 1):
        margin = min(margin, lam[k - 1] - mu_minus[n - k + 1], mu_plus[k] - lam[k - 1])
    tol = 1e-8 * max(np.linalg.norm(A), 1.0)
    report = InterlacingReport(n, float(margin), tol=tol)
    if n >= 2:
        mu = mu_plus[n - 1]
        x = top_vecs[n - 1]
        a = A[n - 1, : n - 1]
        for e in epsilons:
            rhs = 2 * math.sqrt(e * (1 - e)) * abs(float(a @ x)) - e * mu + e * A[n - 1, n - 1]
            report.gap_margins[e] = float(lam[-1] - mu - rhs)
    return report


def wigner_row_block_positions(n: int, i: int) -> list[tuple[int, int]]:
    """Matrix positions touched by resampling every entry in row/column i."""
    return sorted({(i, j) for j in range(n)} | {(j, i) for j in range(n)})
