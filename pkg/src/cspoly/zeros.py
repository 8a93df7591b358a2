"""Zeros of phi_n as eigenvalues of the Jacobi matrix, and their limit law.

The recurrence x phi_k = b_{k+1} phi_{k+1} + b_k phi_{k-1} with
b_k = sqrt(lambda_k / 2) means the zeros of phi_n are the eigenvalues of the
n x n symmetric tridiagonal matrix with zero diagonal and off-diagonal
b_1 .. b_{n-1}. Eigenvalues are found by Sturm-count bisection.

Rescaled by sqrt(m) with n/m -> c, the zero counting measure tends to the
density (2 / (pi c)) sqrt(c - t^2) on (-sqrt(c), sqrt(c)).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError
from .recurrence import Params, lambda_n

__all__ = [
    "Tridiagonal",
    "ZeroReport",
    "eigen_sturm",
    "histogram",
    "jacobi_matrix",
    "ks_distance",
    "semicircle_cdf",
    "semicircle_density",
    "sturm_count",
    "zero_report",
]

_MAX_BISECTIONS = 200


@dataclass(frozen=True, eq=False)
class Tridiagonal:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or d.size < 1 or e.shape != (d.size - 1,):
            raise DomainError("need diag of length n >= 1 and offdiag of length n - 1")
        if np.any(e <= 0.0):
            raise DomainError("off-diagonal entries must be strictly positive")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def dim(self) -> int:
        return self.diag.size

    def gershgorin(self) -> tuple[float, float]:
        r = np.zeros(self.dim)
        r[:-1] += self.offdiag
        r[1:] += self.offdiag
        return float(np.min(self.diag - r)), float(np.max(self.diag + r))


def jacobi_matrix(p: Params, n: int) -> Tridiagonal:
    """Jacobi matrix whose eigenvalues are the zeros of phi_n."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    off = np.array([math.sqrt(lambda_n(p, k) / 2.0) for k in range(1, int(n))])
    return Tridiagonal(np.zeros(int(n)), off)


def sturm_count(T: Tridiagonal, shifts) -> np.ndarray:
    """Number of eigenvalues strictly below each shift."""
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    e2 = T.offdiag**2
    pivmin = np.finfo(float).tiny * max(1.0, float(np.max(e2, initial=1.0)))
    q = T.diag[0] - shifts
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0).astype(np.int64)
    for i in range(1, T.dim):
        q = (T.diag[i] - shifts) - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def _bisect(T: Tridiagonal, indices: np.ndarray, lo0: float, hi0: float, tol: float) -> np.ndarray:
    lo = np.full(indices.size, lo0)
    hi = np.full(indices.size, hi0)
    for _ in range(_MAX_BISECTIONS):
        if np.all(hi - lo <= tol):
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        stalled = (mid <= lo) | (mid >= hi)
        if np.all(stalled | (hi - lo <= tol)):
            return 0.5 * (lo + hi)
        below = sturm_count(T, mid) > indices
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
    raise NumericalError(f"eigenvalue bisection exceeded {_MAX_BISECTIONS} iterations")


def eigen_sturm(T: Tridiagonal, tol: float | None = None, workers: int = 1) -> np.ndarray:
    """All eigenvalues, sorted, each bracketed to width <= tol.

    The default tolerance is 1e-12 times the Gershgorin radius. With
    workers > 1 the index range is split into chunks bisected concurrently;
    each eigenvalue's bisection is independent, so the result is identical to
    the single-worker run.
    """
    lo, hi = T.gershgorin()
    radius = max(abs(lo), abs(hi), np.finfo(float).tiny)
    if tol is None:
        tol = 1e-12 * radius
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    if T.dim == 1:
        return T.diag.copy()
    # widen so the end points are strictly outside the spectrum
    pad = 4.0 * np.finfo(float).eps * radius + tol
    lo, hi = lo - pad, hi + pad
    idx = np.arange(T.dim)
    if workers <= 1 or T.dim < 2 * workers:
        vals = _bisect(T, idx, lo, hi, tol)
    else:
        chunks = np.array_split(idx, workers)
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda c: _bisect(T, c, lo, hi, tol), chunks))
        vals = np.concatenate(parts)
    if T.dim > 1 and not np.all(np.diff(vals) > 0.0):
        raise NumericalError("eigenvalues not strictly increasing; tolerance too coarse")
    return vals


def semicircle_density(c: float, t):
    """(2 / (pi c)) sqrt(c - t^2) on (-sqrt(c), sqrt(c)), zero elsewhere."""
    if not c > 0:
        raise DomainError("c must be positive")
    t = np.asarray(t, dtype=float)
    return np.where(np.abs(t) < math.sqrt(c), 2.0 / (math.pi * c) * np.sqrt(np.clip(c - t * t, 0.0, None)), 0.0)


def semicircle_cdf(c: float, t):
    """Distribution function of the limiting zero density."""
    if not c > 0:
        raise DomainError("c must be positive")
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=float)
    r = math.sqrt(c)
    s = np.clip(t, -r, r)
    f = 0.5 + s * np.sqrt(np.clip(c - s * s, 0.0, None)) / (math.pi * c) + np.arcsin(s / r) / math.pi
    f = np.where(t <= -r, 0.0, np.where(t >= r, 1.0, f))
    return float(f) if scalar else f


def ks_distance(zeros_rescaled, c: float) -> float:
    """Kolmogorov-Smirnov distance between the sample and the limit law.

    Both one-sided step limits are compared at every sample point.
    """
    z = np.asarray(zeros_rescaled, dtype=float)
    if z.size == 0:
        raise DomainError("empty sample")
    if np.any(np.diff(z) < 0):
        raise DomainError("sample must be sorted")
    n = z.size
    f = semicircle_cdf(c, z)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


@dataclass(frozen=True, eq=False)
class ZeroReport:
    n: int
    m: int
    c: float
    zeros: np.ndarray
    rescaled: np.ndarray
    ks: float


def zero_report(p: Params, n: int, c: float, tol: float | None = None, workers: int = 1) -> ZeroReport:
    """Zeros of phi_n rescaled by sqrt(m), m = round(n / c), and their KS distance."""
    if not c > 0:
        raise DomainError("c must be positive")
    m = max(1, int(round(n / c)))
    zeros = eigen_sturm(jacobi_matrix(p, n), tol=tol, workers=workers)
    rescaled = zeros / math.sqrt(m)
    return ZeroReport(n=int(n), m=m, c=float(c), zeros=zeros, rescaled=rescaled, ks=ks_distance(rescaled, c))


def histogram(rescaled, c: float, bins: int = 64, margin: float = 0.2):
    """Counts on [-sqrt(c)-margin, sqrt(c)+margin] with the model density at bin centres.

    Returns (edges, counts, model_density, model_counts).
    """
    r = math.sqrt(c) + margin
    edges = np.linspace(-r, r, bins + 1)
    counts, _ = np.histogram(np.asarray(rescaled, dtype=float), bins=edges)
    centres = 0.5 * (edges[:-1] + edges[1:])
    n = len(rescaled)
    model_counts = n * np.diff(semicircle_cdf(c, edges))
    return edges, counts, semicircle_density(c, centres), model_counts
