"""Dense complex linear algebra, polynomial roots, and simplex descent.

Self-contained kernels sized for the 3x3 and 4x4 systems used elsewhere:
LU with partial pivoting, cyclic Jacobi for Hermitian eigenvalues,
Durand-Kerner root finding, and Nelder-Mead minimization.  Matrices are
numpy complex arrays used purely as storage; no numpy.linalg calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NoConvergence, NotHermitian, SingularMatrix

# Relative pivot threshold: a pivot this small compared to the largest
# initial entry is treated as an exact singularity.
PIVOT_RTOL = 1e-12

HERMITIAN_ATOL = 1e-12

# Residual guarantee for accepted roots, and the tighter polish target
# the iteration actually aims for (better root accuracy on simple roots).
ROOT_RTOL = 1e-9
ROOT_POLISH_RTOL = 1e-13
ROOT_MAX_ITER = 200


def _as_square(a: np.ndarray) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def _lu_factor(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Doolittle LU with partial pivoting; factors stored in place."""
    lu = a.copy()
    n = lu.shape[0]
    scale = float(np.max(np.abs(lu))) if n else 0.0
    if scale == 0.0:
        raise SingularMatrix("matrix of zeros")
    perm = list(range(n))
    for k in range(n):
        pivot_row = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[pivot_row, k]) < PIVOT_RTOL * scale:
            raise SingularMatrix(f"pivot below tolerance at column {k}")
        if pivot_row != k:
            lu[[k, pivot_row]] = lu[[pivot_row, k]]
            perm[k], perm[pivot_row] = perm[pivot_row], perm[k]
        for i in range(k + 1, n):
            lu[i, k] /= lu[k, k]
            lu[i, k + 1:] -= lu[i, k] * lu[k, k + 1:]
    return lu, perm


def lu_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A X = B for X by LU factorization with partial pivoting.

    Raises SingularMatrix when a pivot falls below 1e-12 times the
    largest entry of A.
    """
    m = _as_square(a)
    rhs = np.asarray(b, dtype=complex)
    squeeze = rhs.ndim == 1
    if squeeze:
        rhs = rhs[:, None]
    if rhs.shape[0] != m.shape[0]:
        raise ValueError("right-hand side has incompatible row count")
    lu, perm = _lu_factor(m)
    n = m.shape[0]
    x = rhs[perm].copy()
    for k in range(n):  # forward substitution, unit lower triangle
        x[k + 1:] -= np.outer(lu[k + 1:, k], x[k])
    for k in range(n - 1, -1, -1):  # back substitution
        x[k] /= lu[k, k]
        x[:k] -= np.outer(lu[:k, k], x[k])
    return x[:, 0] if squeeze else x


def inverse(a: np.ndarray) -> np.ndarray:
    """Matrix inverse via lu_solve against the identity."""
    m = _as_square(a)
    return lu_solve(m, np.eye(m.shape[0], dtype=complex))


def _check_hermitian(a: np.ndarray) -> np.ndarray:
    m = _as_square(a)
    if float(np.max(np.abs(m - m.conj().T))) > HERMITIAN_ATOL:
        raise NotHermitian("matrix deviates from its conjugate transpose")
    return m


def hermitian_eigenvalues(a: np.ndarray) -> list[float]:
    """Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi.

    Each two-sided rotation annihilates one off-diagonal pair; sweeps
    repeat until the largest off-diagonal magnitude is negligible.
    """
    m = _check_hermitian(a)
    n = m.shape[0]
    if n == 1:
        return [float(m[0, 0].real)]
    w = m.copy()
    scale = max(float(np.max(np.abs(w))), 1.0)
    for _ in range(100):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = w[p, q]
                if abs(apq) <= 1e-16 * scale:
                    continue
                off = max(off, abs(apq))
                alpha = math.atan2(apq.imag, apq.real)
                theta = 0.5 * math.atan2(2.0 * abs(apq), (w[p, p] - w[q, q]).real)
                c = math.cos(theta)
                s = math.sin(theta)
                u = np.eye(n, dtype=complex)
                u[p, p] = c
                u[p, q] = -s * np.exp(1j * alpha)
                u[q, p] = s * np.exp(-1j * alpha)
                u[q, q] = c
                w = u.conj().T @ w @ u
        if off <= 1e-14 * scale:
            break
    return sorted(float(w[i, i].real) for i in range(n))


def poly_roots(coeffs: Sequence[complex]) -> list[complex]:
    """All roots of a polynomial given by descending-power coefficients.

    Durand-Kerner simultaneous iteration with deterministic starting
    points on a circle of radius 1 + max|c_i / c_lead|, angles equally
    spaced plus a fixed irrational offset.  Iterates (at most 200 times)
    toward residual 1e-13 * max|c_i| per root; accepts the best iterate
    if it meets 1e-9 * max|c_i|, else raises NoConvergence carrying it.
    """
    cs = [complex(c) for c in coeffs]
    if not cs or cs[0] == 0:
        raise ValueError("leading coefficient must be nonzero")
    degree = len(cs) - 1
    if degree == 0:
        return []
    if degree > 8:
        raise ValueError("degree above 8 not supported")
    monic = np.array(cs, dtype=complex) / cs[0]

    def peval(z: complex) -> complex:
        acc = 0.0 + 0.0j
        for c in monic:
            acc = acc * z + c
        return acc

    radius = 1.0 + float(np.max(np.abs(monic[1:]))) if degree else 1.0
    offset = math.sqrt(2.0) - 1.0  # fixed irrational phase offset
    roots = [
        radius * np.exp(1j * (2.0 * math.pi * k / degree + offset))
        for k in range(degree)
    ]
    scale = float(np.max(np.abs(cs)))
    accept_tol = ROOT_RTOL * scale
    polish_tol = ROOT_POLISH_RTOL * scale
    best = list(roots)
    best_res = math.inf
    for _ in range(ROOT_MAX_ITER):
        for k in range(degree):
            zk = roots[k]
            denom = 1.0 + 0.0j
            for j in range(degree):
                if j != k:
                    denom *= zk - roots[j]
            if denom == 0:  # coincident iterates: nudge deterministically
                denom = 1e-12 + 0.0j
            roots[k] = zk - peval(zk) / denom
        res = max(abs(peval(z)) for z in roots)
        if res < best_res:
            best_res = res
            best = list(roots)
        if res <= polish_tol:
            return [complex(z) for z in roots]
    if best_res <= accept_tol:
        return [complex(z) for z in best]
    raise NoConvergence(
        f"root residual {best_res:.3e} above tolerance {accept_tol:.3e}",
        best=[complex(z) for z in best],
    )


@dataclass(frozen=True)
class MinimizeResult:
    argmin: tuple[float, ...]
    value: float
    evaluations: int


def minimize_simplex(
    objective: Callable[[Sequence[float]], float],
    start: Sequence[float],
    max_evals: int = 2000,
    tol: float = 1e-9,
) -> MinimizeResult:
    """Nelder-Mead descent from a deterministic initial simplex.

    Terminates when the simplex max-norm diameter drops below tol or the
    evaluation budget is spent; always returns the best point seen.
    """
    x0 = np.asarray(start, dtype=float)
    d = x0.size
    evals = 0

    def f(x: np.ndarray) -> float:
        nonlocal evals
        evals += 1
        return float(objective(tuple(float(v) for v in x)))

    simplex = [x0.copy()]
    for i in range(d):
        step = 0.05 * abs(x0[i]) if x0[i] != 0.0 else 0.05
        v = x0.copy()
        v[i] += step
        simplex.append(v)
    values = [f(v) for v in simplex]

    while evals < max_evals:
        order = sorted(range(d + 1), key=lambda i: values[i])
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        diameter = max(
            float(np.max(np.abs(v - simplex[0]))) for v in simplex[1:]
        ) if d else 0.0
        if diameter < tol:
            break
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        reflected = centroid + (centroid - worst)
        fr = f(reflected)
        if fr < values[0]:
            expanded = centroid + 2.0 * (centroid - worst)
            fe = f(expanded)
            if fe < fr:
                simplex[-1], values[-1] = expanded, fe
            else:
                simplex[-1], values[-1] = reflected, fr
        elif fr < values[-2]:
            simplex[-1], values[-1] = reflected, fr
        else:
            contracted = centroid + 0.5 * (worst - centroid)
            fc = f(contracted)
            if fc < values[-1]:
                simplex[-1], values[-1] = contracted, fc
            else:  # shrink toward the best vertex
                for i in range(1, d + 1):
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                    values[i] = f(simplex[i])

    i_best = min(range(d + 1), key=lambda i: values[i])
    return MinimizeResult(
        argmin=tuple(float(v) for v in simplex[i_best]),
        value=values[i_best],
        evaluations=evals,
    )
