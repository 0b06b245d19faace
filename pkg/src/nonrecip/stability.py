"""Dynamical stability of the four-mode device.

The drift matrix is Hermitian, so the linear dynamics relax iff its
spectrum is strictly positive; the smallest eigenvalue serves as the
stability margin and is the authoritative predicate everywhere in this
package.  A legacy block of three closed-form inequalities is also
evaluated for comparison: it disagrees with the eigenvalue criterion on
known-good operating points, so reports carry both plus a discrepancy
flag rather than reconciling them.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidAxis, NotHermitian
from .model import DeviceParams, drift_full
from .numerics import hermitian_eigenvalues

# verdict band: margins within MARGIN_ATOL of zero are called marginal
MARGIN_ATOL = 1e-10

BOUNDARY_REFINE_TOL = 1e-6

_NOTE_SUBSCRIPT = (
    "second inequality: the ambiguous damping subscript is read as the "
    "other oscillator's rate (gamma2 for j=1, gamma1 for j=2)"
)
_NOTE_DISCREPANCY = (
    "inequality block disagrees with the eigenvalue criterion at this "
    "point; the eigenvalue margin is authoritative"
)
_NOTE_UNEQUAL_KAPPA = (
    "inequality block assumes equal cavity linewidths; evaluated with "
    "the cavity-1 value"
)


@dataclass(frozen=True)
class StabilityReport:
    margin: float
    eigenvalues: tuple[float, float, float, float]
    rh_values: tuple[float, float, float]
    rh_conditions: tuple[bool, bool, bool]
    verdict: str
    discrepancy: bool
    notes: tuple[str, ...]


def _rh_values(p: DeviceParams) -> tuple[float, float, float]:
    """Left-hand sides of the three legacy closed-form inequalities
    (each claimed positive for stability)."""
    kappa = p.kappa1
    g_sq = {
        (1, 1): p.g11 ** 2, (1, 2): p.g12 ** 2,
        (2, 1): p.g21 ** 2, (2, 2): p.g22 ** 2,
    }
    gammas = {1: p.gamma1, 2: p.gamma2}

    def col(j):
        return g_sq[(1, j)] + g_sq[(2, j)]

    v1 = sum(4.0 * col(j) for j in (1, 2)) - (
        p.gamma1 * p.gamma2 + 2.0 * p.gamma2 * kappa + 4.0 * kappa ** 2
    )
    v2 = sum(4.0 * col(j) * (gammas[3 - j] + kappa) for j in (1, 2)) - (
        kappa * p.gamma2 * (2.0 * p.gamma1 + kappa)
    )
    v3 = (
        (g_sq[(1, 2)] * g_sq[(2, 1)] + g_sq[(1, 1)] * g_sq[(2, 2)])
        / (p.gamma1 * p.gamma2 * kappa ** 2)
        - sum(col(j) / (4.0 * gammas[j] * kappa) for j in (1, 2))
        + 1.0 / 16.0
    )
    return (v1, v2, v3)


def stability_report(p: DeviceParams) -> StabilityReport:
    """Margin, spectrum, verdict, and the legacy inequality block."""
    eigenvalues = tuple(hermitian_eigenvalues(drift_full(p)))
    margin = eigenvalues[0]
    if margin > MARGIN_ATOL:
        verdict = "stable"
    elif abs(margin) <= MARGIN_ATOL:
        verdict = "marginal"
    else:
        verdict = "unstable"
    rh_values = _rh_values(p)
    rh_conditions = tuple(v > 0.0 for v in rh_values)
    discrepancy = (verdict == "stable" and not all(rh_conditions)) or (
        verdict == "unstable" and all(rh_conditions)
    )
    notes = [_NOTE_SUBSCRIPT]
    if p.kappa1 != p.kappa2:
        notes.append(_NOTE_UNEQUAL_KAPPA)
    if discrepancy:
        notes.append(_NOTE_DISCREPANCY)
    return StabilityReport(
        margin=margin,
        eigenvalues=eigenvalues,
        rh_values=rh_values,
        rh_conditions=rh_conditions,
        verdict=verdict,
        discrepancy=discrepancy,
        notes=tuple(notes),
    )


def char_poly(m: np.ndarray) -> list[float]:
    """Characteristic polynomial of a Hermitian matrix, descending
    coefficients of det(lambda I - M), by the Faddeev-LeVerrier
    recursion.  Coefficients are real for Hermitian input; imaginary
    residue above 1e-10 is rejected."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if float(np.max(np.abs(a - a.conj().T))) > 1e-12:
        raise NotHermitian("matrix deviates from its conjugate transpose")
    n = a.shape[0]
    coeffs = [1.0 + 0.0j]
    work = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        work = a @ work
        c = -np.trace(work) / k
        coeffs.append(c)
        work = work + c * np.eye(n, dtype=complex)
    worst_imag = max(abs(c.imag) for c in coeffs)
    if worst_imag > 1e-10:
        raise NotHermitian(
            f"characteristic coefficients carry imaginary residue {worst_imag:.3e}"
        )
    return [float(c.real) for c in coeffs]


class Axis(NamedTuple):
    """One scanned parameter: DeviceParams field name, range, and count."""

    name: str
    lo: float
    hi: float
    n: int


_SCANNABLE = (
    "kappa1", "kappa2", "gamma1", "gamma2",
    "g11", "g12", "g21", "g22", "phi", "nm1", "nm2",
)


def _check_axis(axis: Axis) -> None:
    if axis.name not in _SCANNABLE:
        raise InvalidAxis(f"unknown parameter {axis.name!r}; expected one of {_SCANNABLE}")
    if axis.n < 2:
        raise InvalidAxis(f"axis {axis.name!r} needs n >= 2, got {axis.n}")


def _margin_at(p: DeviceParams, name: str, value: float) -> float:
    q = dataclasses.replace(p, **{name: value})
    return hermitian_eigenvalues(drift_full(q))[0]


class BoundaryScan(NamedTuple):
    values1: np.ndarray
    values2: np.ndarray
    margins: np.ndarray
    verdicts: list[list[str]]
    boundary: list[tuple[float, float]]


def stability_boundary(p_base: DeviceParams, axis1: Axis, axis2: Axis) -> BoundaryScan:
    """Margin and verdict over a 2-D parameter grid, plus the margin
    zero-crossing points refined by bisection along both grid directions.

    Boundary points are (axis1 value, axis2 value) pairs accurate to
    1e-6 in the scanned parameter.
    """
    _check_axis(axis1)
    _check_axis(axis2)
    if axis1.name == axis2.name:
        raise InvalidAxis(f"axes must scan different parameters, both are {axis1.name!r}")
    values1 = np.linspace(axis1.lo, axis1.hi, axis1.n)
    values2 = np.linspace(axis2.lo, axis2.hi, axis2.n)
    margins = np.empty((axis1.n, axis2.n))
    for i, v1 in enumerate(values1):
        for j, v2 in enumerate(values2):
            q = dataclasses.replace(p_base, **{axis1.name: float(v1), axis2.name: float(v2)})
            margins[i, j] = hermitian_eigenvalues(drift_full(q))[0]

    def verdict_of(margin: float) -> str:
        if margin > MARGIN_ATOL:
            return "stable"
        if abs(margin) <= MARGIN_ATOL:
            return "marginal"
        return "unstable"

    verdicts = [[verdict_of(m) for m in row] for row in margins]

    tol = BOUNDARY_REFINE_TOL * p_base.kappa1
    boundary: list[tuple[float, float]] = []

    def refine(p_line: DeviceParams, name: str, lo: float, hi: float) -> float:
        m_lo = _margin_at(p_line, name, lo)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            m_mid = _margin_at(p_line, name, mid)
            if (m_lo > 0.0) == (m_mid > 0.0):
                lo, m_lo = mid, m_mid
            else:
                hi = mid
            if abs(hi - lo) <= BOUNDARY_REFINE_TOL and abs(m_mid) <= tol:
                break
        return 0.5 * (lo + hi)

    # scan along axis1 at each fixed axis2 value, then the transpose
    for j, v2 in enumerate(values2):
        p_line = dataclasses.replace(p_base, **{axis2.name: float(v2)})
        for i in range(axis1.n - 1):
            if (margins[i, j] > 0.0) != (margins[i + 1, j] > 0.0):
                v = refine(p_line, axis1.name, float(values1[i]), float(values1[i + 1]))
                boundary.append((v, float(v2)))
    for i, v1 in enumerate(values1):
        p_line = dataclasses.replace(p_base, **{axis1.name: float(v1)})
        for j in range(axis2.n - 1):
            if (margins[i, j] > 0.0) != (margins[i, j + 1] > 0.0):
                v = refine(p_line, axis2.name, float(values2[j]), float(values2[j + 1]))
                boundary.append((float(v1), v))

    return BoundaryScan(
        values1=values1,
        values2=values2,
        margins=margins,
        verdicts=verdicts,
        boundary=boundary,
    )
