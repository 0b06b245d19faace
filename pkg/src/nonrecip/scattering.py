"""Input-output scattering for the four-mode and reduced three-mode models.

Matrices are indexed rows-as-outputs: entry [i][j] couples input port j
to output port i, so the cavity-1-in to cavity-2-out power transmission
is |s[1][0]|^2.  The four-mode and three-mode scattering matrices are
built with opposite global signs (identity-minus versus minus-identity);
both conventions are kept as-is since only magnitudes are observable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    NegativeProbability,
    PoleAtFrequency,
    SingularMatrix,
    UnequalKappas,
)
from .model import DeviceParams, drift_full, drift_reduced, freq_quantities
from .numerics import lu_solve

DB_FLOOR = -300.0

# |D| at or below this is treated as sitting on a pole of the response.
POLE_ATOL = 1e-8


def to_db(t: float) -> float:
    """Power ratio to decibels; exact zero clamps to the -300 sentinel."""
    if t < 0.0:
        raise NegativeProbability(f"power ratio must be >= 0, got {t}")
    if t == 0.0:
        return DB_FLOOR
    return 10.0 * math.log10(t)


@dataclass(frozen=True)
class ScatteringResult:
    """Scattering matrix at one frequency plus derived power quantities.

    l is the extra noise-input block of the reduced model (None for the
    four-mode model).  t holds |s|^2 entrywise and t_db its decibel map.
    """

    omega: float
    s: np.ndarray
    l: Optional[np.ndarray]
    t: np.ndarray
    t_db: np.ndarray

    @property
    def t12(self) -> float:
        """Power transmission, cavity 1 input to cavity 2 output."""
        return float(self.t[1, 0])

    @property
    def t21(self) -> float:
        """Power transmission, cavity 2 input to cavity 1 output."""
        return float(self.t[0, 1])


def _finish(omega: float, s: np.ndarray, l: Optional[np.ndarray]) -> ScatteringResult:
    t = np.abs(s) ** 2
    t_db = np.vectorize(to_db)(t)
    return ScatteringResult(omega=omega, s=s, l=l, t=t, t_db=t_db)


def smatrix_full(p: DeviceParams, omega: float) -> ScatteringResult:
    """Four-mode scattering matrix via resolvent inversion."""
    m = drift_full(p)
    rates = np.array([p.kappa1, p.kappa2, p.gamma1, p.gamma2])
    sqrt_rates = np.sqrt(rates)
    try:
        resolvent = lu_solve(m - 1j * omega * np.eye(4), np.eye(4, dtype=complex))
    except SingularMatrix as exc:
        raise PoleAtFrequency(f"response diverges at omega={omega}: {exc}") from exc
    s = np.eye(4, dtype=complex) - sqrt_rates[:, None] * resolvent * sqrt_rates[None, :]
    return _finish(omega, s, None)


def smatrix_reduced(p: DeviceParams, omega: float) -> ScatteringResult:
    """Three-mode scattering and noise-input matrices after eliminating
    the fast mechanical mode."""
    red = drift_reduced(p)
    rates = np.array([p.kappa1, p.kappa1, p.gamma1])
    sqrt_rates = np.sqrt(rates)
    sqrt_lam = np.sqrt(np.array(red.lambda_diag))
    try:
        resolvent = lu_solve(
            red.mprime - 1j * omega * np.eye(3), np.eye(3, dtype=complex)
        )
    except SingularMatrix as exc:
        raise PoleAtFrequency(f"response diverges at omega={omega}: {exc}") from exc
    s = sqrt_rates[:, None] * resolvent * sqrt_rates[None, :] - np.eye(3, dtype=complex)
    l = sqrt_rates[:, None] * resolvent * sqrt_lam[None, :]
    return _finish(omega, s, l)


class AnalyticTransmission(NamedTuple):
    s12: complex
    s21: complex
    d: complex
    numerator12: complex
    numerator21: complex


def analytic_transmission(p: DeviceParams, omega: float) -> AnalyticTransmission:
    """Closed-form cavity-cavity transmission amplitudes.

    s12 is the amplitude into cavity 2 from cavity 1 (the [1][0] matrix
    entry) and s21 the reverse; both share the denominator d whose zeros
    are the response poles.  Numerators are returned separately since
    the forward numerator's zero locates perfect isolation.
    """
    if p.kappa1 != p.kappa2:
        raise UnequalKappas(
            f"closed form needs kappa1 == kappa2, got {p.kappa1} and {p.kappa2}"
        )
    kappa = p.kappa1
    fq = freq_quantities(p, omega)
    numerator12 = kappa * (fq.q1_minus + fq.q2)
    numerator21 = kappa * (fq.q1_plus + fq.q2)
    d = (fq.kappa1_tot / 2.0 - 1j * (omega + fq.omega_11)) * (
        fq.kappa2_tot / 2.0 - 1j * (omega + fq.omega_21)
    ) - (fq.q1_plus + fq.q2) * (fq.q1_minus + fq.q2)
    if abs(d) <= POLE_ATOL:
        raise PoleAtFrequency(
            f"denominator magnitude {abs(d):.3e} at omega={omega} is below {POLE_ATOL}"
        )
    return AnalyticTransmission(
        s12=complex(numerator12 / d),
        s21=complex(numerator21 / d),
        d=complex(d),
        numerator12=complex(numerator12),
        numerator21=complex(numerator21),
    )
