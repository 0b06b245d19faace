"""Device parameters and drift-matrix construction.

The device is a pair of driven cavities sharing two mechanical modes.
Linearizing about the strong drives gives a four-mode quadratic model
whose drift matrix is Hermitian; adiabatic elimination of the fast,
heavily damped second mechanical mode yields an effective three-mode
model with extra cavity damping corrections and a dissipative
cavity-cavity coupling.  All rates are in units of the first cavity
linewidth unless stated otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidParams, InvalidRatio, UnequalKappas

# Mode index order used everywhere: (cavity 1, cavity 2, mech 1, mech 2),
# dropping the last entry in the reduced model.


@dataclass(frozen=True)
class DeviceParams:
    """Rates, couplings, drive phase, and mechanical bath occupations."""

    kappa1: float
    kappa2: float
    gamma1: float
    gamma2: float
    g11: float
    g12: float
    g21: float
    g22: float
    phi: float
    nm1: float = 0.0
    nm2: float = 0.0

    def __post_init__(self):
        for name in ("kappa1", "kappa2", "gamma1", "gamma2"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0.0:
                raise InvalidParams(f"{name} must be finite and positive, got {v}")
        for name in ("g11", "g12", "g21", "g22"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0.0:
                raise InvalidParams(f"{name} must be finite and >= 0, got {v}")
        for name in ("nm1", "nm2"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0.0:
                raise InvalidParams(f"{name} must be finite and >= 0, got {v}")
        if not math.isfinite(self.phi):
            raise InvalidParams(f"phi must be finite, got {self.phi}")

    @classmethod
    def matched(
        cls,
        g11: float,
        g12: float,
        gamma1: float,
        gamma2: float,
        phi: float,
        kappa: float = 1.0,
        nm1: float = 0.0,
        nm2: float = 0.0,
    ) -> "DeviceParams":
        """Common symmetric-drive configuration: g21 = g11, g22 = g12,
        equal cavity linewidths."""
        return cls(
            kappa1=kappa,
            kappa2=kappa,
            gamma1=gamma1,
            gamma2=gamma2,
            g11=g11,
            g12=g12,
            g21=g11,
            g22=g12,
            phi=phi,
            nm1=nm1,
            nm2=nm2,
        )


class ReducedDrift(NamedTuple):
    mprime: np.ndarray
    lambda_diag: tuple[float, float, float]


@dataclass(frozen=True)
class FreqQuantities:
    """Frequency-dependent quantities entering the closed-form
    transmission: mechanical response, induced dampings, spring shifts,
    and the coherent/dissipative cavity-cavity couplings."""

    sigma: complex
    q1_plus: complex
    q1_minus: complex
    q2: float
    gamma_11: float
    gamma_21: float
    gamma_12: float
    gamma_22c: float
    omega_11: float
    omega_21: float
    kappa1_tot: float
    kappa2_tot: float


def drift_full(p: DeviceParams) -> np.ndarray:
    """Four-mode drift matrix; Hermitian by construction."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = p.kappa1 / 2.0
    m[1, 1] = p.kappa2 / 2.0
    m[2, 2] = p.gamma1 / 2.0
    m[3, 3] = p.gamma2 / 2.0
    m[0, 2] = -1j * p.g11
    m[0, 3] = -1j * p.g12
    m[1, 2] = -1j * p.g21 * np.exp(-1j * p.phi)
    m[1, 3] = -1j * p.g22
    for (i, j) in ((0, 2), (0, 3), (1, 2), (1, 3)):
        m[j, i] = np.conj(m[i, j])
    return m


def drift_reduced(p: DeviceParams) -> ReducedDrift:
    """Three-mode drift matrix after eliminating mechanical mode 2.

    The elimination is valid for equal cavity linewidths; it produces a
    dissipative cavity-cavity coupling q2 and per-cavity damping
    corrections gamma_i2 = 4 g_i2^2 / gamma2, returned as lambda_diag
    together with the matrix.
    """
    if p.kappa1 != p.kappa2:
        raise UnequalKappas(
            f"reduced model needs kappa1 == kappa2, got {p.kappa1} and {p.kappa2}"
        )
    kappa = p.kappa1
    q2 = 2.0 * p.g12 * p.g22 / p.gamma2
    gamma_12 = 4.0 * p.g12 ** 2 / p.gamma2
    gamma_22 = 4.0 * p.g22 ** 2 / p.gamma2
    m = np.zeros((3, 3), dtype=complex)
    m[0, 0] = (kappa - gamma_12) / 2.0
    m[1, 1] = (kappa - gamma_22) / 2.0
    m[2, 2] = p.gamma1 / 2.0
    # eliminating mode 2 from the four-mode drift leaves -q2, matching
    # the sign the four-mode model produces in the adiabatic limit
    m[0, 1] = -q2
    m[1, 0] = -q2
    m[0, 2] = -1j * p.g11
    m[2, 0] = np.conj(m[0, 2])
    m[1, 2] = -1j * p.g21 * np.exp(-1j * p.phi)
    m[2, 1] = np.conj(m[1, 2])
    return ReducedDrift(mprime=m, lambda_diag=(gamma_12, gamma_22, 0.0))


def freq_quantities(p: DeviceParams, omega: float) -> FreqQuantities:
    """Closed-form ingredients at one probe frequency (detuning from the
    cavity resonance, in cavity-1 linewidths)."""
    sigma = 1.0 / (p.gamma1 - 2j * omega)
    abs2 = abs(sigma) ** 2
    q1_plus = 2.0 * p.g11 * p.g21 * sigma * np.exp(1j * p.phi)
    q1_minus = 2.0 * p.g11 * p.g21 * sigma * np.exp(-1j * p.phi)
    q2 = 2.0 * p.g12 * p.g22 / p.gamma2
    gamma_11 = 4.0 * p.g11 ** 2 * abs2 * p.gamma1
    gamma_21 = 4.0 * p.g21 ** 2 * abs2 * p.gamma1
    gamma_12 = 4.0 * p.g12 ** 2 / p.gamma2
    gamma_22c = 4.0 * p.g22 ** 2 / p.gamma2
    omega_11 = 4.0 * p.g11 ** 2 * abs2 * omega
    omega_21 = 4.0 * p.g21 ** 2 * abs2 * omega
    return FreqQuantities(
        sigma=complex(sigma),
        q1_plus=complex(q1_plus),
        q1_minus=complex(q1_minus),
        q2=q2,
        gamma_11=gamma_11,
        gamma_21=gamma_21,
        gamma_12=gamma_12,
        gamma_22c=gamma_22c,
        omega_11=omega_11,
        omega_21=omega_21,
        kappa1_tot=p.kappa1 - gamma_11 - gamma_12,
        kappa2_tot=p.kappa2 - gamma_21 - gamma_22c,
    )


def thermal_occupation(x: float) -> float:
    """Bose occupation 1/(e^x - 1) for x = (mode energy)/(k_B T)."""
    if not (x > 0.0) or not math.isfinite(x):
        raise InvalidRatio(f"energy ratio must be finite and positive, got {x}")
    return 1.0 / math.expm1(x)
