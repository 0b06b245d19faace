"""Output noise spectrum at the amplifying cavity and input-referred
added noise.

The spectrum collects vacuum noise entering both cavity ports, thermal
noise of the slow mechanical mode through the coherent path, and
thermal noise of the fast mode through the dissipative path.  Both
dissipative-path channels are driven by the same bath operator, so
their cross terms collapse into a single squared magnitude.  Added
noise is the output spectrum referred to the input of the forward gain,
in quanta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import PoleAtFrequency, ZeroGain
from .model import DeviceParams
from .scattering import smatrix_reduced

GAIN_FLOOR = 1e-12

# output port row in the reduced scattering matrix: cavity 2
_PORT = 1


@dataclass(frozen=True)
class NoiseResult:
    """Spectrum, forward gain, and referred added noise at one
    frequency; status records rows a sweep could not fully evaluate."""

    omega: float
    s_out: Optional[float]
    gain: Optional[float]
    added: Optional[float]
    status: str = "ok"


def output_spectrum_cavity2(p: DeviceParams, omega: float) -> NoiseResult:
    """Output spectral density at cavity 2 and the added noise.

    Raises ZeroGain when the forward transmission is too small for the
    input-referred quantity to mean anything.
    """
    r = smatrix_reduced(p, omega)
    s = r.s
    l = r.l
    vacuum_in = 0.5 * (abs(s[_PORT, 0]) ** 2 + abs(s[_PORT, 1]) ** 2)
    coherent_path = abs(s[_PORT, 2]) ** 2 * (p.nm1 + 0.5)
    dissipative_path = abs(l[_PORT, 0] + l[_PORT, 1]) ** 2 * (p.nm2 + 0.5)
    s_out = vacuum_in + coherent_path + dissipative_path
    gain = abs(s[_PORT, 0]) ** 2
    if gain < GAIN_FLOOR:
        raise ZeroGain(
            f"forward gain {gain:.3e} at omega={omega} is below {GAIN_FLOOR}"
        )
    added = s_out / gain + 0.5
    return NoiseResult(omega=omega, s_out=s_out, gain=gain, added=added)


def noise_sweep(p: DeviceParams, omegas: Sequence[float]) -> list[NoiseResult]:
    """Per-frequency noise results in input order; frequencies where the
    gain vanishes or the response sits on a pole are flagged in-row
    rather than raised."""
    out: list[NoiseResult] = []
    for omega in omegas:
        try:
            out.append(output_spectrum_cavity2(p, float(omega)))
        except ZeroGain:
            r = smatrix_reduced(p, float(omega))
            s, l = r.s, r.l
            s_out = (
                0.5 * (abs(s[_PORT, 0]) ** 2 + abs(s[_PORT, 1]) ** 2)
                + abs(s[_PORT, 2]) ** 2 * (p.nm1 + 0.5)
                + abs(l[_PORT, 0] + l[_PORT, 1]) ** 2 * (p.nm2 + 0.5)
            )
            out.append(
                NoiseResult(
                    omega=float(omega),
                    s_out=s_out,
                    gain=float(abs(s[_PORT, 0]) ** 2),
                    added=None,
                    status="zero_gain",
                )
            )
        except PoleAtFrequency:
            out.append(
                NoiseResult(
                    omega=float(omega), s_out=None, gain=None, added=None,
                    status="pole",
                )
            )
    return out
