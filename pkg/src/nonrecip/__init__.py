"""Frequency-domain simulator and designer for a two-cavity, two-mode
optomechanical circulator-amplifier.

Core objects: DeviceParams describes one device; the scattering module
turns it into port-to-port transmissions; stability and noise judge the
operating point; design searches parameter space; config/runner/service
wrap everything behind one JSON configuration document.
"""

__version__ = "0.1.0"

from .config import RunConfig, emit_config, parse_config
from .design import (
    IsolationSolution,
    OptimizeOutcome,
    WorkingPoint,
    find_amplifier_point,
    optimize_gain,
    solve_isolation,
)
from .model import DeviceParams, drift_full, drift_reduced, freq_quantities
from .noise import NoiseResult, noise_sweep, output_spectrum_cavity2
from .scattering import (
    ScatteringResult,
    analytic_transmission,
    smatrix_full,
    smatrix_reduced,
    to_db,
)
from .stability import StabilityReport, stability_boundary, stability_report

__all__ = [
    "__version__",
    "DeviceParams",
    "IsolationSolution",
    "NoiseResult",
    "OptimizeOutcome",
    "RunConfig",
    "ScatteringResult",
    "StabilityReport",
    "WorkingPoint",
    "analytic_transmission",
    "drift_full",
    "drift_reduced",
    "emit_config",
    "find_amplifier_point",
    "freq_quantities",
    "noise_sweep",
    "optimize_gain",
    "output_spectrum_cavity2",
    "parse_config",
    "smatrix_full",
    "smatrix_reduced",
    "solve_isolation",
    "stability_boundary",
    "stability_report",
    "to_db",
]
