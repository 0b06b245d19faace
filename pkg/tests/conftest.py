import math

import numpy as np
import pytest

from nonrecip.model import DeviceParams, drift_full
from nonrecip.numerics import hermitian_eigenvalues

# The three benchmark operating points exercised throughout the suite:
# a directional amplifier, an absolute isolator, and the combined
# amplifier-isolator working point. All rates in cavity-1 linewidths.


@pytest.fixture
def amp_point():
    return DeviceParams.matched(
        g11=0.13, g12=1.237, gamma1=0.2, gamma2=16.0, phi=-1.25 * math.pi
    )


@pytest.fixture
def iso_point():
    return DeviceParams.matched(
        g11=0.323, g12=1.198, gamma1=1.0, gamma2=16.0, phi=0.828 * math.pi
    )


@pytest.fixture
def combo_point():
    return DeviceParams.matched(
        g11=0.336, g12=1.333, gamma1=1.0, gamma2=16.0, phi=0.940 * math.pi
    )


def draw_stable_params(rng, min_margin=0.01):
    """Random valid parameter set whose drift spectrum clears min_margin.

    Couplings are kept small and the second oscillator fast, so rejection
    rates stay low and the draws sit safely away from response poles.
    """
    while True:
        p = DeviceParams(
            kappa1=1.0,
            kappa2=1.0,
            gamma1=float(rng.uniform(0.1, 1.0)),
            gamma2=float(rng.uniform(4.0, 32.0)),
            g11=float(rng.uniform(0.0, 0.3)),
            g12=float(rng.uniform(0.0, 0.3)),
            g21=float(rng.uniform(0.0, 0.3)),
            g22=float(rng.uniform(0.0, 0.3)),
            phi=float(rng.uniform(-math.pi, math.pi)),
        )
        margin = hermitian_eigenvalues(drift_full(p))[0]
        if margin > min_margin:
            return p
