"""Exception taxonomy shared by every module.

The CLI maps these onto exit statuses: configuration problems -> 1,
domain infeasibility -> 2, internal numeric failures -> 3.
"""


class SingularMatrix(Exception):
    """A pivot fell below the relative tolerance during factorization."""


class NotHermitian(Exception):
    """Matrix is not Hermitian within the entrywise tolerance."""


class NoConvergence(Exception):
    """Iteration cap reached; carries the best iterate found."""

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


class InvalidParams(Exception):
    """Device parameter invariant violated (positivity, finiteness, sign)."""


class UnequalKappas(Exception):
    """Operation requires equal cavity decay rates."""


class InvalidRatio(Exception):
    """Thermal occupation requires a positive frequency/temperature ratio."""


class PoleAtFrequency(Exception):
    """Response diverges at this frequency (instability threshold)."""


class NegativeProbability(Exception):
    """A transmission probability must be non-negative."""


class ZeroGain(Exception):
    """Forward gain too small for the added-noise figure to be defined."""


class NoCoherentPath(Exception):
    """Both couplings of the coherent route vanish; no isolation condition."""


class NoFeasiblePoint(Exception):
    """Every optimizer seed violates the stability-margin constraint."""


class Unstable(Exception):
    """Operation requires a strictly stable device."""


class InvalidAxis(Exception):
    """Axis name is not a numeric device parameter."""


class ConfigError(Exception):
    """Base for configuration ingestion problems."""


class ParseError(ConfigError):
    """Configuration document is not well-formed."""


class ValidationError(ConfigError):
    """Configuration parsed but violates an invariant."""


CONFIG_ERRORS = (ConfigError, InvalidParams, InvalidAxis, UnequalKappas, InvalidRatio)

DOMAIN_ERRORS = (NoCoherentPath, NoFeasiblePoint, Unstable, ZeroGain)

NUMERIC_ERRORS = (
    SingularMatrix,
    NotHermitian,
    NoConvergence,
    PoleAtFrequency,
    NegativeProbability,
)


def exit_status_for(exc: BaseException) -> int:
    """Process exit status for an exception: 1 configuration, 2 domain
    infeasibility, 3 internal numeric failure."""
    if isinstance(exc, CONFIG_ERRORS):
        return 1
    if isinstance(exc, DOMAIN_ERRORS):
        return 2
    if isinstance(exc, NUMERIC_ERRORS):
        return 3
    raise TypeError(f"not a package error: {type(exc).__name__}")
