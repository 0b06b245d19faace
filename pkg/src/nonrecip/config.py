"""Run configuration: JSON schema, validation, and exact round-trip
emission.

A run is described by one JSON document with a device section plus
optional per-command blocks (sweep, map, design).  Unknown keys are
rejected everywhere.  Parsing applies defaults (unit cavity decay
rates, zero occupations, symmetric couplings when the second column is
omitted) and validates the device invariants immediately, so a config
that parses always yields usable parameters.
"""

from __future__ import annotations

import json
from typing import Literal, Optional

import pydantic
from pydantic import BaseModel, ConfigDict

from .errors import InvalidParams, ParseError, ValidationError
from .model import DeviceParams

MODEL_NAMES = ("full", "reduced", "analytic")
MAP_SCALARS = ("t21_db", "t12_db", "margin", "numerator12")

# device fields a map axis may scan
AXIS_PARAMS = (
    "kappa1", "kappa2", "gamma1", "gamma2",
    "g11", "g12", "g21", "g22", "phi", "nm1", "nm2",
)

OPT_BOUND_KEYS = ("g11", "g12", "g21", "g22", "phi", "gamma1", "gamma2")


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DeviceConfig(_Strict):
    gamma1: float
    gamma2: float
    g11: float
    g12: float
    g21: Optional[float] = None
    g22: Optional[float] = None
    kappa1: float = 1.0
    kappa2: float = 1.0
    phi: float = 0.0
    nm1: float = 0.0
    nm2: float = 0.0

    def to_params(self) -> DeviceParams:
        # second drive column mirrors the first when omitted
        g21 = self.g11 if self.g21 is None else self.g21
        g22 = self.g12 if self.g22 is None else self.g22
        return DeviceParams(
            kappa1=self.kappa1, kappa2=self.kappa2,
            gamma1=self.gamma1, gamma2=self.gamma2,
            g11=self.g11, g12=self.g12, g21=g21, g22=g22,
            phi=self.phi, nm1=self.nm1, nm2=self.nm2,
        )


class SweepBlock(_Strict):
    omega_min: float
    omega_max: float
    n: int

    @pydantic.model_validator(mode="after")
    def _check_range(self):
        if self.n < 1:
            raise ValueError("sweep.n must be >= 1")
        if self.n > 1 and not self.omega_max > self.omega_min:
            raise ValueError("sweep.omega_max must exceed sweep.omega_min")
        if self.n == 1 and self.omega_max < self.omega_min:
            raise ValueError("sweep.omega_max must not be below sweep.omega_min")
        return self


class AxisBlock(_Strict):
    param: str
    min: float
    max: float
    n: int

    @pydantic.model_validator(mode="after")
    def _check_axis(self):
        if self.param not in AXIS_PARAMS:
            raise ValueError(
                f"axis param {self.param!r} is not a device field; "
                f"choose one of {', '.join(AXIS_PARAMS)}"
            )
        if self.n < 1:
            raise ValueError("axis n must be >= 1")
        if self.n > 1 and not self.max > self.min:
            raise ValueError("axis max must exceed axis min")
        if self.n == 1 and self.max < self.min:
            raise ValueError("axis max must not be below axis min")
        return self


class MapBlock(_Strict):
    axis1: AxisBlock
    axis2: AxisBlock
    scalar: Literal["t21_db", "t12_db", "margin", "numerator12"] = "t21_db"
    omega: float = 0.0


class OptimizeBlock(_Strict):
    bounds: dict[str, tuple[float, float]]
    epsilon_margin: float

    @pydantic.model_validator(mode="after")
    def _check_bounds(self):
        missing = [k for k in OPT_BOUND_KEYS if k not in self.bounds]
        extra = [k for k in self.bounds if k not in OPT_BOUND_KEYS]
        if missing:
            raise ValueError(f"optimize.bounds missing {', '.join(missing)}")
        if extra:
            raise ValueError(f"optimize.bounds has unknown keys {', '.join(extra)}")
        for key, (lo, hi) in self.bounds.items():
            if hi < lo:
                raise ValueError(f"optimize.bounds.{key} needs lo <= hi")
        if not self.epsilon_margin > 0.0:
            raise ValueError("optimize.epsilon_margin must be positive")
        return self


class DesignBlock(_Strict):
    omega_min: float
    omega_max: float
    optimize: Optional[OptimizeBlock] = None

    @pydantic.model_validator(mode="after")
    def _check_range(self):
        if not self.omega_max > self.omega_min:
            raise ValueError("design.omega_max must exceed design.omega_min")
        return self


class RunConfig(_Strict):
    device: DeviceConfig
    model: Literal["full", "reduced", "analytic"] = "reduced"
    sweep: Optional[SweepBlock] = None
    map: Optional[MapBlock] = None
    design: Optional[DesignBlock] = None

    def device_params(self) -> DeviceParams:
        return self.device.to_params()


def _format_pydantic_errors(exc: pydantic.ValidationError) -> str:
    parts = []
    for err in exc.errors():
        loc = ".".join(str(piece) for piece in err["loc"]) or "<root>"
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a JSON run configuration."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"config is not valid JSON (line {exc.lineno}, column {exc.colno}): "
            f"{exc.msg}"
        ) from exc
    try:
        cfg = RunConfig.model_validate(data)
    except pydantic.ValidationError as exc:
        raise ValidationError(_format_pydantic_errors(exc)) from exc
    try:
        params = cfg.device_params()
    except InvalidParams as exc:
        raise ValidationError(f"device: {exc}") from exc
    needs_equal_kappas = cfg.model in ("reduced", "analytic") or cfg.design is not None
    if needs_equal_kappas and params.kappa1 != params.kappa2:
        raise ValidationError(
            "device: the reduced model (and everything built on it: the "
            "analytic form, design searches) needs kappa1 == kappa2"
        )
    return cfg


def emit_config(cfg: RunConfig) -> str:
    """Serialize a config so that parse_config(emit_config(c)) == c.

    Floats keep their exact shortest repr here (unlike result files,
    which round to 9 significant digits) so the round trip is lossless.
    """
    data = cfg.model_dump(exclude_none=True)
    return json.dumps(data, sort_keys=True, indent=2) + "\n"
