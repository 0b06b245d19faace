"""Command execution layer shared by the CLI and the HTTP service.

Each run_* function takes a validated RunConfig and returns the complete
text artifact (CSV table, grid map, or JSON report).  Emission rules are
fixed so identical configs produce identical bytes regardless of worker
count: floating-point data uses 9 significant digits in scientific
notation, line endings are LF, JSON keys are sorted, and rows/cells are
assembled in grid order even when points were evaluated concurrently.
"""

from __future__ import annotations

import dataclasses
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .config import RunConfig
from .design import find_amplifier_point, optimize_gain, solve_isolation
from .errors import (
    InvalidAxis,
    InvalidParams,
    PoleAtFrequency,
    UnequalKappas,
    ValidationError,
)
from .model import DeviceParams, drift_full, freq_quantities
from .noise import noise_sweep
from .numerics import hermitian_eigenvalues
from .scattering import analytic_transmission, smatrix_full, smatrix_reduced, to_db
from .stability import MARGIN_ATOL, stability_report

SWEEP_HEADER = ("omega", "t12", "t21", "t12_db", "t21_db", "stable", "added_noise")

NOISE_HEADER = ("omega", "s_out", "gain", "added", "status")


def fmt(x: float) -> str:
    """Nine significant digits, scientific notation."""
    return f"{x:.8e}"


def json_text(obj) -> str:
    """Deterministic JSON: sorted keys, floats via fmt, non-finite
    values as null, two-space indent, single trailing LF."""
    return _render_json(obj, 0) + "\n"


def _render_json(obj, depth: int) -> str:
    pad = "  " * depth
    inner = "  " * (depth + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(k))}: {_render_json(obj[k], depth + 1)}"
            for k in sorted(obj, key=str)
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not len(obj):
            return "[]"
        parts = [f"{inner}{_render_json(v, depth + 1)}" for v in obj]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        return fmt(x)
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _grid(lo: float, hi: float, n: int) -> np.ndarray:
    return np.linspace(lo, hi, n)


def _pool_map(fn: Callable, items: Sequence, workers: int) -> list:
    """Evaluate fn over items, preserving input order in the result."""
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _transmissions(p: DeviceParams, model: str, omega: float) -> tuple[float, float]:
    """(t12, t21) power transmissions under the chosen model."""
    if model == "full":
        r = smatrix_full(p, omega)
        return float(r.t[1, 0]), float(r.t[0, 1])
    if model == "reduced":
        r = smatrix_reduced(p, omega)
        return float(r.t[1, 0]), float(r.t[0, 1])
    a = analytic_transmission(p, omega)
    return abs(a.s12) ** 2, abs(a.s21) ** 2


@dataclass(frozen=True)
class SweepTable:
    """Formatted per-frequency transmission records, rows ascending in
    omega with a constant column count."""

    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def to_csv(self) -> str:
        lines = [",".join(self.header)]
        lines.extend(",".join(row) for row in self.rows)
        return "\n".join(lines) + "\n"


def _sweep_row(p: DeviceParams, model: str, omega: float, stable: str) -> tuple[str, ...]:
    try:
        t12, t21 = _transmissions(p, model, omega)
    except PoleAtFrequency:
        return (fmt(omega), "", "", "", "", "pole", "")
    added = ""
    if model == "reduced":
        # input-referred noise is defined by the reduced formalism only
        res = noise_sweep(p, [omega])[0]
        if res.status == "ok":
            added = fmt(res.added)
    return (
        fmt(omega),
        fmt(t12),
        fmt(t21),
        fmt(to_db(t12)),
        fmt(to_db(t21)),
        stable,
        added,
    )


def run_sweep(cfg: RunConfig, workers: int = 1) -> SweepTable:
    """Transmission table over a uniform endpoint-inclusive omega grid."""
    if cfg.sweep is None:
        raise ValidationError("config has no sweep block")
    p = cfg.device_params()
    omegas = _grid(cfg.sweep.omega_min, cfg.sweep.omega_max, cfg.sweep.n)
    margin = hermitian_eigenvalues(drift_full(p))[0]
    stable = "1" if margin > MARGIN_ATOL else "0"
    rows = _pool_map(
        lambda w: _sweep_row(p, cfg.model, float(w), stable), omegas, workers
    )
    return SweepTable(SWEEP_HEADER, tuple(rows))


def _map_scalar_fn(cfg: RunConfig) -> Callable[[DeviceParams], float]:
    scalar = cfg.map.scalar
    omega = cfg.map.omega
    model = cfg.model
    if scalar == "margin":
        return lambda p: hermitian_eigenvalues(drift_full(p))[0]
    if scalar == "numerator12":

        def numerator(p: DeviceParams) -> float:
            q = freq_quantities(p, omega)
            return p.kappa1 * abs(q.q1_minus + q.q2)

        return numerator

    def t_db(p: DeviceParams) -> float:
        t12, t21 = _transmissions(p, model, omega)
        return to_db(t12) if scalar == "t12_db" else to_db(t21)

    return t_db


def run_map(cfg: RunConfig, workers: int = 1) -> str:
    """Row-major grid of one scalar over two device-parameter axes.

    Cells where the point evaluation is undefined (response pole,
    invalid parameter combination, model preconditions violated) hold
    nan rather than aborting the grid.
    """
    if cfg.map is None:
        raise ValidationError("config has no map block")
    ax1, ax2 = cfg.map.axis1, cfg.map.axis2
    if ax1.param == ax2.param:
        raise InvalidAxis(f"map axes must differ, both are {ax1.param!r}")
    p_base = cfg.device_params()
    values1 = _grid(ax1.min, ax1.max, ax1.n)
    values2 = _grid(ax2.min, ax2.max, ax2.n)
    scalar_fn = _map_scalar_fn(cfg)

    def cell(pair: tuple[float, float]) -> float:
        v1, v2 = pair
        try:
            q = dataclasses.replace(p_base, **{ax1.param: v1, ax2.param: v2})
            return float(scalar_fn(q))
        except (InvalidParams, UnequalKappas, PoleAtFrequency):
            return float("nan")

    pairs = [(float(v1), float(v2)) for v1 in values1 for v2 in values2]
    cells = _pool_map(cell, pairs, workers)
    lines = [
        f"# axis1={ax1.param} {fmt(ax1.min)} {fmt(ax1.max)} {ax1.n}",
        f"# axis2={ax2.param} {fmt(ax2.min)} {fmt(ax2.max)} {ax2.n}",
        f"# scalar={cfg.map.scalar}",
    ]
    for i in range(ax1.n):
        row = cells[i * ax2.n : (i + 1) * ax2.n]
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _device_dict(p: DeviceParams) -> dict:
    return dataclasses.asdict(p)


def run_design(cfg: RunConfig) -> str:
    """Isolation solutions, amplifier working point, and optional gain
    optimization for the configured device, as a JSON report."""
    if cfg.design is None:
        raise ValidationError("config has no design block")
    p = cfg.device_params()
    d = cfg.design
    omega_range = (d.omega_min, d.omega_max)
    solutions = solve_isolation(p)
    point = find_amplifier_point(p, omega_range, n_scan=401)
    report = {
        "device": _device_dict(p),
        "model": cfg.model,
        "omega_range": [d.omega_min, d.omega_max],
        "isolation": [dataclasses.asdict(s) for s in solutions],
        "amplifier_point": dataclasses.asdict(point),
    }
    if d.optimize is not None:
        bounds = {k: tuple(v) for k, v in d.optimize.bounds.items()}
        outcome = optimize_gain(bounds, d.optimize.epsilon_margin, omega_range)
        report["optimization"] = {
            "bounds": {k: list(v) for k, v in bounds.items()},
            "epsilon_margin": d.optimize.epsilon_margin,
            "params": _device_dict(outcome.params),
            "point": dataclasses.asdict(outcome.point),
        }
    return json_text(report)


def run_stability(cfg: RunConfig) -> str:
    """Eigenvalue margin, legacy inequality block, and verdict as a
    JSON report."""
    p = cfg.device_params()
    rep = stability_report(p)
    report = {
        "device": _device_dict(p),
        "margin": rep.margin,
        "eigenvalues": list(rep.eigenvalues),
        "rh_values": list(rep.rh_values),
        "rh_conditions": list(rep.rh_conditions),
        "verdict": rep.verdict,
        "discrepancy": rep.discrepancy,
        "notes": list(rep.notes),
    }
    return json_text(report)


def run_noise(cfg: RunConfig, workers: int = 1) -> str:
    """Output spectrum, forward gain, and added noise over the sweep
    grid as CSV.  Rows where the gain underflows keep their computed
    spectrum and gain but leave the added field empty; rows on a
    response pole are empty apart from the frequency."""
    if cfg.sweep is None:
        raise ValidationError("config has no sweep block")
    p = cfg.device_params()
    if p.kappa1 != p.kappa2:
        raise UnequalKappas(
            f"noise evaluation needs kappa1 == kappa2, got {p.kappa1} and {p.kappa2}"
        )
    omegas = _grid(cfg.sweep.omega_min, cfg.sweep.omega_max, cfg.sweep.n)
    results = _pool_map(lambda w: noise_sweep(p, [float(w)])[0], omegas, workers)

    def field(x: Optional[float]) -> str:
        return "" if x is None else fmt(x)

    lines = [",".join(NOISE_HEADER)]
    for r in results:
        lines.append(
            ",".join(
                (fmt(r.omega), field(r.s_out), field(r.gain), field(r.added), r.status)
            )
        )
    return "\n".join(lines) + "\n"
