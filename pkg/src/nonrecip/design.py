"""Working-point discovery: closed-form isolation solutions, directional
amplifier operating points, and stability-constrained gain maximization.

A usable directional working point means one cavity-to-cavity direction
carries gain while the opposite direction does not amplify
(reverse_db <= +0.25 dB).  Searches maximize gain under that one-sided
constraint, in whichever orientation provides it.  The reciprocal
divergence near zero detuning (huge gain both ways) never qualifies;
the unity-reverse plateau of an amplifier and the suppressed-reverse
dip of an isolator both do.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidParams,
    NoCoherentPath,
    NoFeasiblePoint,
    Unstable,
)
from .model import DeviceParams, drift_full, freq_quantities
from .numerics import hermitian_eigenvalues, minimize_simplex
from .scattering import smatrix_reduced

# reverse transmission above this is treated as reverse amplification;
# the same magnitude bounds the flatness band used for the plateau
PLATEAU_DB = 0.25

OPT_PENALTY_PER_MARGIN = 1e3  # dB of objective per unit margin violation

OPT_BOUND_KEYS = ("g11", "g12", "g21", "g22", "phi", "gamma1", "gamma2")


@dataclass(frozen=True)
class IsolationSolution:
    """One zero of the backward transmission numerator."""

    phi: float
    omega: float
    residual: float
    feasible: bool


@dataclass(frozen=True)
class WorkingPoint:
    """A directional amplification operating frequency.

    direction is "1to2" when cavity-1 input is amplified into cavity 2,
    "2to1" for the opposite orientation; reverse_db always refers to the
    direction opposite the gain.  plateau_halfwidth is the symmetric
    halfwidth around omega over which the reverse transmission stays
    within 0.25 dB of unity; it is zero when the point sits at the edge
    of, or outside, that unity-reverse window.
    """

    omega: float
    gain_db: float
    reverse_db: float
    plateau_halfwidth: float
    stable_margin: float
    direction: str


def _stability_margin(p: DeviceParams) -> float:
    return hermitian_eigenvalues(drift_full(p))[0]


def solve_isolation(p: DeviceParams) -> tuple[IsolationSolution, IsolationSolution]:
    """Both (phase, frequency) pairs nulling the backward transmission.

    The input phase is ignored; the coupling and damping rates fix the
    solutions, which form a mirror pair (phi, omega) and (-phi, -omega).
    When the dissipative path outweighs what the coherent path can
    cancel, both solutions are flagged infeasible.
    """
    if p.g11 * p.g21 == 0.0:
        raise NoCoherentPath(
            "isolation needs both couplings of the coherent path; "
            f"g11={p.g11}, g21={p.g21}"
        )
    cosphi = -(p.gamma1 * p.g12 * p.g22) / (p.gamma2 * p.g11 * p.g21)
    if abs(cosphi) > 1.0:
        bad = IsolationSolution(
            phi=math.nan, omega=math.nan, residual=math.inf, feasible=False
        )
        return (bad, bad)
    phi0 = math.acos(cosphi)
    solutions = []
    for sign in (+1.0, -1.0):
        phi = sign * phi0
        omega = p.gamma1 * math.tan(phi) / 2.0
        fq = freq_quantities(dataclasses.replace(p, phi=phi), omega)
        residual = abs(fq.q1_minus + fq.q2)
        solutions.append(
            IsolationSolution(
                phi=phi, omega=omega, residual=residual,
                feasible=residual <= 1e-10,
            )
        )
    return (solutions[0], solutions[1])


def _directional_candidates(p: DeviceParams, omega: float):
    """Gain/reverse pairs for both orientations at one frequency."""
    r = smatrix_reduced(p, omega)
    fwd_db = r.t_db[1, 0]
    rev_db = r.t_db[0, 1]
    return ((fwd_db, rev_db, "1to2"), (rev_db, fwd_db, "2to1"))


def _best_directional(p: DeviceParams, omega: float):
    """Best non-reverse-amplifying orientation at one frequency, or None."""
    best = None
    for gain_db, rev_db, direction in _directional_candidates(p, omega):
        if rev_db <= PLATEAU_DB:
            if best is None or gain_db > best[0]:
                best = (gain_db, rev_db, direction)
    return best


def find_amplifier_point(
    p: DeviceParams, omega_range: tuple[float, float], n_scan: int = 401
) -> WorkingPoint:
    """Locate the best directional-amplification frequency in a range.

    Scans both orientations on a uniform grid, keeps frequencies whose
    reverse transmission does not amplify, refines the gain maximum over
    that set by golden section to 1e-8 in frequency, and measures the
    unity-reverse plateau by marching outward at a quarter of the grid
    step.  Falls back to the unconstrained gain maximum if no frequency
    qualifies, reporting the reverse level honestly.
    """
    if n_scan < 100:
        raise InvalidParams(f"n_scan must be >= 100, got {n_scan}")
    lo, hi = float(omega_range[0]), float(omega_range[1])
    if not (hi > lo):
        raise InvalidParams(f"empty frequency range [{lo}, {hi}]")
    margin = _stability_margin(p)
    if margin <= 0.0:
        raise Unstable(f"stability margin {margin:.3e} is not positive")

    grid = np.linspace(lo, hi, n_scan)
    step = (hi - lo) / (n_scan - 1)

    # deterministic selection: gain first, then proximity to resonance,
    # then forward orientation
    best = None
    for w in grid:
        cand = _best_directional(p, float(w))
        if cand is not None:
            key = (cand[0], -abs(float(w)), cand[2] == "1to2")
            if best is None or key > best[0]:
                best = (key, float(w), cand[2])

    constrained = best is not None
    if constrained:
        _, w_seed, direction = best
    else:
        fallback = None
        for w in grid:
            for gain_db, rev_db, direction in _directional_candidates(p, float(w)):
                key = (gain_db, -abs(float(w)), direction == "1to2")
                if fallback is None or key > fallback[0]:
                    fallback = (key, float(w), direction)
        _, w_seed, direction = fallback

    row, col = (1, 0) if direction == "1to2" else (0, 1)

    probes: list[tuple[float, float, float]] = []  # (gain, omega, reverse)

    def merit(w: float) -> float:
        r = smatrix_reduced(p, w)
        g = float(r.t_db[row, col])
        rev = float(r.t_db[col, row])
        if not constrained:
            probes.append((g, w, rev))
            return g
        if rev <= PLATEAU_DB:
            probes.append((g, w, rev))
            return g
        excess = rev - PLATEAU_DB
        return g - 1e6 * excess * excess

    _golden_max(merit, max(lo, w_seed - step), min(hi, w_seed + step))
    merit(w_seed)  # the seed itself is always an admissible probe
    gain_db, w_star, reverse_db = max(probes, key=lambda t: (t[0], -abs(t[1])))

    def reverse_flat(w: float) -> bool:
        return abs(float(smatrix_reduced(p, w).t_db[col, row])) <= PLATEAU_DB

    halfwidth = 0.0
    if abs(reverse_db) <= PLATEAU_DB:
        march = step / 4.0
        left = right = 0.0
        w = w_star - march
        while w >= lo and reverse_flat(w):
            left += march
            w -= march
        w = w_star + march
        while w <= hi and reverse_flat(w):
            right += march
            w += march
        halfwidth = min(left, right)

    return WorkingPoint(
        omega=float(w_star),
        gain_db=float(gain_db),
        reverse_db=float(reverse_db),
        plateau_halfwidth=float(halfwidth),
        stable_margin=float(margin),
        direction=direction,
    )


def _golden_max(f, lo: float, hi: float, tol: float = 1e-8) -> float:
    """Golden-section maximizer of a scalar function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


@dataclass(frozen=True)
class OptimizeOutcome:
    params: DeviceParams
    point: WorkingPoint


def _coarse_directional_gain(p: DeviceParams, omega_range, n: int = 101) -> float:
    """Grid estimate of the best admissible gain, -inf if none."""
    best = -math.inf
    for w in np.linspace(omega_range[0], omega_range[1], n):
        cand = _best_directional(p, float(w))
        if cand is not None and cand[0] > best:
            best = cand[0]
    return best


def optimize_gain(
    bounds: dict[str, tuple[float, float]],
    epsilon_margin: float,
    omega_range: tuple[float, float],
) -> OptimizeOutcome:
    """Maximize directional gain subject to a stability-margin floor.

    Seeds a three-level grid over the bounded parameters, keeps the
    seeds closest to the margin floor (gain grows toward the stability
    threshold), polishes the most promising ones by simplex descent on
    a penalized objective, and hard-checks the margin constraint on the
    result.  Deterministic for fixed bounds and ranges.
    """
    if epsilon_margin <= 0.0:
        raise InvalidParams(f"epsilon_margin must be positive, got {epsilon_margin}")
    missing = [k for k in OPT_BOUND_KEYS if k not in bounds]
    extra = [k for k in bounds if k not in OPT_BOUND_KEYS]
    if missing or extra:
        raise InvalidParams(
            f"bounds must cover exactly {OPT_BOUND_KEYS}; "
            f"missing {missing}, unexpected {extra}"
        )
    los = np.array([float(bounds[k][0]) for k in OPT_BOUND_KEYS])
    his = np.array([float(bounds[k][1]) for k in OPT_BOUND_KEYS])
    if np.any(his < los):
        raise InvalidParams("every bound needs lo <= hi")

    def make_params(x: np.ndarray) -> DeviceParams:
        kw = dict(zip(OPT_BOUND_KEYS, (float(v) for v in x)))
        return DeviceParams(kappa1=1.0, kappa2=1.0, **kw)

    # three-level deterministic seed grid
    levels = [
        np.array([lo, 0.5 * (lo + hi), hi]) if hi > lo else np.array([lo])
        for lo, hi in zip(los, his)
    ]
    mesh = np.meshgrid(*levels, indexing="ij")
    flat = np.stack([m.ravel() for m in mesh], axis=-1)
    seeds = []
    for x in flat:
        try:
            p = make_params(x)
        except InvalidParams:
            continue
        m = _stability_margin(p)
        if m >= epsilon_margin:
            seeds.append((m, x))
    if not seeds:
        raise NoFeasiblePoint(
            f"no seed reaches stability margin {epsilon_margin}"
        )
    seeds.sort(key=lambda s: s[0])  # margins closest to the floor first

    scored = []
    for m, x in seeds[:24]:
        g = _coarse_directional_gain(make_params(x), omega_range)
        scored.append((g, m, x))
    scored.sort(key=lambda s: -s[0])

    def objective(x_t) -> float:
        x = np.asarray(x_t)
        clipped = np.clip(x, los, his)
        wall = float(np.sum(np.abs(x - clipped)))
        p = make_params(clipped)
        m = _stability_margin(p)
        pen = OPT_PENALTY_PER_MARGIN * max(0.0, epsilon_margin - m)
        g = _coarse_directional_gain(p, omega_range)
        if g == -math.inf:
            g = -400.0
        return -g + pen + 1e3 * wall

    candidates = []
    for g, m, x in scored[:3]:
        res = minimize_simplex(objective, tuple(x), max_evals=250, tol=1e-7)
        x_fin = np.clip(np.asarray(res.argmin), los, his)
        p_fin = make_params(x_fin)
        if _stability_margin(p_fin) >= epsilon_margin:
            candidates.append((_coarse_directional_gain(p_fin, omega_range), p_fin))
    for g, m, x in scored:  # feasible seeds back the simplex results up
        candidates.append((g, make_params(x)))

    candidates = [c for c in candidates if c[0] > -math.inf]
    if not candidates:
        raise NoFeasiblePoint(
            "no candidate offers an admissible working point in range"
        )
    best_gain, best_params = max(candidates, key=lambda c: c[0])
    point = find_amplifier_point(best_params, omega_range, n_scan=1001)
    if point.stable_margin < epsilon_margin:
        raise NoFeasiblePoint(
            f"best candidate margin {point.stable_margin:.4e} fell below "
            f"{epsilon_margin}"
        )
    return OptimizeOutcome(params=best_params, point=point)
