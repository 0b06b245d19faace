import dataclasses
import math

import numpy as np
import pytest
from conftest import draw_stable_params

from nonrecip.errors import InvalidAxis, NotHermitian
from nonrecip.model import DeviceParams, drift_full
from nonrecip.numerics import hermitian_eigenvalues, poly_roots
from nonrecip.scattering import smatrix_reduced
from nonrecip.stability import (
    Axis,
    char_poly,
    stability_boundary,
    stability_report,
)


def scaled_couplings(p, c):
    return dataclasses.replace(
        p, g11=p.g11 * c, g12=p.g12 * c, g21=p.g21 * c, g22=p.g22 * c
    )


class TestStabilityReport:
    def test_decoupled(self):
        p = DeviceParams(
            kappa1=1.0, kappa2=1.0, gamma1=0.2, gamma2=16.0,
            g11=0.0, g12=0.0, g21=0.0, g22=0.0, phi=0.0,
        )
        rep = stability_report(p)
        assert np.allclose(rep.eigenvalues, (0.1, 0.5, 0.5, 8.0))
        assert abs(rep.margin - 0.1) < 1e-12
        assert rep.verdict == "stable"
        # the legacy inequality block misclassifies even this trivially
        # stable point, so the discrepancy flag fires
        assert rep.rh_conditions[0] is False
        assert rep.discrepancy

    def test_amp_point_stable_but_inequalities_disagree(self, amp_point):
        rep = stability_report(amp_point)
        assert rep.verdict == "stable"
        assert abs(rep.margin - 1.0583e-4) < 1e-7
        # first inequality evaluates clearly negative at this stable point
        assert abs(rep.rh_values[0] - (-26.8235)) < 1e-3
        assert rep.rh_conditions[0] is False
        assert rep.discrepancy
        assert any("authoritative" in n for n in rep.notes)

    def test_iso_and_combo_points_stable(self, iso_point, combo_point):
        assert stability_report(iso_point).verdict == "stable"
        rep = stability_report(combo_point)
        assert rep.verdict == "stable"
        assert abs(rep.margin - 6.192398e-3) < 1e-8

    def test_overdriven_combo_point_unstable(self, combo_point):
        rep = stability_report(scaled_couplings(combo_point, 3.0))
        assert rep.verdict == "unstable"
        assert rep.margin < -1.0

    def test_margin_depends_on_phase(self, amp_point):
        # the inequality block carries no phase, but the spectrum does
        margins = [
            stability_report(dataclasses.replace(amp_point, phi=phi)).margin
            for phi in np.linspace(-math.pi, math.pi, 41)
        ]
        assert max(margins) - min(margins) > 0.05
        assert stability_report(dataclasses.replace(amp_point, phi=0.0)).margin < 0

    def test_marginal_verdict_band(self, combo_point):
        lo, hi = 1.0, 1.1
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if stability_report(scaled_couplings(combo_point, mid)).margin > 0:
                lo = mid
            else:
                hi = mid
        rep = stability_report(scaled_couplings(combo_point, 0.5 * (lo + hi)))
        assert rep.verdict == "marginal"


class TestCharPoly:
    def test_diagonal(self):
        assert np.allclose(char_poly(np.diag([1.0, 2.0]).astype(complex)), [1, -3, 2])

    def test_pauli_type(self):
        a = np.array([[0.0, -1j], [1j, 0.0]])
        assert np.allclose(char_poly(a), [1, 0, -1])

    def test_not_hermitian_rejected(self):
        with pytest.raises(NotHermitian):
            char_poly(np.array([[0.0, 1.0], [2.0, 0.0]], dtype=complex))

    def test_roots_match_spectrum_many_drift_matrices(self):
        rng = np.random.default_rng(73)
        for _ in range(10_000):
            p = DeviceParams(
                kappa1=float(rng.uniform(0.5, 2)),
                kappa2=float(rng.uniform(0.5, 2)),
                gamma1=float(rng.uniform(0.1, 1)),
                gamma2=float(rng.uniform(4, 32)),
                g11=float(rng.uniform(0, 1)),
                g12=float(rng.uniform(0, 1)),
                g21=float(rng.uniform(0, 1)),
                g22=float(rng.uniform(0, 1)),
                phi=float(rng.uniform(-math.pi, math.pi)),
            )
            m = drift_full(p)
            roots = sorted(poly_roots(char_poly(m)), key=lambda z: z.real)
            ev = hermitian_eigenvalues(m)
            assert max(abs(r - e) for r, e in zip(roots, ev)) <= 1e-8


class TestStabilityBoundary:
    def test_grid_contains_both_regions(self, combo_point):
        scan = stability_boundary(
            combo_point,
            Axis("gamma1", 0.1, 2.0, 12),
            Axis("gamma2", 4.0, 40.0, 12),
        )
        flat = [v for row in scan.verdicts for v in row]
        assert "stable" in flat and "unstable" in flat
        assert len(scan.boundary) > 0

    def test_boundary_points_are_marginal(self, combo_point):
        scan = stability_boundary(
            combo_point,
            Axis("gamma1", 0.1, 2.0, 8),
            Axis("gamma2", 4.0, 40.0, 8),
        )
        for v1, v2 in scan.boundary:
            q = dataclasses.replace(combo_point, gamma1=v1, gamma2=v2)
            assert abs(stability_report(q).margin) <= 1e-6

    def test_decoupled_grid_uniformly_stable(self):
        p = DeviceParams(
            kappa1=1.0, kappa2=1.0, gamma1=0.2, gamma2=16.0,
            g11=0.0, g12=0.0, g21=0.0, g22=0.0, phi=0.0,
        )
        scan = stability_boundary(
            p, Axis("gamma1", 0.1, 1.0, 5), Axis("gamma2", 4.0, 40.0, 5)
        )
        assert all(v == "stable" for row in scan.verdicts for v in row)
        assert scan.boundary == []

    def test_unknown_axis_rejected(self, combo_point):
        with pytest.raises(InvalidAxis):
            stability_boundary(
                combo_point, Axis("detuning", 0, 1, 5), Axis("gamma2", 4, 40, 5)
            )

    def test_single_point_axis_rejected(self, combo_point):
        with pytest.raises(InvalidAxis):
            stability_boundary(
                combo_point, Axis("gamma1", 0.1, 2.0, 1), Axis("gamma2", 4, 40, 5)
            )

    def test_duplicate_axes_rejected(self, combo_point):
        with pytest.raises(InvalidAxis):
            stability_boundary(
                combo_point, Axis("gamma1", 0.1, 2.0, 5), Axis("gamma1", 0.1, 1.0, 5)
            )


class TestGainDivergesAtThreshold:
    def test_peak_gain_grows_approaching_boundary(self, combo_point):
        # walk the coupling scale toward its critical value: the peak of
        # the forward transmission must climb monotonically at the end
        lo, hi = 1.0, 1.1
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if stability_report(scaled_couplings(combo_point, mid)).margin > 0:
                lo = mid
            else:
                hi = mid
        c_star = lo
        omegas = np.linspace(-0.3, 0.3, 601)
        peaks = []
        for c in np.linspace(1.0, c_star - 1e-9, 8):
            p = scaled_couplings(combo_point, float(c))
            peaks.append(max(smatrix_reduced(p, float(w)).t12 for w in omegas))
        tail = peaks[-5:]
        assert all(b > a for a, b in zip(tail, tail[1:]))
