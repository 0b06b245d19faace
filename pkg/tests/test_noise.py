import dataclasses
import math

import numpy as np
import pytest
from conftest import draw_stable_params

from nonrecip.errors import ZeroGain
from nonrecip.model import DeviceParams
from nonrecip.noise import noise_sweep, output_spectrum_cavity2
from nonrecip.scattering import smatrix_reduced


def hot(p, nm):
    return dataclasses.replace(p, nm1=nm, nm2=nm)


def neg_phase_isolation_branch(p):
    # Eq.-10-type solution with negative phase: the forward gain into
    # cavity 2 then peaks at negative frequency
    cosphi = -(p.gamma1 * p.g12 * p.g22) / (p.gamma2 * p.g11 * p.g21)
    return dataclasses.replace(p, phi=-math.acos(cosphi))


class TestOutputSpectrum:
    def test_amp_point_added_noise(self, amp_point):
        res = output_spectrum_cavity2(hot(amp_point, 3.0), 0.081)
        assert abs(res.added - 8.472003) < 1e-5
        assert abs(res.added - 8.46) < 0.15
        assert abs(res.gain - 12.536966) < 1e-5
        assert res.status == "ok"

    def test_mirrored_working_point_same_noise(self, amp_point):
        # flipping both the probe frequency and the phase lands on the
        # mirrored working point with identical spectrum and gain
        a = output_spectrum_cavity2(hot(amp_point, 3.0), 0.081)
        flipped = dataclasses.replace(hot(amp_point, 3.0), phi=-amp_point.phi)
        b = output_spectrum_cavity2(flipped, -0.081)
        assert abs(a.s_out - b.s_out) < 1e-10 * a.s_out
        assert abs(a.gain - b.gain) < 1e-10 * a.gain

    def test_combo_point_window_minimum(self, combo_point):
        p = neg_phase_isolation_branch(combo_point)
        vals = [
            output_spectrum_cavity2(p, float(w)).added
            for w in np.linspace(-0.1, -0.0946, 201)
        ]
        assert abs(min(vals) - 4.479703) < 1e-5
        assert abs(min(vals) - 4.35) < 0.15

    def test_zero_gain_raises(self):
        p = DeviceParams(
            kappa1=1.0, kappa2=1.0, gamma1=0.2, gamma2=16.0,
            g11=0.0, g12=0.0, g21=0.0, g22=0.0, phi=0.0,
        )
        with pytest.raises(ZeroGain):
            output_spectrum_cavity2(p, 0.1)

    def test_added_at_least_half_quantum_above_vacuum_reference(self):
        rng = np.random.default_rng(79)
        for _ in range(200):
            p = draw_stable_params(rng)
            if p.g11 * p.g21 == 0.0 and p.g12 * p.g22 == 0.0:
                continue
            try:
                res = output_spectrum_cavity2(p, float(rng.uniform(-0.5, 0.5)))
            except ZeroGain:
                continue
            assert res.added >= -0.5
            assert res.s_out >= 0.0

    def test_affine_in_thermal_occupations(self, combo_point):
        # slopes are exactly the coherent- and dissipative-path weights
        p = neg_phase_isolation_branch(combo_point)
        w = -0.097
        r = smatrix_reduced(p, w)
        base = output_spectrum_cavity2(p, w).s_out
        up1 = output_spectrum_cavity2(dataclasses.replace(p, nm1=2.0), w).s_out
        up2 = output_spectrum_cavity2(dataclasses.replace(p, nm2=2.0), w).s_out
        assert abs((up1 - base) / 2.0 - abs(r.s[1, 2]) ** 2) < 1e-12
        assert abs((up2 - base) / 2.0 - abs(r.l[1, 0] + r.l[1, 1]) ** 2) < 1e-12

    def test_added_nondecreasing_in_nm2(self, combo_point):
        p = neg_phase_isolation_branch(combo_point)
        for w in np.linspace(-0.15, -0.05, 11):
            prev = -math.inf
            for nm2 in (0.0, 1.0, 5.0, 20.0):
                res = output_spectrum_cavity2(
                    dataclasses.replace(p, nm2=nm2), float(w)
                )
                assert res.added >= prev
                prev = res.added


class TestNoiseSweep:
    def test_preserves_input_order(self, combo_point):
        p = neg_phase_isolation_branch(combo_point)
        omegas = [-0.12, -0.09, -0.15, 0.0]
        out = noise_sweep(p, omegas)
        assert [r.omega for r in out] == omegas

    def test_zero_gain_rows_flagged_not_fatal(self, combo_point):
        # the exact isolation frequency sits in the grid: gain vanishes
        # there but the sweep must carry on
        cosphi = -(
            combo_point.gamma1 * combo_point.g12 * combo_point.g22
        ) / (combo_point.gamma2 * combo_point.g11 * combo_point.g21)
        phi0 = math.acos(cosphi)
        w0 = combo_point.gamma1 * math.tan(phi0) / 2.0
        p = dataclasses.replace(combo_point, phi=phi0)
        out = noise_sweep(p, [w0 - 0.01, w0, w0 + 0.01])
        assert [r.status for r in out] == ["ok", "zero_gain", "ok"]
        flagged = out[1]
        assert flagged.added is None
        assert flagged.s_out is not None and flagged.s_out > 0.0
        assert flagged.gain < 1e-12

    def test_minimum_tracks_gain_peak(self, combo_point):
        # regression: in [-0.2, 0] the added-noise minimum sits within
        # 0.02 of the frequency of maximum gain
        p = neg_phase_isolation_branch(combo_point)
        omegas = np.linspace(-0.2, 0.0, 2001)
        res = noise_sweep(p, [float(w) for w in omegas])
        added = np.array([r.added if r.added is not None else np.inf for r in res])
        gains = np.array([r.gain if r.gain is not None else 0.0 for r in res])
        w_noise = omegas[int(np.argmin(added))]
        w_gain = omegas[int(np.argmax(gains))]
        assert abs(w_noise - w_gain) < 0.02
