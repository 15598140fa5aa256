import math

import numpy as np
import pytest

from modeweaver import wgmodes
from modeweaver.errors import (
    DegeneratePhaseMatch,
    InvalidInput,
    ModeCutoff,
    NoPhaseMatch,
)
from modeweaver.wgmodes import (
    MaterialStack,
    ModeId,
    WaveguideGeometry,
    dispersion_sweep,
    effective_index,
    grating_period,
    phase_match_width,
    slab_dispersion_residual,
    slab_neff,
)

TE0 = ModeId("TE", 0)
TE1 = ModeId("TE", 1)
TE2 = ModeId("TE", 2)

# independent dense-scan bisection of the tangent-form slab relation,
# frozen for (n_core=1.98, n_clad=1.45, t=190 nm, lambda=808 nm, TE0)
SLAB_TE0_190_ORACLE = 1.7100313597780021


def tangent_form_residual(n_eff, n_core, n_clad, t, lam, order, q=1.0):
    half_kt = math.pi * t / lam
    v = half_kt * math.sqrt(n_core**2 - n_clad**2)
    u = half_kt * math.sqrt(n_core**2 - n_eff**2)
    w = math.sqrt(max(v * v - u * u, 0.0))
    return u * math.tan(u - order * math.pi / 2) - q * w


class TestSlab:
    def test_thick_slab_limit(self):
        n = slab_neff(1.98, 1.45, 10000, 808, "TE", 0)
        assert abs(n - 1.98) < 1e-3

    def test_far_below_cutoff(self):
        with pytest.raises(ModeCutoff):
            slab_neff(1.98, 1.45, 20, 808, "TE", 2)

    def test_against_bisection_oracle(self):
        n = slab_neff(1.98, 1.45, 190, 808, "TE", 0)
        assert n == pytest.approx(SLAB_TE0_190_ORACLE, abs=1e-10)
        assert abs(tangent_form_residual(n, 1.98, 1.45, 190, 808, 0)) < 1e-8

    def test_phase_residual_tight(self):
        for order in (0, 1, 2):
            n = slab_neff(1.98, 1.45, 900, 808, "TE", order)
            r = slab_dispersion_residual(n, 1.98, 1.45, 900, 808, "TE", order)
            assert abs(r) < 1e-10

    def test_tm_differs_from_te(self):
        n_te = slab_neff(1.98, 1.45, 190, 808, "TE", 0)
        n_tm = slab_neff(1.98, 1.45, 190, 808, "TM", 0)
        assert n_tm < n_te  # TM is less confined in a thin high-contrast slab

    def test_invalid_inputs(self):
        with pytest.raises(InvalidInput):
            slab_neff(1.45, 1.98, 190, 808)
        with pytest.raises(InvalidInput):
            slab_neff(1.98, 1.45, -5, 808)
        with pytest.raises(InvalidInput):
            slab_neff(1.98, 1.45, 190, 808, "TX", 0)


class TestEffectiveIndex:
    def test_published_index_difference(self):
        geom = WaveguideGeometry(1600, 190)
        dn = effective_index(geom, TE0) - effective_index(geom, TE2)
        assert dn == pytest.approx(0.12, abs=0.03)

    def test_mode_order_monotonicity(self):
        geom = WaveguideGeometry(1600, 190)
        n = [effective_index(geom, ModeId("TE", k)) for k in range(3)]
        assert n[0] > n[1] > n[2]

    def test_bounds(self):
        geom = WaveguideGeometry(1600, 190)
        stack = geom.stack
        for order in range(3):
            n = effective_index(geom, ModeId("TE", order))
            assert stack.n_clad < n < stack.n_core

    def test_single_mode_regime(self):
        # 420 nm wide guide: TE1 is cut off or squeezed against the cladding
        geom = WaveguideGeometry(420, 190)
        try:
            n = effective_index(geom, TE1)
        except ModeCutoff:
            return
        assert n - geom.stack.n_clad < 1e-3


class TestPhaseMatch:
    def test_te2_multimode_width(self):
        sm = WaveguideGeometry(420, 190)
        w = phase_match_width(sm, TE2, (800, 3000))
        assert w == pytest.approx(1600, rel=0.15)

    def test_round_trip(self):
        sm = WaveguideGeometry(420, 190)
        w = phase_match_width(sm, TE2, (800, 3000))
        n_target = effective_index(WaveguideGeometry(w, 190), TE2)
        n_ref = effective_index(sm, TE0)
        assert abs(n_target - n_ref) < 1e-6

    def test_identity_case(self):
        sm = WaveguideGeometry(420, 190)
        assert phase_match_width(sm, TE0, (100, 5000)) == 420

    def test_te1_against_dense_scan_oracle(self):
        # 25001-point scan of the index difference brackets [1059.5, 1059.6]
        sm = WaveguideGeometry(420, 190)
        w = phase_match_width(sm, TE1, (500, 3000))
        assert 1059.5 <= w <= 1059.6

    def test_no_phase_match(self):
        sm = WaveguideGeometry(420, 190)
        with pytest.raises(NoPhaseMatch):
            phase_match_width(sm, TE2, (800, 900))


class TestGratingPeriod:
    def test_published_value(self):
        assert grating_period(808, 0.12105) == pytest.approx(6.675, abs=5e-4)

    def test_exact_inverse(self):
        for dn in (0.05, 0.12105, 0.3):
            assert grating_period(808, dn) * dn * 1e3 == pytest.approx(
                808, rel=1e-15
            )

    def test_degenerate(self):
        with pytest.raises(DegeneratePhaseMatch):
            grating_period(808, 1e-12)

    def test_scale_invariance(self):
        assert grating_period(1616, 0.2421) == pytest.approx(
            grating_period(808, 0.12105), rel=1e-12
        )


class TestDispersionSweep:
    def test_monotone_in_width(self):
        widths = np.arange(400, 2001, 100)
        curve = dispersion_sweep(widths, [TE0, TE1, TE2])
        for mode in (TE0, TE1, TE2):
            series = curve.neff_series(mode)
            values = [n for _, n in series]
            assert values == sorted(values)

    def test_single_point_consistency(self):
        curve = dispersion_sweep([1600], [TE2])
        ((_, n),) = curve.neff_series(TE2)
        assert n == effective_index(WaveguideGeometry(1600, 190), TE2)

    def test_cutoff_recorded_as_absent(self):
        curve = dispersion_sweep([400, 1600], [TE2])
        assert len(curve.neff_series(TE2)) == 1

    def test_csv_format(self):
        curve = dispersion_sweep([420, 1600], [TE0])
        lines = curve.to_csv().splitlines()
        assert lines[0] == "sweep_param,mode_family,mode_order,n_eff"
        assert lines[1].startswith("420,TE,0,")
        assert len(lines) == 3

    def test_empty_sweep(self):
        with pytest.raises(InvalidInput):
            dispersion_sweep([], [TE0])


class TestMaterials:
    def test_frozen_constants_match_sellmeier(self):
        assert wgmodes.SI3N4_INDEX_808 == wgmodes.silicon_nitride_index(808)
        assert wgmodes.SIO2_INDEX_808 == wgmodes.silica_index(808)
        # frozen oracle evaluations of the published Sellmeier relations
        assert wgmodes.SI3N4_INDEX_808 == pytest.approx(2.023634, abs=1e-5)
        assert wgmodes.SIO2_INDEX_808 == pytest.approx(1.453180, abs=1e-5)

    def test_stack_validation(self):
        with pytest.raises(InvalidInput):
            MaterialStack(n_core=1.4, n_clad=1.45)
        with pytest.raises(InvalidInput):
            WaveguideGeometry(-1, 190)

    def test_mode_id_parse(self):
        assert ModeId.parse("te2") == TE2
        with pytest.raises(InvalidInput):
            ModeId.parse("TX1")
