import io

import numpy as np
import pytest

from isgsim import (
    ConvergenceError,
    GridResolutionError,
    MediumSpec,
    PhaseGrid,
    SchemeMismatchError,
    contrast,
    engrave_large_angle,
    engrave_small_angle,
    engraving_field,
    entrance_profile,
    fourier_coefficients,
    ideal_grating,
    max_phase_matched_order,
    replica_field,
    sinusoidal_pump,
    xi,
    zeta,
)


class TestMediumSpec:
    def test_derives_missing_member(self):
        m = MediumSpec(alpha0=800.0, length=2.5e-3)
        assert m.optical_depth == pytest.approx(2.0)
        m = MediumSpec(alpha0=2.0, optical_depth=3.0)
        assert m.length == pytest.approx(1.5)
        m = MediumSpec(length=1.0, optical_depth=2.0)
        assert m.alpha0 == pytest.approx(2.0)

    def test_requires_two_of_three(self):
        with pytest.raises(ValueError):
            MediumSpec(alpha0=1.0)

    def test_rejects_inconsistent_triple(self):
        with pytest.raises(ValueError):
            MediumSpec(alpha0=1.0, length=1.0, optical_depth=3.0)

    def test_rejects_nonpositive_depth(self):
        with pytest.raises(ValueError):
            MediumSpec(alpha0=-1.0, length=1.0)

    def test_rejects_bad_geometry(self):
        with pytest.raises(ValueError):
            MediumSpec(alpha0=1.0, length=1.0, wavelength=-1e-6)
        with pytest.raises(ValueError):
            MediumSpec(alpha0=1.0, length=1.0, theta=-0.1)


class TestEntranceProfile:
    def test_isg_matches_sinusoidal_closed_form(self, grid, tm5):
        drive = 30.0
        pump = engraving_field(grid, tm5, drive)
        alpha = entrance_profile(tm5, pump, alpha0=2.0)
        want = 2.0 * (1.0 - (2 * drive / (1 + 2 * drive)) * np.cos(grid.phi))
        np.testing.assert_allclose(alpha, want, atol=1e-12)

    def test_isg_contrast_headline(self, grid, tm5):
        pump = engraving_field(grid, tm5, 30.0)
        c = contrast(entrance_profile(tm5, pump), 1.0)
        assert c == pytest.approx(4 * 30 / 61, abs=1e-12)
        assert c == pytest.approx(1.97, abs=0.01)

    def test_standard_contrast_headline(self, grid, standard):
        pump = engraving_field(grid, standard, 0.9)
        c = contrast(entrance_profile(standard, pump), 1.0)
        assert c == pytest.approx(1.8 / 2.8, abs=1e-12)

    def test_isg_intermediate_drive(self, grid, tm5):
        pump = engraving_field(grid, tm5, 6.0)
        c = contrast(entrance_profile(tm5, pump), 1.0)
        assert c == pytest.approx(2 * 12 / 13, abs=1e-12)

    def test_zero_drive_flat(self, grid, tm5, standard):
        for scheme in (tm5, standard):
            pump = engraving_field(grid, scheme, 0.0)
            alpha = entrance_profile(scheme, pump, alpha0=3.0)
            np.testing.assert_allclose(alpha, 3.0)
            assert contrast(alpha, 3.0) == 0.0

    def test_misaligned_replica_guard(self, grid, tm5):
        pump = replica_field(sinusoidal_pump(grid, 1.0), 0.25)
        bad = type(pump)(
            grid=grid,
            r_of_phi=pump.r_of_phi,
            r_avg=pump.r_avg,
            replica_shift_bins=grid.n_phi // 4,
        )
        with pytest.raises(ValueError):
            entrance_profile(tm5, bad)
        entrance_profile(tm5, bad, allow_misaligned=True)  # opt-in works


class TestContrast:
    def test_flat(self):
        assert contrast(np.full(8, 2.0), 2.0) == 0.0

    def test_square_is_two(self, grid, med_od2):
        profile = ideal_grating("square", med_od2, grid)
        assert contrast(profile.entrance(), med_od2.alpha0) == pytest.approx(2.0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            contrast(np.array([]), 1.0)


class TestPhaseMatching:
    def medium(self, theta):
        return MediumSpec(
            alpha0=800.0, length=2.5e-3, wavelength=793e-9, theta=theta
        )

    def test_critical_angle(self):
        pm = max_phase_matched_order(self.medium(17.5e-3))
        assert pm.theta_c == pytest.approx(12.6e-3, abs=0.1e-3)

    def test_collinear_all_orders(self):
        pm = max_phase_matched_order(self.medium(0.0))
        assert pm.n_max is None
        assert pm.regime == "small-angle"
        assert pm.grating_wavevector == 0.0

    def test_large_angle_two_orders(self):
        pm = max_phase_matched_order(self.medium(17.5e-3))
        assert pm.n_max == 1
        assert pm.regime == "large-angle"

    def test_small_angle_many_orders(self):
        pm = max_phase_matched_order(self.medium(1e-3))
        assert pm.regime == "small-angle"
        assert pm.n_max >= 5

    def test_intermediate_is_ambiguous(self):
        pm = max_phase_matched_order(self.medium(6e-3))
        assert pm.regime == "ambiguous"

    def test_needs_geometry(self):
        with pytest.raises(ValueError):
            max_phase_matched_order(MediumSpec(alpha0=1.0, length=1.0))


class TestSmallAngleEngraving:
    def test_zero_pump_beer_lambert(self, grid, tm5, med_od2):
        pump = engraving_field(grid, tm5, 0.0)
        profile = engrave_small_angle(tm5, pump, med_od2)
        np.testing.assert_allclose(profile.alpha, med_od2.alpha0, atol=1e-12)
        want = np.exp(-med_od2.alpha0 * profile.z)
        np.testing.assert_allclose(profile.intensity[:, 0], want, atol=1e-9)

    def test_standard_contrast_evolution(self, grid, standard, med_od2):
        pump = engraving_field(grid, standard, 0.9)
        profile = engrave_small_angle(standard, pump, med_od2)
        assert contrast(profile.entrance(), 1.0) == pytest.approx(0.643, abs=0.001)
        assert contrast(profile.output(), 1.0) == pytest.approx(0.41, abs=0.03)

    def test_standard_absorption_bounded_by_alpha0(self, grid, standard, med_od2):
        pump = engraving_field(grid, standard, 0.9)
        profile = engrave_small_angle(standard, pump, med_od2)
        assert np.all(profile.alpha <= med_od2.alpha0 + 1e-12)
        assert np.all(profile.alpha > 0)

    def test_isg_symmetry_and_mean_preservation(self, grid, tm5, med_od2):
        pump = engraving_field(grid, tm5, 30.0)
        profile = engrave_small_angle(tm5, pump, med_od2)
        folded = profile.alpha + np.roll(profile.alpha, grid.n_phi // 2, axis=1)
        np.testing.assert_allclose(folded, 2.0 * med_od2.alpha0, atol=1e-9)
        np.testing.assert_allclose(
            profile.alpha.mean(axis=1), med_od2.alpha0, atol=1e-9
        )

    def test_isg_squares_up_with_contrast_preserved(self, grid, tm5, med_od2):
        pump = engraving_field(grid, tm5, 30.0)
        profile = engrave_small_angle(tm5, pump, med_od2)
        assert contrast(profile.output(), 1.0) > 1.9
        coeffs = fourier_coefficients(profile, p_max=3)
        # entrance is sinusoidal (no third harmonic); output is square-ish
        assert abs(coeffs.coeffs[0, 3]) < 1e-9
        assert abs(coeffs.coeffs[-1, 3]) > 0.15 * abs(coeffs.coeffs[-1, 1])

    def test_intensity_strictly_decreasing(self, grid, tm5, med_od2):
        pump = engraving_field(grid, tm5, 30.0)
        profile = engrave_small_angle(tm5, pump, med_od2)
        inten = profile.intensity
        alive = inten[0] > 1e-12
        assert np.all(np.diff(inten[:, alive], axis=0) < 0)

    def test_saturated_limit_contrast_two(self, grid, tm5, med_od2):
        pump = engraving_field(grid, tm5, 1.0)
        profile = engrave_small_angle(tm5, pump, med_od2, saturated=True)
        assert contrast(profile.entrance(), 1.0) == pytest.approx(2.0, abs=1e-9)
        assert contrast(profile.output(), 1.0) == pytest.approx(2.0, abs=1e-9)
        folded = profile.alpha + np.roll(profile.alpha, grid.n_phi // 2, axis=1)
        np.testing.assert_allclose(folded, 2.0, atol=1e-9)

    def test_saturated_needs_sublevels(self, grid, standard, med_od2):
        pump = engraving_field(grid, standard, 0.9)
        with pytest.raises(SchemeMismatchError):
            engrave_small_angle(standard, pump, med_od2, saturated=True)

    def test_saturated_needs_shaped_pump(self, grid, tm5, med_od2):
        pump = engraving_field(grid, tm5, 0.0)
        with pytest.raises(ValueError):
            engrave_small_angle(tm5, pump, med_od2, saturated=True)

    def test_small_n_z_rejected(self, grid, tm5, med_od2):
        pump = engraving_field(grid, tm5, 1.0)
        with pytest.raises(ValueError):
            engrave_small_angle(tm5, pump, med_od2, n_z=10)

    def test_grid_doubling_stability(self, tm5, med_od2):
        contrasts = []
        for n_phi, n_z in ((256, 400), (512, 800)):
            grid = PhaseGrid(n_phi)
            pump = engraving_field(grid, tm5, 30.0)
            profile = engrave_small_angle(tm5, pump, med_od2, n_z=n_z)
            contrasts.append(
                (contrast(profile.entrance(), 1.0), contrast(profile.output(), 1.0))
            )
        for a, b in zip(*contrasts):
            assert abs(a - b) < 1e-4


class TestLargeAngleEngraving:
    def test_isg_contrast_evolution(self, grid, tm5, med_od2):
        pump = engraving_field(grid, tm5, 30.0)
        result = engrave_large_angle(tm5, pump, med_od2)
        assert contrast(result.profile.entrance(), 1.0) == pytest.approx(1.97, abs=0.01)
        assert contrast(result.profile.output(), 1.0) == pytest.approx(1.57, abs=0.05)

    def test_standard_contrast_evolution(self, grid, standard, med_od2):
        pump = engraving_field(grid, standard, 0.9)
        result = engrave_large_angle(standard, pump, med_od2)
        assert contrast(result.profile.output(), 1.0) == pytest.approx(0.35, abs=0.03)

    def test_energy_strictly_decreasing(self, grid, tm5, med_od2):
        pump = engraving_field(grid, tm5, 30.0)
        result = engrave_large_angle(tm5, pump, med_od2)
        power = np.abs(result.e0) ** 2 + np.abs(result.e1) ** 2
        assert np.all(np.diff(power) < 0)

    def test_isg_mean_absorption_constant(self, grid, tm5, med_od2):
        pump = engraving_field(grid, tm5, 30.0)
        result = engrave_large_angle(tm5, pump, med_od2)
        np.testing.assert_allclose(result.fourier.a0, med_od2.alpha0, atol=1e-9)

    def test_single_beam_writes_no_grating(self, grid, standard, tm5, med_od2):
        pump = engraving_field(grid, standard, 0.9)
        result = engrave_large_angle(standard, pump, med_od2, e1_in=0.0)
        np.testing.assert_allclose(result.fourier.a1, 0.0, atol=1e-12)
        # standard scheme bleaches uniformly
        assert np.all(result.fourier.a0 < med_od2.alpha0)
        # the sublevel scheme cannot bleach: uniform pumping shuffles both
        # sublevels equally and the mean absorption stays put
        pump = engraving_field(grid, tm5, 30.0)
        result = engrave_large_angle(tm5, pump, med_od2, e1_in=0.0)
        np.testing.assert_allclose(result.fourier.a0, med_od2.alpha0, atol=1e-9)

    def test_profile_stays_sinusoidal_for_isg(self, grid, tm5, med_od2):
        pump = engraving_field(grid, tm5, 30.0)
        result = engrave_large_angle(tm5, pump, med_od2)
        coeffs = fourier_coefficients(result.profile, p_max=3)
        assert np.all(np.abs(coeffs.coeffs[:, 2]) < 1e-12)
        assert np.all(np.abs(coeffs.coeffs[:, 3]) < 1e-12)


class TestFourierCoefficients:
    def test_sinusoid(self, grid, med_od2):
        grating = fourier_coefficients(ideal_grating("sinusoidal", med_od2, grid))
        assert grating.a0[0] == pytest.approx(med_od2.alpha0, abs=1e-12)
        assert abs(grating.a1[0]) == pytest.approx(med_od2.alpha0 / 2, abs=1e-12)

    def test_square_first_harmonic(self, grid, med_od2):
        grating = fourier_coefficients(ideal_grating("square", med_od2, grid))
        assert grating.a0[0] == pytest.approx(med_od2.alpha0, abs=1e-12)
        assert abs(grating.a1[0]) == pytest.approx(
            2 * med_od2.alpha0 / np.pi, rel=2e-4
        )

    def test_flat_has_no_harmonics(self, grid, tm5, med_od2):
        pump = engraving_field(grid, tm5, 0.0)
        profile = engrave_small_angle(tm5, pump, med_od2)
        grating = fourier_coefficients(profile, p_max=4)
        np.testing.assert_allclose(np.abs(grating.coeffs[:, 1:]), 0.0, atol=1e-12)

    def test_harmonics_bounded_by_mean(self, grid, tm5, med_od2):
        pump = engraving_field(grid, tm5, 30.0)
        profile = engrave_small_angle(tm5, pump, med_od2)
        grating = fourier_coefficients(profile, p_max=5)
        bound = profile.alpha.mean(axis=1)
        for p in range(1, 6):
            assert np.all(np.abs(grating.coeffs[:, p]) <= bound + 1e-12)

    def test_aliasing_guard(self, grid, med_od2):
        profile = ideal_grating("sinusoidal", med_od2, grid)
        with pytest.raises(GridResolutionError):
            fourier_coefficients(profile, p_max=grid.n_phi // 2)


class TestIdealGratings:
    def test_sinusoidal_extremes(self, grid, med_od2):
        profile = ideal_grating("sinusoidal", med_od2, grid)
        row = profile.entrance()
        assert row[grid.n_phi // 4] == pytest.approx(2 * med_od2.alpha0)
        assert row[3 * grid.n_phi // 4] == pytest.approx(0.0, abs=1e-12)

    def test_square_values_and_nodes(self, grid, med_od2):
        row = ideal_grating("square", med_od2, grid).entrance()
        assert set(np.round(row, 12)) == {0.0, med_od2.alpha0, 2 * med_od2.alpha0}
        assert row[0] == med_od2.alpha0  # sign(0) = 0 at the nodes
        assert row[grid.n_phi // 2] == med_od2.alpha0

    def test_means_equal_alpha0(self, grid, med_od2):
        for kind in ("sinusoidal", "square"):
            profile = ideal_grating(kind, med_od2, grid)
            assert profile.entrance().mean() == pytest.approx(med_od2.alpha0, abs=1e-12)

    def test_depth_uniform(self, grid, med_od2):
        profile = ideal_grating("square", med_od2, grid, n_z=64)
        assert np.all(profile.alpha == profile.alpha[0])

    def test_unknown_kind(self, grid, med_od2):
        with pytest.raises(ValueError):
            ideal_grating("sawtooth", med_od2, grid)


class TestProfileExport:
    def test_csv_round_trip(self, grid, tm5):
        pump = engraving_field(grid, tm5, 6.0)
        medium = MediumSpec(alpha0=2.0, optical_depth=1.0)
        profile = engrave_small_angle(tm5, pump, medium, n_z=50)
        buf = io.StringIO()
        profile.to_csv(buf)
        lines = buf.getvalue().splitlines()
        assert len(lines) == 52  # header + n_z + 1 rows
        header = lines[0].split(",")
        assert header[0] == "z"
        np.testing.assert_allclose(
            [float(v) for v in header[1:]], grid.phi, atol=1e-15
        )
        row = np.array([float(v) for v in lines[1].split(",")])
        assert row[0] == 0.0
        np.testing.assert_allclose(row[1:], profile.entrance())
