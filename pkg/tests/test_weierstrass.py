"""Surface data assembly, immersion, periods, flux, symmetry, windings."""

import math

import numpy as np
import pytest

from minann.errors import (
    DomainError,
    InadmissibleWindowError,
    ParityUndeterminedError,
    SchemaError,
)
from minann.families import catenoid_cover, figure_eight, perturbed_two_cover
from minann.laurent import TWO_PI, AnnulusWindow, LaurentPoly
from minann.weierstrass import (
    Parity,
    Slab,
    data_from_json,
    data_to_json,
    flux,
    from_fg,
    from_g_pair,
    gauss_winding,
    height,
    immerse,
    metric_factor,
    metric_lambda_samples,
    period_check,
    symmetry_check,
    winding_class,
)

WINDOW = AnnulusWindow(0.5, 2.0)


def make_even(gm_coeffs, gp_coeffs, window=WINDOW):
    return from_g_pair(
        LaurentPoly(gm_coeffs), LaurentPoly(gp_coeffs), Parity.EVEN, window
    )


class TestAssembly:
    def test_squared_combinations_and_product_channel(self):
        data = make_even({0: 1.0, 1: 0.3}, {-1: 3.0})
        # conformality: the product channel squared equals the product of
        # the squared combinations, coefficient for coefficient.
        resid = data.psi3 * data.psi3 - data.f_minus * data.f_plus
        assert resid.max_abs_coeff <= 1e-12 * data.f_minus.max_abs_coeff

    def test_odd_parity_inserts_one_shift(self):
        gm, gp = LaurentPoly({0: 1.0}), LaurentPoly({-1: 1.0})
        data = from_g_pair(gm, gp, Parity.ODD, WINDOW)
        assert data.f_minus.terms == ((1, 1.0 + 0j),)
        assert data.f_plus.terms == ((-1, 1.0 + 0j),)
        assert data.psi3.terms == ((0, 1.0 + 0j),)

    def test_rejects_root_inside_window(self):
        with pytest.raises(InadmissibleWindowError):
            make_even({0: -1.0, 1: 1.0}, {0: 1.0})  # root at z = 1

    def test_rejects_zero_factor(self):
        with pytest.raises(DomainError):
            from_g_pair(LaurentPoly(), LaurentPoly({0: 1.0}), Parity.EVEN, WINDOW)


class TestClassicalInput:
    def test_catenoid_from_classical_pair(self):
        f = LaurentPoly({-2: 1.0})
        data = from_fg(f, LaurentPoly({1: 1.0}), LaurentPoly({0: 1.0}), WINDOW)
        assert data.parity is Parity.ODD
        assert data.f_minus.terms == ((-1, 1.0 + 0j),)
        assert data.f_plus.terms == ((1, 1.0 + 0j),)

    def test_rejects_non_square_data(self):
        f = LaurentPoly({0: 1.0, 1: 1.0})
        with pytest.raises(ParityUndeterminedError):
            from_fg(f, LaurentPoly({1: 1.0}), LaurentPoly({0: 1.0}), WINDOW)


class TestImmersion:
    def test_catenoid_closed_form(self):
        data, _ = catenoid_cover(1, TWO_PI)
        for r, theta in [(0.8, 0.3), (1.0, 0.0), (1.7, 2.4)]:
            z = r * math.e ** (1j * theta) if False else r * np.exp(1j * theta)
            pt = immerse(data, z)
            t = math.log(r)
            assert np.hypot(pt[0], pt[1]) == pytest.approx(math.cosh(t), rel=1e-12)
            assert pt[2] == pytest.approx(t, abs=1e-12)
            assert height(data, z) == pytest.approx(t, abs=1e-12)

    def test_height_offset_shifts_third_coordinate(self):
        base, _ = catenoid_cover(1, TWO_PI)
        lifted, _ = catenoid_cover(1, TWO_PI, center=0.25)
        z = 1.3 + 0.4j
        assert height(lifted, z) == pytest.approx(height(base, z) + 0.25, rel=1e-12)

    def test_coordinates_are_harmonic(self):
        data = perturbed_two_cover(1.0, 0.05)
        # five-point Laplacian in (log r, theta) on each coordinate
        h = 1e-3
        z0 = 1.1 * np.exp(0.7j)
        t0, th0 = math.log(1.1), 0.7

        def at(t, th):
            return immerse(data, math.exp(t) * np.exp(1j * th))

        lap = (
            at(t0 + h, th0)
            + at(t0 - h, th0)
            + at(t0, th0 + h)
            + at(t0, th0 - h)
            - 4.0 * at(t0, th0)
        ) / h**2
        scale = np.max(np.abs(at(t0, th0))) + 1.0
        assert np.max(np.abs(lap)) <= 1e-6 * scale

    def test_metric_factor_matches_curve_speed(self):
        data = figure_eight(1.0, 1.0)
        r, th = 1.2, 0.9
        z = r * np.exp(1j * th)
        h = 1e-5
        dtheta = (immerse(data, r * np.exp(1j * (th + h))) - immerse(
            data, r * np.exp(1j * (th - h))
        )) / (2.0 * h)
        speed = float(np.linalg.norm(dtheta))
        mf = metric_factor(data, z)
        assert mf.mu == pytest.approx(speed, rel=1e-8)
        assert mf.lam == pytest.approx(speed / r, rel=1e-8)
        sample = metric_lambda_samples(data, np.array([z]))[0]
        assert sample == pytest.approx(mf.lam, rel=1e-13)

    def test_rejects_origin(self):
        data, _ = catenoid_cover(1, TWO_PI)
        with pytest.raises(DomainError):
            immerse(data, 0.0)


class TestPeriodsAndFlux:
    def test_catenoid_flux_is_prescribed(self):
        for k in (1, 2, 3):
            data, params = catenoid_cover(k, 5.0)
            verdict = period_check(data)
            assert verdict.well_defined and verdict.vertical_flux
            fl = flux(data)
            assert fl.f3 == pytest.approx(5.0, rel=1e-12)
            assert abs(fl.f1) <= 1e-12 and abs(fl.f2) <= 1e-12
            assert params.f3 == pytest.approx(5.0)

    def test_flux_matches_mean_height_slope(self):
        # independent quadrature oracle: the circle-mean of the third
        # coordinate grows linearly in log r with slope f3 / (2*pi).
        data = figure_eight(1.0, 1.0)
        f3 = flux(data).f3
        theta = TWO_PI * np.arange(512) / 512
        r1, r2 = 0.8, 1.45
        m1 = float(np.mean(immerse(data, r1 * np.exp(1j * theta))[:, 2]))
        m2 = float(np.mean(immerse(data, r2 * np.exp(1j * theta))[:, 2]))
        slope = (m2 - m1) / (math.log(r2) - math.log(r1))
        assert f3 == pytest.approx(TWO_PI * slope, rel=1e-10)

    def test_nonvanishing_mean_fails_vertical_flux(self):
        data = make_even({0: 1.0, 1: 0.25}, {0: 1.0, -1: 0.25})
        verdict = period_check(data)
        assert not verdict.vertical_flux
        assert not verdict.well_defined

    def test_flux_requires_passing_periods(self):
        data = make_even({0: 1.0, 1: 0.25}, {0: 1.0, -1: 0.25})
        from minann.errors import PreconditionError

        with pytest.raises(PreconditionError):
            flux(data)


class TestSymmetry:
    def test_symmetric_families_pass(self):
        assert symmetry_check(perturbed_two_cover(1.0, 0.05))
        assert symmetry_check(figure_eight(1.0, 1.0))
        data, _ = catenoid_cover(2, TWO_PI)
        assert symmetry_check(data)

    def test_asymmetric_data_fails(self):
        data = make_even({0: 1.0, 1: 0.25}, {-1: 2.0})
        assert not symmetry_check(data)

    def test_reflection_identity_on_points(self):
        data = figure_eight(1.0, 1.0)
        rng = np.random.default_rng(3)
        for _ in range(25):
            r = float(rng.uniform(0.75, 1.35))
            th = float(rng.uniform(0.0, TWO_PI))
            z = r * np.exp(1j * th)
            direct = immerse(data, z)
            mirrored = immerse(data, 1.0 / np.conj(z))
            assert np.allclose(
                mirrored, direct * np.array([1.0, 1.0, -1.0]), atol=1e-10
            )


class TestWindings:
    def test_cover_windings_are_positive_degree(self):
        for k in (1, 2, 3):
            data, _ = catenoid_cover(k, TWO_PI)
            r = data.window.geometric_mean
            assert gauss_winding(data, r) == k
            assert winding_class(data) == k

    def test_family_winding_classes(self):
        perturbed = perturbed_two_cover(1.0, 0.05)
        assert gauss_winding(perturbed, perturbed.window.geometric_mean) == 2
        assert winding_class(perturbed) == 2
        fig8 = figure_eight(1.0, 1.0)
        assert gauss_winding(fig8, fig8.window.geometric_mean) == 0
        assert winding_class(fig8) == 0


class TestSerialization:
    def test_roundtrip_coefficient_exact(self):
        data = figure_eight(1.0 + 0.25j, 0.75)
        back = data_from_json(data_to_json(data))
        assert back.g_minus == data.g_minus
        assert back.g_plus == data.g_plus
        assert back.parity is data.parity
        assert back.window == data.window
        assert back.height_offset == data.height_offset

    def test_offset_survives_roundtrip(self):
        data, _ = catenoid_cover(1, TWO_PI, center=0.4)
        back = data_from_json(data_to_json(data))
        assert back.height_offset == pytest.approx(0.4)

    def test_schema_rejects_unknown_and_missing(self):
        doc = data_to_json(figure_eight(1.0, 1.0))
        bad = dict(doc)
        bad["junk"] = 1
        with pytest.raises(SchemaError):
            data_from_json(bad)
        missing = dict(doc)
        del missing["parity"]
        with pytest.raises(SchemaError):
            data_from_json(missing)
        with pytest.raises(SchemaError):
            data_from_json([1, 2, 3])


class TestSlab:
    def test_basic_geometry(self):
        s = Slab(-0.5, 1.5)
        assert s.center == pytest.approx(0.5)
        assert s.half_width == pytest.approx(1.0)
        with pytest.raises(DomainError):
            Slab(1.0, 1.0)
