import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sci_integrate

from incoherent_pairs.spectral import (
    AmplitudeSpectrum,
    IntensitySpectrum,
    PerturbationKind,
    PerturbationSpec,
    apply_perturbation,
    area_normalize,
    centroid,
    default_grid,
    flat_top_profile,
    gaussian_profile,
    integrate,
    lineshape_coefficients,
    lorentzian_profile,
    make_grid,
    tvd_asymmetry,
    voigt_profile,
)


class TestGrid:
    def test_samples(self):
        assert np.array_equal(make_grid(0, 10, 5).samples, [-5, -2.5, 0, 2.5, 5])
        np.testing.assert_allclose(make_grid(2.4, 4, 3).samples, [0.4, 2.4, 4.4], rtol=0, atol=1e-15)

    def test_exact_center(self):
        g = make_grid(1.2345, 7.7, 1025)
        assert g.samples[g.half] == 1.2345
        assert np.all(np.diff(g.samples) > 0)

    @pytest.mark.parametrize("args", [(0, 10, 4), (0, 10, 1), (0, 0, 5), (0, -1, 5)])
    def test_rejects(self, args):
        with pytest.raises(ValueError):
            make_grid(*args)


class TestLineshapes:
    def test_gaussian_values(self):
        g = make_grid(0, 8, 9)
        a = gaussian_profile(g, 0.0, 1.0)
        assert a.values[4] == 1.0
        assert a.values[5] == pytest.approx(math.exp(-0.5), abs=1e-15)
        assert np.array_equal(a.values, a.values[::-1])

    def test_lorentzian_values(self):
        a = lorentzian_profile(make_grid(0, 4, 5), 0.0, 1.0)
        assert a.values[2] == 1.0
        assert a.values[3] == 0.5

    @pytest.mark.parametrize("fn", [gaussian_profile, lorentzian_profile])
    def test_rejects_width(self, fn):
        with pytest.raises(ValueError):
            fn(default_grid(), 0.0, 0.0)

    def test_voigt_limits(self):
        g = default_grid()
        np.testing.assert_allclose(voigt_profile(g, 0, 1.0, 1e-7).values,
                                   gaussian_profile(g, 0, 1.0).values, atol=1e-3)
        np.testing.assert_allclose(voigt_profile(g, 0, 1e-7, 1.0).values,
                                   lorentzian_profile(g, 0, 1.0).values, atol=1e-3)
        assert voigt_profile(g, 0, 1.0, 1.0).values[g.half] == pytest.approx(1.0, abs=1e-15)
        with pytest.raises(ValueError):
            voigt_profile(g, 0, 0.0, 1.0)

    def test_voigt_matches_grid_convolution(self):
        # oracle: brute-force quadrature of the Gaussian-Lorentzian convolution
        def conv(x):
            f = lambda u: math.exp(-u * u / 2) / math.sqrt(2 * math.pi) / (math.pi * (1 + (x - u) ** 2))
            return sci_integrate.quad(f, -40, 40, points=[x], limit=400)[0]

        g = make_grid(0, 8, 9)
        expected = np.array([conv(x) for x in g.samples])
        np.testing.assert_allclose(voigt_profile(g, 0, 1.0, 1.0).values, expected / conv(0.0),
                                   rtol=1e-8)


class TestPerturbation:
    def test_zero_epsilon_identity(self):
        a = gaussian_profile(default_grid(), 0, 1)
        for kind in PerturbationKind:
            out = apply_perturbation(a, PerturbationSpec(kind, 0.0, 3.0), 0.0, 1.0)
            assert np.array_equal(out.values, a.values)

    def test_offset_gaussian_construction(self):
        g = default_grid()
        a = gaussian_profile(g, 0, 1)
        out = apply_perturbation(a, PerturbationSpec("offset-gaussian", 0.15, 3.0), 0.0, 1.0)
        w = g.samples
        np.testing.assert_allclose(out.values, np.exp(-w ** 2 / 2) + 0.15 * np.exp(-(w - 3) ** 2 / 2),
                                   rtol=1e-14)

    def test_tilt_is_dimensionless_offset(self):
        g = make_grid(5.0, 16.0, 1025)
        a = gaussian_profile(g, 5.0, 2.0)
        out = apply_perturbation(a, PerturbationSpec("linear-tilt", 0.1), 5.0, 2.0)
        np.testing.assert_allclose(out.values, a.values * (1 + 0.1 * (g.samples - 5.0) / 2.0))

    def test_negative_amplitude_kept(self):
        a = gaussian_profile(default_grid(), 0, 1)
        out = apply_perturbation(a, PerturbationSpec("linear-tilt", 0.5), 0.0, 1.0)
        assert out.values.min() < 0

    def test_tilt_asymmetric(self):
        a = gaussian_profile(default_grid(), 0, 1)
        out = apply_perturbation(a, PerturbationSpec("linear-tilt", 0.1), 0.0, 1.0)
        assert tvd_asymmetry(out.intensity()) > 0

    def test_rejects_negative_epsilon(self):
        with pytest.raises(ValueError):
            PerturbationSpec("linear-tilt", -0.1)


class TestNormalizeCentroid:
    def test_idempotent_and_scale_invariant(self):
        s = gaussian_profile(default_grid(), 0.3, 1.0).intensity()
        n1 = area_normalize(s)
        assert integrate(n1.values, n1.grid) == pytest.approx(1.0, rel=1e-12)
        np.testing.assert_allclose(area_normalize(n1).values, n1.values, rtol=1e-12)
        scaled = IntensitySpectrum(s.grid, 7.5 * s.values)
        np.testing.assert_allclose(area_normalize(scaled).values, n1.values, rtol=1e-12)

    def test_constant(self):
        g = make_grid(0, 4, 101)
        out = area_normalize(IntensitySpectrum(g, np.full(101, 3.0)))
        np.testing.assert_allclose(out.values, 0.25, rtol=1e-12)

    def test_rejects_zero(self):
        z = IntensitySpectrum(default_grid(), np.zeros(1025))
        for fn in (area_normalize, centroid, tvd_asymmetry):
            with pytest.raises(ValueError):
                fn(z)

    def test_symmetric_centroids(self):
        g = default_grid(center=2.0)
        assert centroid(gaussian_profile(g, 2.0, 1.0).intensity()) == pytest.approx(2.0, abs=g.step * 1e-10)
        vals = np.zeros(g.count)
        vals[g.half - 40] = vals[g.half + 40] = 1.0
        assert centroid(IntensitySpectrum(g, vals)) == pytest.approx(2.0, abs=1e-12)

    def test_tilted_centroid_against_quadrature(self):
        eps = 0.2
        num = sci_integrate.quad(lambda x: x * math.exp(-x * x) * (1 + eps * x) ** 2, -np.inf, np.inf)[0]
        den = sci_integrate.quad(lambda x: math.exp(-x * x) * (1 + eps * x) ** 2, -np.inf, np.inf)[0]
        a = apply_perturbation(gaussian_profile(default_grid(), 0, 1),
                               PerturbationSpec("linear-tilt", eps), 0.0, 1.0)
        mu = centroid(a.intensity())
        assert mu > 0
        assert mu == pytest.approx(num / den, rel=1e-10)


def _tilted(eps, count):
    a = gaussian_profile(default_grid(count=count), 0, 1)
    return apply_perturbation(a, PerturbationSpec("linear-tilt", eps), 0.0, 1.0).intensity()


class TestTvd:
    def test_symmetric_zero(self):
        assert tvd_asymmetry(gaussian_profile(default_grid(), 0, 1).intensity()) < 1e-10
        assert tvd_asymmetry(lorentzian_profile(default_grid(), 0, 1).intensity()) < 1e-10

    def test_disjoint_peaks_bounded(self):
        g = make_grid(0, 20, 2001)
        w = g.samples
        vals = np.exp(-((w + 7) / 0.05) ** 2) + 3 * np.exp(-((w - 2) / 0.05) ** 2)
        t = tvd_asymmetry(IntensitySpectrum(g, vals))
        assert 0.9 < t <= 1.0

    def test_tilt_sequence_increasing_and_converged(self):
        eps = [0.05, 0.1, 0.2, 0.3]
        coarse = [tvd_asymmetry(_tilted(e, 1025)) for e in eps]
        fine = [tvd_asymmetry(_tilted(e, 4097)) for e in eps]
        assert all(b > a for a, b in zip(coarse, coarse[1:]))
        np.testing.assert_allclose(coarse, fine, atol=1e-4, rtol=0)

    def test_mirror_and_translation_invariance(self):
        s = _tilted(0.3, 1025)
        t = tvd_asymmetry(s)
        mirrored = IntensitySpectrum(s.grid, s.values[::-1])
        assert tvd_asymmetry(mirrored) == pytest.approx(t, abs=1e-10)
        shifted = IntensitySpectrum(make_grid(123.456, s.grid.span, s.grid.count), s.values)
        assert tvd_asymmetry(shifted) == pytest.approx(t, abs=1e-10)
        assert tvd_asymmetry(IntensitySpectrum(s.grid, 1e6 * s.values)) == pytest.approx(t, abs=1e-10)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(0, 10, allow_nan=False), min_size=5, max_size=60)
           .filter(lambda v: sum(v) > 1e-3))
    def test_bounds(self, vals):
        n = len(vals) if len(vals) % 2 else len(vals) - 1
        g = make_grid(0, 1, n)
        t = tvd_asymmetry(IntensitySpectrum(g, np.array(vals[:n])))
        assert 0.0 <= t <= 1.0

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.05, 0.6), st.floats(-3, 3), st.floats(0.01, 100))
    def test_invariances_property(self, eps, shift, scale):
        s = _tilted(eps, 257)
        t = tvd_asymmetry(s)
        moved = IntensitySpectrum(make_grid(shift, s.grid.span, s.grid.count), scale * s.values)
        assert tvd_asymmetry(moved) == pytest.approx(t, abs=1e-10)
        assert tvd_asymmetry(IntensitySpectrum(s.grid, s.values[::-1])) == pytest.approx(t, abs=1e-10)


class TestLineshapeCoefficients:
    def test_gaussian(self):
        c1, c2 = lineshape_coefficients(gaussian_profile(default_grid(), 0, 1))
        assert c1 == pytest.approx(math.sqrt(2), abs=1e-9)
        assert c2 == pytest.approx(2 / math.sqrt(3), abs=1e-9)
        assert round(c2 / c1, 2) == 0.82

    def test_gaussian_converges_at_4097(self):
        c1, c2 = lineshape_coefficients(gaussian_profile(default_grid(count=4097), 0, 1))
        assert abs(c1 - math.sqrt(2)) < 1e-6 and abs(c2 - 2 / math.sqrt(3)) < 1e-6

    def test_lorentzian_with_wing_closure(self):
        g = make_grid(0, 400, 4097)
        c1, c2 = lineshape_coefficients(lorentzian_profile(g, 0, 1), wing_exponent=2)
        assert c1 == pytest.approx(2.0, abs=1e-6)
        assert c2 == pytest.approx(1.2, abs=1e-6)
        assert round(c2 / c1, 2) == 0.60

    def test_lorentzian_truncated_grid_is_biased(self):
        # the +-8 gamma default grid loses ~8% of the Lorentzian area
        c1, _ = lineshape_coefficients(lorentzian_profile(default_grid(), 0, 1))
        assert c1 < 1.9

    def test_flat_top(self):
        g = make_grid(0, 4, 401)
        a = flat_top_profile(g, 0.0, 1.0)
        # trapezoid rule on a box ending at nodes is exact
        assert lineshape_coefficients(a) == pytest.approx((1.0, 1.0), abs=1e-12)

    def test_voigt_ordering(self):
        g = make_grid(0, 400, 4097)
        ratio = lambda a: (lambda c: c[1] / c[0])(lineshape_coefficients(a, wing_exponent=2))
        r_l = ratio(lorentzian_profile(g, 0, 1))
        r_v = ratio(voigt_profile(g, 0, 1, 1))
        r_g = ratio(gaussian_profile(g, 0, 1))
        assert r_l < r_v < r_g
        assert r_v == pytest.approx(0.68, abs=0.01)

    @pytest.mark.parametrize("k", [0.5, 2.0, 3.0])
    def test_width_scaling(self, k):
        # both coefficients are ratios of integrals that scale alike, so stretching cancels
        g = make_grid(0, 16, 4097)
        base = lineshape_coefficients(gaussian_profile(g, 0, 1))
        stretched = lineshape_coefficients(gaussian_profile(g.scaled(k), 0, k))
        np.testing.assert_allclose(stretched, base, rtol=1e-8)

    def test_rejects_negative(self):
        a = AmplitudeSpectrum(make_grid(0, 2, 3), np.array([1.0, -1.0, 1.0]))
        with pytest.raises(ValueError):
            lineshape_coefficients(a)
