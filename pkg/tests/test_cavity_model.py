import math

import mpmath
import numpy as np
import pytest

from cylcasimir.cavity_model import (
    CavityGeometry,
    ModeIndex,
    PlasmaCutoff,
    casimir_energy,
    casimir_forces,
    cutoff_weight,
    cutoff_weight_np,
    dimensionless_force_sums,
    energy_integrand,
    force_axial,
    force_finite_difference,
    force_radial,
    force_sum_convergence,
    forces_from_sums,
    mode_energy_closed,
    mode_wavenumber,
    _dimensionless_kernel,
)
from cylcasimir.constants import HBAR_C
from cylcasimir.specfun import QuadratureSpec, integrate
from cylcasimir.sum_engine import TruncationOrder

BASE = CavityGeometry(1e-7, 1e-7)
CUT = PlasmaCutoff(1e16)
K50 = TruncationOrder.cube(50)


class TestTypes:
    def test_geometry(self):
        g = CavityGeometry(3e-7, 2e-7)
        assert g.alpha_ratio == 1.5
        assert g.scaled(2).a == 6e-7
        for bad in ((0, 1), (1, -1), (float("nan"), 1)):
            with pytest.raises(ValueError):
                CavityGeometry(*bad)

    def test_cutoff(self):
        assert CUT.u_p == 1e16 / 2.99792458e8
        assert CUT.y_p(BASE) == pytest.approx(3.335640952, rel=1e-10)
        with pytest.raises(ValueError):
            PlasmaCutoff(0.0)

    def test_mode_index(self):
        assert ModeIndex(0, 1, 1).eta == 1
        assert ModeIndex(3, 1, 1).eta == 2
        with pytest.raises(ValueError):
            ModeIndex(0, 0, 1)


class TestModes:
    def test_wavenumber_example(self, zeros_small):
        A = mode_wavenumber(ModeIndex(0, 1, 1), CavityGeometry(1.0, 1.0), zeros_small)
        assert A == pytest.approx(3.956360, abs=1e-6)

    def test_wavenumber_scaling_and_limit(self, zeros_small):
        g = CavityGeometry(1.3, 0.7)
        idx = ModeIndex(4, 2, 9)
        A = mode_wavenumber(idx, g, zeros_small)
        assert mode_wavenumber(idx, g.scaled(5.0), zeros_small) == pytest.approx(A / 5.0, rel=1e-15)
        big = mode_wavenumber(ModeIndex(4, 2, 10**7), g, zeros_small)
        assert big / (10**7 * math.pi / g.b) == pytest.approx(1.0, rel=1e-12)

    def test_wavenumber_monotone(self, zeros_small):
        g = CavityGeometry(1.0, 1.0)
        A = lambda m, n, l: mode_wavenumber(ModeIndex(m, n, l), g, zeros_small)
        assert A(0, 1, 1) < A(1, 1, 1) < A(1, 2, 1) < A(1, 2, 2)
        with pytest.raises(IndexError):
            A(61, 1, 1)

    def test_integrand_values(self):
        assert energy_integrand(0.0, 2.0) == 1.0
        assert energy_integrand(2.0, 2.0) == -1.0
        assert energy_integrand(1e12, 2.0) == pytest.approx(-3.0, rel=1e-12)

    def test_closed_form_example(self):
        A, up = 3.956360, 3.335641
        quad = integrate(lambda u: energy_integrand(u, A), 0.0, up, QuadratureSpec(1e-15, 1e-13))
        assert mode_energy_closed(A, up)[0] == pytest.approx(quad, rel=1e-10)

    def test_closed_form_sample(self):
        rng = np.random.default_rng(7)
        for A, up in zip(rng.uniform(0.5, 200, 20), rng.uniform(0.1, 300, 20)):
            quad = integrate(lambda u: energy_integrand(u, A), 0.0, up, QuadratureSpec(1e-15, 1e-13))
            full, _ = mode_energy_closed(A, up)
            assert abs(full - quad) <= 1e-10 * abs(quad)

    def test_closed_form_limits(self):
        A = 2.5
        assert mode_energy_closed(A, 1e-9)[1] == pytest.approx(1e-9, rel=1e-12)
        assert mode_energy_closed(A, 1e15)[1] == pytest.approx(A * math.pi / 2, rel=1e-12)


class TestCutoffWeight:
    def test_against_mpmath(self):
        mpmath.mp.dps = 40
        for t in np.logspace(-6, 4, 300):
            ref = float(mpmath.atan(t) - t / (1 + mpmath.mpf(t) ** 2))
            assert cutoff_weight(t) == pytest.approx(ref, rel=2e-15)
            assert float(cutoff_weight_np(t)) == pytest.approx(ref, rel=2e-15)

    def test_series_switch_is_continuous(self):
        lo, hi = np.nextafter(0.1, 0.0), 0.1
        assert cutoff_weight(hi) / cutoff_weight(lo) - 1 < 1e-14

    def test_small_t_has_no_cancellation(self):
        assert cutoff_weight(1e-8) == pytest.approx(2e-24 / 3, rel=1e-14)

    def test_term_positivity(self):
        rng = np.random.default_rng(2024)
        x = rng.uniform(2.4, 2000.0, 10_000)
        q = rng.uniform(1e-2, 1e4, 10_000)
        yp = 10 ** rng.uniform(-2, 3, 10_000)
        zeros = x.reshape(1, -1)
        for i in range(x.size):
            alpha = q[i] / math.pi
            a, b = _dimensionless_kernel(0, i + 1, 1, zeros, np.array([alpha, yp[i]]))
            assert a > 0 and b > 0


class TestSums:
    def test_table_row_10(self, zeros_small):
        ia, ib = dimensionless_force_sums(1.0, 10.0 / 3.0, TruncationOrder.cube(10), zeros_small)
        assert ia == pytest.approx(51.18525157, rel=1e-9)
        assert ib == pytest.approx(32.03410391, rel=1e-9)
        ia, ib = dimensionless_force_sums(4.0, 10.0 / 3.0, TruncationOrder.cube(10), zeros_small)
        assert ia == pytest.approx(8.17224682, rel=1e-9)
        assert ib == pytest.approx(53.96587042, rel=1e-9)

    def test_convergence_matches_box(self, zeros_small):
        rep = force_sum_convergence(1.5, 3.0, zeros_small, (10, 30))
        assert rep.value(30) == dimensionless_force_sums(1.5, 3.0, TruncationOrder.cube(30), zeros_small)

    def test_monotone_in_truncation(self, zeros_small):
        rep = force_sum_convergence(0.7, 3.3, zeros_small, tuple(range(5, 61, 5)))
        assert np.all(np.diff(rep.values_a) > 0) and np.all(np.diff(rep.values_b) > 0)

    @pytest.mark.parametrize("geom", [BASE, CavityGeometry(1e-7, 4e-7), CavityGeometry(2.5e-7, 1e-7)])
    def test_routes_agree(self, zeros_small, geom):
        ia, ib = dimensionless_force_sums(geom.alpha_ratio, CUT.y_p(geom), K50, zeros_small)
        fa, fb = forces_from_sums(geom, ia, ib)
        pa, pb = casimir_forces(geom, CUT, K50, zeros_small)
        assert abs(fa - pa) <= 1e-12 * pa
        assert abs(fb - pb) <= 1e-12 * pb

    def test_dimensionless_invariance(self, zeros_small):
        g2, c2 = BASE.scaled(2.0), PlasmaCutoff(CUT.omega_p / 2)
        assert c2.y_p(g2) == CUT.y_p(BASE)
        one = dimensionless_force_sums(BASE.alpha_ratio, CUT.y_p(BASE), K50, zeros_small)
        two = dimensionless_force_sums(g2.alpha_ratio, c2.y_p(g2), K50, zeros_small)
        assert one == two

    def test_scaled_geometry_quarter_force(self, zeros_small):
        fa, fb = casimir_forces(BASE, CUT, K50, zeros_small)
        ga, gb = casimir_forces(BASE.scaled(2.0), PlasmaCutoff(CUT.omega_p / 2), K50, zeros_small)
        assert ga == pytest.approx(fa / 4, rel=1e-13)
        assert gb == pytest.approx(fb / 4, rel=1e-13)

    def test_prefactor(self, zeros_small):
        ia, ib = dimensionless_force_sums(1.0, CUT.y_p(BASE), TruncationOrder.cube(10), zeros_small)
        fa, _ = forces_from_sums(BASE, ia, ib)
        assert fa == pytest.approx(HBAR_C * ia / (math.pi * 1e-14), rel=1e-15)

    def test_single_component_helpers(self, zeros_small):
        k = TruncationOrder.cube(12)
        fa, fb = casimir_forces(BASE, CUT, k, zeros_small)
        assert force_radial(BASE, CUT, k, zeros_small) == fa
        assert force_axial(BASE, CUT, k, zeros_small) == fb
        assert fa > 0 and fb > 0

    def test_invalid_inputs(self, zeros_small):
        with pytest.raises(ValueError):
            dimensionless_force_sums(0.0, 3.0, K50, zeros_small)
        with pytest.raises(IndexError):
            dimensionless_force_sums(1.0, 3.0, TruncationOrder.cube(61), zeros_small)


class TestEnergy:
    def test_monotone(self, zeros_small):
        e50 = casimir_energy(BASE, CUT, K50, zeros_small)
        e60 = casimir_energy(BASE, CUT, TruncationOrder.cube(60), zeros_small)
        assert 0 < e50 < e60

    def test_homogeneity(self, zeros_small):
        e = casimir_energy(BASE, CUT, K50, zeros_small)
        e3 = casimir_energy(BASE.scaled(3.0), PlasmaCutoff(CUT.omega_p / 3), K50, zeros_small)
        assert e3 == pytest.approx(e / 3, rel=1e-13)

    @pytest.mark.parametrize("which", ["radial", "axial"])
    def test_forces_match_finite_differences(self, zeros_small, which):
        fa, fb = casimir_forces(BASE, CUT, K50, zeros_small)
        analytic = fa if which == "radial" else fb
        fd = force_finite_difference(BASE, CUT, K50, zeros_small, which)
        assert abs(fd - analytic) <= 1e-6 * analytic

    def test_finite_difference_is_second_order(self, zeros_small):
        k = TruncationOrder.cube(20)
        exact = force_radial(BASE, CUT, k, zeros_small)
        e1 = abs(force_finite_difference(BASE, CUT, k, zeros_small, h=4e-10) - exact)
        e2 = abs(force_finite_difference(BASE, CUT, k, zeros_small, h=2e-10) - exact)
        assert 3.0 < e1 / e2 < 5.0

    @pytest.mark.parametrize("h", [0.0, -1e-9, 6e-8])
    def test_degenerate_step(self, zeros_small, h):
        with pytest.raises(ValueError):
            force_finite_difference(BASE, CUT, K50, zeros_small, h=h)

    def test_bad_component(self, zeros_small):
        with pytest.raises(ValueError):
            force_finite_difference(BASE, CUT, K50, zeros_small, which="z")
