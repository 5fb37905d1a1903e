import math

import mpmath
import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from cylcasimir.specfun import (
    BesselZeroTable,
    CorruptCacheError,
    QuadratureError,
    QuadratureSpec,
    bessel_j,
    bessel_j_prime,
    bessel_zero,
    build_zero_table,
    gauss_legendre,
    integrate,
    load_zero_table,
    normalization_closed_form,
    normalization_integral,
    save_zero_table,
)
from cylcasimir.specfun import _bessel_kernels as bk
from cylcasimir.specfun import zeros as zmod

mpmath.mp.dps = 30


def _envelope(m, x):
    return np.maximum(np.abs(sp.jv(m, x)), np.hypot(sp.jv(m, x), sp.yv(m, x)))


def _mp_j(m, x):
    return float(mpmath.besselj(m, mpmath.mpf(float(x)), maxterms=10**6, maxprec=20000))


# ---------------------------------------------------------------------------
# J_m values


class TestBesselValues:
    def test_origin(self):
        assert bessel_j(0, 0.0) == 1.0
        for m in (1, 2, 7, 500):
            assert bessel_j(m, 0.0) == 0.0

    def test_first_zero_of_j0(self):
        x01 = bessel_zero(0, 1)
        assert abs(bessel_j(0, x01)) < 1e-15
        # the 6-digit value sits 4.4e-7 from the root, so J_0 there is ~2.3e-7,
        # which is the tangent-line estimate
        assert bessel_j(0, 2.404826) == pytest.approx(-bessel_j(1, x01) * (2.404826 - x01), rel=1e-6)

    @pytest.mark.parametrize("m", [0, 1, 2, 3, 5, 8, 13, 20])
    def test_low_orders_against_scipy(self, m):
        lo, hi = max(1.0, m / 2), 4.0 * max(m, 10)
        x = np.linspace(lo, hi, 4001)
        err = np.abs(bessel_j(m, x) - sp.jv(m, x)) / _envelope(m, x)
        assert err.max() < 1e-12
        outside = np.concatenate([np.linspace(0.0, lo, 400), np.linspace(hi, 3 * hi, 400)])
        assert np.abs(bessel_j(m, outside) - sp.jv(m, outside)).max() < 1e-14

    @pytest.mark.parametrize("m", [50, 100, 250, 500, 1000, 1001])
    def test_high_orders_against_mpmath(self, m):
        lo, hi = max(1.0, m / 2), 4.0 * max(m, 10)
        rng = np.random.default_rng(m)
        xs = np.sort(rng.uniform(lo, hi, 12))
        env = _envelope(m, xs)
        for x, e in zip(xs, env):
            assert abs(bessel_j(m, x) - _mp_j(m, x)) <= 1e-12 * e
        for x in (0.3 * m, 0.45 * m, 4.5 * m):
            assert abs(bessel_j(m, x) - _mp_j(m, x)) <= 1e-14

    @pytest.mark.parametrize("m", [0, 1, 4, 30, 120, 400])
    def test_numpy_path_matches_numba_path(self, m):
        x = np.linspace(0.0, 5.0 * max(m, 10), 2000)
        j_nb = bk.jn_pair_many(m, x)[0]
        j_np = bk.jn_pair_np(m, x)[0]
        env = np.maximum(_envelope(m, np.maximum(x, 1e-300)), 1e-300)
        mask = x > 0
        assert np.all(np.abs(j_nb - j_np)[mask] <= 1e-13 * env[mask] + 1e-300)

    def test_scalar_and_array_agree(self):
        x = np.array([0.5, 3.0, 17.0, 40.0])
        arr = bessel_j(3, x)
        assert all(arr[i] == bessel_j(3, float(x[i])) for i in range(x.size))

    @pytest.mark.parametrize("bad", [(-1, 1.0), (0, -0.5), (0, float("nan")), (0, float("inf")), (10**6, 1.0)])
    def test_domain_errors(self, bad):
        with pytest.raises(ValueError):
            bessel_j(*bad)

    @settings(max_examples=200, deadline=None)
    @given(m=st.integers(1, 300), x=st.floats(0.5, 1500.0))
    def test_three_term_recurrence(self, m, x):
        lhs = bessel_j(m - 1, x) + bessel_j(m + 1, x)
        rhs = 2.0 * m / x * bessel_j(m, x)
        scale = float(_envelope(m, x)) * (1.0 + 2.0 * m / x)
        assert abs(lhs - rhs) <= 1e-12 * scale + 1e-15


class TestBesselDerivative:
    def test_order_zero(self):
        x = np.linspace(0.1, 60.0, 500)
        assert np.abs(bessel_j_prime(0, x) + bessel_j(1, x)).max() < 1e-15

    def test_limit_at_origin(self):
        assert bessel_j_prime(1, 0.0) == 0.5
        assert bessel_j_prime(1, 1e-12) == pytest.approx(0.5, rel=1e-12)
        assert bessel_j_prime(2, 0.0) == 0.0

    def test_zero_of_j0_prime(self):
        assert abs(bessel_j_prime(0, 3.8317059702)) < 1e-9

    @pytest.mark.parametrize("m", [1, 2, 6, 25, 200])
    def test_difference_identity(self, m):
        x = np.linspace(max(1.0, m / 2), 4.0 * max(m, 10), 1500)
        half = 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x))
        env = _envelope(m, x)
        assert np.all(np.abs(bessel_j_prime(m, x) - half) <= 2e-12 * env)

    def test_against_scipy(self):
        x = np.linspace(0.5, 80.0, 800)
        for m in (0, 1, 3, 9):
            assert np.abs(bessel_j_prime(m, x) - sp.jvp(m, x)).max() < 1e-13


# ---------------------------------------------------------------------------
# zeros


class TestZeros:
    def test_reference_values(self):
        assert bessel_zero(0, 1) == pytest.approx(2.404826, abs=1e-6)
        assert bessel_zero(1, 1) == pytest.approx(3.8317059702, abs=1e-10)
        assert bessel_zero(0, 2) == pytest.approx(5.5200781103, abs=1e-10)

    def test_small_tables(self):
        t = build_zero_table(0, 1)
        assert t.zeros.shape == (1, 1)
        assert t.zero(0, 1) == pytest.approx(2.404826, abs=1e-6)
        t = build_zero_table(1, 2)
        assert t.zero(0, 1) < t.zero(1, 1) < t.zero(0, 2)

    def test_against_scipy_low_orders(self, zeros_small):
        for m in range(0, 61, 5):
            ref = sp.jn_zeros(m, 60)
            assert np.abs(zeros_small.zeros[m] - ref).max() < 1e-11

    @pytest.mark.parametrize("m,n", [(0, 500), (37, 211), (120, 3), (250, 250), (499, 1), (500, 500), (500, 37)])
    def test_against_mpmath(self, zeros_full, m, n):
        ref = float(mpmath.besseljzero(int(m), int(n)))
        assert abs(zeros_full.zero(m, n) - ref) <= 1e-11

    def test_interlacing_and_monotone(self, zeros_full):
        z = zeros_full.zeros
        assert np.all(np.diff(z, axis=1) > 0)
        assert np.all(z[:-1] < z[1:])
        assert np.all(z[1:, :-1] < z[:-1, 1:])

    def test_residuals(self, zeros_full):
        assert zeros_full.residuals().max() < 1e-10
        assert zeros_full.validate(tol=1e-10) < 1e-10

    @staticmethod
    def _mcmahon_excess(z, m, n):
        beta = (n + m / 2 - 0.25) * math.pi
        bound = (4 * m * m + 3) / (8 * beta) + 0.05
        return np.abs(z[m, n - 1] - beta) / bound

    @pytest.mark.xfail(
        strict=True,
        reason="first-order McMahon term is not a bound when n is close to m; "
        "true zeros exceed it by up to 2.7% (e.g. m = 25, n = 25 to 29)",
    )
    def test_mcmahon_envelope_all_n_ge_m(self, zeros_full):
        for m in range(0, 501, 25):
            n = np.arange(max(m, 1), 501)
            assert np.all(self._mcmahon_excess(zeros_full.zeros, m, n) < 1.0)

    def test_mcmahon_envelope_asymptotic_region(self, zeros_full):
        for m in range(0, 501, 5):
            lo = max(m, 1) if m <= 15 else 3 * m
            if lo > 500:
                continue
            n = np.arange(lo, 501)
            assert np.all(self._mcmahon_excess(zeros_full.zeros, m, n) < 1.0)

    def test_numpy_grid_matches_numba_grid(self):
        a = zmod.compute_zero_grid(25, 30, use_numba=True)
        b = zmod.compute_zero_grid(25, 30, use_numba=False)
        assert np.abs(a - b).max() < 1e-13

    def test_deterministic_rebuild(self):
        a = zmod.compute_zero_grid(40, 40)
        b = zmod.compute_zero_grid(40, 40)
        assert a.tobytes() == b.tobytes()

    def test_range_errors(self, zeros_small):
        with pytest.raises(IndexError):
            zeros_small.zero(61, 1)
        with pytest.raises(IndexError):
            zeros_small.zero(0, 0)
        with pytest.raises(IndexError):
            bessel_zero(-1, 1)
        with pytest.raises(IndexError):
            bessel_zero(0, 10**6)
        with pytest.raises(ValueError):
            build_zero_table(-1, 3)

    def test_table_is_read_only(self, zeros_small):
        with pytest.raises(ValueError):
            zeros_small.zeros[0, 0] = 1.0


class TestZeroCache:
    def test_round_trip(self, tmp_path):
        t = BesselZeroTable(6, 9, zmod.compute_zero_grid(6, 9))
        path = tmp_path / "z.bin"
        save_zero_table(t, path)
        back = load_zero_table(path)
        assert back.zeros.tobytes() == t.zeros.tobytes()
        assert (back.max_order, back.max_index, back.accuracy) == (6, 9, t.accuracy)
        assert back.checksum == t.checksum

    def test_layout(self, tmp_path):
        t = BesselZeroTable(2, 3, zmod.compute_zero_grid(2, 3))
        raw = t.to_bytes()
        assert raw[:8] == b"CYLBZT\x00\x01"
        assert len(raw) == 32 + 3 * 3 * 8 + 32
        head = zmod._HEADER.unpack_from(raw)
        assert head[1:5] == (1, 2, 3, 0)
        payload = np.frombuffer(raw, dtype="<f8", count=9, offset=32)
        assert np.array_equal(payload, t.zeros.ravel())

    def test_corrupt_cache_is_recomputed(self, tmp_path):
        path = tmp_path / "z.bin"
        good, status = zmod.load_or_build_zero_table(4, 5, path)
        assert status in ("computed", "recomputed")
        raw = bytearray(path.read_bytes())
        raw[40] ^= 0xFF
        path.write_bytes(bytes(raw))
        with pytest.raises(CorruptCacheError):
            load_zero_table(path)
        with pytest.warns(RuntimeWarning, match="checksum"):
            again, status = zmod.load_or_build_zero_table(4, 5, path)
        assert status == "recomputed"
        assert again.zeros.tobytes() == good.zeros.tobytes()
        assert load_zero_table(path).checksum == good.checksum

    def test_truncated_cache(self, tmp_path):
        path = tmp_path / "z.bin"
        path.write_bytes(b"CYLBZT")
        with pytest.raises(CorruptCacheError):
            load_zero_table(path)
        with pytest.warns(RuntimeWarning):
            t = build_zero_table(1, 2, path)
        assert t.zero(0, 1) == pytest.approx(2.404826, abs=1e-6)

    def test_valid_cache_is_loaded_and_sliced(self, tmp_path):
        path = tmp_path / "z.bin"
        zmod.load_or_build_zero_table(8, 8, path)
        t, status = zmod.load_or_build_zero_table(3, 5, path)
        assert status == "loaded"
        assert t.zeros.shape == (4, 5)
        assert load_zero_table(path).zeros.shape == (9, 8)

    def test_small_cache_grows(self, tmp_path):
        path = tmp_path / "z.bin"
        zmod.load_or_build_zero_table(8, 3, path)
        t, status = zmod.load_or_build_zero_table(2, 6, path)
        assert t.zeros.shape == (3, 6)
        assert load_zero_table(path).zeros.shape == (9, 6)

    def test_unreadable_cache_raises(self, tmp_path):
        path = tmp_path / "dir.bin"
        path.mkdir()
        with pytest.raises(OSError):
            build_zero_table(1, 1, path)


# ---------------------------------------------------------------------------
# quadrature


class TestQuadrature:
    def test_polynomial(self):
        assert integrate(lambda x: x * x, 0.0, 1.0) == pytest.approx(1.0 / 3.0, rel=1e-15)

    def test_zero_function_and_empty_interval(self):
        assert integrate(lambda x: 0.0 * x, -2.0, 5.0) == 0.0
        assert integrate(math.exp, 1.5, 1.5) == 0.0

    def test_scalar_only_function(self):
        assert integrate(math.sin, 0.0, math.pi) == pytest.approx(2.0, rel=1e-13)

    def test_reversed_limits_rejected(self):
        with pytest.raises(ValueError):
            integrate(np.exp, 1.0, 0.0)

    def test_breakpoints(self):
        val = integrate(np.abs, -1.0, 2.0, breakpoints=(0.0,))
        assert val == pytest.approx(2.5, rel=1e-15)

    def test_oscillatory(self):
        val = integrate(lambda x: np.cos(50 * x), 0.0, 1.0, QuadratureSpec(1e-14, 1e-13))
        assert val == pytest.approx(math.sin(50.0) / 50.0, rel=1e-12)

    def test_gauss_legendre_independent_rule(self):
        f = lambda x: x**3 / np.tanh(0.5 * x)
        assert gauss_legendre(f, 0.5, 3.0) == pytest.approx(integrate(f, 0.5, 3.0), rel=1e-12)

    def test_depth_exhaustion_raises(self):
        with pytest.raises(QuadratureError):
            integrate(lambda x: 1.0 / np.sqrt(np.abs(x - 0.3)), 0.0, 1.0, QuadratureSpec(1e-15, 1e-15, max_depth=3))

    @pytest.mark.parametrize("kw", [dict(abs_tol=0.0), dict(rel_tol=-1.0), dict(max_depth=0)])
    def test_spec_validation(self, kw):
        with pytest.raises(ValueError):
            QuadratureSpec(**kw)

    @settings(max_examples=40, deadline=None)
    @given(c=st.lists(st.floats(-5, 5), min_size=1, max_size=8), lo=st.floats(-3, 0), hi=st.floats(0.1, 3))
    def test_polynomials_exact(self, c, lo, hi):
        p = np.polynomial.Polynomial(c)
        exact = p.integ()(hi) - p.integ()(lo)
        got = integrate(p, lo, hi)
        assert abs(got - exact) <= 1e-12 + 1e-10 * abs(exact)


class TestNormalization:
    def test_first_mode(self):
        x01 = bessel_zero(0, 1)
        expected = x01**2 / 2 * bessel_j(1, x01) ** 2
        assert normalization_integral(0, 1) == pytest.approx(expected, rel=1e-8)

    @pytest.mark.parametrize("m,n", [(1, 1), (5, 3)])
    def test_examples(self, m, n):
        x = bessel_zero(m, n)
        expected = x**2 / 2 * float(sp.jv(m + 1, x)) ** 2
        assert normalization_integral(m, n) == pytest.approx(expected, rel=1e-8)

    def test_identity_grid(self):
        worst = 0.0
        for m in range(21):
            for n in range(1, 11):
                q = normalization_integral(m, n)
                c = normalization_closed_form(m, n)
                worst = max(worst, abs(q - c) / c)
        assert worst < 1e-8

    def test_scale_invariance(self):
        assert normalization_integral(3, 2, a=2.5e-7) == pytest.approx(normalization_integral(3, 2), rel=1e-10)
