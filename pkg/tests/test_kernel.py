import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from fracdirac.errors import ConvergenceError, ParameterError
from fracdirac.kernel import (ContourSpec, KernelQuery, bessel_zeros, heat_kernel, kernel,
                              kernel_at_origin, kernel_mellin_barnes, kernel_quadrature, kernel_radial,
                              kernel_residue_series_terms, kernel_wright, mellin_barnes_integrand,
                              worker_count)
from fracdirac.special import bessel_j


def cosine_oracle(alpha, x, tau=1.0):
    """1-D kernel ``pi**-1 int_0^inf exp(-tau xi**alpha) cos(x xi) d xi`` by adaptive quadrature."""
    f = lambda xi: math.exp(-tau * xi ** alpha) * math.cos(x * xi)
    upper = (50.0 / tau) ** (1 / alpha)
    val, _ = integrate.quad(f, 0, upper, epsabs=1e-14, epsrel=1e-13, limit=400)
    return val / math.pi


def fourier_oracle(alpha, n, r, tau):
    """Radial Fourier inversion via mpmath (independent of the package's quadrature)."""
    with mpmath.workdps(30):
        tau = mpmath.mpc(tau)
        nu = mpmath.mpf(n) / 2 - 1
        f = lambda p: mpmath.exp(-tau * p ** alpha) * p ** (n / mpmath.mpf(2)) * mpmath.besselj(nu, p * r)
        upper = (60 / abs(tau.real)) ** (1 / mpmath.mpf(alpha))
        v = mpmath.quad(f, mpmath.linspace(0, upper, 40))
        return complex(v * (2 * mpmath.pi) ** (-mpmath.mpf(n) / 2) * mpmath.mpf(r) ** (1 - mpmath.mpf(n) / 2))


class TestQuery:
    def test_rejects_left_half_plane(self):
        with pytest.raises(ParameterError):
            KernelQuery(2.5, 1, 1.0, -0.1 + 1j)

    @pytest.mark.parametrize("kw", [dict(n=0), dict(r=-1.0), dict(tau=0), dict(alpha=0.0)])
    def test_invalid(self, kw):
        args = dict(alpha=2.5, n=1, r=1.0, tau=1.0)
        args.update(kw)
        with pytest.raises(ParameterError):
            KernelQuery(**args)

    def test_lambda(self):
        assert KernelQuery(2.0, 1, 2.0, 1.0).lam == -1.0


class TestWright:
    def test_heat_kernel_at_origin(self):
        assert kernel_wright(KernelQuery(2, 1, 0, 1)) == pytest.approx(1 / math.sqrt(4 * math.pi), rel=1e-15)

    def test_origin_formula(self):
        want = math.gamma(0.5) / (8 * math.pi)
        assert kernel_wright(KernelQuery(4, 2, 0, 1)) == pytest.approx(want, rel=1e-15)
        assert kernel_at_origin(4, 2, 1) == pytest.approx(want, rel=1e-15)

    def test_alpha3_against_quadrature(self):
        q = KernelQuery(3, 1, 2, 1)
        assert kernel_wright(q) == pytest.approx(kernel_quadrature(q), rel=1e-8)
        assert kernel_wright(q) == pytest.approx(cosine_oracle(3, 2.0), rel=1e-10)

    def test_conjugate_symmetry(self):
        tau = cmath.exp(1j * math.pi / 5)
        for r in (0.0, 0.5, 1.5, 3.0):
            a = kernel_wright(KernelQuery(2.5, 2, r, tau))
            b = kernel_wright(KernelQuery(2.5, 2, r, tau.conjugate()))
            assert abs(a - b.conjugate()) <= 1e-14 * abs(a)
            c = kernel_quadrature(KernelQuery(2.5, 2, max(r, 0.1), tau))
            d = kernel_quadrature(KernelQuery(2.5, 2, max(r, 0.1), tau.conjugate()))
            assert abs(c - d.conjugate()) <= 1e-12 * abs(c)

    def test_complex_tau_against_fourier_oracle(self):
        tau = cmath.exp(0.3j * math.pi)
        for n, r in [(1, 1.0), (2, 2.5), (3, 0.7)]:
            got = kernel_wright(KernelQuery(2.5, n, r, tau))
            assert abs(got - fourier_oracle(2.5, n, r, tau)) <= 1e-10 * abs(got)

    def test_strong_cancellation_complex_tau(self):
        # |lambda| ~ 100 in a direction where the terms reach e**30
        q = KernelQuery(2.5, 1, 20.0, cmath.exp(0.25j * math.pi))
        assert abs(kernel_wright(q) - kernel_mellin_barnes(q)) <= 1e-9 * abs(kernel_mellin_barnes(q))

    def test_alpha_at_most_one_rejected(self):
        with pytest.raises(ParameterError):
            kernel_wright(KernelQuery(1.0, 1, 1.0, 1.0))

    def test_guard_delegates(self):
        q = KernelQuery(2.0, 1, 60.0, 1.0)  # |lambda| = 900
        v, info = kernel_wright(q, full_output=True)
        assert info["method"] == "quadrature"
        # exp(-900) underflows; the integral route is accurate to its absolute floor
        assert abs(v) <= 1e-15 * abs(kernel_at_origin(2.0, 1, 1.0))

    def test_full_output(self):
        v, info = kernel_wright(KernelQuery(3, 2, 1.0, 1.0), full_output=True)
        assert info["method"] == "wright" and info["terms_used"] > 5 and info["est_error"] < 1e-14

    def test_real_tau_gives_real_value(self):
        assert kernel_wright(KernelQuery(3, 1, 1.0, 1.0)).imag == 0.0


class TestHeat:
    def test_values(self):
        assert heat_kernel(1, 0, 1) == pytest.approx((4 * math.pi) ** -0.5)
        r = np.linspace(0, 10, 50)
        assert np.all(np.diff(heat_kernel(2, r, 1.0)) < 0)

    def test_mass(self):
        x = np.linspace(-12, 12, 1201)
        assert np.sum(heat_kernel(1, np.abs(x), 1.0)) * (x[1] - x[0]) == pytest.approx(1, abs=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_all_routes_collapse(self, n):
        for r in (0.3, 1.0, 2.5):
            want = heat_kernel(n, r, 1.0)
            q = KernelQuery(2.0, n, r, 1.0)
            assert kernel_wright(q) == pytest.approx(want, rel=1e-12)
            assert kernel_quadrature(q) == pytest.approx(want, rel=1e-10)
            assert kernel_mellin_barnes(q).real == pytest.approx(want, rel=1e-10)

    def test_quadrature_n3_value(self):
        q = KernelQuery(2, 3, 1, 1)
        assert kernel_quadrature(q) == pytest.approx((4 * math.pi) ** -1.5 * math.exp(-0.25), rel=1e-12)


class TestQuadrature:
    def test_alpha4_cosine_oracle(self):
        q = KernelQuery(4, 1, 0.5, 1)
        assert kernel_quadrature(q) == pytest.approx(cosine_oracle(4, 0.5), rel=1e-12)

    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    def test_matches_wright(self, r):
        q = KernelQuery(2.5, 2, r, 1.0)
        assert kernel_quadrature(q) == pytest.approx(kernel_wright(q), rel=1e-10)

    def test_refuses_imaginary_tau(self):
        with pytest.raises(ParameterError):
            kernel_quadrature(KernelQuery(3, 1, 1.0, 1j))

    def test_refuses_origin(self):
        with pytest.raises(ParameterError):
            kernel_quadrature(KernelQuery(3, 1, 0.0, 1.0))

    def test_small_alpha(self):
        # alpha = 1 (Cauchy/Poisson kernel) is within reach of the quadrature route
        q = KernelQuery(1.0, 1, 1.0, 1.0)
        assert kernel_quadrature(q) == pytest.approx(1 / (math.pi * 2), rel=1e-9)

    def test_bessel_zeros(self):
        for nu in (-0.5, 0.0, 0.5, 1.5):
            z = bessel_zeros(nu, 60.0)
            assert np.all(np.abs(bessel_j(nu, z)) < 1e-12)
            assert np.all(np.diff(z) > 0)


class TestMellinBarnes:
    def test_against_wright(self):
        q = KernelQuery(3, 1, 1, 1)
        spec = ContourSpec(-0.5, 40.0, 4001)
        assert kernel_mellin_barnes(q, spec, tol=1e-8) == pytest.approx(kernel_wright(q), rel=1e-8)

    def test_heat_n3(self):
        q = KernelQuery(2, 3, 1, 1)
        assert kernel_mellin_barnes(q).real == pytest.approx(heat_kernel(3, 1, 1), rel=1e-10)

    @pytest.mark.parametrize("c", [-1.0, 0.0, 0.2, -1.5])
    def test_contour_outside_strip(self, c):
        with pytest.raises(ParameterError):
            kernel_mellin_barnes(KernelQuery(3, 1, 1, 1), ContourSpec(c, 40.0, 4001))

    def test_node_parity(self):
        with pytest.raises(ParameterError):
            ContourSpec(-0.5, 40.0, 4000).validate(1)

    def test_tail_too_large(self):
        with pytest.raises(ConvergenceError) as exc:
            kernel_mellin_barnes(KernelQuery(3, 1, 1, 1), ContourSpec(-0.5, 2.0, 101))
        assert exc.value.estimate > 0

    def test_imaginary_tau_does_not_converge(self):
        with pytest.raises(ConvergenceError):
            kernel_mellin_barnes(KernelQuery(3, 1, 1, 1j))

    @pytest.mark.parametrize("direction", [1, -1])
    def test_integrand_decay_rate(self, direction):
        # |integrand| ~ exp(-(pi/2 + sign(y) arg tau) |y| / alpha), slowest side sets T
        tau = cmath.exp(0.2j)
        y = direction * np.array([100.0, 200.0])
        g = np.abs(mellin_barnes_integrand(-0.5 + 1j * y, 3.0, 1, 1.0, tau))
        slope = -np.log(g[1] / g[0]) / 100
        assert slope == pytest.approx((math.pi / 2 + direction * 0.2) / 3, rel=0.02)


class TestResidues:
    def test_partial_sums_converge(self):
        q = KernelQuery(3, 2, 1, 1)
        terms = kernel_residue_series_terms(q, 60)
        assert np.sum(terms) == pytest.approx(kernel_wright(q), rel=1e-13)

    def test_leading_term_at_small_r(self):
        q = KernelQuery(3, 2, 1e-6, 1)
        t0 = kernel_residue_series_terms(q, 1)[0]
        assert t0 == pytest.approx(kernel_at_origin(3, 2, 1), rel=1e-10)

    def test_alternating_signs(self):
        terms = kernel_residue_series_terms(KernelQuery(3, 1, 1, 1), 10).real
        assert np.all(np.sign(terms) == np.where(np.arange(10) % 2, -1, 1))

    def test_extended_precision_terms(self):
        q = KernelQuery(2.5, 3, 2.0, cmath.exp(0.1j))
        lo = kernel_residue_series_terms(q, 20)
        hi = kernel_residue_series_terms(q, 20, dps=40)
        assert np.allclose(lo, np.array([complex(v) for v in hi]), rtol=1e-13, atol=0)

    def test_requires_positive_radius(self):
        with pytest.raises(ParameterError):
            kernel_residue_series_terms(KernelQuery(3, 1, 0.0, 1.0), 5)


class TestDispatch:
    def test_auto_routes(self):
        assert kernel(KernelQuery(3, 1, 1, 1), full_output=True)[1]["method"] == "wright"
        assert kernel(KernelQuery(3, 1, 80, 1), full_output=True)[1]["method"] == "mellin"
        assert kernel(KernelQuery(0.8, 1, 1, 1), full_output=True)[1]["method"] == "quadrature"
        assert kernel(KernelQuery(3, 1, 80, 1j), full_output=True)[1]["method"] == "wright"

    def test_origin_for_integral_routes(self):
        v, info = kernel(KernelQuery(3, 2, 0, 1), "mellin", full_output=True)
        assert info["method"] == "origin" and v == pytest.approx(kernel_at_origin(3, 2, 1))

    def test_unknown_method(self):
        with pytest.raises(ParameterError):
            kernel(KernelQuery(3, 1, 1, 1), "simpson")

    def test_radial_vectorised(self):
        r = np.array([[0.0, 1.0], [1.0, 2.0]])
        out = kernel_radial(3.0, 2, r, 1.0)
        assert out.shape == (2, 2) and out[0, 1] == out[1, 0]
        assert out[1, 1] == kernel_wright(KernelQuery(3, 2, 2.0, 1.0))

    def test_parallel_matches_serial(self, monkeypatch):
        r = np.linspace(0, 6, 300)
        serial = kernel_radial(2.5, 1, r, 1.0)
        monkeypatch.setenv("FRACDIRAC_THREADS", "3")
        assert worker_count() == 3
        assert np.array_equal(kernel_radial(2.5, 1, r, 1.0), serial)

    def test_bad_thread_variable(self, monkeypatch):
        monkeypatch.setenv("FRACDIRAC_THREADS", "many")
        with pytest.raises(ParameterError):
            worker_count()


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2.0, 2.5, 3.0, 4.0, 5.0]), st.integers(1, 3),
       st.floats(0.1, 4.0), st.floats(0.3, 3.0))
def test_scaling_law(alpha, n, r, tau):
    # K(r, tau) = tau**(-n/alpha) K(r tau**(-1/alpha), 1)
    lhs = kernel_wright(KernelQuery(alpha, n, r, tau))
    rhs = tau ** (-n / alpha) * kernel_wright(KernelQuery(alpha, n, r * tau ** (-1 / alpha), 1.0))
    assert abs(lhs - rhs) <= 1e-11 * max(abs(lhs), 1e-3 * abs(kernel_at_origin(alpha, n, tau)))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([2.5, 3.0, 4.0]), st.integers(1, 3), st.floats(0.1, 4.0),
       st.floats(-1.2, 1.2))
def test_conjugate_symmetry_property(alpha, n, r, arg):
    tau = cmath.exp(1j * arg)
    a = kernel(KernelQuery(alpha, n, r, tau))
    b = kernel(KernelQuery(alpha, n, r, tau.conjugate()))
    assert abs(a - b.conjugate()) <= 1e-13 * max(abs(a), 1e-300)


@pytest.mark.parametrize("alpha", [2.5, 3.0, 4.0])
def test_mass_normalisation(alpha):
    # the alpha = 2.5 tail decays only like |x|**-3.5, hence the wide window
    x = np.linspace(-120, 120, 2401)
    k = kernel_radial(alpha, 1, np.abs(x), 1.0).real
    assert np.sum(k) * (x[1] - x[0]) == pytest.approx(1.0, abs=1e-4)
