import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracgm import frac_cov as fc
from fracgm.errors import (
    DomainError,
    ParameterError,
    ResolutionError,
    UnsupportedSpecError,
)
from fracgm.gm_core import OUParams, SOUParams, bm_spec, ou_spec, sou_spec
from oracles import (
    bm_kernel,
    cov_reference,
    fibm_cov_reference,
    fibm_cov_riemann,
    ou_kernel,
    sou_kernel,
)

P = OUParams(mu=1.0, sigma=1.0)
SP = SOUParams(mu=1.0, sigma=1.0)

pos_times = st.floats(min_value=1e-3, max_value=20.0)


class TestFIBMVar:
    def test_order_half_at_two_is_eight_over_pi(self):
        assert fc.fibm_var(2.0, 0.5) == pytest.approx(8.0 / math.pi, rel=1e-15)

    def test_order_one_is_cubic(self):
        assert fc.fibm_var(3.0, 1.0) == pytest.approx(9.0, rel=1e-14)

    @given(a=st.floats(min_value=0.01, max_value=1.0),
           t=pos_times, c=st.floats(min_value=0.1, max_value=5.0))
    @settings(max_examples=60)
    def test_self_similar_scaling(self, a, t, c):
        # I^a(B) inherits scale invariance: var(c t) = c^(2a+1) var(t)
        lhs = fc.fibm_var(c * t, a)
        rhs = c ** (2 * a + 1) * fc.fibm_var(t, a)
        assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_zero_time(self):
        assert fc.fibm_var(0.0, 0.42) == 0.0

    def test_rejects_negative_time(self):
        with pytest.raises(DomainError):
            fc.fibm_var(-1.0, 0.5)


class TestFIBMCov:
    # frozen from the hypergeometric closed form of the kernel moments
    REFERENCE = [
        (1.0, 2.0, 0.3, 1.088766247818659),
        (1.0, 2.0, 0.7, 1.000228606447463),
        (0.5, 0.5, 0.25, 0.28689407554471541),
        (2.0, 5.0, 0.5, 4.9103948002535347),
        (1.0, 3.0, 0.01, 1.0105923550881695),
    ]

    @pytest.mark.parametrize("u,t,a,want", REFERENCE)
    def test_frozen_hypergeometric_values(self, u, t, a, want):
        assert fc.fibm_cov(u, t, a) == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("u,t,a,want", REFERENCE)
    def test_live_hypergeometric_agreement(self, u, t, a, want):
        live = fibm_cov_reference(u, t, a)
        assert live == pytest.approx(want, rel=1e-12)
        assert fc.fibm_cov(u, t, a) == pytest.approx(live, rel=1e-12)

    @pytest.mark.parametrize("a", [0.3, 0.8])
    def test_double_quadpack_agreement(self, a):
        for u, t in ((0.7, 1.3), (2.0, 5.0)):
            want = cov_reference(bm_kernel, u, t, a)
            assert fc.fibm_cov(u, t, a) == pytest.approx(want, rel=1e-8)

    def test_riemann_sum_sanity(self):
        want = fibm_cov_riemann(1.0, 2.0, 0.5)
        assert fc.fibm_cov(1.0, 2.0, 0.5) == pytest.approx(want, rel=0.05)

    def test_order_one_closed_form(self):
        for u, t in ((1.0, 1.0), (1.0, 4.0), (0.5, 2.5)):
            want = u * u * (t / 2.0 - u / 6.0)
            assert fc.fibm_cov(u, t, 1.0) == pytest.approx(want, rel=1e-14)
            assert fc.fibm_cov(u, t, 1.0, method="quadrature") == pytest.approx(
                want, rel=1e-10)

    def test_diagonal_equals_var(self):
        for a in (0.1, 0.5, 0.9):
            assert fc.fibm_cov(1.7, 1.7, a) == pytest.approx(
                fc.fibm_var(1.7, a), rel=1e-10)

    @given(u=pos_times, t=pos_times)
    @settings(max_examples=40)
    def test_symmetry(self, u, t):
        assert fc.fibm_cov(u, t, 0.6) == pytest.approx(
            fc.fibm_cov(t, u, 0.6), rel=1e-12)

    def test_zero_time(self):
        assert fc.fibm_cov(0.0, 2.0, 0.5) == 0.0

    def test_method_validation(self):
        with pytest.raises(ParameterError):
            fc.fibm_cov(1.0, 2.0, 0.5, method="magic")
        with pytest.raises(ParameterError):
            fc.fibm_cov(1.0, 2.0, 0.5, method="closed")  # no closed form


class TestGenericGaussMarkov:
    def test_matches_dedicated_bm_route(self):
        # same values through the generic three-way split as through the
        # kernel-moment formula
        spec = bm_spec()
        for a in (0.3, 0.5, 0.9):
            for u, t in ((0.5, 1.5), (2.0, 2.0)):
                assert fc.figm_cov(spec, u, t, a) == pytest.approx(
                    fc.fibm_cov(u, t, a), rel=1e-10)

    def test_rejects_random_start(self):
        with pytest.raises(UnsupportedSpecError):
            fc.figm_cov(sou_spec(SP), 1.0, 2.0, 0.5)

    def test_mean_of_centred_process_is_zero(self):
        assert fc.figm_mean(bm_spec(), 2.0, 0.5) == 0.0

    # frozen from QAWS applied to the exponential relaxation mean
    @pytest.mark.parametrize("t,a,want", [
        (1.5, 0.5, -0.26692624963054223),
        (2.0, 0.3, -0.034427636363730883),
    ])
    def test_mean_of_relaxing_ou(self, t, a, want):
        spec = ou_spec(OUParams(mu=1.3, sigma=0.7, beta=0.2, y=-1.0))
        assert fc.figm_mean(spec, t, a) == pytest.approx(want, rel=1e-9)

    def test_mean_at_zero(self):
        spec = ou_spec(OUParams(mu=1.3, sigma=0.7, beta=0.2, y=-1.0))
        assert fc.figm_mean(spec, 0.0, 0.5) == 0.0


class TestIntegratedOU:
    def test_var_frozen(self):
        # (1/2)(2t - 3 + 4e^-t - e^-2t) at t = 1, mu = sigma = 1
        assert fc.iou_var(P, 1.0) == pytest.approx(0.1680912407245783, rel=1e-14)

    def test_cov_frozen(self):
        # (1/2)(e^-1 + 2 e^-2 - e^-3) at (1, 2)
        assert fc.iou_cov(P, 1.0, 2.0) == pytest.approx(
            0.29438146963840190, rel=1e-14)

    def test_cov_diagonal_is_var(self):
        for t in (0.5, 1.0, 3.0):
            assert fc.iou_cov(P, t, t) == pytest.approx(fc.iou_var(P, t), rel=1e-13)

    def test_small_time_cubic_growth(self):
        # int of OU from a pinned start behaves like BM: var ~ sigma^2 t^3/3
        t = 1e-3
        assert fc.iou_var(P, t) == pytest.approx(t**3 / 3.0, rel=1e-2)

    @pytest.mark.parametrize("a", [0.2, 0.5, 0.8])
    def test_fiou_quadpack_agreement(self, a):
        c = ou_kernel(P.mu, P.sigma)
        for u, t in ((0.7, 1.3), (1.5, 1.5)):
            want = cov_reference(c, u, t, a)
            assert fc.fiou_cov(P, u, t, a) == pytest.approx(want, rel=1e-8)

    def test_fiou_order_one_matches_closed(self):
        for u, t in ((0.5, 1.5), (2.0, 2.0)):
            quad = fc.fiou_cov(P, u, t, 1.0, method="quadrature")
            assert quad == pytest.approx(fc.iou_cov(P, u, t), rel=1e-10)

    def test_parameter_scaling(self):
        # sigma enters the covariance as a plain factor sigma^2
        p2 = OUParams(mu=1.0, sigma=2.0)
        assert fc.fiou_var(p2, 1.2, 0.6) == pytest.approx(
            4.0 * fc.fiou_var(P, 1.2, 0.6), rel=1e-12)


class TestIntegratedStationaryOU:
    def test_var_frozen(self):
        # (1/2)(2t - 2 + 2 e^-t) at t = 1 equals e^-1
        assert fc.isou_var(SP, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-14)

    def test_cov_frozen(self):
        # (1/2)(1 + e^-2) at (1, 2)
        assert fc.isou_cov(SP, 1.0, 2.0) == pytest.approx(
            0.5676676416183064, rel=1e-14)

    @given(u=pos_times, t=pos_times)
    @settings(max_examples=40)
    def test_excess_over_pinned_start_factorises(self, u, t):
        # with mu = sigma = 1 the stationary - pinned gap is exactly
        # (1/2)(1 - e^-u)(1 - e^-t)
        gap = fc.isou_cov(SP, u, t) - fc.iou_cov(P, u, t)
        lo, hi = min(u, t), max(u, t)
        want = 0.5 * -math.expm1(-lo) * -math.expm1(-hi)
        assert gap == pytest.approx(want, rel=1e-9, abs=1e-15)

    @pytest.mark.parametrize("a", [0.2, 0.5, 0.8])
    def test_fisou_quadpack_agreement(self, a):
        # double QUADPACK on the full stationary kernel checks the
        # pinned-plus-start-term decomposition end to end
        c = sou_kernel(SP.mu, SP.sigma)
        for u, t in ((0.7, 1.3), (1.5, 1.5)):
            want = cov_reference(c, u, t, a)
            assert fc.fisou_cov(SP, u, t, a) == pytest.approx(want, rel=1e-8)

    def test_fisou_order_one_matches_closed(self):
        for u, t in ((0.5, 1.5), (2.0, 2.0)):
            quad = fc.fisou_cov(SP, u, t, 1.0, method="quadrature")
            assert quad == pytest.approx(fc.isou_cov(SP, u, t), rel=1e-10)

    def test_start_term_structure(self):
        # start term = stationary variance times the product of the two
        # fractionally integrated decay factors; check against direct
        # quadrature of e^(-mu s)
        from fracgm.quadrature import reciprocal_gamma, singular_left_integral

        a = 0.4
        rg = reciprocal_gamma(a)
        eu = rg * singular_left_integral(lambda s: np.exp(-s), 0.8, a)
        et = rg * singular_left_integral(lambda s: np.exp(-s), 1.9, a)
        want = 0.5 * eu * et
        assert fc.fisou_start_term(SP, 0.8, 1.9, a) == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("a", [0.2, 0.5, 0.8])
    def test_decomposition_identity(self, a):
        for u, t in ((0.5, 1.0), (1.0, 2.5), (3.0, 3.0)):
            total = fc.fisou_cov(SP, u, t, a)
            parts = fc.fiou_cov(P, u, t, a, method="quadrature") + \
                fc.fisou_start_term(SP, u, t, a)
            assert total == pytest.approx(parts, rel=1e-13)

    def test_stationary_dominates_pinned(self):
        for a in (0.3, 0.7):
            for u, t in ((0.5, 0.5), (1.0, 2.0), (4.0, 4.0)):
                assert fc.fisou_cov(SP, u, t, a) >= fc.fiou_cov(P, u, t, a)


class TestCaputo:
    def grid(self, t_end=1.0, n=400):
        return np.linspace(0.0, t_end, n + 1)

    def test_constant_has_zero_derivative(self):
        ts = self.grid()
        assert fc.caputo_derivative(ts, np.ones_like(ts), 0.7, 0.5) == 0.0

    def test_linear_is_exact(self):
        # piecewise-linear data is represented exactly, so the result must
        # match t^(1-a)/Gamma(2-a) to rounding
        ts = self.grid()
        got = fc.caputo_derivative(ts, ts.copy(), 0.8, 0.3)
        assert got == pytest.approx(0.9413946919331491, rel=1e-12)

    def test_quadratic_converges(self):
        ts = self.grid(1.0, 2000)
        got = fc.caputo_derivative(ts, ts**2, 1.0, 0.5)
        assert got == pytest.approx(1.50450555612735, rel=2e-3)

    def test_order_one_is_local_slope(self):
        ts = self.grid()
        got = fc.caputo_derivative(ts, ts**2, 0.5, 1.0)
        j = int(np.searchsorted(ts, 0.5, side="left")) - 1
        want = (ts[j + 1] ** 2 - ts[j] ** 2) / (ts[j + 1] - ts[j])
        assert got == pytest.approx(want, rel=1e-12)

    def test_left_inverse_of_integration(self):
        # D^a I^a f = f for f(0) = 0; build I^a of a linear f exactly
        a = 0.6
        ts = self.grid(2.0, 2000)
        integral = ts ** (1 + a) / math.gamma(2 + a)  # I^a of f(t) = t
        got = fc.caputo_derivative(ts, integral, 1.5, a)
        assert got == pytest.approx(1.5, rel=5e-4)

    def test_at_zero(self):
        ts = self.grid()
        assert fc.caputo_derivative(ts, ts**2, 0.0, 0.5) == 0.0

    def test_rejects_grid_not_starting_at_zero(self):
        ts = np.linspace(0.5, 1.5, 10)
        with pytest.raises(DomainError):
            fc.caputo_derivative(ts, ts, 1.0, 0.5)

    def test_rejects_unsorted_grid(self):
        ts = np.array([0.0, 0.5, 0.4, 1.0])
        with pytest.raises(ParameterError):
            fc.caputo_derivative(ts, ts, 1.0, 0.5)

    def test_rejects_t_beyond_range(self):
        ts = self.grid()
        with pytest.raises(DomainError):
            fc.caputo_derivative(ts, ts, 2.0, 0.5)

    def test_rejects_single_sample(self):
        with pytest.raises(ResolutionError):
            fc.caputo_derivative(np.array([0.0]), np.array([1.0]), 0.0, 0.5)

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ParameterError):
            fc.caputo_derivative(np.array([0.0, 1.0]), np.array([1.0]), 0.5, 0.5)
