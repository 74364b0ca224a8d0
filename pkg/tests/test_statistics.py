"""Mandel Q, sign classification, zero crossing, correlation and asymptotics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tgcs.gseq import Factorial, G1, MLGamma, Table, WrightProduct
from tgcs.specfun import mittag_leffler, wright
from tgcs.states import (ExcitationDistribution, INFINITE, StateSpec,
                         excitation_distribution, random_state_spec)
from tgcs.statistics import (G1Asymptotics, MLAsymptotics, Regime,
                             SmallLabelSign, UndefinedAtOriginError,
                             WrightAsymptotics, correlation_g2, mandel_q,
                             mandel_q2_closed_form, mandel_q_closed_form,
                             number_moments, p_asymptotic, q2_zero_crossing,
                             q_large_label_approx, q_small_label_sign)


class TestNumberMoments:
    def test_kronecker(self):
        dist = ExcitationDistribution(np.array([1.0, 0.0, 0.0]), 1.0)
        assert number_moments(dist) == (0.0, 0.0)

    def test_poisson_one(self):
        dist = excitation_distribution(StateSpec(Factorial(), INFINITE, 1.0))
        mean, m2 = number_moments(dist)
        assert mean == pytest.approx(1.0, abs=1e-12)
        assert m2 == pytest.approx(2.0, abs=1e-12)

    def test_two_point(self):
        dist = ExcitationDistribution(np.array([0.5, 0.5]), 1.0)
        assert number_moments(dist) == pytest.approx((0.5, 0.5))


class TestMandelQ:
    def test_canonical_infinite_is_poissonian(self):
        for z in [0.3, 1.0, 1.7 + 0.3j, 5.0]:
            rep = mandel_q(StateSpec(Factorial(), INFINITE, z))
            assert abs(rep.q) <= 1e-12
            assert rep.regime is Regime.POISSONIAN

    def test_k1_closed_form(self):
        rep = mandel_q(StateSpec(Factorial(), 1, 1.0))
        assert rep.q == pytest.approx(-0.5, abs=1e-13)
        assert rep.regime is Regime.SUB_POISSONIAN

    def test_undefined_at_origin(self):
        with pytest.raises(UndefinedAtOriginError):
            mandel_q(StateSpec(Factorial(), 4, 0.0))
        with pytest.raises(UndefinedAtOriginError):
            mandel_q_closed_form(Factorial(), 4, 0.0)

    def test_canonical_truncated_boundary_is_negative(self):
        # g(0)g(2)/g(1)^2 = 2 exactly; the k=2 truncation stays sub-poissonian
        for u in [0.01, 0.5, 1.0, 10.0]:
            assert mandel_q2_closed_form(Factorial(), u) < 0
        assert mandel_q(StateSpec(Factorial(), 2, 1.0)).q < 0

    def test_closed_forms_cross_validate(self):
        rng = np.random.default_rng(17)
        for _ in range(60):
            spec = random_state_spec(rng, allow_infinite=False)
            if spec.u == 0 or spec.k < 1:
                continue
            q_m = mandel_q(spec).q
            q_c = mandel_q_closed_form(spec.seq, int(spec.k), spec.u)
            # both routes carry a ~1e-16*(1+u) absolute cancellation floor
            assert abs(q_m - q_c) <= 1e-10 * max(abs(q_c), 1e-3 * (1.0 + spec.u))

    def test_k2_rational_form_agrees(self):
        for seq in [Factorial(), MLGamma(0.5, 0.5), WrightProduct(1.3, 0.7)]:
            for u in [0.1, 1.0, 10.0]:
                a = mandel_q2_closed_form(seq, u)
                b = mandel_q_closed_form(seq, 2, u)
                assert a == pytest.approx(b, abs=1e-12 * max(1.0, abs(a)))

    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_k1_always_negative(self, seed):
        rng = np.random.default_rng(seed)
        spec = random_state_spec(rng, allow_infinite=False)
        if spec.u == 0:
            return
        spec1 = StateSpec(spec.seq, 1, spec.z)
        assert mandel_q(spec1).q < 0

    def test_limit_at_large_label_is_minus_one(self):
        for seq in [Factorial(), MLGamma(0.5, 0.5)]:
            q = mandel_q(StateSpec(seq, 8, 1e3)).q
            assert q == pytest.approx(-1.0, abs=1e-2)


class TestSmallLabelSign:
    def test_ml_half_half_positive(self):
        # Gamma(1/2)Gamma(3/2)/Gamma(1)^2 = pi/2 < 2
        assert q_small_label_sign(MLGamma(0.5, 0.5), 5) is SmallLabelSign.POSITIVE

    def test_wright_always_negative(self):
        for lam, mu in [(0.5, 0.5), (1.0, 1.0), (0.1, 3.0), (4.0, 0.2)]:
            assert q_small_label_sign(WrightProduct(lam, mu), 5) is SmallLabelSign.NEGATIVE

    def test_canonical_boundary_k2(self):
        assert q_small_label_sign(Factorial(), 2) is SmallLabelSign.NEGATIVE

    def test_canonical_double_boundary_defers(self):
        # factorial: both g-ratios sit exactly at their boundary values
        assert q_small_label_sign(Factorial(), 4) is SmallLabelSign.DEPENDS_ON_HIGHER_ORDER

    def test_table_boundary_resolved_by_third_ratio(self):
        # first ratio exactly 2, third ratio 2 < 3 -> positive
        seq = Table((1.0, 1.0, 2.0, 4.0, 24.0))
        assert q_small_label_sign(seq, 3) is SmallLabelSign.POSITIVE

    def test_agrees_with_q_at_small_label(self):
        for seq in [MLGamma(0.5, 0.5), MLGamma(2.0, 1.0),
                    WrightProduct(0.5, 0.5), G1(0.5, 1.5, 1.0)]:
            label = q_small_label_sign(seq, 6)
            if label is SmallLabelSign.DEPENDS_ON_HIGHER_ORDER:
                continue
            q = mandel_q(StateSpec(seq, 6, 1e-3)).q
            assert (q > 0) == (label is SmallLabelSign.POSITIVE)

    def test_requires_k_at_least_two(self):
        with pytest.raises(ValueError):
            q_small_label_sign(Factorial(), 1)


class TestZeroCrossing:
    def test_factorial_has_none(self):
        assert q2_zero_crossing(Factorial()) is None

    def test_ml_half_half_value(self):
        zeta = q2_zero_crossing(MLGamma(0.5, 0.5))
        assert zeta == pytest.approx(0.32853, abs=1e-5)
        assert abs(mandel_q2_closed_form(MLGamma(0.5, 0.5), zeta ** 2)) <= 1e-10

    def test_sign_pattern_around_crossing(self):
        seq = MLGamma(0.5, 0.5)
        zeta = q2_zero_crossing(seq)
        assert mandel_q(StateSpec(seq, 2, zeta / 2)).q > 0
        assert mandel_q(StateSpec(seq, 2, 2 * zeta)).q < 0

    def test_matches_bisection(self):
        from scipy.optimize import brentq
        for seq in [MLGamma(0.5, 0.5), MLGamma(0.3, 1.0), G1(0.0, 1.5, 1.0)]:
            zeta = q2_zero_crossing(seq)
            if zeta is None:
                continue
            ref = brentq(lambda s: mandel_q2_closed_form(seq, s * s),
                         zeta / 10, zeta * 10, xtol=1e-13)
            assert abs(zeta - ref) <= 1e-9


class TestLargeLabel:
    def test_factorial_k2_example(self):
        assert q_large_label_approx(Factorial(), 2, 10.0) == pytest.approx(-0.99)

    def test_correction_term_accuracy(self):
        seq, k, z = MLGamma(0.5, 0.5), 5, 100.0
        exact = mandel_q(StateSpec(seq, k, z)).q
        approx = q_large_label_approx(seq, k, z)
        corr_exact = exact + 1.0
        corr_approx = approx + 1.0
        assert abs(corr_exact - corr_approx) / corr_exact <= 1e-3

    def test_input_validation(self):
        with pytest.raises(ValueError):
            q_large_label_approx(Factorial(), 1, 10.0)
        with pytest.raises(ValueError):
            q_large_label_approx(Factorial(), 3, 0.5)


class TestCorrelation:
    def test_k1_vanishes(self):
        for seq in [Factorial(), MLGamma(0.5, 2.0)]:
            assert correlation_g2(StateSpec(seq, 1, 1.3)) == 0.0

    def test_canonical_infinite_is_one(self):
        for z in [0.5, 1.0, 3.0]:
            assert correlation_g2(StateSpec(Factorial(), INFINITE, z)) == pytest.approx(
                1.0, abs=1e-10)

    def test_undefined_at_origin(self):
        with pytest.raises(UndefinedAtOriginError):
            correlation_g2(StateSpec(Factorial(), 3, 0.0))

    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_sign_link_with_q(self, seed):
        rng = np.random.default_rng(seed)
        spec = random_state_spec(rng, allow_infinite=False)
        if spec.u == 0 or spec.k < 2:
            return
        q = mandel_q(spec).q
        if abs(q) <= 1e-9:
            return
        g2 = correlation_g2(spec)
        assert (g2 > 1.0) == (q > 0.0)


class TestProbabilityAsymptotics:
    def _exact_p(self, seq, n, u, norm):
        return math.exp(n * math.log(u) - seq.log_g(n)) / norm

    def test_ml_ratio_near_one(self):
        u = 1.0
        norm = mittag_leffler(1.0, 1.0, u)
        exact = self._exact_p(MLGamma(1.0, 1.0), 40, u, norm)
        approx = p_asymptotic(MLAsymptotics(1.0, 1.0), 40, u, norm)
        assert approx / exact == pytest.approx(1.0, abs=0.02)

    def test_wright_ratio_near_one(self):
        u = 1.0
        norm = wright(1.0, 1.0, u)
        exact = self._exact_p(WrightProduct(1.0, 1.0), 30, u, norm)
        approx = p_asymptotic(WrightAsymptotics(1.0, 1.0), 30, u, norm)
        assert approx / exact == pytest.approx(1.0, abs=0.03)

    def test_g1_reduces_to_ml_case(self):
        u, norm = 1.0, math.exp(1.0)
        for n in [15, 25, 40]:
            a = p_asymptotic(G1Asymptotics(0.0, 1.0, 1.0), n, u, norm)
            b = p_asymptotic(MLAsymptotics(1.0, 1.0), n, u, norm)
            assert a == pytest.approx(b, rel=1e-10)

    def test_requires_large_n(self):
        with pytest.raises(ValueError):
            p_asymptotic(MLAsymptotics(1.0, 1.0), 5, 1.0, 1.0)

    def test_unknown_kind_rejected(self):
        with pytest.raises(TypeError):
            p_asymptotic("poisson", 20, 1.0, 1.0)
