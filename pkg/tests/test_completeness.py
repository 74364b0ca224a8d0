"""Completeness weight functions and the radial moment identities."""

import math

import numpy as np
import pytest

from tgcs.completeness import (CanonicalTruncatedWeight, GeneralWeight, MLWeight,
                               WrightWeight, moment_check, quadrature_improper,
                               weight_eval, weight_radial_moment)
from tgcs.gseq import AuxFunction, G1
from tgcs.states import INFINITE


class TestQuadratureImproper:
    def test_exponential(self):
        res = quadrature_improper(lambda u: math.exp(-u))
        assert res.value == pytest.approx(1.0, rel=1e-10)

    def test_integrable_power_singularity(self):
        res = quadrature_improper(lambda u: math.exp(-u) / math.sqrt(u))
        assert res.value == pytest.approx(math.sqrt(math.pi), rel=1e-9)

    def test_gaussian(self):
        res = quadrature_improper(lambda u: math.exp(-u * u))
        assert res.value == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-9)


class TestWeightEval:
    def test_canonical_ml_limit_is_constant(self):
        # alpha = beta = 1 collapses to the flat canonical density 1/pi
        w = MLWeight(1.0, 1.0, INFINITE)
        for u in [0.1, 1.0, 10.0, 100.0]:
            assert weight_eval(w, u) == pytest.approx(1.0 / math.pi, rel=1e-11)

    def test_canonical_truncated_odd_k_goes_negative(self):
        # k = 1 at u = 2: pi^-1 e^-2 (1 - 2) < 0; the known sign defect
        w = CanonicalTruncatedWeight(1)
        assert weight_eval(w, 2.0) == pytest.approx(
            math.exp(-2.0) * (1.0 - 2.0) / math.pi, rel=1e-13)
        assert weight_eval(w, 2.0) < 0

    def test_ml_truncated_hand_value(self):
        # (1/(pi*alpha)) u^(beta/alpha - 1) e^{-u^(1/alpha)} * partial series
        w = MLWeight(0.5, 0.5, 3)
        u = 1.0
        series = sum(u ** n / math.gamma(0.5 * n + 0.5) for n in range(4))
        expected = (1.0 / (math.pi * 0.5)) * math.exp(-1.0) * series
        assert weight_eval(w, u) == pytest.approx(expected, rel=1e-12)
        assert weight_eval(w, u) > 0

    def test_positive_on_log_grid(self):
        weights = [MLWeight(1.0, 1.0, INFINITE), MLWeight(0.5, 0.5, 10),
                   MLWeight(0.1, 0.1, 20), WrightWeight(0.5, 0.5, 10),
                   GeneralWeight(AuxFunction(1.0, 2.0, 1.0), G1(1.0, 2.0, 1.0),
                                 INFINITE)]
        for w in weights:
            for u in np.geomspace(1e-4, 1e2, 200):
                assert weight_eval(w, u) >= 0.0

    def test_rejects_nonpositive_u(self):
        with pytest.raises(ValueError):
            weight_eval(MLWeight(1.0, 1.0), 0.0)


class TestMomentCheck:
    def test_ml_infinite(self):
        rep = moment_check(MLWeight(1.0, 1.0, INFINITE), 6, 1e-8)
        assert rep.passed
        assert rep.rows[0].target == pytest.approx(1.0)

    def test_ml_truncated_holds_beyond_k(self):
        # the truncated weight reuses the untruncated kernel, so the identity
        # holds for every n, not just n <= k... but n_max > k is rejected
        rep = moment_check(MLWeight(2.0, 1.0, 5), 5, 1e-8)
        assert rep.passed

    def test_n_max_beyond_truncation_rejected(self):
        with pytest.raises(ValueError):
            moment_check(MLWeight(2.0, 1.0, 5), 6, 1e-8)

    def test_wright(self):
        rep = moment_check(WrightWeight(1.0, 1.0, 4), 2, 1e-6)
        assert rep.passed
        # n = 2 target: 2! * Gamma(3) = 4
        assert rep.rows[2].target == pytest.approx(4.0)

    def test_general_matched_pair(self):
        f = AuxFunction(1.0, 2.0, 1.0)
        rep = moment_check(GeneralWeight(f, f.matching_sequence(), INFINITE), 6, 1e-6)
        assert rep.passed

    def test_canonical_truncated_reports_without_asserting(self):
        # no analytic cancellation exists; the identity is only approximate and
        # the report records the residuals as data
        rep = moment_check(CanonicalTruncatedWeight(3), 3, 1e-8)
        assert len(rep.rows) == 4
        assert all(math.isfinite(r.residual) for r in rep.rows)

    def test_csv_rows_schema(self):
        rep = moment_check(MLWeight(1.0, 1.0, INFINITE), 2, 1e-8)
        rows = list(rep.to_csv_rows())
        assert set(rows[0]) == {"kind", "n", "target", "value", "residual"}


class TestRadialMoment:
    def test_uncancelled_route_matches_target_for_ml(self):
        w = MLWeight(0.5, 0.5, INFINITE)
        for n in range(4):
            assert weight_radial_moment(w, n) == pytest.approx(
                w.moment_target(n), rel=1e-7)
