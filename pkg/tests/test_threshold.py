"""Threshold arithmetic, split optimization, and spin/relativistic variants."""

import math

import numpy as np
import pytest

import specbound as sb
from specbound.errors import RejectedInput


class TestComputeLambda:
    def test_pure_virial_gives_half(self):
        assert sb.compute_lambda(0, 0, 16) == pytest.approx(8.0, abs=1e-12)
        assert sb.compute_lambda(0, 0, 1) == pytest.approx(0.5, abs=1e-12)

    def test_zero(self):
        assert sb.compute_lambda(0, 0, 0) == 0.0

    def test_pure_field(self):
        assert sb.compute_lambda(2, 0, 0) == pytest.approx(4.0, abs=1e-12)

    def test_infinite_input_propagates(self):
        assert sb.compute_lambda(math.inf, 0, 0) == math.inf
        assert sb.compute_lambda(0, 0, math.inf) == math.inf

    def test_negative_rejected(self):
        with pytest.raises(RejectedInput):
            sb.compute_lambda(-1, 0, 0)
        with pytest.raises(RejectedInput):
            sb.compute_lambda(0, math.nan, 0)

    def test_monotone_in_each_argument(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            b, w1, w2 = rng.uniform(0, 5, 3)
            db, dw1, dw2 = rng.uniform(0, 1, 3)
            base = sb.compute_lambda(b, w1, w2)
            assert sb.compute_lambda(b + db, w1, w2) >= base
            assert sb.compute_lambda(b, w1 + dw1, w2) >= base
            assert sb.compute_lambda(b, w1, w2 + dw2) >= base

    def test_scale_covariance(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            b, w1, w2 = rng.uniform(0, 5, 3)
            t = rng.uniform(0.1, 4.0)
            lhs = sb.compute_lambda(t * b, t * w1, t**2 * w2)
            rhs = t**2 * sb.compute_lambda(b, w1, w2)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, rhs)

    def test_expansion_identity(self):
        # (b + sqrt(b^2 + 2 w2))^2 / 4 = (b^2 + w2 + b sqrt(b^2 + 2 w2)) / 2
        rng = np.random.default_rng(7)
        for _ in range(200):
            b, w2 = rng.uniform(0, 10, 2)
            lhs = sb.compute_lambda(b, 0, w2)
            rhs = 0.5 * (b**2 + w2 + b * math.sqrt(b**2 + 2 * w2))
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, rhs)


class TestBangBang:
    def test_constant_case(self):
        for s in np.linspace(0, 1, 11):
            assert sb.bang_bang_g(0.0, 2.0, float(s)) == pytest.approx(2.0, abs=1e-12)

    def test_radical_collapse_at_one(self):
        for b in (0.0, 0.5, 3.0):
            assert sb.bang_bang_g(b, 7.0, 1.0) == pytest.approx(2 * (b + 1), abs=1e-12)

    def test_hand_value(self):
        assert sb.bang_bang_g(1.0, 0.0, 0.0) == pytest.approx(2.0, abs=1e-12)

    def test_array_argument(self):
        s = np.linspace(0, 1, 5)
        grid = sb.bang_bang_g(0.3, 1.2, s)
        scalar = [sb.bang_bang_g(0.3, 1.2, float(si)) for si in s]
        np.testing.assert_allclose(grid, scalar, rtol=1e-15)

    def test_out_of_range_rejected(self):
        with pytest.raises(RejectedInput):
            sb.bang_bang_g(1.0, 1.0, 1.5)

    def test_endpoint_minimum_and_branch(self):
        rng = np.random.default_rng(8)
        s_grid = np.linspace(0.0, 1.0, 201)
        for _ in range(300):
            b, c = rng.uniform(1e-6, 10.0, 2)
            grid = sb.bang_bang_g(b, c, s_grid)
            g0, g1 = sb.bang_bang_g(b, c, 0.0), sb.bang_bang_g(b, c, 1.0)
            assert np.min(grid) >= min(g0, g1) - 1e-12
            if abs(c - (2 * b + 2)) > 1e-9:
                winner = 1.0 if g1 < g0 else 0.0
                assert (winner == 1.0) == (c > 2 * b + 2)


class TestOptimizeSplit:
    def test_oscillating_tail_inputs(self):
        rep = sb.optimize_split(0.0, 8.0, 16.0)
        assert rep.lam == pytest.approx(8.0, abs=1e-12)
        assert rep.split_parameter == 0.0

    def test_constant_case(self):
        rep = sb.optimize_split(0.0, 1.0, 2.0)
        assert rep.lam == pytest.approx(1.0, abs=1e-12)
        assert rep.split_parameter == "constant"

    def test_kato_slot_wins(self):
        rep = sb.optimize_split(1.0, 0.0, 6.0)
        assert rep.lam == pytest.approx(1.0, abs=1e-12)
        assert rep.split_parameter == 1.0
        assert rep.provenance["endpoint_0"] == pytest.approx(
            0.25 * (1 + math.sqrt(13.0)) ** 2, abs=1e-12)

    def test_report_recompute(self):
        rep = sb.optimize_split(0.5, 2.0, 3.0)
        assert rep.recompute() == sb.compute_lambda(0.5, 2.0, 3.0)

    def test_branch_matches_closed_form(self):
        rng = np.random.default_rng(9)
        for _ in range(300):
            b, w1, w2 = rng.uniform(0.01, 5.0, 3)
            rep = sb.optimize_split(b, w1, w2)
            crit = w2 - 2 * w1 * (b + w1)
            if abs(crit) > 1e-9:
                assert (rep.split_parameter == 1.0) == (crit > 0)


class TestPauliDirac:
    def test_pure_field_cap(self):
        for b0 in (0.5, 1.0, 2.0):
            assert sb.pauli_threshold(b0, 0.0) == pytest.approx(b0**2, abs=1e-12)

    def test_zero(self):
        assert sb.pauli_threshold(0.0, 0.0) == 0.0

    def test_min_structure(self):
        want = min(4.0, 0.25 * (3 + math.sqrt(13.0)) ** 2)
        assert sb.pauli_threshold(1.0, 2.0) == pytest.approx(want, abs=1e-12)
        assert want == 4.0

    def test_dirac_massive_free(self):
        assert sb.dirac_window(0.0, 0.0, 1.0) == (-1.0, 1.0)

    def test_dirac_massless_field(self):
        lo, hi = sb.dirac_window(1.0, 0.0, 0.0)
        assert (lo, hi) == (pytest.approx(-1.0), pytest.approx(1.0))

    def test_dirac_massive_field(self):
        lo, hi = sb.dirac_window(1.0, 0.0, 2.0)
        assert hi == pytest.approx(math.sqrt(5.0), abs=1e-12)
        assert lo == -hi


class TestAharonovBohmThreshold:
    def test_zero_means_no_positive_eigenvalues(self):
        assert sb.aharonov_bohm_threshold(0.0, 0.0) == 0.0

    def test_pure_virial(self):
        assert sb.aharonov_bohm_threshold(0.0, 2.0) == pytest.approx(1.0, abs=1e-12)

    def test_pure_kato_slot(self):
        assert sb.aharonov_bohm_threshold(2.0, 0.0) == pytest.approx(4.0, abs=1e-12)
