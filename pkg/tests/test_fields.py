import math

import pytest
from hypothesis import given, strategies as st

from coordcycle import (DynamicKind, Interval, JointState, ModelParams,
                        br_geometry, br_xdot, logit_choice_probability,
                        logit_xdot, replicator_xdot, sliding_feasible, xdot)

from conftest import random_params


def high_precision_logistic(z: float) -> float:
    """Independent oracle: logistic via 50-digit mpmath."""
    from mpmath import mp
    with mp.workdps(50):
        return float(1 / (1 + mp.exp(-mp.mpf(z))))


class TestBestResponseField:
    def test_below_diagonal(self):
        assert br_xdot(JointState(0.8, 0.65)) == pytest.approx(0.2)

    def test_above_diagonal(self):
        assert br_xdot(JointState(0.3, 0.7)) == pytest.approx(-0.3)

    def test_tie_is_an_interval(self):
        value = br_xdot(JointState(0.5, 0.5))
        assert isinstance(value, Interval)
        assert value == Interval(-0.5, 0.5)
        assert 0.0 in value
        assert 0.51 not in value


class TestLogitChoice:
    def test_tie_is_fair(self):
        assert logit_choice_probability(1.0, 0.3, JointState(0.4, 0.4)) == 0.5

    def test_dominant_left_limit(self):
        p = logit_choice_probability(1.0, 1e-6, JointState(0.9, 0.1))
        assert p == pytest.approx(1.0, abs=1e-12)

    def test_against_high_precision_oracle(self):
        # s(x-y)/eta = (0.4-0.6)*3 = -0.6
        got = logit_choice_probability(1.0, 1 / 3, JointState(0.4, 0.6))
        assert got == pytest.approx(high_precision_logistic(-0.6), abs=1e-15)
        assert got == pytest.approx(0.35434, abs=5e-6)

    def test_no_overflow_at_tiny_eta(self):
        for state in (JointState(1.0, -50.0), JointState(0.0, 50.0)):
            p = logit_choice_probability(1.0, 1e-4, state)
            assert 0.0 <= p <= 1.0

    @given(x=st.floats(0, 1), y=st.floats(-5, 5),
           s=st.floats(0.1, 5), eta=st.floats(0.01, 2))
    def test_logistic_symmetry(self, x, y, s, eta):
        if not 0 <= y <= 1:
            y_state = JointState(x, y)
            p = logit_choice_probability(s, eta, y_state)
            mirror = logit_choice_probability(s, eta, JointState(x, 2 * x - y))
            assert p + mirror == pytest.approx(1.0, abs=1e-12)
        else:
            p = logit_choice_probability(s, eta, JointState(x, y))
            q = logit_choice_probability(s, eta, JointState(y, x))
            assert p + q == pytest.approx(1.0, abs=1e-12)

    def test_strictly_increasing_in_gap(self):
        s, eta = 1.2, 0.2
        gaps = [-0.4, -0.1, 0.0, 0.05, 0.3]
        probs = [logit_choice_probability(s, eta, JointState(0.5, 0.5 - g))
                 for g in gaps]
        assert all(b > a for a, b in zip(probs, probs[1:]))


class TestLogitField:
    def test_balanced_tie(self):
        assert logit_xdot(1.0, 0.5, JointState(0.5, 0.5)) == 0.0

    def test_zero_at_steady_state(self):
        s, eta, k = 1.0, 0.25, 0.6
        y_star = k - (eta / s) * math.log(k / (1 - k))
        assert logit_xdot(s, eta, JointState(k, y_star)) == pytest.approx(0.0, abs=1e-15)

    def test_against_oracle(self):
        # sigma(-1.2) - 0.4
        got = logit_xdot(1.0, 1 / 6, JointState(0.4, 0.6))
        assert got == pytest.approx(high_precision_logistic(-1.2) - 0.4, abs=1e-15)
        assert got == pytest.approx(-0.16852, abs=5e-6)

    def test_bounded(self):
        for x in (0.0, 0.3, 1.0):
            for y in (-10.0, 0.5, 10.0):
                assert -1.0 <= logit_xdot(0.7, 0.05, JointState(x, y)) <= 1.0


class TestReplicatorField:
    def test_boundary_faces_fixed(self):
        assert replicator_xdot(2.0, JointState(0.0, -3.0)) == 0.0
        assert replicator_xdot(2.0, JointState(1.0, 0.2)) == 0.0

    def test_direct_product(self):
        got = replicator_xdot(0.17, JointState(0.4, 0.7))
        assert got == pytest.approx(0.17 * 0.4 * 0.6 * (-0.3), abs=1e-15)
        assert got == pytest.approx(-0.01224, abs=1e-15)


class TestBRGeometry:
    def test_reference_parameters(self):
        geo = br_geometry(ModelParams(r=0.1, k=0.6, x_hat=0.2, s=1.0))
        assert geo.alpha == pytest.approx(0.1 * 0.6 / 1.1, abs=1e-15)
        assert geo.beta == pytest.approx(1.06 / 1.1, abs=1e-15)
        assert geo.alpha == pytest.approx(0.0545455, abs=1e-7)
        assert geo.beta == pytest.approx(0.9636364, abs=1e-7)
        assert geo.alpha < geo.k < geo.beta

    def test_slow_feedback_limit(self):
        p = ModelParams(r=1e-9, k=0.3, x_hat=0.1, s=1.0)
        geo = br_geometry(p)
        assert geo.alpha == pytest.approx(0.0, abs=1e-9)
        assert geo.beta == pytest.approx(1.0, abs=1e-9)
        assert geo.width == pytest.approx(p.s / (p.s + p.r), abs=1e-15)

    def test_symmetric_case(self):
        geo = br_geometry(ModelParams(r=2.0, k=0.5, x_hat=0.2, s=2.0))
        assert geo.alpha == 0.25
        assert geo.beta == 0.75

    def test_width_identity(self, rng):
        for _ in range(100):
            p = random_params(rng)
            geo = br_geometry(p)
            assert geo.width == pytest.approx(p.s / (p.s + p.r), abs=1e-12)
            assert geo.alpha < p.k < geo.beta


class TestSlidingFeasible:
    def test_nullcline_always_feasible(self):
        p = ModelParams(r=4.0, k=0.37, x_hat=0.1, s=0.8)
        assert sliding_feasible(p, p.k)

    def test_outside_thresholds(self):
        p = ModelParams(r=0.1, k=0.6, x_hat=0.2, s=1.0)
        geo = br_geometry(p)
        assert not sliding_feasible(p, geo.alpha / 2)
        assert not sliding_feasible(p, (geo.beta + 1.0) / 2)

    def test_boundary_equality(self):
        p = ModelParams(r=2.0, k=0.5, x_hat=0.2, s=2.0)
        assert sliding_feasible(p, 0.75)  # exactly beta
        assert sliding_feasible(p, 0.25)  # exactly alpha

    def test_equivalent_to_threshold_interval(self, rng):
        # feasibility of the shared rate <=> alpha <= x <= beta
        for _ in range(300):
            p = random_params(rng)
            geo = br_geometry(p)
            x = float(rng.uniform(0, 1))
            if min(abs(x - geo.alpha), abs(x - geo.beta)) < 1e-12:
                continue
            assert sliding_feasible(p, x) == (geo.alpha <= x <= geo.beta)


class TestCrossDynamicProperties:
    def test_logit_approaches_best_response(self):
        state = JointState(0.8, 0.65)
        s = 1.0
        br = br_xdot(state)
        gaps = [abs(logit_xdot(s, eta, state) - br)
                for eta in (1.0, 0.1, 0.01, 0.001)]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 0.01

    def test_logit_limit_at_minimal_gap(self):
        # |x - y| = 0.05 is the smallest gap the limit claim covers
        state = JointState(0.5, 0.55)
        br = br_xdot(state)
        assert abs(logit_xdot(1.0, 0.001, state) - br) < 0.01

    def test_sign_agreement_br_replicator(self, rng):
        from conftest import random_off_diagonal
        for _ in range(200):
            state = random_off_diagonal(rng)
            if state.x in (0.0, 1.0):
                continue
            sign = math.copysign(1.0, state.x - state.y)
            assert math.copysign(1.0, br_xdot(state)) == sign
            assert math.copysign(1.0, replicator_xdot(1.3, state)) == sign

    def test_sign_agreement_logit_beyond_nullcline_shift(self, rng):
        # the logit x-nullcline is y = x - (eta/s) ln(x/(1-x)), not the
        # diagonal; the sign matches sign(x - y) once |x - y| clears that
        # shift, which is also the small-eta regime of the orbit results
        s, eta = 1.0, 0.05
        for _ in range(200):
            x = float(rng.uniform(0.05, 0.95))
            shift = (eta / s) * abs(math.log(x / (1 - x)))
            gap = float(rng.uniform(shift + 0.01, shift + 0.5))
            side = 1.0 if rng.random() < 0.5 else -1.0
            state = JointState(x, x - side * gap)
            assert math.copysign(1.0, logit_xdot(s, eta, state)) == side

    @pytest.mark.parametrize("kind", list(DynamicKind))
    def test_quadrant_signs_rotate_counterclockwise(self, kind):
        p = ModelParams(r=0.6, k=0.6, x_hat=0.15, s=1.0, eta=0.1)

        def x_null(x):
            if kind is DynamicKind.LOGIT:
                return x - (p.eta / p.s) * math.log(x / (1 - x))
            return x

        for x in (0.2, 0.45, 0.75, 0.9):
            for offset in (0.05, 0.2):
                above = JointState(x, x_null(x) + offset)   # xdot < 0 side
                below = JointState(x, x_null(x) - offset)   # xdot > 0 side
                ydot_sign = 1.0 if x > p.k else -1.0
                up = xdot(kind, p, above)
                down = xdot(kind, p, below)
                assert up < 0.0 < down
                assert math.copysign(1.0, (p.r / p.s) * (x - p.k)) == ydot_sign
