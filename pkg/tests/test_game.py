import math

import pytest
from hypothesis import given, strategies as st

from coordcycle import (DomainError, GamePayoffMatrix, JointState, ModelParams,
                        ZeroAlignmentError, payoff_adjustment,
                        payoff_difference, y_dot)

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


def matrices():
    return st.builds(GamePayoffMatrix, a=finite, b=finite, c=finite, d=finite)


def valid_params():
    return st.builds(
        lambda r, k, frac, s: ModelParams(r=r, k=k,
                                          x_hat=frac * min(k, 1.0 - k), s=s),
        r=st.floats(min_value=0.0, max_value=10.0),
        k=st.floats(min_value=0.05, max_value=0.95),
        frac=st.floats(min_value=0.1, max_value=0.9),
        s=st.floats(min_value=0.05, max_value=5.0),
    )


class TestAlignment:
    def test_direct_sums(self):
        assert GamePayoffMatrix(2, 0, 0, 1).alignment == 3
        assert GamePayoffMatrix(1, 1, 1, 1).alignment == 0
        assert GamePayoffMatrix(3, 1, 2, 4).alignment == 4


class TestIndifferenceState:
    def test_direct_formula(self):
        assert GamePayoffMatrix(2, 0, 0, 1).indifference_state() == pytest.approx(1 / 3)
        assert GamePayoffMatrix(1, 0, 0, 1).indifference_state() == 0.5

    def test_hand_checked(self):
        # (d-b)/s = (3-2)/(1-2-0+3) = 1/2
        assert GamePayoffMatrix(1, 2, 0, 3).indifference_state() == 0.5

    def test_degenerate_game_raises(self):
        with pytest.raises(ZeroAlignmentError):
            GamePayoffMatrix(1, 1, 1, 1).indifference_state()

    def test_may_leave_unit_interval(self):
        # Left dominant: a > c, b > d
        m = GamePayoffMatrix(2, 2, 0, 1)
        assert m.indifference_state() < 0


class TestPayoffs:
    def test_pure_populations(self):
        m = GamePayoffMatrix(2, 0, 0, 1)
        assert m.payoffs(1.0) == (2.0, 0.0)
        assert m.payoffs(0.0) == (0.0, 1.0)

    def test_indifference_point(self):
        m = GamePayoffMatrix(2, 0, 0, 1)
        f_left, f_right = m.payoffs(1 / 3)
        assert f_left == pytest.approx(f_right)
        assert f_left == pytest.approx(2 / 3)

    def test_domain_error(self):
        m = GamePayoffMatrix(2, 0, 0, 1)
        with pytest.raises(DomainError):
            m.payoffs(1.5)
        with pytest.raises(DomainError):
            m.payoffs(-0.1)


class TestPayoffDifference:
    def test_on_diagonal(self):
        assert payoff_difference(3.0, JointState(1 / 3, 1 / 3)) == 0.0

    def test_cross_checked_against_payoffs(self):
        # matrix with s = 1, y = 0.65
        m = GamePayoffMatrix(0.35, 0.0, 0.0, 0.65)
        assert m.alignment == 1.0
        assert m.indifference_state() == 0.65
        f_left, f_right = m.payoffs(0.8)
        diff = payoff_difference(1.0, JointState(0.8, 0.65))
        assert diff == pytest.approx(0.15, abs=1e-15)
        assert diff == pytest.approx(f_left - f_right, abs=1e-15)

    def test_corner(self):
        assert payoff_difference(2.0, JointState(0.0, 1.0)) == -2.0

    @given(m=matrices(), x=unit)
    def test_identity_with_payoffs(self, m, x):
        s = m.alignment
        if s == 0.0 or abs(s) < 1e-9:
            return
        f_left, f_right = m.payoffs(x)
        diff = payoff_difference(s, JointState(x, m.indifference_state()))
        assert diff == pytest.approx(f_left - f_right, abs=1e-12)


class TestPayoffAdjustment:
    def test_full_coordination_on_left(self):
        p = ModelParams(r=0.5, k=0.6, x_hat=0.2, s=1.0)
        rate = payoff_adjustment(p, 1.0)
        assert rate.a == rate.b == pytest.approx(0.5 * (0.2 - 0.4))
        assert rate.c == rate.d == pytest.approx(0.5 * 0.2)

    def test_full_coordination_on_right(self):
        p = ModelParams(r=0.5, k=0.6, x_hat=0.2, s=1.0)
        rate = payoff_adjustment(p, 0.0)
        assert rate.a == rate.b == pytest.approx(0.5 * 0.2)
        assert rate.c == rate.d == pytest.approx(0.5 * (0.2 - 0.6))

    def test_frozen_preferences(self):
        p = ModelParams(r=0.0, k=0.3, x_hat=0.1, s=2.0)
        rate = payoff_adjustment(p, 0.7)
        assert (rate.a, rate.b, rate.c, rate.d) == (0.0, 0.0, 0.0, 0.0)

    @given(p=valid_params(), x=unit)
    def test_alignment_rate_is_exactly_zero(self, p, x):
        assert payoff_adjustment(p, x).alignment == 0.0


class TestYDot:
    def test_nullcline(self):
        p = ModelParams(r=0.7, k=0.42, x_hat=0.2, s=1.3)
        assert y_dot(p, 0.42) == 0.0

    def test_hand_checked(self):
        p = ModelParams(r=0.1, k=0.6, x_hat=0.2, s=1.0)
        assert y_dot(p, 1.0) == pytest.approx(0.04, abs=1e-15)
        assert y_dot(p, 0.0) == pytest.approx(-0.06, abs=1e-15)

    @given(p=valid_params(), x=unit)
    def test_matches_adjustment_reduction(self, p, x):
        rate = payoff_adjustment(p, x)
        assert y_dot(p, x) == pytest.approx((rate.d - rate.b) / p.s, abs=1e-12)


class TestValidation:
    def test_k_range(self):
        for bad in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(DomainError):
                ModelParams(r=1.0, k=bad, x_hat=0.01, s=1.0)

    def test_x_hat_range(self):
        with pytest.raises(DomainError):
            ModelParams(r=1.0, k=0.6, x_hat=0.0, s=1.0)
        with pytest.raises(DomainError):
            ModelParams(r=1.0, k=0.6, x_hat=0.4, s=1.0)  # must be < min(k, 1-k)
        with pytest.raises(DomainError):
            ModelParams(r=1.0, k=0.6, x_hat=0.5, s=1.0)

    def test_alignment_positive(self):
        with pytest.raises(DomainError):
            ModelParams(r=1.0, k=0.5, x_hat=0.2, s=0.0)
        with pytest.raises(DomainError):
            ModelParams(r=1.0, k=0.5, x_hat=0.2, s=-1.0)

    def test_r_nonnegative(self):
        with pytest.raises(DomainError):
            ModelParams(r=-0.1, k=0.5, x_hat=0.2, s=1.0)

    def test_eta_positive_when_given(self):
        with pytest.raises(DomainError):
            ModelParams(r=1.0, k=0.5, x_hat=0.2, s=1.0, eta=0.0)
        ModelParams(r=1.0, k=0.5, x_hat=0.2, s=1.0, eta=0.3)

    def test_joint_state_domain(self):
        with pytest.raises(DomainError):
            JointState(1.2, 0.5)
        with pytest.raises(DomainError):
            JointState(0.5, math.nan)
        JointState(0.5, -3.0)  # y is unrestricted
