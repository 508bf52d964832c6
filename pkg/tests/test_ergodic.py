import numpy as np
import pytest

from hjlab import (
    BallProblem,
    EikonalShift,
    Grid1D,
    Quadratic,
    ball_grid,
    constant_profile_residual,
    estimate_lambda_min,
    gradient_interval,
    solve_dirichlet_ball,
)


class TestBallGrid:
    def test_symmetric_with_center_node(self):
        g = ball_grid(2.0)
        assert g.x_min == -2.0 and g.x_max == 2.0
        assert g.n % 2 == 1
        assert 0.0 in g.nodes()
        assert g.dx <= 0.01 * 2.0 + 1e-12

    def test_dx_target(self):
        g = ball_grid(2.0, dx_target=0.5)
        assert g.dx <= 0.5 + 1e-12

    def test_bad_radius(self):
        with pytest.raises(ValueError):
            ball_grid(-1.0)

    def test_problem_validation(self):
        with pytest.raises(ValueError, match="span"):
            BallProblem(EikonalShift(), 1.0, 2.0, Grid1D(-1.0, 2.0, 11))
        with pytest.raises(ValueError, match="odd"):
            BallProblem(EikonalShift(), 1.0, 2.0, Grid1D(-2.0, 2.0, 10))


class TestGradientInterval:
    def test_eikonal_shift(self):
        lo, star, hi = gradient_interval(EikonalShift(c=1.0), 0.0, 0.5)
        assert lo == pytest.approx(0.5, abs=1e-9)
        assert star == pytest.approx(1.0, abs=1e-6)
        assert hi == pytest.approx(1.5, abs=1e-9)

    def test_point_interval_at_threshold(self):
        lo, star, hi = gradient_interval(EikonalShift(c=1.0), 0.0, 0.0)
        assert lo == pytest.approx(1.0, abs=1e-6)
        assert hi == pytest.approx(1.0, abs=1e-6)

    def test_quadratic(self):
        lo, star, hi = gradient_interval(Quadratic(drift=0.0), 0.0, 2.0)
        assert lo == pytest.approx(-2.0, abs=1e-8)
        assert hi == pytest.approx(2.0, abs=1e-8)

    def test_empty_below_minimum(self):
        assert gradient_interval(Quadratic(drift=0.0), 0.0, -0.1) is None


class TestDirichletBall:
    def test_eikonal_distance_function(self):
        """|u'|=1 on (-2,2), zero boundary data: the distance 2-|x| exactly."""
        prob = BallProblem(EikonalShift(c=0.0), 1.0, 2.0, ball_grid(2.0, 0.02))
        sol = solve_dirichlet_ball(prob)
        assert sol.status == "solved"
        np.testing.assert_allclose(sol.u.values, 2.0 - np.abs(sol.u.xs), atol=1e-12)

    def test_shifted_eikonal_loses_left_datum(self):
        """|u'-1|=0 forces slope 1; the solution is x-R and drops the x=-R datum."""
        R = 2.0
        prob = BallProblem(EikonalShift(c=1.0), 0.0, R, ball_grid(R))
        sol = solve_dirichlet_ball(prob)
        assert sol.status == "solved"
        interior = slice(1, -1)
        np.testing.assert_allclose(sol.u.values[interior], sol.u.xs[interior] - R,
                                   atol=1e-10)

    def test_unsolvable_level(self):
        prob = BallProblem(EikonalShift(c=1.0), -0.5, 2.0, ball_grid(2.0))
        sol = solve_dirichlet_ball(prob)
        assert sol.status == "failed"
        assert "no admissible gradient" in sol.reason

    def test_quadratic_tent(self):
        """H=p^2/2, lam=0.5: slopes +-1, the tent 2-|x| again."""
        prob = BallProblem(Quadratic(drift=0.0), 0.5, 2.0, ball_grid(2.0, 0.02))
        sol = solve_dirichlet_ball(prob)
        assert sol.status == "solved"
        np.testing.assert_allclose(sol.u.values, 2.0 - np.abs(sol.u.xs), atol=1e-10)


class TestLambdaMinEstimate:
    def test_eikonal_shift_bracket_near_zero(self):
        rep = estimate_lambda_min(EikonalShift(c=1.0), (-1.0, 2.0), (2.0, 4.0), tol=0.05)
        lo, hi = rep.lam_min_bracket
        assert -0.05 <= lo <= hi <= 0.05
        assert rep.statuses.count("failed") > 0     # negative levels do fail

    def test_quadratic_bracket_near_zero(self):
        rep = estimate_lambda_min(Quadratic(drift=0.0), (-1.0, 2.0), (2.0, 4.0), tol=0.05)
        lo, hi = rep.lam_min_bracket
        assert -0.05 <= lo <= hi <= 0.05

    def test_needs_two_radii(self):
        with pytest.raises(ValueError, match="two radii"):
            estimate_lambda_min(EikonalShift(c=1.0), (-1.0, 2.0), (2.0,))

    def test_unsolvable_range(self):
        with pytest.raises(ValueError, match="widen lam_range"):
            estimate_lambda_min(EikonalShift(c=1.0), (-2.0, -1.0), (2.0, 4.0))


class TestConstantProfile:
    def test_shifted_eikonal(self):
        h = EikonalShift(c=1.0)
        assert constant_profile_residual(h, 1.0) == 0.0
        assert constant_profile_residual(h, 0.0) == pytest.approx(1.0)

    def test_gap_between_constants(self):
        """The least admissible constant (0) sits strictly below the constant-
        profile level (1) for H=|p-1|."""
        h = EikonalShift(c=1.0)
        rep = estimate_lambda_min(h, (-1.0, 2.0), (2.0, 4.0), tol=0.05)
        assert rep.lam_min_bracket[1] < 1.0 - 0.5
        assert constant_profile_residual(h, 1.0) == 0.0
