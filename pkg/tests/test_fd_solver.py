import numpy as np
import pytest

from hjlab import (
    EvolveConfig,
    Grid1D,
    Quadratic,
    SampledFn,
    Window,
    evolve_lf,
    time_derivative_sup,
)
from hjlab.hamiltonians import Hamiltonian


class TestEvolveConfig:
    def test_defaults(self):
        cfg = EvolveConfig(Grid1D(-1, 1, 11), 1.0)
        assert cfg.cfl == 0.9
        assert cfg.scheme == "lax-friedrichs"

    @pytest.mark.parametrize("kwargs", [
        {"t_end": 0.0},
        {"t_end": 1.0, "cfl": 1.5},
        {"t_end": 1.0, "boundary_policy": "reflect"},
        {"t_end": 1.0, "boundary_policy": "dirichlet-from-exact"},   # missing exact
        {"t_end": 1.0, "scheme": "spectral"},
        {"t_end": 1.0, "scheme": "godunov", "theta": 2.0},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            EvolveConfig(Grid1D(-1, 1, 11), **kwargs)


class TestExactSolutions:
    @pytest.mark.parametrize("scheme", ["lax-friedrichs", "godunov"])
    def test_affine_data_evolves_exactly(self, scheme):
        """u0 = c*x solves to c*x - t*H(c) with no discretization error."""
        c, drift = 0.5, 0.3
        h = Quadratic(drift=drift)
        grid = Grid1D(-2.0, 2.0, 101)
        u0 = SampledFn.from_callable(grid, lambda x: c * x)
        res = evolve_lf(h, u0, EvolveConfig(grid, 1.0, scheme=scheme))
        expected = c * grid.nodes() - 1.0 * h.value(0.0, c)
        np.testing.assert_allclose(res.final.values, expected, atol=1e-10)

    def test_constant_data(self):
        h = Quadratic(drift=0.0)
        grid = Grid1D(-1.0, 1.0, 51)
        u0 = SampledFn.on_grid(grid, np.full(51, 3.0))
        res = evolve_lf(h, u0, EvolveConfig(grid, 0.5))
        np.testing.assert_allclose(res.final.values, 3.0, atol=1e-12)

    def test_huber_interior_accuracy(self):
        """u0=|y|, H=p^2/2: the kink spreads into the parabolic profile."""
        h = Quadratic(drift=0.0)
        grid = Grid1D(-4.0, 4.0, 401)
        u0 = SampledFn.from_callable(grid, np.abs)

        def exact(x, t):
            return abs(x) - t / 2.0 if abs(x) >= t else x * x / (2.0 * t)

        cfg = EvolveConfig(grid, 1.0, boundary_policy="dirichlet-from-exact", exact=exact)
        res = evolve_lf(h, u0, cfg)
        xs = grid.nodes()
        mask = np.abs(xs) <= 2.0
        ref = np.array([exact(x, 1.0) for x in xs[mask]])
        err = np.max(np.abs(res.final.values[mask] - ref))
        assert err <= 5.0 * np.sqrt(grid.dx)


class TestSchemeGuards:
    def test_explicit_theta_below_requirement(self):
        grid = Grid1D(-2.0, 2.0, 101)
        u0 = SampledFn.from_callable(grid, np.abs)
        cfg = EvolveConfig(grid, 0.5, theta=0.1)
        with pytest.raises(ValueError, match="monotonicity requirement"):
            evolve_lf(Quadratic(drift=0.0), u0, cfg)

    def test_godunov_requires_convexity(self):
        class Nonconvex(Hamiltonian):
            def value(self, x, p):
                return -np.asarray(p, dtype=float) ** 2

        grid = Grid1D(-1.0, 1.0, 51)
        u0 = SampledFn.on_grid(grid, np.zeros(51))
        with pytest.raises(ValueError, match="convex"):
            evolve_lf(Nonconvex(convex_in_p=False), u0,
                      EvolveConfig(grid, 0.1, scheme="godunov"))


class TestDiagnostics:
    def setup_method(self):
        grid = Grid1D(-4.0, 4.0, 401)
        u0 = SampledFn.from_callable(grid, np.abs)
        self.res = evolve_lf(Quadratic(drift=0.0), u0,
                             EvolveConfig(grid, 2.0, snapshot_times=(0.0, 1.0, 2.0),
                                          m_window=Window(-1.0, 1.0)))

    def test_snapshots_recorded(self):
        times = [t for t, _ in self.res.snapshots]
        assert len(times) == 3
        assert times[0] == 0.0
        assert times[1] == pytest.approx(1.0, abs=self.res.dt)
        assert times[2] == pytest.approx(2.0, abs=self.res.dt)

    def test_m_series_decays(self):
        """inside |x|<=1 the fan gives |u_t| = x^2/(2t^2), so 1/8 at t=2."""
        m = self.res.m_series
        assert m[0, 1] > m[-1, 1]
        assert m[-1, 1] == pytest.approx(0.125, abs=0.03)

    def test_time_derivative_window(self):
        m = time_derivative_sup(self.res, Window(-1.0, 1.0))
        assert m.shape[1] == 2
        assert np.all(m[:, 1] >= 0.0)

    def test_empty_window_rejected(self):
        with pytest.raises(ValueError, match="no interior nodes"):
            time_derivative_sup(self.res, Window(10.0, 11.0))
