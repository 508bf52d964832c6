"""Dirichlet ball problems H(x, Du) = lambda with zero boundary data, and the
bracketing of the least admissible constant by a solvability bisection.

Solvability at a given lambda is operationalized as: every node admits a
gradient with H <= lambda, the Godunov residual of the swept solution is below
tolerance, and the normalized profiles stabilize across the two largest radii.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Grid1D, SampledFn
from .hamiltonians import Hamiltonian

_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


def ball_grid(R: float, dx_target: Optional[float] = None) -> Grid1D:
    """Symmetric grid on [-R, R] with 0 a node; dx at most 0.01*R by default."""
    if R <= 0:
        raise ValueError("radius must be positive")
    dx = dx_target if dx_target is not None else 0.01 * R
    half = max(1, int(math.ceil(R / dx)))
    return Grid1D(-R, R, 2 * half + 1)


@dataclass(frozen=True)
class BallProblem:
    h: Hamiltonian
    lam: float
    R: float
    grid: Grid1D

    def __post_init__(self):
        g = self.grid
        if abs(g.x_min + self.R) > 1e-12 * self.R or abs(g.x_max - self.R) > 1e-12 * self.R:
            raise ValueError("grid must span [-R, R]")
        if g.n % 2 == 0:
            raise ValueError("grid must have 0 as a node (odd node count)")


@dataclass
class DirichletSolution:
    status: str                      # "solved" | "failed"
    u: Optional[SampledFn]
    residual: float
    reason: str = ""


@dataclass
class ErgodicReport:
    lam_grid: np.ndarray
    statuses: list
    lam_min_bracket: tuple
    profiles: dict                   # lam -> [(R, normalized SampledFn)]
    stabilization_defect: dict       # lam -> defect across the two largest radii


def _golden_min_scalar(fn, a, b, iters=120):
    x1 = b - _GOLD * (b - a)
    x2 = a + _GOLD * (b - a)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(iters):
        if b - a <= 1e-13 * max(1.0, abs(a), abs(b)):
            break
        if f1 > f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLD * (b - a)
            f2 = fn(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLD * (b - a)
            f1 = fn(x1)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def gradient_interval(h: Hamiltonian, x: float, lam: float):
    """(p_lo, p_star, p_hi) with H(x,p) <= lam exactly on [p_lo, p_hi], or None.

    p_star is the argmin of H(x, .); coercivity makes the sublevel set a
    bounded interval for convex H.
    """
    def H(p):
        return h.value(x, p)

    B = 1.0
    while True:
        ps = np.linspace(-B, B, 257)
        vals = np.asarray(h.value(x, ps), dtype=float)
        i = int(np.argmin(vals))
        if 0 < i < len(ps) - 1:
            p_star, h_min = _golden_min_scalar(H, ps[i - 1], ps[i + 1])
            break
        B *= 8.0
        if B > 1e12:
            raise ValueError("could not localize the minimum of H in p")
    if h_min > lam + 1e-12:
        return None

    def root(side):
        lo, hi = p_star, p_star + side
        while H(hi) <= lam:
            hi += side * max(1.0, abs(hi))
            if abs(hi) > 1e12:
                raise ValueError("H not coercive along this direction")
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if H(mid) <= lam:
                lo = mid
            else:
                hi = mid
        return lo

    return root(-1.0), p_star, root(+1.0)


def _godunov_residual(h, xs, u, dx, lam, p_stars):
    a = (u[1:-1] - u[:-2]) / dx   # backward differences
    b = (u[2:] - u[1:-1]) / dx    # forward differences
    res = 0.0
    for i in range(len(a)):
        x = xs[i + 1]
        if a[i] <= b[i]:
            p = min(max(p_stars[i + 1], a[i]), b[i])
            hval = h.value(x, p)
        else:
            hval = max(h.value(x, a[i]), h.value(x, b[i]))
        res = max(res, abs(hval - lam))
    return res


def solve_dirichlet_ball(prob: BallProblem, tol: Optional[float] = None) -> DirichletSolution:
    """Maximal subsolution of H(x, Du) = lam on [-R, R] with u = 0 at both ends.

    Gauss-Seidel sweeping on the upwind (Godunov) discretization for convex H:
    each node is relaxed to the tightest of the two one-sided constraints built
    from the admissible gradient interval.  Failure (a status, not an
    exception) occurs when some node admits no gradient with H <= lam, or the
    swept solution leaves a Godunov residual above tolerance.
    """
    grid = prob.grid
    xs = grid.nodes()
    dx = grid.dx
    if tol is None:
        tol = max(1e-8, 2.0 * dx)

    if prob.h.x_dependent:
        intervals = [gradient_interval(prob.h, float(x), prob.lam) for x in xs]
    else:
        iv = gradient_interval(prob.h, 0.0, prob.lam)
        intervals = [iv] * len(xs)
    if any(iv is None for iv in intervals):
        return DirichletSolution("failed", None, math.inf,
                                 "no admissible gradient at some node")

    p_lo = np.array([iv[0] for iv in intervals])
    p_star = np.array([iv[1] for iv in intervals])
    p_hi = np.array([iv[2] for iv in intervals])
    # trapezoid edge bounds for the one-sided constraints
    hi_edge = 0.5 * (p_hi[:-1] + p_hi[1:]) * dx    # u[i] <= u[i-1] + hi_edge[i-1]
    lo_edge = 0.5 * (p_lo[:-1] + p_lo[1:]) * dx    # u[i] <= u[i+1] - lo_edge[i]

    big = 1e30
    u = np.full(len(xs), big)
    u[0] = 0.0
    u[-1] = 0.0
    for _ in range(50):
        changed = 0.0
        for i in range(1, len(xs) - 1):
            new = min(u[i], u[i - 1] + hi_edge[i - 1], u[i + 1] - lo_edge[i])
            changed = max(changed, u[i] - new)
            u[i] = new
        for i in range(len(xs) - 2, 0, -1):
            new = min(u[i], u[i - 1] + hi_edge[i - 1], u[i + 1] - lo_edge[i])
            changed = max(changed, u[i] - new)
            u[i] = new
        if changed <= 1e-13 * max(1.0, np.max(np.abs(u[np.abs(u) < big / 2]))):
            break
    if np.any(np.abs(u) > big / 2):
        return DirichletSolution("failed", None, math.inf, "sweeping stalled")

    res = _godunov_residual(prob.h, xs, u, dx, prob.lam, p_star)
    fn = SampledFn.on_grid(grid, u)
    if res > tol:
        return DirichletSolution("failed", fn, res, "residual above tolerance")
    return DirichletSolution("solved", fn, res)


def _normalized(sol: DirichletSolution) -> SampledFn:
    center = sol.u.values[len(sol.u.values) // 2]
    return SampledFn(sol.u.xs, sol.u.values - center, sol.u.extension, sol.u.grid)


def _solve_family(h, lam, radii, tol):
    """Solve the ball problem at every radius; returns (status, profiles, defect)."""
    sols = []
    for R in radii:
        prob = BallProblem(h, lam, R, ball_grid(R))
        sol = solve_dirichlet_ball(prob)
        if sol.status != "solved":
            return "failed", [], math.inf
        sols.append((R, _normalized(sol)))
    (r1, v1), (r2, v2) = sols[-2], sols[-1]
    half = 0.5 * r1
    sample = v1.xs[np.abs(v1.xs) <= half]
    defect = float(np.max(np.abs(v1(sample) - v2(sample))))
    if defect >= 10.0 * tol:
        return "failed", sols, defect
    return "solved", sols, defect


def estimate_lambda_min(h: Hamiltonian, lam_range: tuple, radii, tol: float = 0.05,
                        n_grid: int = 13) -> ErgodicReport:
    """Bracket the least lambda for which the ball problems solve and stabilize.

    Scans a lambda grid for the report (and the monotonicity sanity check),
    then bisects between the largest failed and smallest solved values.  The
    bracket is clamped below by the sampled infimum of H over a box.
    """
    lam_lo_range, lam_hi_range = lam_range
    radii = sorted(float(R) for R in radii)
    if len(radii) < 2:
        raise ValueError("need at least two radii for the stabilization check")

    lam_grid = np.linspace(lam_lo_range, lam_hi_range, n_grid)
    statuses, profiles, defects = [], {}, {}
    for lam in lam_grid:
        status, sols, defect = _solve_family(h, float(lam), radii, tol)
        statuses.append(status)
        if status == "solved":
            profiles[float(lam)] = sols
            defects[float(lam)] = defect

    solved_flags = [s == "solved" for s in statuses]
    if any(solved_flags[i] and not solved_flags[j]
           for i in range(n_grid) for j in range(i + 1, n_grid)):
        raise ValueError("solvability not monotone in lambda; refine grids")
    if not any(solved_flags):
        raise ValueError("no solvable lambda in range; widen lam_range")

    first = solved_flags.index(True)
    hi = float(lam_grid[first])
    lo = float(lam_grid[first - 1]) if first > 0 else float(lam_lo_range)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        status, _, _ = _solve_family(h, mid, radii, tol)
        if status == "solved":
            hi = mid
        else:
            lo = mid

    # lower bound: lambda_min >= inf over (x, p) of H
    xs = np.linspace(-radii[-1], radii[-1], 41)
    ps = np.linspace(-20.0, 20.0, 801)
    inf_h = min(float(np.min(np.asarray(h.value(float(x), ps)))) for x in xs)
    lo = max(lo, inf_h)

    return ErgodicReport(lam_grid, statuses, (lo, hi), profiles, defects)


def constant_profile_residual(h: Hamiltonian, lam_bar: float, half_width: float = 10.0) -> float:
    """Residual of the constant profile as a solution of H(x, 0) = lam_bar.

    Zero residual certifies lam_bar as the constant admitting a bounded
    (trivially periodic) solution, to compare against the bracketed minimum.
    """
    xs = np.linspace(-half_width, half_width, 401)
    return float(np.max(np.abs(np.asarray(h.value(xs, np.zeros_like(xs))) - lam_bar)))
