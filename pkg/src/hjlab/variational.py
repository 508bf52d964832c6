"""Exact variational solver for x-independent convex Hamiltonians.

The evolution value is the infimum over straight-line endpoints of
``u0(y) + t*L((x-y)/t)``; for strictly convex x-independent Hamiltonians the
minimizing path is the straight line from the argmin to the query point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Grid1D, SampledFn
from .hamiltonians import Hamiltonian, legendre_transform

_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# Staircase initial data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StaircaseSpec:
    """Breakpoint sequence and slope pattern of the non-ergodic initial data.

    ``u0 = 0`` for ``y <= a[0]``; slope 0 on ``(a[2k+1], a[2k+2])`` and -1 on
    ``(a[2k+2], a[2k+3])``; the unspecified first interval ``(a[0], a[1])``
    gets slope 0.  Consecutive ratios must be strictly increasing: the finite
    surrogate of a super-geometrically growing sequence.
    """

    a: tuple

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        object.__setattr__(self, "a", a)
        if len(a) < 6:
            raise ValueError("sequence needs at least 6 terms")
        if a[0] <= 0 or any(a[i + 1] <= a[i] for i in range(len(a) - 1)):
            raise ValueError("sequence must be positive and strictly increasing")
        ratios = [a[i + 1] / a[i] for i in range(len(a) - 1)]
        if any(ratios[i + 1] <= ratios[i] for i in range(len(ratios) - 1)):
            raise ValueError("consecutive ratios of the sequence must be strictly increasing")

    @classmethod
    def default(cls) -> "StaircaseSpec":
        # a_n = 10^(n(n+1)/2), n = 0..5: ratios 10, 100, 1000, 1e4, 1e5
        return cls(tuple(10.0 ** (n * (n + 1) // 2) for n in range(6)))


def _staircase_slope(k: int) -> float:
    """Slope of u0 on the interval (a[k], a[k+1])."""
    if k == 0:
        return 0.0
    return 0.0 if k % 2 == 1 else -1.0


def build_staircase_u0(a, grid: Grid1D | None = None) -> SampledFn:
    """Piecewise-linear staircase initial data with every breakpoint a node.

    ``grid`` optionally contributes extra sample nodes and must then cover
    ``[0, a[-1]]``.  The result is continuous, 1-Lipschitz and nonincreasing.
    """
    spec = a if isinstance(a, StaircaseSpec) else StaircaseSpec(tuple(a))
    a = spec.a
    bps = np.concatenate(([0.0], np.asarray(a)))
    vals = np.zeros_like(bps)
    for k in range(len(a) - 1):
        vals[k + 2] = vals[k + 1] + _staircase_slope(k) * (a[k + 1] - a[k])

    if grid is not None:
        if grid.x_min > 0.0 or grid.x_max < a[-1]:
            raise ValueError("grid must cover [0, a_last]")
        xs = np.unique(np.concatenate((bps, grid.nodes())))
        base = SampledFn.from_breakpoints(bps, vals)
        return SampledFn.from_breakpoints(xs, base(xs))
    return SampledFn.from_breakpoints(bps, vals)


# ---------------------------------------------------------------------------
# Lagrangian access (closed form fast path, numeric fallback)
# ---------------------------------------------------------------------------

def _require_variational(h: Hamiltonian):
    if h.x_dependent:
        raise ValueError("variational solver requires an x-independent Hamiltonian")
    if not (h.convex_in_p and h.coercive):
        raise ValueError("variational solver requires a convex coercive Hamiltonian")


def _lagrangian_fn(h: Hamiltonian):
    """Scalar v -> L(v) (may be +inf), preferring the family's closed form."""
    if h.lagrangian(0.0) is not None:
        def L(v):
            return h.lagrangian(v)[0]
        return L

    def L(v):
        return legendre_transform(h, 0.0, v).value
    return L


def _finite_speed_cap(L, side: float) -> float:
    """Largest |v| (up to 1e6) with L(side*v) finite, inf if none found."""
    if math.isfinite(L(side * 1e6)):
        return math.inf
    lo, hi = 0.0, 1e6
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if math.isfinite(L(side * mid)):
            lo = mid
        else:
            hi = mid
    return lo if lo > 0 else hi


def _window_speed(L, K: float, side: float) -> float:
    """Speed v* beyond which the running cost dominates any 1-sided decrease of
    K-Lipschitz data; doubled by the caller for safety."""
    cap = _finite_speed_cap(L, side)
    if math.isfinite(cap):
        return cap
    need = max(L(0.0), 0.0) + 1.0
    v = 1.0
    while L(side * v) < 2.0 * (K + 1.0) * v + need:
        v *= 2.0
        if v > 1e12:
            raise ValueError("variational problem unbounded window")
    return v


def _golden_min(fn, a: float, b: float, iters: int = 200):
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


def _hopf_lax_minimize(h: Hamiltonian, u0: SampledFn, x: float, t: float):
    """Returns (value, ybar, non_unique): global minimum of the endpoint cost."""
    _require_variational(h)
    if t <= 0:
        raise ValueError("t must be positive")
    K = u0.lipschitz()
    L = _lagrangian_fn(h)
    Lp = h.lagrangian_prime

    R_left = 2.0 * t * _window_speed(L, K, +1.0)    # v > 0 <=> y < x
    R_right = 2.0 * t * _window_speed(L, K, -1.0)   # v < 0 <=> y > x
    ylo, yhi = x - R_left, x + R_right

    def cost(y):
        Lv = L((x - y) / t)
        return u0(y) + t * Lv if math.isfinite(Lv) else math.inf

    nodes = u0.xs[(u0.xs > ylo) & (u0.xs < yhi)]
    ys = np.unique(np.concatenate(([ylo], nodes, [yhi], [min(max(x, ylo), yhi)])))
    u0_vals = np.asarray(u0(ys), dtype=float)
    Lvals = np.array([L(v) for v in (x - ys) / t])
    gvals = np.where(np.isfinite(Lvals), u0_vals + t * Lvals, np.inf)

    finite = np.isfinite(gvals)
    candidates = [(gvals[i], ys[i]) for i in np.nonzero(finite)[0]]
    if not candidates:
        raise ValueError("variational problem unbounded window")

    # segments that can hide an interior minimum: the endpoint cost is convex
    # on each inter-node segment, so interior minima need derivative brackets
    # cost'(y) = s_i - L'((x-y)/t) changing sign (when L' is available)
    slopes = np.diff(u0_vals) / np.diff(ys)
    if Lp is not None and Lp(0.0) is not None:
        lps = np.array([v if (v := Lp(w)) is not None else np.nan for w in (x - ys) / t])
        dl = slopes - lps[:-1]
        dr = slopes - lps[1:]
        refine_mask = np.isnan(dl) | np.isnan(dr) | ((dl < 0.0) & (dr > 0.0))
    else:
        refine_mask = np.ones(len(ys) - 1, dtype=bool)
    for i in np.nonzero(refine_mask)[0]:
        if not (finite[i] or finite[i + 1]):
            continue
        yb, gb = _golden_min(cost, ys[i], ys[i + 1])
        if math.isfinite(gb):
            candidates.append((gb, yb))

    best = min(c[0] for c in candidates)
    scale = max(1.0, abs(best))
    near = sorted(y for g, y in candidates if g <= best + 1e-9 * scale)
    ybar = near[0]
    xtol = 1e-6 * max(1.0, abs(ybar), t)
    non_unique = any(y - ybar > xtol for y in near)
    return best, ybar, non_unique


def hopf_lax_evaluate(h: Hamiltonian, u0: SampledFn, x: float, t: float,
                      return_argmin: bool = False):
    """Variational value ``inf_y u0(y) + t*L((x-y)/t)`` at one space-time point.

    The search window is derived from the Lipschitz constant of ``u0`` and the
    growth of L, so it always contains the argmin; each inter-node segment is
    scanned and refined by golden section.  With ``return_argmin`` the
    minimizing endpoint is returned as well.
    """
    value, ybar, _ = _hopf_lax_minimize(h, u0, x, t)
    return (value, ybar) if return_argmin else value


# ---------------------------------------------------------------------------
# Minimizer backtracking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrajectoryResult:
    times: np.ndarray
    positions: np.ndarray
    start_point: float
    action: float
    non_unique: bool = False


def backtrack_minimizer(h: Hamiltonian, u0: SampledFn, x: float, t: float,
                        n_samples: int = 65) -> TrajectoryResult:
    """Minimizing straight-line path reaching ``x`` at time ``t``.

    Requires strict convexity (unique velocity given the endpoint); when the
    endpoint minimum is attained at several points within tolerance the
    smallest one is reported and the result is flagged non-unique.
    """
    _require_variational(h)
    if not h.strictly_convex:
        raise ValueError("backtracking requires a strictly convex Hamiltonian")
    value, ybar, non_unique = _hopf_lax_minimize(h, u0, x, t)
    v = (x - ybar) / t
    times = np.linspace(0.0, t, n_samples)
    positions = ybar + times * v
    positions[-1] = x
    L = _lagrangian_fn(h)
    action = u0(ybar) + t * L(v)
    return TrajectoryResult(times, positions, float(ybar), float(action), non_unique)
