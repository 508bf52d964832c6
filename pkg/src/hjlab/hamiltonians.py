"""Hamiltonian families, Legendre transform, sublevel-set gauge, Kruzhkov map,
and the sampling-based strong-convexity (uniform-margin) checker.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import qmc

from .core import Grid1D, SampledFn


# ---------------------------------------------------------------------------
# Hamiltonian families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hamiltonian:
    """Base descriptor of H(x, p).  Subclasses implement :meth:`value`.

    ``lagrangian``/``lagrangian_prime`` return closed forms when the family has
    one (used as a fast path by the variational solver); the generic numeric
    route is :func:`legendre_transform`.
    """

    convex_in_p: bool = True
    coercive: bool = True
    strictly_convex: bool = False
    x_dependent: bool = False

    def value(self, x: float, p):
        raise NotImplementedError

    def lagrangian(self, v: float):
        """Closed-form (L(v), argmax p) or None when unavailable/x-dependent."""
        return None

    def lagrangian_prime(self, v: float):
        return None


@dataclass(frozen=True)
class Quadratic(Hamiltonian):
    """H(x,p) = -e*p + p^2/2 (drift e); strictly convex and superlinear."""

    drift: float = 0.0
    strictly_convex: bool = True

    def value(self, x, p):
        p = np.asarray(p, dtype=float)
        out = -self.drift * p + 0.5 * p * p
        return float(out) if out.ndim == 0 else out

    def lagrangian(self, v):
        # sup_p (p v + e p - p^2/2) at p = v + e
        return 0.5 * (v + self.drift) ** 2, v + self.drift

    def lagrangian_prime(self, v):
        return v + self.drift


@dataclass(frozen=True)
class EikonalShift(Hamiltonian):
    """H(x,p) = |p - c|; convex, coercive, not superlinear."""

    c: float = 0.0

    def value(self, x, p):
        out = np.abs(np.asarray(p, dtype=float) - self.c)
        return float(out) if out.ndim == 0 else out

    def lagrangian(self, v):
        if abs(v) > 1.0:
            return math.inf, None
        return self.c * v, self.c

    def lagrangian_prime(self, v):
        return self.c if abs(v) <= 1.0 else None


@dataclass(frozen=True)
class AbsShift(Hamiltonian):
    """F(x,p) = |p + alpha| - |alpha|; the flat-slope family of the
    non-strictly-convex counterexample."""

    alpha: float = 1.0

    def value(self, x, p):
        out = np.abs(np.asarray(p, dtype=float) + self.alpha) - abs(self.alpha)
        return float(out) if out.ndim == 0 else out

    def lagrangian(self, v):
        if abs(v) > 1.0:
            return math.inf, None
        return abs(self.alpha) - self.alpha * v, -self.alpha

    def lagrangian_prime(self, v):
        return -self.alpha if abs(v) <= 1.0 else None


@dataclass(frozen=True)
class QuadPotential(Hamiltonian):
    """H(x,p) = p^2 - eps*f(x); x-dependent, strictly convex in p."""

    eps: float = 0.1
    f: SampledFn = None
    strictly_convex: bool = True
    x_dependent: bool = True

    def value(self, x, p):
        p = np.asarray(p, dtype=float)
        out = p * p - self.eps * self.f(x)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ShiftedBy(Hamiltonian):
    """base(x,p) - lam; inherits convexity/coercivity from the base family."""

    base: Hamiltonian = None
    lam: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "convex_in_p", self.base.convex_in_p)
        object.__setattr__(self, "coercive", self.base.coercive)
        object.__setattr__(self, "strictly_convex", self.base.strictly_convex)
        object.__setattr__(self, "x_dependent", self.base.x_dependent)

    def value(self, x, p):
        return self.base.value(x, p) - self.lam

    def lagrangian(self, v):
        lv = self.base.lagrangian(v)
        if lv is None:
            return None
        L, pstar = lv
        return L + self.lam, pstar

    def lagrangian_prime(self, v):
        return self.base.lagrangian_prime(v)


@dataclass(frozen=True)
class Tabulated(Hamiltonian):
    """Bilinear interpolation of tabulated H values on an (x, p) grid."""

    x_grid: Grid1D = None
    p_grid: Grid1D = None
    table: np.ndarray = None  # shape (x_grid.n, p_grid.n)
    x_dependent: bool = True

    def __post_init__(self):
        tab = np.asarray(self.table, dtype=float)
        object.__setattr__(self, "table", tab)
        if tab.shape != (self.x_grid.n, self.p_grid.n):
            raise ValueError("table shape must match (x_grid.n, p_grid.n)")

    def value(self, x, p):
        xs = self.x_grid.nodes()
        ps = self.p_grid.nodes()
        x = float(np.clip(x, xs[0], xs[-1]))
        scalar = np.ndim(p) == 0
        p = np.clip(np.asarray(p, dtype=float), ps[0], ps[-1])
        i = min(int((x - xs[0]) / self.x_grid.dx), self.x_grid.n - 2)
        tx = (x - xs[i]) / self.x_grid.dx
        row = (1 - tx) * self.table[i] + tx * self.table[i + 1]
        out = np.interp(p, ps, row)
        return float(out) if scalar else out


def eval_hamiltonian(h: Hamiltonian, x: float, p: float) -> float:
    """Pointwise evaluation of H(x,p)."""
    if not (np.isfinite(x) and np.all(np.isfinite(p))):
        raise ValueError("inputs must be finite")
    return h.value(x, p)


# ---------------------------------------------------------------------------
# Legendre transform
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LagrangianValue:
    value: float            # +inf when unbounded above
    maximizer_p: Optional[float]

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)


_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(fn, a: float, b: float, iters: int = 80):
    """Golden-section maximization on [a, b] for unimodal fn."""
    x1 = b - _GOLD * (b - a)
    x2 = a + _GOLD * (b - a)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(iters):
        if b - a <= 1e-14 * max(1.0, abs(a), abs(b)):
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLD * (b - a)
            f2 = fn(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLD * (b - a)
            f1 = fn(x1)
    if f1 >= f2:
        return x1, f1
    return x2, f2


def legendre_transform(h: Hamiltonian, x: float, v: float) -> LagrangianValue:
    """Convex conjugate L(x,v) = sup_p (p*v - H(x,p)), with the argmax.

    Grid scan on a widening interval plus golden-section refinement; an
    unbounded objective (detected by persistent growth at the interval ends)
    yields an infinite :class:`LagrangianValue`.
    """
    if not h.convex_in_p:
        raise ValueError("legendre requires convexity")

    def obj(p):
        return p * v - h.value(x, p)

    B = 1.0
    while True:
        ps = np.linspace(-B, B, 513)
        vals = ps * v - h.value(x, ps)
        i = int(np.argmax(vals))
        if 0 < i < len(ps) - 1:
            p_star, L = _golden_max(obj, ps[i - 1], ps[i + 1])
            # accept only if interior max dominates the boundary values
            if L >= vals[0] and L >= vals[-1]:
                return LagrangianValue(L, p_star)
        if B >= 1e8:
            return LagrangianValue(math.inf, None)
        B *= 8.0


# ---------------------------------------------------------------------------
# Gauge of the zero sublevel set
# ---------------------------------------------------------------------------

def gauge_of_sublevel(h: Hamiltonian, x: float, p: float, rel_tol: float = 1e-10) -> float:
    """Minkowski gauge of C(x) = {q : H(x,q) <= 0} at ``p``, by bisection on the ray.

    Requires H(x,0) < 0 (origin interior to the sublevel set).  Degree-1
    homogeneous in p; equals 1 exactly on the boundary of C(x).
    """
    if h.value(x, 0.0) >= 0.0:
        raise ValueError("origin not interior to sublevel set")
    if p == 0.0:
        return 0.0

    def g(lam):
        return h.value(x, p / lam)

    hi = 1.0
    while g(hi) > 0.0:
        hi *= 2.0
        if hi > 1e300:
            raise ValueError("sublevel set unbounded along this ray")
    lo = hi
    while g(lo) <= 0.0:
        lo /= 2.0
        if lo < 1e-300:
            return 0.0
    # g(lo) > 0 >= g(hi), g decreasing in lambda
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Kruzhkov transform
# ---------------------------------------------------------------------------

def kruzhkov(u: SampledFn, direction: str) -> SampledFn:
    """Forward: v -> -exp(-v).  Inverse: w -> -log(-w), requiring w < 0."""
    if direction == "forward":
        vals = -np.exp(-u.values)
    elif direction == "inverse":
        if np.any(u.values >= 0.0):
            raise ValueError("not in Kruzhkov range")
        vals = -np.log(-u.values)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return SampledFn(u.xs, vals, u.extension, u.grid)


# ---------------------------------------------------------------------------
# uniform strong-convexity margin checker
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class H4Report:
    status: str                 # "holds_with_margin" | "violated"
    psi_estimate: float
    witness: Optional[tuple]    # (x, p, q, mu) when violated
    n_admissible: int

    @property
    def holds(self) -> bool:
        return self.status == "holds_with_margin"


def _sublevel_roots(F: Hamiltonian, x: float, K: float) -> list[float]:
    """Approximate roots of q -> F(x,q) crossing zero inside [-K, K]."""
    qs = np.linspace(-K, K, 2001)
    vals = F.value(x, qs)
    roots = []
    for i in range(len(qs) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            roots.append(float(qs[i]))
        elif a * b < 0.0:
            lo, hi = qs[i], qs[i + 1]
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if F.value(x, mid) * a <= 0.0:
                    hi = mid
                else:
                    lo = mid
            roots.append(0.5 * (lo + hi))
    if vals[-1] == 0.0:
        roots.append(float(qs[-1]))
    return roots


def check_h4(F: Hamiltonian, eta: float, K_box: float, samples: int = 4096,
             zero_tol: float = 1e-9) -> H4Report:
    """Estimate the uniform margin psi(eta) in the inequality

        mu*F(x, p/mu + q) >= F(x, p+q) + psi(eta)*(1 - mu)

    over admissible (x,p,q,mu): |F(x,p+q)| >= eta, F(x,q) <= 0, mu in (0,1).

    Sampling is a deterministic Halton sequence inside the box, augmented with
    structured samples at the roots of F(x, .) = 0 in q (the degenerate
    direction that non-strictly-convex families fail on).  A falsifier and
    estimator, not a prover: 'violated' means the worst admissible margin is
    not bounded away from zero (<= ``zero_tol``).
    """
    if eta <= 0:
        raise ValueError("eta must be positive")

    cands = []  # (order_key, x, p, q, mu)

    halton = qmc.Halton(d=4, scramble=False)
    pts = halton.random(samples)
    xs = (2 * pts[:, 0] - 1) * K_box
    ps = (2 * pts[:, 1] - 1) * K_box
    qs = (2 * pts[:, 2] - 1) * K_box
    mus = 0.01 + 0.98 * pts[:, 3]
    for i in range(samples):
        cands.append((i, xs[i], ps[i], qs[i], mus[i]))

    # structured edge samples: q on the boundary F(x,q)=0
    x_panel = [0.0] if not F.x_dependent else list(np.linspace(-K_box, K_box, 9))
    p_panel = np.linspace(-K_box, K_box, 41)
    mu_panel = [0.1, 0.25, 0.5, 0.75, 0.9]
    key = samples
    for xe in x_panel:
        for q0 in _sublevel_roots(F, xe, K_box):
            # nudge to the admissible side of the root if bisection overshot
            for qe in (q0, np.nextafter(q0, -np.inf), np.nextafter(q0, np.inf)):
                if F.value(xe, qe) <= 0.0:
                    for pe in p_panel:
                        for mue in mu_panel:
                            cands.append((key, xe, pe, qe, mue))
                            key += 1
                    break

    worst = math.inf
    witness = None
    n_adm = 0
    for order, x, p, q, mu in cands:
        if F.value(x, q) > 0.0:
            continue
        fpq = F.value(x, p + q)
        if abs(fpq) < eta:
            continue
        n_adm += 1
        margin = (mu * F.value(x, p / mu + q) - fpq) / (1.0 - mu)
        if margin < worst:
            worst = margin
            witness = (x, p, q, mu)
    if n_adm == 0:
        raise ValueError("constraint set empty at this eta/box")

    if worst <= zero_tol:
        return H4Report("violated", max(worst, 0.0), witness, n_adm)
    return H4Report("holds_with_margin", min(worst, eta), None, n_adm)


def h4_margin(F: Hamiltonian, x: float, p: float, q: float, mu: float) -> float:
    """The margin quotient at one admissible sample; used to replay witnesses."""
    return (mu * F.value(x, p / mu + q) - F.value(x, p + q)) / (1.0 - mu)
