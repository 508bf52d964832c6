"""Grids, piecewise-linear sampled functions, windows and sup norms.

Everything here is immutable after construction; all operations are pure.
The computational dimension is fixed to 1 throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

ExtensionPolicy = Literal["constant", "linear-extrapolate"]


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1-D grid with ``n`` nodes on ``[x_min, x_max]``."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ValueError("grid endpoints must be finite")
        if self.x_min >= self.x_max:
            raise ValueError("x_min must be strictly less than x_max")
        if self.n < 2:
            raise ValueError("grid needs at least 2 nodes")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    def nodes(self) -> np.ndarray:
        # node i sits at x_min + i*dx exactly; fix the last node to x_max
        xs = self.x_min + np.arange(self.n) * self.dx
        xs[-1] = self.x_max
        return xs


@dataclass(frozen=True)
class Window:
    """Closed interval on which local sup norms are measured."""

    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("window requires lo <= hi")


@dataclass(frozen=True)
class SampledFn:
    """Continuous piecewise-linear function given by node values.

    Nodes may be non-uniform (strictly increasing ``xs``); uniform grids are
    the common case and carry their :class:`Grid1D`.  Queries outside the node
    range follow ``extension``: "constant" clamps to the edge values,
    "linear-extrapolate" continues the edge slopes (the default, since it
    preserves the Lipschitz class of unbounded data such as affine profiles).
    """

    xs: np.ndarray
    values: np.ndarray
    extension: ExtensionPolicy = "linear-extrapolate"
    grid: Grid1D | None = field(default=None, compare=False)

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "values", vals)
        if xs.ndim != 1 or xs.shape != vals.shape or xs.size < 2:
            raise ValueError("xs and values must be 1-D arrays of equal length >= 2")
        if not np.all(np.diff(xs) > 0):
            raise ValueError("xs must be strictly increasing")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        if self.extension not in ("constant", "linear-extrapolate"):
            raise ValueError(f"unknown extension policy {self.extension!r}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def on_grid(cls, grid: Grid1D, values, extension: ExtensionPolicy = "linear-extrapolate") -> "SampledFn":
        return cls(grid.nodes(), np.asarray(values, dtype=float), extension, grid)

    @classmethod
    def from_callable(cls, grid: Grid1D, fn: Callable[[np.ndarray], np.ndarray],
                      extension: ExtensionPolicy = "linear-extrapolate") -> "SampledFn":
        xs = grid.nodes()
        return cls(xs, np.asarray(fn(xs), dtype=float), extension, grid)

    @classmethod
    def from_breakpoints(cls, xs, values, extension: ExtensionPolicy = "linear-extrapolate") -> "SampledFn":
        return cls(np.asarray(xs, dtype=float), np.asarray(values, dtype=float), extension)

    # -- evaluation -------------------------------------------------------

    @property
    def x_min(self) -> float:
        return float(self.xs[0])

    @property
    def x_max(self) -> float:
        return float(self.xs[-1])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise ValueError("query point must be finite")
        out = np.interp(x, self.xs, self.values)
        if self.extension == "linear-extrapolate":
            lo_slope = (self.values[1] - self.values[0]) / (self.xs[1] - self.xs[0])
            hi_slope = (self.values[-1] - self.values[-2]) / (self.xs[-1] - self.xs[-2])
            out = np.where(x < self.xs[0], self.values[0] + lo_slope * (x - self.xs[0]), out)
            out = np.where(x > self.xs[-1], self.values[-1] + hi_slope * (x - self.xs[-1]), out)
        return float(out) if out.ndim == 0 else out

    def lipschitz(self) -> float:
        """Discrete Lipschitz estimate: max slope magnitude between adjacent nodes."""
        return float(np.max(np.abs(np.diff(self.values) / np.diff(self.xs))))

    def shifted(self, c: float) -> "SampledFn":
        return SampledFn(self.xs, self.values + c, self.extension, self.grid)


def interpolate(f: SampledFn, x: float) -> float:
    """Evaluate ``f`` at ``x``: exact at nodes, linear between, extended outside."""
    return f(x)


def sup_norm_window(f: SampledFn, g: SampledFn, w: Window) -> float:
    """Max of ``|f - g|`` over all nodes of both functions inside ``w`` plus its endpoints.

    The window must intersect at least one of the two node ranges.
    """
    if w.hi < min(f.x_min, g.x_min) or w.lo > max(f.x_max, g.x_max):
        raise ValueError("window outside domain")
    pts = [np.array([w.lo, w.hi])]
    for fn in (f, g):
        inside = fn.xs[(fn.xs >= w.lo) & (fn.xs <= w.hi)]
        if inside.size:
            pts.append(inside)
    sample = np.unique(np.concatenate(pts))
    return float(np.max(np.abs(f(sample) - g(sample))))


def polynomial_bump(center: float = 0.0, height: float = -1.0, radius: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    """Smooth compactly supported bump ``height*(1 - ((x-c)/r)^2)^3`` on ``|x-c| <= r``.

    With ``height=-1`` this matches the perturbation profile used throughout the
    experiments: minimum -1 attained at the center, zero outside the support.
    """
    if radius <= 0:
        raise ValueError("bump radius must be positive")

    def fn(x):
        x = np.asarray(x, dtype=float)
        s = np.clip(1.0 - ((x - center) / radius) ** 2, 0.0, None)
        return height * s ** 3

    return fn
