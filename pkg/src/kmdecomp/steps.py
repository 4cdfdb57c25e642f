"""Right-continuous piecewise-constant functions on ``[0, inf)``."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "StepFunction",
    "evaluate",
    "unit_step",
    "zero",
    "sum_of",
    "evaluation_grid",
    "max_abs_diff",
    "EQUALITY_TOL",
]

EQUALITY_TOL = 1e-12


def _as_array(xs) -> np.ndarray:
    if not isinstance(xs, (np.ndarray, list, tuple)):
        xs = list(xs)
    return np.asarray(xs, dtype=float).ravel()


class StepFunction:
    """Piecewise-constant, right-continuous function of age.

    The value is ``base_value`` on ``[0, breakpoints[0])`` and
    ``values[i]`` on ``[breakpoints[i], breakpoints[i + 1])``; the last value
    is held forever. Jumps are taken *at* the breakpoint, so a unit step at
    ``t`` evaluates to 1 at ``t`` itself.

    Zero-size jumps are dropped on construction, so two functions built from
    the same data always share one breakpoint list. Equality (``==``) is
    pointwise up to :data:`EQUALITY_TOL` on the merged evaluation grid.
    """

    __slots__ = ("_breakpoints", "_values", "_base")

    def __init__(self, breakpoints: Iterable[float] = (), values: Iterable[float] = (),
                 base_value: float = 0.0):
        bp = _as_array(breakpoints)
        vals = _as_array(values)
        if bp.shape != vals.shape:
            raise ValueError(f"{bp.size} breakpoints but {vals.size} values")
        if not (np.all(np.isfinite(bp)) and np.all(np.isfinite(vals)) and np.isfinite(base_value)):
            raise ValueError("breakpoints and values must be finite")
        if bp.size and bp[0] < 0:
            raise DomainError("breakpoints must be non-negative")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        base = float(base_value)
        previous = np.concatenate(([base], vals[:-1]))
        keep = vals != previous
        bp, vals = bp[keep].copy(), vals[keep].copy()
        bp.flags.writeable = False
        vals.flags.writeable = False
        self._breakpoints = bp
        self._values = vals
        self._base = base

    @property
    def breakpoints(self) -> np.ndarray:
        return self._breakpoints

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def base_value(self) -> float:
        return self._base

    @property
    def final_value(self) -> float:
        return float(self._values[-1]) if self._values.size else self._base

    def __call__(self, tau):
        return evaluate(self, tau)

    def __repr__(self):
        pairs = ", ".join(f"{b:g}->{v:.6g}" for b, v in zip(self._breakpoints, self._values))
        return f"StepFunction(base={self._base:g}; {pairs})"

    def _combine(self, other, op):
        if isinstance(other, StepFunction):
            grid = np.union1d(self._breakpoints, other._breakpoints)
            return StepFunction(grid, op(self(grid), other(grid)), op(self._base, other._base))
        other = float(other)
        return StepFunction(self._breakpoints, op(self._values, other), op(self._base, other))

    def __add__(self, other):
        return self._combine(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, scalar):
        if isinstance(scalar, StepFunction):
            return self._combine(scalar, np.multiply)
        return self._combine(float(scalar), np.multiply)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self._combine(float(scalar), np.divide)

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return max_abs_diff(self, other) <= EQUALITY_TOL

    __hash__ = None

    def is_subcdf(self, atol: float = 0.0) -> bool:
        """True when the function is non-decreasing with all values in ``[0, 1]``."""
        vals = np.concatenate(([self._base], self._values))
        return bool(
            np.all(np.diff(vals) >= -atol) and vals.min() >= -atol and vals.max() <= 1 + atol
        )


def evaluate(sf: StepFunction, tau):
    """Value of ``sf`` at age ``tau`` (scalar or array); negative ages are rejected."""
    arr = np.asarray(tau, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError(f"age must be non-negative, got {tau!r}")
    idx = np.searchsorted(sf.breakpoints, arr, side="right") - 1
    table = np.concatenate(([sf.base_value], sf.values))
    out = table[idx + 1]
    if out.ndim == 0:
        return float(out)
    return out


def unit_step(t: float) -> StepFunction:
    """CDF of a unit known to fail at age ``t``: 0 before ``t``, 1 from ``t`` on."""
    if t < 0:
        raise DomainError(f"age must be non-negative, got {t!r}")
    return StepFunction([t], [1.0])


def zero() -> StepFunction:
    return StepFunction()


def sum_of(functions: Sequence[StepFunction]) -> StepFunction:
    """Pointwise sum over the union of all breakpoints."""
    if not functions:
        return zero()
    grid = np.unique(np.concatenate([f.breakpoints for f in functions]))
    total = np.zeros_like(grid)
    base = 0.0
    for f in functions:
        total = total + f(grid)
        base += f.base_value
    return StepFunction(grid, total, base)


def evaluation_grid(functions: Iterable[StepFunction], extra: Iterable[float] = ()) -> np.ndarray:
    """Ages on which piecewise-constant functions can be compared exhaustively.

    Merged breakpoints, midpoints between consecutive breakpoints, ``0`` and
    any ``extra`` ages (typically the largest observed age). Two step
    functions agreeing here agree everywhere up to the last grid point.
    """
    parts = [np.zeros(1), np.asarray(list(extra), dtype=float)]
    parts.extend(f.breakpoints for f in functions)
    points = np.unique(np.concatenate(parts))
    mids = 0.5 * (points[:-1] + points[1:])
    return np.union1d(points, mids)


def max_abs_diff(a: StepFunction, b: StepFunction, grid=None) -> float:
    if grid is None:
        grid = evaluation_grid((a, b))
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        return 0.0
    return float(np.max(np.abs(a(grid) - b(grid))))
