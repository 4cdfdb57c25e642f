"""Identity checks that cross-examine the decomposition against independent routes."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .decomposition import (
    UnitDecomposition,
    aggregate,
    consistency_deviation,
    decompose,
    fixed_point_step,
    redistribute_to_right,
)
from .errors import DomainError
from .estimator import km_product
from .population import Population
from .steps import StepFunction, evaluation_grid, max_abs_diff

__all__ = ["CheckResult", "run_checks", "default_tolerance", "DEFAULT_TOL", "FIXED_POINT_TOL",
           "corrupt"]

DEFAULT_TOL = 1e-12
FIXED_POINT_TOL = 1e-10
TOL_ENV = "KMDECOMP_TOL"


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tol

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name:<16} max_dev={self.deviation:.3e} tol={self.tol:.1e} {status}"


def default_tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise DomainError(f"{TOL_ENV} is not a number: {raw!r}") from None
    if not tol >= 0:
        raise DomainError(f"{TOL_ENV} must be non-negative, got {raw!r}")
    return tol


def run_checks(pop: Population, tol: float | None = None,
               fixed_point_tol: float = FIXED_POINT_TOL,
               decomposition: UnitDecomposition | None = None) -> list[CheckResult]:
    """Run the four identity checks on ``pop``.

    ``decomposition`` may be supplied to check a precomputed (or deliberately
    corrupted) family of unit curves instead of a fresh one.
    """
    if pop.n == 0:
        raise DomainError("empty population")
    if tol is None:
        tol = default_tolerance()
    d = decomposition if decomposition is not None else decompose(pop)
    km = km_product(pop)
    t_last = pop.ages[-1:]

    mean = aggregate(d)
    grid = evaluation_grid((*d.unit_curves, km), extra=t_last)
    sum_dev = max_abs_diff(mean, km, grid)

    rtr = redistribute_to_right(pop)
    rtr_dev = max_abs_diff(rtr, km, evaluation_grid((rtr, km), extra=t_last))

    censored = [j for j in range(1, pop.n + 1) if not pop[j - 1].event]
    cons_dev = max((consistency_deviation(pop, j) for j in censored), default=0.0)

    stepped = fixed_point_step(d.unit_curves, pop)
    fp_grid = evaluation_grid((*d.unit_curves, *stepped), extra=t_last)
    fp_dev = max(
        (max_abs_diff(a, b, fp_grid) for a, b in zip(d.unit_curves, stepped)), default=0.0
    )

    return [
        CheckResult("sum_identity", sum_dev, tol),
        CheckResult("redistribution", rtr_dev, tol),
        CheckResult("consistency", cons_dev, tol),
        CheckResult("fixed_point", fp_dev, fixed_point_tol),
    ]


def corrupt(d: UnitDecomposition, unit: int = 1, bump: float = 1e-3) -> UnitDecomposition:
    """Copy of ``d`` with ``bump`` added to one unit curve beyond its first breakpoint
    (or everywhere from the unit's age if the curve is flat). Negative control only."""
    curve = d.unit_curves[unit - 1]
    start = curve.breakpoints[0] if curve.breakpoints.size else d.population[unit - 1].age
    grid = np.union1d(curve.breakpoints, [start])
    values = curve(grid) + np.where(grid >= start, bump, 0.0)
    curves = list(d.unit_curves)
    curves[unit - 1] = StepFunction(grid, values, curve.base_value)
    return UnitDecomposition(d.population, tuple(curves))
