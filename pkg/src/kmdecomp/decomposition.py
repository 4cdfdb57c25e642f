"""Unit-level decomposition of the Kaplan-Meier estimator.

Every unit gets its own semi-empirical CDF: a failed unit contributes the
unit step at its failure age, a censored unit contributes the Kaplan-Meier
estimator of the units observed after it. The population estimator is the
plain average of these curves, which makes it possible to attribute the
estimator to individual units, and to split it into an empirical part
(observed failures) and a predicted part (censored units).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateConditioningError, DomainError
from .estimator import conditional_cdf, km_product
from .population import Population, tail
from .steps import StepFunction, evaluation_grid, max_abs_diff, sum_of, unit_step, zero

__all__ = [
    "UnitDecomposition",
    "AttributionSplit",
    "StackedLayers",
    "RedistributionResult",
    "unit_estimator",
    "decompose",
    "aggregate",
    "split_empirical_predicted",
    "stacked_contributions",
    "consistency_check",
    "consistency_deviation",
    "fixed_point_step",
    "iterate_fixed_point",
    "redistribute_to_right",
    "redistribution_sweep",
]


@dataclass(frozen=True)
class UnitDecomposition:
    population: Population
    unit_curves: tuple[StepFunction, ...]

    @property
    def n(self) -> int:
        return len(self.unit_curves)

    @property
    def weight(self) -> float:
        return 1.0 / self.n

    def grid(self) -> np.ndarray:
        """Evaluation grid covering every unit curve and the largest observed age."""
        return evaluation_grid(self.unit_curves, extra=self.population.ages[-1:])


@dataclass(frozen=True)
class AttributionSplit:
    """Estimator split into observed-failure and censored-unit contributions."""

    empirical_part: StepFunction
    predicted_part: StepFunction

    @property
    def total(self) -> StepFunction:
        return self.empirical_part + self.predicted_part


class StackedLayers(NamedTuple):
    """``layers[i, m]`` is the mean-weighted sum of the first ``m + 1`` unit curves at ``tau[i]``."""

    tau: np.ndarray
    layers: np.ndarray


class RedistributionResult(NamedTuple):
    curve: StepFunction
    lost_mass: float


def unit_estimator(pop: Population, j: int) -> StepFunction:
    """Unit-level estimator of unit ``j`` (1-based).

    Failed: the unit step at its failure age. Censored: the Kaplan-Meier
    estimator of units ``j+1 .. n``, which is identically zero for a censored
    last unit.
    """
    if not 1 <= j <= pop.n:
        raise IndexError(f"unit index {j} out of range 1..{pop.n}")
    unit = pop[j - 1]
    if unit.event:
        return unit_step(unit.age)
    return km_product(tail(pop, j))


def decompose(pop: Population) -> UnitDecomposition:
    if pop.n == 0:
        raise DomainError("cannot decompose an empty population")
    curves = tuple(unit_estimator(pop, j) for j in range(1, pop.n + 1))
    return UnitDecomposition(pop, curves)


def _mean(curves: Sequence[StepFunction], n: int) -> StepFunction:
    # sum first, divide once: keeps k/n exact for k failed unit steps
    if not curves:
        return zero()
    return sum_of(curves) / n


def aggregate(d: UnitDecomposition) -> StepFunction:
    """Pointwise mean of the unit curves; equals the population estimator."""
    return _mean(d.unit_curves, d.n)


def split_empirical_predicted(d: UnitDecomposition) -> AttributionSplit:
    events = d.population.events
    empirical = [c for c, e in zip(d.unit_curves, events) if e]
    predicted = [c for c, e in zip(d.unit_curves, events) if not e]
    return AttributionSplit(_mean(empirical, d.n), _mean(predicted, d.n))


def stacked_contributions(d: UnitDecomposition, tau_grid) -> StackedLayers:
    """Cumulative per-unit layers, ready for a stacked-area plot.

    Parameters
    ----------
    d : UnitDecomposition
    tau_grid : sequence of float
        Ascending, non-negative ages.

    Returns
    -------
    StackedLayers
        ``layers`` has shape ``(len(tau_grid), n)``; its last column is the
        aggregate estimator.
    """
    tau = np.asarray(tau_grid, dtype=float).ravel()
    if np.any(np.diff(tau) < 0):
        raise DomainError("tau grid must be sorted ascending")
    values = np.column_stack([c(tau) for c in d.unit_curves]) if tau.size else np.zeros((0, d.n))
    return StackedLayers(tau, np.cumsum(values, axis=1) / d.n)


def consistency_deviation(pop: Population, j: int) -> float:
    """Largest gap, for ages beyond ``t_j``, between the tail estimator and the
    population estimator conditioned on survival to ``t_j``."""
    if not 1 <= j <= pop.n:
        raise IndexError(f"unit index {j} out of range 1..{pop.n}")
    unit = pop[j - 1]
    if unit.event:
        raise DomainError(f"unit {j} failed; the consistency identity applies to censored units")
    tail_km = km_product(tail(pop, j))
    imputed = conditional_cdf(km_product(pop), unit.age)
    grid = evaluation_grid((tail_km, imputed), extra=pop.ages[-1:])
    grid = grid[grid > unit.age]
    return max_abs_diff(tail_km, imputed, grid)


def consistency_check(pop: Population, j: int, tol: float = 1e-12) -> bool:
    return consistency_deviation(pop, j) <= tol


def fixed_point_step(H: Sequence[StepFunction], pop: Population) -> list[StepFunction]:
    """One sweep of the self-consistency map on a family of unit-level curves.

    Failed units are reset to their unit step; each censored unit becomes the
    family mean conditioned on survival to its censoring age. The mean of the
    input family plays the role of the population curve.

    Raises
    ------
    DegenerateConditioningError
        If the family mean already equals 1 at some censoring age.
    """
    if len(H) != pop.n:
        raise DomainError(f"got {len(H)} curves for {pop.n} units")
    if pop.n == 0:
        return []
    mean = _mean(list(H), pop.n)
    out = []
    for unit in pop:
        if unit.event:
            out.append(unit_step(unit.age))
            continue
        try:
            out.append(conditional_cdf(mean, unit.age))
        except DegenerateConditioningError as exc:
            raise DegenerateConditioningError(
                f"family mean reaches 1 at censoring age {unit.age!r}"
            ) from exc
    return out


def iterate_fixed_point(H: Sequence[StepFunction], pop: Population, *,
                        max_iter: int = 1000, tol: float = 1e-10):
    """Apply :func:`fixed_point_step` until the sup-norm change drops below ``tol``.

    Returns ``(curves, iterations, last_change)``; stops after ``max_iter`` sweeps
    whether or not it converged.
    """
    current = list(H)
    change = float("inf")
    for it in range(1, max_iter + 1):
        nxt = fixed_point_step(current, pop)
        change = max((max_abs_diff(a, b) for a, b in zip(current, nxt)), default=0.0)
        current = nxt
        if change <= tol:
            return current, it, change
    return current, max_iter, change


def redistribution_sweep(pop: Population) -> RedistributionResult:
    """Efron's redistribution-to-the-right construction.

    Each unit starts with mass ``1/n``. Sweeping in effective order, a
    censored unit hands its current mass in equal shares to every later unit
    and a failed unit deposits its mass as a jump at its failure age. Mass
    held by a censored last unit has nowhere to go and is reported as
    ``lost_mass``.
    """
    n = pop.n
    if n == 0:
        raise DomainError("cannot redistribute mass over an empty population")
    mass = np.full(n, 1.0 / n)
    ages, events = pop.ages, pop.events
    jump_ages, jumps = [], []
    lost = 0.0
    for i in range(n):
        if events[i]:
            jump_ages.append(ages[i])
            jumps.append(mass[i])
        elif i == n - 1:
            lost = float(mass[i])
        else:
            mass[i + 1:] += mass[i] / (n - i - 1)
        mass[i] = 0.0
    if not jumps:
        return RedistributionResult(zero(), lost)
    jump_ages = np.asarray(jump_ages)
    levels = np.cumsum(jumps)
    keep = np.r_[jump_ages[1:] != jump_ages[:-1], True]
    return RedistributionResult(StepFunction(jump_ages[keep], levels[keep]), lost)


def redistribute_to_right(pop: Population) -> StepFunction:
    return redistribution_sweep(pop).curve
