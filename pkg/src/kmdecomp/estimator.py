"""Closed-form estimators: product-limit, empirical CDF, conditional imputation."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DegenerateConditioningError, DomainError
from .population import Population
from .steps import StepFunction, evaluate, unit_step, zero

__all__ = [
    "StepFunction",
    "evaluate",
    "unit_step",
    "km_product",
    "empirical_cdf",
    "conditional_cdf",
    "unit_km_via_imputation",
]


def _last_per_age(ages: np.ndarray, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # ages sorted; for tied ages keep the value after the last tied jump
    last = np.r_[ages[1:] != ages[:-1], True]
    return ages[last], values[last]


def km_product(pop: Population) -> StepFunction:
    r"""Kaplan-Meier cumulative failure estimator in product form.

    .. math::

        F(\tau) = 1 - \prod_{j=1}^{n} \left(1 - \frac{\delta_j \Theta(\tau - t_j)}{n - j + 1}\right)

    The product runs over units in effective order, so the at-risk count of
    the ``j``-th unit is ``n - j + 1``. Tied failures therefore contribute one
    factor each, which multiplies out to the usual ``1 - d/r`` factor.
    The empty population and fully censored populations give the zero curve.
    """
    n = pop.n
    events = pop.events
    if n == 0 or not events.any():
        return zero()
    ages = pop.ages
    at_risk = n - np.arange(n, dtype=float)
    factors = np.where(events, 1.0 - 1.0 / at_risk, 1.0)
    cdf = 1.0 - np.cumprod(factors)
    failed = np.flatnonzero(events)
    return StepFunction(*_last_per_age(ages[failed], cdf[failed]))


def empirical_cdf(ages: Sequence[float]) -> StepFunction:
    """Fraction of ``ages`` that are ``<= tau``."""
    arr = np.sort(np.asarray(ages, dtype=float).ravel())
    if arr.size == 0:
        raise DomainError("empirical CDF of an empty sample is undefined")
    if arr[0] < 0:
        raise DomainError("ages must be non-negative")
    counts = np.arange(1, arr.size + 1, dtype=float)
    return StepFunction(*_last_per_age(arr, counts / arr.size))


def conditional_cdf(F: StepFunction, t: float) -> StepFunction:
    """CDF ``F`` conditioned on survival up to age ``t``.

    ``G(tau) = Theta(tau - t) * (F(tau) - F(t)) / (1 - F(t))``; zero up to and
    including ``t`` wherever ``F`` is flat there.

    Raises
    ------
    DegenerateConditioningError
        If ``F(t) >= 1``: nothing can survive past a certain failure.
    """
    at_t = evaluate(F, t)
    if not at_t < 1.0:
        raise DegenerateConditioningError(
            f"cannot condition on survival to age {t!r}: F(t) = {at_t!r}"
        )
    later = F.breakpoints > t
    return StepFunction(F.breakpoints[later], (F.values[later] - at_t) / (1.0 - at_t))


def unit_km_via_imputation(pop: Population, j: int) -> StepFunction:
    """Semi-empirical CDF of unit ``j`` (1-based) imputed with the population estimator.

    A failed unit gets its own unit step. A censored unit gets the population
    Kaplan-Meier curve conditioned on survival to its censoring age. That
    conditioning is never degenerate: reaching ``F = 1`` at or before a
    censored unit would need a failure with a single unit at risk, which can
    only be the last unit.
    """
    if not 1 <= j <= pop.n:
        raise IndexError(f"unit index {j} out of range 1..{pop.n}")
    unit = pop[j - 1]
    if unit.event:
        return unit_step(unit.age)
    return conditional_cdf(km_product(pop), unit.age)
