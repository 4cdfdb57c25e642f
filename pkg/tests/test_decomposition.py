from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import populations
from kmdecomp.decomposition import (
    aggregate,
    consistency_check,
    consistency_deviation,
    decompose,
    fixed_point_step,
    iterate_fixed_point,
    redistribute_to_right,
    redistribution_sweep,
    split_empirical_predicted,
    stacked_contributions,
    unit_estimator,
)
from kmdecomp.errors import DegenerateConditioningError, DomainError
from kmdecomp.estimator import empirical_cdf, km_product
from kmdecomp.population import ObservedUnit, Population
from kmdecomp.steps import StepFunction, evaluation_grid, max_abs_diff, unit_step, zero
from oracles import redistribution_exact, sum_form_exact

# unit curves at tau = 6 in the granular example
GRANULAR_AT_6 = [Fraction(11, 15), 1, Fraction(2, 3), 1, 1, 0]


def close(a, b, tol=1e-12):
    grid = evaluation_grid([a, b])
    return max_abs_diff(a, b, grid) <= tol


def test_first_unit_matches_population_km(granular):
    G1 = unit_estimator(granular, 1)
    assert close(G1, km_product(granular))
    assert G1(2) == pytest.approx(1 / 5) and G1(4) == pytest.approx(7 / 15)
    assert G1(5) == pytest.approx(11 / 15)


def test_third_unit_is_tail_km(granular):
    G3 = unit_estimator(granular, 3)
    assert G3.breakpoints.tolist() == [4, 5]
    assert G3(3.9) == 0
    assert G3(4) == pytest.approx(1 / 3, abs=1e-12)
    assert G3(5) == pytest.approx(2 / 3, abs=1e-12)


def test_last_censored_unit_contributes_nothing(granular):
    assert unit_estimator(granular, 6) == zero()


def test_failed_units_are_unit_steps(granular):
    for j in (2, 4, 5):
        assert unit_estimator(granular, j) == unit_step(j)


def test_unit_estimator_index(granular):
    with pytest.raises(IndexError):
        unit_estimator(granular, 0)


def test_decompose_granular(granular):
    d = decompose(granular)
    assert d.n == 6 and d.weight == pytest.approx(1 / 6)
    for curve, value in zip(d.unit_curves, GRANULAR_AT_6):
        assert curve(6) == pytest.approx(float(value), abs=1e-12)


def test_decompose_empty():
    with pytest.raises(DomainError):
        decompose(Population())


def test_decompose_all_failed():
    pop = Population.from_arrays([1, 2, 3], [1, 1, 1])
    d = decompose(pop)
    assert all(c == unit_step(t) for c, t in zip(d.unit_curves, [1, 2, 3]))
    assert aggregate(d) == empirical_cdf([1, 2, 3])


def test_decompose_single_censored():
    d = decompose(Population.from_arrays([2], [0]))
    assert d.unit_curves == (zero(),)


def test_aggregate_granular(granular):
    expected = sum(GRANULAR_AT_6) / 6
    assert expected == Fraction(11, 15)
    assert aggregate(decompose(granular))(6) == pytest.approx(11 / 15, abs=1e-12)


def test_aggregate_trivial_cases():
    assert aggregate(decompose(Population.from_arrays([1, 2], [0, 0]))) == zero()
    assert aggregate(decompose(Population.from_arrays([1.5], [1]))) == unit_step(1.5)


def test_split_granular(granular):
    split = split_empirical_predicted(decompose(granular))
    assert split.empirical_part(6) == pytest.approx(0.5, abs=1e-12)
    assert Fraction(11, 15) / 6 + Fraction(2, 3) / 6 == Fraction(7, 30)
    assert split.predicted_part(6) == pytest.approx(7 / 30, abs=1e-12)
    assert split.total(6) == pytest.approx(11 / 15, abs=1e-12)


def test_split_degenerate():
    s = split_empirical_predicted(decompose(Population.from_arrays([1, 2], [1, 1])))
    assert s.predicted_part == zero()
    s = split_empirical_predicted(decompose(Population.from_arrays([1, 2], [0, 0])))
    assert s.predicted_part == zero() and s.empirical_part == zero()


def test_stacked_granular(granular):
    layers = stacked_contributions(decompose(granular), [6]).layers[0]
    expected = np.array([11, 26, 36, 51, 66, 66]) / 90
    assert np.max(np.abs(layers - expected)) <= 1e-12


def test_stacked_before_any_event(granular):
    layers = stacked_contributions(decompose(granular), [0, 0.5]).layers
    assert not layers.any()


def test_stacked_unsorted_grid(granular):
    with pytest.raises(DomainError):
        stacked_contributions(decompose(granular), [2, 1])


def test_consistency_granular(granular):
    assert consistency_check(granular, 3)
    assert consistency_check(granular, 1)
    assert consistency_check(granular, 6)
    with pytest.raises(DomainError):
        consistency_check(granular, 2)


def test_fixed_point_granular(granular):
    d = decompose(granular)
    out = fixed_point_step(d.unit_curves, granular)
    assert all(close(a, b, 1e-12) for a, b in zip(out, d.unit_curves))


def test_fixed_point_uncensored_resets_to_steps():
    pop = Population.from_arrays([1, 2, 3], [1, 1, 1])
    junk = [StepFunction([0.5], [0.3])] * 3
    assert fixed_point_step(junk, pop) == [unit_step(1), unit_step(2), unit_step(3)]


def test_fixed_point_all_censored_zero():
    pop = Population.from_arrays([1, 2], [0, 0])
    assert fixed_point_step([zero(), zero()], pop) == [zero(), zero()]


def test_fixed_point_degenerate():
    pop = Population.from_arrays([1, 2], [1, 0])
    with pytest.raises(DegenerateConditioningError):
        fixed_point_step([unit_step(1), unit_step(1)], pop)


def test_iteration_from_zero_family_reaches_unit_level_curves(granular):
    curves, iterations, change = iterate_fixed_point([zero()] * 6, granular)
    assert change <= 1e-10 and iterations < 1000
    assert all(close(a, b, 1e-9) for a, b in zip(curves, decompose(granular).unit_curves))


def test_redistribution_granular(granular):
    res = redistribution_sweep(granular)
    assert close(res.curve, km_product(granular))
    assert res.lost_mass == pytest.approx(4 / 15)
    assert res.lost_mass == pytest.approx(1 - res.curve.final_value)


def test_redistribution_degenerate():
    assert redistribute_to_right(Population.from_arrays([1, 2, 3], [1, 1, 1])) == empirical_cdf([1, 2, 3])
    assert redistribute_to_right(Population.from_arrays([1, 2, 3], [0, 0, 0])) == zero()
    with pytest.raises(DomainError):
        redistribute_to_right(Population())


# --- properties ------------------------------------------------------------

@given(populations())
def test_sum_identity(pop):
    d = decompose(pop)
    km = km_product(pop)
    grid = evaluation_grid((*d.unit_curves, km), extra=pop.ages[-1:])
    assert max_abs_diff(aggregate(d), km, grid) <= 1e-12


@given(populations(ties=True))
def test_sum_identity_with_ties(pop):
    d = decompose(pop)
    assert close(aggregate(d), km_product(pop))


@given(populations(max_n=8))
@settings(max_examples=50)
def test_sum_identity_exact_oracle(pop):
    ages, events = pop.ages.tolist(), pop.events.astype(int).tolist()
    agg = aggregate(decompose(pop))
    for tau in evaluation_grid([agg], extra=ages):
        assert agg(tau) == pytest.approx(float(sum_form_exact(ages, events, tau)), abs=1e-12)


@given(populations(ties=True))
def test_redistribution_oracle(pop):
    assert close(redistribute_to_right(pop), km_product(pop))


@given(populations(max_n=8))
@settings(max_examples=50)
def test_redistribution_exact_oracle(pop):
    ages, events = pop.ages.tolist(), pop.events.astype(int).tolist()
    rtr = redistribute_to_right(pop)
    for tau in evaluation_grid([rtr], extra=ages):
        assert rtr(tau) == pytest.approx(float(redistribution_exact(ages, events, tau)), abs=1e-12)


@given(populations(ties=True))
def test_consistency_every_censored_unit(pop):
    for j, u in enumerate(pop, start=1):
        if not u.event:
            assert consistency_deviation(pop, j) <= 1e-12


@given(populations(ties=True))
def test_fixed_point(pop):
    d = decompose(pop)
    out = fixed_point_step(d.unit_curves, pop)
    assert all(close(a, b) for a, b in zip(out, d.unit_curves))


@given(populations())
def test_split_additivity_and_exact_counts(pop):
    d = decompose(pop)
    split = split_empirical_predicted(d)
    grid = d.grid()
    assert np.max(np.abs(split.total(grid) - aggregate(d)(grid))) <= 1e-12
    for tau in grid:
        count = sum(1 for u in pop if u.event and u.age <= tau)
        assert split.empirical_part(tau) == count / pop.n
        assert round(split.empirical_part(tau) * pop.n) == count


@given(populations())
def test_trivially_censored_unit_invariance(pop):
    extended = Population((ObservedUnit(0.0, False),) + pop.units)
    before, after = aggregate(decompose(pop)), decompose(extended)
    assert close(aggregate(after), before)
    assert close(after.unit_curves[0], km_product(pop))


@given(populations(ties=True))
def test_unit_curves_monotone_and_flat_between_failures(pop):
    d = decompose(pop)
    failure_ages = set(pop.ages[pop.events].tolist())
    for u, curve in zip(pop, d.unit_curves):
        assert curve.is_subcdf(atol=1e-12)
        if not u.event:
            assert set(curve.breakpoints.tolist()) <= {a for a in failure_ages if a > u.age}


@given(populations())
def test_stacked_layers(pop):
    d = decompose(pop)
    grid = d.grid()
    layers = stacked_contributions(d, grid).layers
    assert np.all(np.diff(layers, axis=1) >= 0)
    assert np.max(np.abs(layers[:, -1] - aggregate(d)(grid))) <= 1e-12
