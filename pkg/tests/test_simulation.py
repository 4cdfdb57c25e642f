import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kmdecomp.errors import DomainError
from kmdecomp.estimator import km_product
from kmdecomp.simulation import (
    PAPER_CENSORING,
    PAPER_FAILURE,
    SimConfig,
    WeibullSpec,
    simulate_population,
    true_weibull_cdf,
    weibull_sample,
)

U_ONE = 1 - math.exp(-1)


def sup_distance(curve, spec, upper):
    """Exact sup over [0, upper] of |curve - true CDF|, probing both sides of every jump."""
    bp = curve.breakpoints[curve.breakpoints <= upper]
    truth = true_weibull_cdf(spec, bp)
    right = np.abs(curve(bp) - truth)
    left_vals = np.concatenate(([curve.base_value], curve(bp)[:-1]))
    left = np.abs(left_vals - truth)
    end = abs(curve(upper) - true_weibull_cdf(spec, upper))
    return float(max(right.max(initial=0), left.max(initial=0), end))


def test_weibull_sample_exponential():
    assert weibull_sample(WeibullSpec(1, 1), U_ONE) == pytest.approx(1.0, rel=1e-14)


def test_weibull_sample_scale():
    assert weibull_sample(WeibullSpec(2, 3), U_ONE) == pytest.approx(3.0, rel=1e-14)


@given(st.floats(1e-9, 1 - 1e-9), st.floats(1e-9, 1 - 1e-9))
def test_weibull_sample_monotone(u1, u2):
    spec = WeibullSpec(1.4, 1.0)
    if u1 < u2:
        assert weibull_sample(spec, u1) <= weibull_sample(spec, u2)


@pytest.mark.parametrize("u", [0.0, 1.0, -0.5, 2.0])
def test_weibull_sample_domain(u):
    with pytest.raises(DomainError):
        weibull_sample(WeibullSpec(1, 1), u)


def test_true_cdf_values():
    assert true_weibull_cdf(WeibullSpec(1, 1), 1) == pytest.approx(0.632121, abs=1e-6)
    assert true_weibull_cdf(WeibullSpec(1, 1), 0) == 0
    assert true_weibull_cdf(WeibullSpec(1.4, 1), 1) == pytest.approx(0.632121, abs=1e-6)
    with pytest.raises(DomainError):
        true_weibull_cdf(WeibullSpec(1, 1), -1)


def test_quantile_inverts_cdf():
    spec = WeibullSpec(1.4, 1.0)
    assert true_weibull_cdf(spec, spec.quantile(0.95)) == pytest.approx(0.95)


@pytest.mark.parametrize("kwargs", [{"shape": 0, "scale": 1}, {"shape": 1, "scale": -1}])
def test_invalid_spec(kwargs):
    with pytest.raises(DomainError):
        WeibullSpec(**kwargs)


def test_invalid_config():
    with pytest.raises(DomainError):
        SimConfig(n=0)


def test_no_censoring_with_huge_scale():
    pop, _ = simulate_population(SimConfig(n=200, censoring=WeibullSpec(1, 1e9), seed=7))
    assert pop.events.all()


def test_paper_config_mixes_failures_and_censoring():
    pop, _ = simulate_population(SimConfig(n=100, failure=PAPER_FAILURE,
                                           censoring=PAPER_CENSORING, seed=0))
    assert 0 < (~pop.events).mean() < 1


def test_same_seed_bit_identical():
    a, ta = simulate_population(SimConfig(seed=11))
    b, tb = simulate_population(SimConfig(seed=11))
    assert a.ages.tobytes() == b.ages.tobytes()
    assert np.array_equal(a.events, b.events)
    assert ta.tobytes() == tb.tobytes()
    c, _ = simulate_population(SimConfig(seed=12))
    assert a.ages.tobytes() != c.ages.tobytes()


@pytest.mark.parametrize("seed", [0, 1, 2**63])
def test_ground_truth_consistency(seed):
    pop, truth = simulate_population(SimConfig(n=300, seed=seed))
    fail, cens = truth[:, 0], truth[:, 1]
    observed = np.minimum(fail, cens)
    order = np.lexsort((~(fail <= cens), observed))
    assert np.array_equal(pop.ages, observed[order])
    assert np.array_equal(pop.events, (fail <= cens)[order])


def test_km_converges_to_true_cdf():
    pop, _ = simulate_population(SimConfig(n=10_000, censoring=WeibullSpec(1, 1e9), seed=3))
    assert pop.events.all()
    spec = PAPER_FAILURE
    assert sup_distance(km_product(pop), spec, spec.quantile(0.95)) < 0.03
