"""Kaplan-Meier estimation with a unit-level sum decomposition."""

from .decomposition import (
    AttributionSplit,
    UnitDecomposition,
    aggregate,
    consistency_check,
    decompose,
    fixed_point_step,
    redistribute_to_right,
    split_empirical_predicted,
    stacked_contributions,
    unit_estimator,
)
from .errors import DegenerateConditioningError, DomainError, KMDecompError, ParseError, VerificationError
from .estimator import conditional_cdf, empirical_cdf, km_product, unit_km_via_imputation
from .population import ObservedUnit, Population, build_population, ingest_csv, tail
from .simulation import SimConfig, WeibullSpec, simulate_population, true_weibull_cdf, weibull_sample
from .steps import StepFunction, evaluate, unit_step

__version__ = "0.1.0"
