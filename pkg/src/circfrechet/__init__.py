"""Exact Fréchet means on the unit circle, with uniqueness certificates."""

from .criterion import (CriterionParams, alpha_delta, guarantee_existence, mean_bound, phi_alpha,
                        satisfies_P, translate, weaken)
from .consistency import (ConcentrationReport, SimulationConfig, concentration_envelope, rate_envelope,
                          rho_from_gap, simulate)
from .frechet import NotCriticalError, derivative, functional, g_centered
from .geometry import CirclePoint, arclength_distance, exp_map, log_map, wrap
from .measures import CircularMeasure, LineMeasure, pushforward, sample, support_diameter
from .solver import CriticalPoint, MeanResult, critical_points, frechet_mean, grid_oracle
from .uniqueness import (UniquenessCertificate, VerdictMismatch, boundary_hemisphere_measure, certify,
                         find_mean_and_certify, outer_branch_minimum)

__all__ = [
    "CirclePoint", "CircularMeasure", "ConcentrationReport", "CriterionParams", "CriticalPoint",
    "LineMeasure", "MeanResult", "NotCriticalError", "SimulationConfig", "UniquenessCertificate",
    "VerdictMismatch", "alpha_delta", "arclength_distance", "boundary_hemisphere_measure", "certify",
    "concentration_envelope", "critical_points", "derivative", "exp_map", "find_mean_and_certify",
    "frechet_mean", "functional", "g_centered", "grid_oracle", "guarantee_existence", "log_map",
    "mean_bound", "outer_branch_minimum", "phi_alpha", "pushforward", "rate_envelope", "rho_from_gap",
    "sample", "satisfies_P", "simulate", "support_diameter", "translate", "weaken", "wrap",
]
