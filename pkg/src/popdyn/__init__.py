"""Popularity dynamics under cumulative advantage and quality signals.

Simulate probability-matching copiers, write and read social-trading style
transaction logs, reconstruct daily popularity and rolling performance, and
test for a popularity x performance interaction.
"""
from .model import (
    ExactBayes,
    LinearF,
    ModelParams,
    SignalModel,
    exact_f,
    expected_delta_approx,
    expected_delta_exact,
    linear_f,
    posterior_step,
)
from .simulator import MarketConfig, emit_logs, simulate_market, simulate_trajectory
from .stats import student_t_sf

__version__ = "0.1.0"

__all__ = [
    "ExactBayes",
    "LinearF",
    "MarketConfig",
    "ModelParams",
    "SignalModel",
    "emit_logs",
    "exact_f",
    "expected_delta_approx",
    "expected_delta_exact",
    "linear_f",
    "posterior_step",
    "simulate_market",
    "simulate_trajectory",
    "student_t_sf",
]
