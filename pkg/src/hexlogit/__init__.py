"""Conditional logit estimation for triadic networks with fixed effects.

The main entry points are :func:`fit` (dyad-level fixed effects),
:func:`nodefe_fit` and :func:`tetrad_fit`, the Monte Carlo harness
:func:`run_monte_carlo`, and the command-line tool ``hexlogit``.
"""

__version__ = "0.1.0"

from .alt import nodefe_fit, nodefe_indicators, tetrad_fit, tetrad_indicators
from .condlogit import ConditionalLogit, FitConfig, newton_maximize
from .errors import (
    DataError,
    DegenerateInferenceError,
    HexLogitError,
    IdentificationError,
    InsufficientDataError,
    InvalidArgumentError,
    NoInformationError,
    NumericalError,
    ResourceLimitError,
)
from .hexad import enumerate_informative, fit, hexad_mask, wiring_indicators
from .inference import sandwich_vcov, triad_cluster_scores, wald_and_ci
from .network import FixedEffects, Triad, TriadicNetwork, bipartite_network
from .results import EstimationResult
from .simulation import MonteCarloSummary, SimulationConfig, qq_points, run_monte_carlo, simulate_network

__all__ = [
    "ConditionalLogit", "DataError", "DegenerateInferenceError", "EstimationResult", "FitConfig",
    "FixedEffects", "HexLogitError", "IdentificationError", "InsufficientDataError", "InvalidArgumentError",
    "MonteCarloSummary", "NoInformationError", "NumericalError", "ResourceLimitError", "SimulationConfig",
    "Triad", "TriadicNetwork", "bipartite_network", "enumerate_informative", "fit", "hexad_mask",
    "newton_maximize", "nodefe_fit", "nodefe_indicators", "qq_points", "run_monte_carlo", "sandwich_vcov",
    "simulate_network", "tetrad_fit", "tetrad_indicators", "triad_cluster_scores", "wald_and_ci",
    "wiring_indicators",
]
