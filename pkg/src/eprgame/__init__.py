"""Closed-form outcome distributions, payoffs and Nash equilibria for N-player
quantum games played on GHZ- and W-type states in the EPR setting."""
from .closedform import (
    Family,
    MeasurementFrame,
    Outcome,
    OutcomeDistribution,
    ProbabilityRangeError,
    RotorAngles,
    correlation_coefficients,
    full_distribution,
    ghz_outcome_probability,
    outcome_probability,
    w_outcome_probability,
)
from .equilibrium import (
    NEPoint,
    PhaseDiagram,
    appendix_b_coefficients,
    boundary_payoff_curve,
    deviation_bracket,
    find_symmetric_pure_NE,
    max_entanglement_payoffs,
    ne_payoffs,
    pd_phase_boundaries,
    w_pd_optimum,
)
from .game import (
    CHICKEN,
    STANDARD_PD,
    ACoefficients,
    GameSpec,
    LinearPayoff,
    PayoffTensor,
    StrategyProfile,
    a_coeffs_from_tensor,
    a_coeffs_linear,
    canonical_embedding,
    embedded_payoff,
    minority_game,
    mixed_strategy_payoff,
)
from .kernels import BACKEND
from .oracle import oracle_distribution

__version__ = "0.1.0"
