"""Two-locus Moran model of a selective sweep with recombination.

Modules
-------
model
    Parameters, states, the twelve transition channels, drift and noise.
simulator
    Exact event-driven simulation, with optional lineage tagging.
analytics
    Parameter diagnostics, regimes, the fixation-time prediction, the
    constant chain and the phase schedule.
stochastic_tools
    Birth-death survival, biased-walk ruin and logistic closed forms.
fluid
    RK4 integration of the fluid limit and sup-distance comparisons.
harness, cli
    Experiment orchestration and the ``moran2locus`` command.
"""

from .analytics import (
    ConstantChain,
    PhaseSchedule,
    Regime,
    classify_regime,
    derive_constants,
    phase_predictions,
    phase_schedule,
    power_law_check,
    t_star,
    validate_parameters,
)
from .model import (
    ChannelRates,
    Parameters,
    PopulationState,
    SimplexPoint,
    SubtypeLedger,
    channel_rates,
    drift,
    growth_rates,
    noise,
    subtype_channel_rates,
)
from .simulator import ReplicateSummary, SimConfig, replicate_seed, run, run_with_lineage

__version__ = "0.1.0"

__all__ = [
    "ChannelRates",
    "ConstantChain",
    "Parameters",
    "PhaseSchedule",
    "PopulationState",
    "Regime",
    "ReplicateSummary",
    "SimConfig",
    "SimplexPoint",
    "SubtypeLedger",
    "channel_rates",
    "classify_regime",
    "derive_constants",
    "drift",
    "growth_rates",
    "noise",
    "phase_predictions",
    "phase_schedule",
    "power_law_check",
    "replicate_seed",
    "run",
    "run_with_lineage",
    "subtype_channel_rates",
    "t_star",
    "validate_parameters",
]
