"""simris: channel simulator for RIS-assisted mmWave links.

Generates statistically faithful Tx-RIS, RIS-Rx, and direct-link channel
realizations for indoor-office and street-canyon environments at 28 and
73 GHz, applies RIS phase control, and evaluates achievable rates.
"""

from .channel import (
    ChannelConfig,
    ChannelRealization,
    effective_channel,
    realization,
    realize,
)
from .clusters import Cluster, ClusterSet, ClusterStatistics, Link, Subray
from .geometry import (
    Environment,
    LocalAngles,
    Point3,
    Scenario,
    Violation,
    WallPlacement,
    distance,
    local_angles,
    recommend_positions,
    validate_scenario,
)
from .metrics import RateReport, RxGrid, achievable_rate, power_scaling_sweep, rate_heatmap, snr
from .propagation import LinkBudgetParams, PathLossModel, RcsParams, ci_path_loss, los_probability
from .ris import RisPhaseProfile, off_profile, optimal_phases, quantize, random_phases

__version__ = "0.1.0"

__all__ = [
    "ChannelConfig",
    "ChannelRealization",
    "Cluster",
    "ClusterSet",
    "ClusterStatistics",
    "Environment",
    "Link",
    "LinkBudgetParams",
    "LocalAngles",
    "PathLossModel",
    "Point3",
    "RateReport",
    "RcsParams",
    "RisPhaseProfile",
    "RxGrid",
    "Scenario",
    "Subray",
    "Violation",
    "WallPlacement",
    "achievable_rate",
    "ci_path_loss",
    "distance",
    "effective_channel",
    "local_angles",
    "los_probability",
    "off_profile",
    "optimal_phases",
    "power_scaling_sweep",
    "quantize",
    "random_phases",
    "rate_heatmap",
    "realization",
    "realize",
    "recommend_positions",
    "snr",
    "validate_scenario",
]
