"""Entanglement generated by bipartition of fundamental and N-bound optical solitons."""

__version__ = "0.1.0"

from .classical import (  # noqa: E402
    ClassicalField,
    SolitonSpec,
    initial_soliton,
    mid_intensity,
    propagate_classical,
)
from .entanglement import (  # noqa: E402
    EntanglementReport,
    Partition,
    Side,
    ThermalModeDecomposition,
    entanglement_of,
    entropy_thermal,
    mode_contributions,
    restrict,
    thermal_modes,
)
from .fluctuations import (  # noqa: E402
    CorrelationPair,
    FluctuationState,
    co_propagate,
    correlations,
    initial_fluctuations,
    propagate_fluctuations,
    to_omega_domain,
)
from .grid import Domain, Grid, UnitSystem, conjugate_grid, make_grid  # noqa: E402
