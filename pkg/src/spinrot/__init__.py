"""Large spins and dipolar spin pairs in static plus rotating magnetic fields."""

__version__ = "0.1.0"

from .errors import NumericalContractError, ValidationError
from .halfspin import FieldConfig, HalfSpinAmplitudes
from .propagate import PropagatorPlan, evolve
from .series import TimeSeries
from .spin import SpinJ, as_spin
from .single import InitialSpec
from .twospin import TwoSpinConfig, build_hrot, evolve_two_spin, ground_state, reduce_and_entropy
from .resonance import resonance_catalog, kink_criterion, scan_samax, superposed_entropy
from .kink import kink_eigensystem
from .weakddi import Geometry, vdd_instantaneous, vdd_time_average

__all__ = [
    "FieldConfig",
    "Geometry",
    "HalfSpinAmplitudes",
    "InitialSpec",
    "NumericalContractError",
    "PropagatorPlan",
    "SpinJ",
    "TimeSeries",
    "TwoSpinConfig",
    "ValidationError",
    "as_spin",
    "build_hrot",
    "evolve",
    "evolve_two_spin",
    "ground_state",
    "kink_criterion",
    "kink_eigensystem",
    "reduce_and_entropy",
    "resonance_catalog",
    "scan_samax",
    "superposed_entropy",
    "vdd_instantaneous",
    "vdd_time_average",
]
