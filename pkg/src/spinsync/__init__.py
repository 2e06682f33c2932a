"""Phase synchronization of an effective spin-1 system built from Rb-87 levels.

The package assembles the six-level rotating-frame master equation, reduces
it to an effective three-level model by eliminating the excited manifold,
and evaluates steady states, time evolution, perturbative expansions and
Husimi-Q phase-space distributions.
"""

from .dynamics import closed_form_sq, evolve, steady_state
from .effective import build_effective_model, effective_parameters
from .observables import husimi_max, husimi_q, sync_measure
from .operators import TOL, LindbladTerm, Tolerances, liouvillian
from .rb87 import RB87, DriveConfig, PhysicalConstants, reference_drive, mhz

__all__ = [
    "RB87",
    "TOL",
    "DriveConfig",
    "LindbladTerm",
    "PhysicalConstants",
    "Tolerances",
    "build_effective_model",
    "closed_form_sq",
    "effective_parameters",
    "evolve",
    "reference_drive",
    "husimi_max",
    "husimi_q",
    "liouvillian",
    "mhz",
    "steady_state",
    "sync_measure",
]
