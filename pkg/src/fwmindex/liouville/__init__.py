"""Density-matrix (Lindblad) engine for multilevel atoms."""

from .angular import wigner_3j, wigner_6j, wigner_coupling
from .generator import (
    Liouvillian,
    SingularSystem,
    SteadyState,
    UnphysicalState,
    build_rotating_frame_generator,
    steady_state,
)
from .response import ResponseEngine, SweepResult, linear_response_susceptibilities
from .scheme import (
    DecayChannel,
    Dephasing,
    DipoleCoupling,
    DriveAssignment,
    Field,
    LevelScheme,
    SchemeError,
    State,
    rotating_frame,
)
