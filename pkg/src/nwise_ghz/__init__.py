"""GHZ-state generation in qubit chains with an all-qubit coupling and a
single linear sweep on one ancilla qubit."""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .model import (  # noqa: E402
    ChainModel,
    ChainSpec,
    DriveKind,
    DriveProfile,
    apply_hamiltonian,
    build_chain,
    drive_value,
)
from .subspace import (  # noqa: E402
    SubspacePair,
    TwoLevelProblem,
    check_constants_of_motion,
    effective_two_level,
    enumerate_subspaces,
    pair_of,
)
from .propagator import (  # noqa: E402
    TrajectoryRecord,
    propagate_full,
    propagate_two_level,
    transition_probability,
)
from .analytics import (  # noqa: E402
    DimensionlessParams,
    HardwareParams,
    RampKind,
    adiabaticity,
    estimate_duration,
    half_transition_lambda,
    lmsz_asymptotic_half_ramp,
    lmsz_asymptotic_symmetric,
    solve_slope_for_probability,
)
from .ghz import GhzReport, ghz_fidelity, ghz_like_target  # noqa: E402
