"""Two-qubit quantum collision model with ancilla-ancilla partial swaps."""

__version__ = "0.1.0"

from .engine import (  # noqa: E402
    CollisionState,
    InvariantViolation,
    Propagator,
    SteadyState,
    TrajectoryRecord,
    find_steady_state,
    init_scheme_a,
    init_scheme_b,
    run,
    step_scheme_a,
    step_scheme_b,
)
from .measures import (  # noqa: E402
    MeasureSeries,
    blp_revival_count,
    concurrence,
    fidelity,
    gibbs_state,
    trace_distance,
    trace_distance_series,
)
from .model import (  # noqa: E402
    SchemeConfig,
    build_hamiltonian,
    named_state,
    partial_swap_unitary,
    thermal_ancilla,
)
from .phasespace import (  # noqa: E402
    QuadratureSpec,
    multipole_operator,
    nonclassical_volume,
    spherical_harmonic,
    wigner_3j,
    wigner_two_qubit,
)
