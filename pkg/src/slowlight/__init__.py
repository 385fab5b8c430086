"""Exact slow-light soliton solutions of the Lambda-type Maxwell-Bloch system.

The package builds dressed (soliton) solutions from a seed controlling field,
computes derived observables, and checks everything against an independent
finite-difference Maxwell-Bloch oracle.
"""

__version__ = "0.1.0"

from .background import (  # noqa: E402
    BackgroundProfile,
    Constant,
    ExponentialSwitch,
    StepOff,
    Tabulated,
    TanhSwitch,
    load_tabulated,
)
from .darboux import (  # noqa: E402
    DressedSolution,
    dressed_general,
    dressing_matrix,
    fast_soliton,
    fundamental_matrix,
    one_soliton_timedep,
    slow_soliton,
    zero_background_memory,
)
from .errors import *  # noqa: E402,F401,F403
from .fieldmap import FieldMap, build_fieldmap  # noqa: E402
from .model import (  # noqa: E402
    AtomicState,
    Coordinates,
    DensityMatrix,
    PhysicalParams,
    SpectralConfig,
    UnitSystem,
)
from .scattering import (  # noqa: E402
    ScatteringSolution,
    adiabatic_approx,
    closed_form,
    constant_background,
    piecewise_scenario,
    solve_integral_iteration,
    solve_riccati_ode,
)
