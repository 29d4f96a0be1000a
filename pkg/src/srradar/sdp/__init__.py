from .problem import SdpProblem, build_sdp, build_sdp_noisy, MAX_SDP_LENGTH
from .solver import (
    SdpOptions,
    ConicSolution,
    solve_sdp,
    restore_feasibility,
    constraint_report
)
from .dual_poly import (
    DualPoly,
    FeasibilityReport,
    PrimalRecovery,
    dual_poly,
    locate_shifts,
    verify_dual_feasibility,
    primal_from_dual
)
