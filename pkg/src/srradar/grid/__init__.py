from .grid_spec import GridSpec
from .solver import SolverOptions, GridEstimate, solve_bp, solve_bpdn, soft_threshold
from .extraction import Extraction, Debiased, extract_targets, debias
from .metrics import resolution_error, resolution_cost
from .reference import solve_reference
