"""Project-wide constants for the hybrid-Liouvillian simulator."""

# Liouville-space basis order of a vectorized 2x2 density matrix (row-major)
BASIS_LABELS = ("uu", "ud", "du", "dd")

REFERENCE_STATE_NAMES = ("mixed", "plus", "minus", "up", "down")

# State validation
HERMITICITY_TOLERANCE = 1e-10
POSITIVITY_TOLERANCE = 1e-10
TRACE_TOLERANCE = 1e-10

# Spectral analysis (cluster tolerance relative to max(||S||_2, 1), rank tolerance relative
# to the k-th power of the largest singular value of S - lambda I)
CLUSTER_TOLERANCE = 1e-4
RANK_TOLERANCE = 1e-8
ILL_CONDITIONED_FACTOR = 10.0

# Atlas
THIRD_ORDER_ALPHA_RANGE = (1.0, 3.0**0.5)
DOMAIN_SLACK = 1e-12
NEWTON_MAX_ITERATIONS = 100
NEWTON_RESIDUAL_TOLERANCE = 1e-10
NEWTON_STEP_TOLERANCE = 1e-12
NEWTON_NOISE_FLOOR = 1e-13
NEWTON_DAMPING = 0.5
NEWTON_MAX_HALVINGS = 12
FINITE_DIFFERENCE_STEP = 1e-6
DEDUP_RADIUS = 1e-4
BRANCH_MATCH_RADIUS = 1e-3
SNAP_TOLERANCE = 1e-6

# Protocol field strength: Liouvillian coherent couplings omega/2 = 1 in the reference runs
REFERENCE_OMEGA = 2.0

# Integration
DEFAULT_STEPS_PER_UNIT_TIME = 1000
MIN_STEPS_PER_UNIT_TIME = 100
INTEGRATION_FAULT_TOLERANCE = 1e-6
STEP_CHUNK_SIZE = 8192
MAX_HISTORY_ROWS = 10_000

# Output
CSV_FLOAT_FORMAT = "%.12g"
SIGNIFICANT_DIGITS = 12

ATLAS_COLUMNS = [
    "branch", "alpha", "theta", "q", "re_lambda", "im_lambda", "order", "classification",
]
SWEEP_COLUMNS = ["kind", "q0", "chi", "T", "F_normalized", "F_raw", "P"]
EVOLVE_COLUMNS = SWEEP_COLUMNS + [
    "rho_uu", "re_rho_ud", "im_rho_ud", "rho_dd", "steps", "max_local_error",
]
HISTORY_COLUMNS = ["t", "trace", "rho_uu", "re_rho_ud", "im_rho_ud", "rho_dd"]
GAP_COLUMNS = ["t", "alpha", "theta", "q", "min_gap"]
VALIDATION_COLUMNS = ["suite", "name", "passed", "value", "detail"]

# CLI exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VALIDATION = 3

PACKAGE_VERSION = "0.1.0"
