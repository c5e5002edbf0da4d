"""
Configuration and constants for polyasym
"""
from pathlib import Path

# Application Info
APP_NAME = "polyasym"
APP_VERSION = "1.0.0"

# Paths
BASE_DIR = Path(__file__).parent
RESOURCES_DIR = BASE_DIR / "resources"
SETTINGS_FILE = RESOURCES_DIR / "settings.json"

# Default Settings
DEFAULT_SETTINGS = {
    "precision_digits": 60,
    "eps_order": 6,
    "oracle_terms": 100000,
    "oracle_levels": 6,
    "integral_tol": "1e-30",
    "default_format": "csv",
    "jobs": 4,
    "coeff_max_order": 5
}

# Environment override for the working precision
PRECISION_ENV_VAR = "POLYASYM_PRECISION"

# Subcommands and output encodings
SUBCOMMANDS = [
    "constants", "polylog", "eulersum", "integral",
    "corollary", "coeffs", "derive", "verify-all"
]
OUTPUT_FORMATS = ["csv", "json"]

# Weights handled by the coefficient pipeline
COEFF_WEIGHTS = (3, 4, 6)

# Highest order whose coefficients are checked against printed values
VERIFIED_COEFF_ORDER = 3

# Precision Settings
MIN_PRECISION_DIGITS = 30
GUARD_DIGITS = 10

# Numeric kernel
ZETA_TABLE_RANGE = (-9, 9)
ETA_TABLE_MAX = 9
LI_HALF_WEIGHTS = (2, 3, 4, 5, 6)
GAMMA_EM_TERMS = 10 ** 4  # Euler-Maclaurin cut point N for gamma
BORWEIN_TERMS_FACTOR = 1.31  # terms per decimal digit in the eta series

# Polylog
SINGULAR_CROSSOVER = 0.95

# Quadrature
QUAD_MIN_LEVELS = 3
QUAD_MAX_LEVELS = 12
QUAD_WEIGHT_CUTOFF_EXTRA = 10  # nodes dropped once weight < 10^-(dps + this)

# Coefficient asymptotics
COEFF_DEFAULT_MAX_ORDER = 5
COEFF_DEFAULT_N_MAX = 300
EXACT_SERIES_MIN_ORDER = 400

# Error Messages
ERROR_PRECISION_TOO_LOW = "Precision must be at least {minimum} digits (got {value})."
ERROR_PRECISION_INVALID = "Precision must be an integer number of digits (got {value!r})."
ERROR_SETTINGS_INVALID = "Invalid value for setting '{key}': {value!r}"
ERROR_ZETA_BUDGET = "Eta series for zeta({s}) did not converge with {terms} terms; raise the term budget."
ERROR_DOMAIN = "{name}: argument {value} outside the supported domain {domain}."
ERROR_PARITY = "{name}: parity condition '{condition}' violated for {args}."
ERROR_QUADRATURE_DIVERGED = "Quadrature did not converge after {levels} levels (last difference {error})."
ERROR_QUADRATURE_TOL = "Quadrature tolerance {tol} is below the attainable floor {floor}."
ERROR_ORACLE_DIVERGED = "Accelerated oracle did not stabilize: estimates differ by {error} > {tol}."
ERROR_NOT_INVERTIBLE = "Series has zero leading coefficient and cannot be inverted."
ERROR_GRADING = "Grading violated at eps^{i} L^{j} (bound {bound})."
ERROR_DUAL_ROUTE = "{name}: independent routes disagree by {diff}."
ERROR_CROSSOVER = "Direct and singular polylog branches disagree at z={z} by {diff}."
ERROR_OUTPUT_FAILED = "Failed to write output to {path}: {reason}"
