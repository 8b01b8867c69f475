"""
Configuration file for the cellular blind interference alignment workbench
"""
from fractions import Fraction
import os

# Data Paths
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
OUTPUT_DIR = os.getenv("CELLBLIND_OUTPUT_DIR", os.path.join(BASE_DIR, "output"))

# Reproducibility
# Stochastic commands refuse to run without a seed; this is the fallback.
DEFAULT_SEED = os.getenv("CELLBLIND_SEED", None)

# Channel Model
DEFAULT_TAU = 1
MAGNITUDE_BOUNDS = (0.05, 20.0)
SCALED_LINK_RANGE = (0.5, 2.0)

# Verifier Settings
DEFAULT_TOLERANCE = 1e-8
DEFAULT_DRAWS = 20
EXACT_TRIALS = 5
EXACT_RATIONAL_BOUND = 1000  # |numerator| and denominator of exact channel draws

# Symmetric (D,U,K) scheme
DUK_VECTOR_SEED = 20120815

# Bounds Settings
ORTHOGONAL_PATTERN_CAP = 24
ORTHOGONAL_NODE_LIMIT = 200_000
EXACT_LP_CELL_LIMIT = 2500  # rows x columns handled by the rational simplex
CERTIFICATE_MAX_DENOMINATOR = 10**6

# Simulator Settings
SNR_WINDOW_DB = (30.0, 40.0)
SIMULATION_DRAWS = 200
SLOPE_TOLERANCE = 0.1
DEFAULT_SNR_LIST_DB = [0.0, 10.0, 20.0, 30.0, 40.0]

# Known results that no routine here derives
COOPERATION_BOUND_FOUR_CELL = Fraction(8, 3)
MACRO_FEMTO_DOF_WITH_CSIT = Fraction(4)
MACRO_FEMTO_DOF_FULL_COOPERATION = Fraction(6)
MACRO_FEMTO_COMPOUND_CELL_A = Fraction(2)

# Report Settings
REPORT_WIDTH = 78
