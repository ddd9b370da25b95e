"""Regression utilities.

Contains defaults and constants of the CP regression.
"""

# Stop criteria
DEFAULT_MAX_SWEEPS = 200
DEFAULT_REL_TOL = 1e-6

# (d1', d2') at which the regression is solved
DEFAULT_WORKING_SHAPE = (32, 24)

# Added to normal-equation diagonals so degenerate blocks stay solvable
DIAGONAL_JITTER = 1e-12

# Floor for the relative objective change denominator
OBJECTIVE_FLOOR = 1e-12

# Factor update order within a sweep, also the serialized block order
FACTOR_NAMES = (
    'person',
    'input_row',
    'input_col',
    'output_row',
    'output_col',
)

# Number of leading (contracted) modes: person, row, column
INPUT_MODES = 3

# Penalty modes, see RegressionConfig.penalty
PENALTY_EXACT = 'exact'
PENALTY_RIDGE = 'ridge'

# Hyperparameter grid used for the published sweep
REFERENCE_RANKS = tuple(range(5, 55, 5))
REFERENCE_LAMBDAS = (0.01, 0.1, 1.0, 10.0, 100.0, 1000.0, 10000.0)
