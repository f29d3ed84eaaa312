# MIT License

# Copyright (c) 2023 Izhar Ahmad

# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.


# Matrix exponential
EXPM_THETA_13 = 5.371920351148152
PADE_13_COEFFICIENTS = (
    64764752532480000., 32382376266240000., 7771770303897600.,
    1187353796428800., 129060195264000., 10559470521600.,
    670442572800., 33522128640., 1323241920., 40840800.,
    960960., 16380., 182., 1.,
)

# Tolerances
DISTRIBUTION_TOLERANCE = 1e-12
SIMPLEX_TOLERANCE = 1e-10
GENERATOR_ROW_SUM_TOLERANCE = 1e-14
MARGINAL_OMEGA = 1e-7
ODE_TOLERANCE = 1e-10
UNIFORMIZATION_TOLERANCE = 1e-10
LEAK_TOLERANCE = 1e-6
RESIDUAL_FACTOR = 1e-10
CONDITION_WARNING = 1e12
BISECTION_RTOL = 1e-6
BISECTION_MAX_ITERATIONS = 200
GOLDEN_SECTION_XTOL = 1e-4

# Simulation
POPULATION_LIMIT = 2 ** 31
CONFIDENCE_Z = 1.96
DEFAULT_SEED = 20230401
DEFAULT_SIM_BATCH = 4096
DEFAULT_WORKERS = 4

# Desk-scale limits
MAX_STORAGE_LOCATIONS = 8
MAX_TRUNCATED_QUEUES = 3
MAX_TRUNCATION_CAP = 40
MAX_TRUNCATED_ENV = 4

# Output
CSV_DIGITS = 17

# Environment variables
ENV_PREFIX = 'LAPIS_FLOW_'

# Exit codes
EXIT_CODES = {
    'SUCCESS': 0,
    'USAGE': 1,
    'MODEL_INVALID': 2,
    'NUMERIC_FAILURE': 3,
}

# Error codes
ERROR_CODES = {
    # Unspecified (-1)
    'UNSPECIFIED_ERROR': -1,

    # Input (1000-1999)
    'VALIDATION_ERROR': 1000,
    'USAGE_ERROR': 1001,
    'SCHEMA_ERROR': 1002,
    'NOTHING_TO_COUNT': 1003,

    # Linear algebra (2000-2999)
    'MATRIX_OVERFLOW': 2000,
    'NO_CONVERGENCE': 2001,
    'SINGULAR_MATRIX': 2002,
    'STEP_SIZE_UNDERFLOW': 2003,

    # Analysis (3000-3999)
    'UNSTABLE_MODEL': 3000,
    'OUTSIDE_FORMULA_REGIME': 3001,
    'POPULATION_OVERFLOW': 3003,

    # Searches (4000-4999)
    'NOT_MONOTONE': 4001,
    'EMPTY_FEASIBLE_SET': 4002,
}

ERROR_NAMES = {
    code: name
    for name, code in ERROR_CODES.items()
}

ERROR_HINTS = {
    'UNSTABLE_MODEL': 'Stationary means exist only when the spectral abscissa is negative; use transient analysis instead.',
    'MATRIX_OVERFLOW': 'The model is explosive on this horizon; shorten the horizon or check the multiplicative transitions.',
    'NOTHING_TO_COUNT': 'A counted departure stream has zero rate in every environment state.',
    'OUTSIDE_FORMULA_REGIME': 'Cross-check the parameters with the stability verdict of the two-queue encoding.',
    'NOT_MONOTONE': 'The metric does not move monotonically between the variable bounds; check the direction or the bounds.',
}
