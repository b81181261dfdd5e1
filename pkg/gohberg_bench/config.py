"""Configuration for the Gohberg bench."""

import os
import dotenv

dotenv.load_dotenv()

MAX_WORKERS = int(os.getenv("GOHBERG_MAX_WORKERS", os.cpu_count() or 1))
DENSE_LIMIT = int(os.getenv("GOHBERG_DENSE_LIMIT", "2048"))
LOG_LEVEL = os.getenv("GOHBERG_LOG_LEVEL", "INFO")

# Numerical defaults
ALGEBRA_TOL = 1e-10
ASYMPTOTIC_TOL = 1e-2
NORM_TOL = 1e-12
NORM_MAX_ITER = 10_000
DEFAULT_SEED = 0

# Direct (character table) sums are used below this many grid x window entries
DIRECT_LIMIT = 4_000_000
