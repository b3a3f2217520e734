"""
config.py

All project-wide constants. Environment variables override the few that
vary per machine.
"""

import os

# ── Quadrature ────────────────────────────────────────────────────────────────

QUAD_EPSREL      = 1e-10   # scalar functionals (V, m, m2, V2, truncated moments)
QUAD_EPSABS      = 1e-14   # absolute floor; keeps quad from stalling at support edges
QUAD_LIMIT       = 400     # max subintervals per quad call
FUNCTIONAL_EPSREL = 1e-8   # bivariate U integral
LOG_SPLIT_RATIO  = 10.0    # segments with hi/lo above this are integrated in log-space

# ── Normalizer root finding ──────────────────────────────────────────────────

SOLVER_RTOL          = 1e-12
SOLVER_MAXITER       = 200
BRACKET_MAX_DOUBLINGS = 1100   # 2**1100 overflows a double; stop well before inf
BRACKET_START_LOW    = 1e-8    # scan start for the truncated-moment relations

# ── Limit-law samplers ───────────────────────────────────────────────────────

SERIES_TERMS      = 2048   # Poisson arrivals kept per joint-series draw
SERIES_BLOCK_DRAWS = 1024  # draws materialised per block (memory ~ TERMS * BLOCK)
PSD_TOLERANCE     = 1e-12  # determinant / eigenvalue slack for covariance matrices

# ── Monte Carlo harness ──────────────────────────────────────────────────────

DEFAULT_REPLICATIONS    = 1000
DEFAULT_REFERENCE_DRAWS = 10_000
MIN_MEANINGFUL_REPLICATIONS = 100   # below this KS distances are flagged
QUANTILE_LEVELS = (0.05, 0.25, 0.50, 0.75, 0.95)
KS_LEVEL        = 0.01

# Worker threads for the replication loop. Output never depends on this value.
HARNESS_MAX_WORKERS = int(os.environ.get("TAILSTATS_WORKERS", "4"))

# Floats are written with repr() so CSV/JSON output is byte-stable.
FLOAT_FORMAT = repr
