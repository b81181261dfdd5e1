"""Defaults for the Gohberg harness."""

from ..config import ASYMPTOTIC_TOL

DEFAULT_TOL_VO = ASYMPTOTIC_TOL
DEFAULT_TOL_LOWER = 0.05
DEFAULT_TOL_NUM = 1e-8

# x-oscillation of |f| allowed on the bump, as a fraction of the D^Omega estimate
DEFAULT_CONTINUITY_FRACTION = 0.05
# share of the bump's energy that must sit inside the spectral margin
DEFAULT_BUMP_ENERGY = 0.999
DEFAULT_SVD_RANKS = (1, 2, 4, 8, 16)

# relative gap below which singular values count as tied
SVD_TIE_TOL = 1e-9
