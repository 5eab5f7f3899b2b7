"""Structure-preserving active-flux style solver for 2D ideal MHD.

The scheme evolves cell averages of the conserved variables together with
shared point values (edge midpoints and vertices) of a reformulated variable
set whose range is exactly the physically admissible region.  Cell averages
are kept positive by a provable limiter/flux combination, the magnetic field
satisfies a discrete divergence-free constraint per cell, and oscillations in
troubled cells are damped by a convex blend toward the cell average.
"""

from .state import GasParams

__version__ = "0.1.0"

__all__ = ["GasParams", "__version__"]
