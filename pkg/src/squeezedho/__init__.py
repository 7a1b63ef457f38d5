"""Truncated Fock-basis simulation of harmonic-oscillator states.

Coherent, squeezed, number, even/odd (cat), squeezed-number and even/odd
squeezed-number states are built by exponentiating ladder-operator
generators, evolved exactly, and analyzed through quadrature moments,
eigen-equation residuals and position-space densities.
"""

__version__ = "0.1.0"

from .factory import (  # noqa: E402
    Parity,
    StateKind,
    build_state,
    cat,
    coherent,
    displace,
    eo_displace,
    evolve,
    nonunitarity_witness,
    squeeze,
)
from .fock import (  # noqa: E402
    FockState,
    TruncationPolicy,
    apply_lowering,
    apply_parity,
    apply_raising,
    inner,
    number_state,
    vacuum,
)
from .observables import quadrature_moments, sur_saturation_residual  # noqa: E402
from .position import Grid, density_on_grid, hermite_function  # noqa: E402
