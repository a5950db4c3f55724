"""Stationary KdV waves on star graphs.

Thin wrapper over the C++ library: closed-form profiles, Schrodinger spectra, growing modes of the
linearized flow, and the batch runner that produces the JSON report.
"""

from ._core import (
    InvalidArgument,
    NumericalError,
    Profile,
    ProfileKind,
    characteristic_roots,
    deficiency_indices,
    growing_mode,
    mass_derivative_oracle,
    run,
    spectrum,
    sweep,
    theta_to_Z,
)

__all__ = [
    "InvalidArgument",
    "NumericalError",
    "Profile",
    "ProfileKind",
    "characteristic_roots",
    "deficiency_indices",
    "growing_mode",
    "mass_derivative_oracle",
    "run",
    "spectrum",
    "sweep",
    "theta_to_Z",
]
