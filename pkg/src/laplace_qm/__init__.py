"""Laplace-transform treatment of the stationary 1-D Schrodinger equation."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .oscillators import (  # noqa: F401
    BoundState,
    Oscillator,
    SOdeSpec,
    eigenenergy,
    eigenstate,
    harmonic_recurrence,
    normalization_constant,
    quantize,
    s_ode,
    s_ode_residual,
    scale_from_xi,
    scale_to_xi,
    tw_transform,
    wavefunction,
    xi_ode_residual,
)
from .pathology import (  # noqa: F401
    PathologyProfile,
    envelope_decay,
    profile,
    tw_deviation_moment,
    tw_deviation_moment_from_series,
    vtw_gamma_rescaled,
)
from .sdomain import GeneralTerm, LaurentSeries, SDomainFn, laurent_expand, partial_fractions  # noqa: F401
from .specfun import double_factorial, hermite, mod_sph_bessel_k  # noqa: F401
from .transforms import (  # noqa: F401
    BromwichSample,
    Divergent,
    MomentVector,
    PolyExp,
    bromwich_invert,
    forward_laplace,
    inverse_by_residues,
    moments,
    series_from_moments,
)
