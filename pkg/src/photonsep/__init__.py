"""Separation-basis wavefunctions for particle pairs and a two-photon
wavepacket model, with exact and large-separation amplitudes."""

__version__ = "0.1.0"

from ._kernels import BACKEND  # noqa: E402
from .photon_pair import ChannelError, PhotonChannel, closure_defect  # noqa: E402
from .quadrature import IntegralResult, QuadratureError, integrate_windowed  # noqa: E402
from .scattering_model import (  # noqa: E402
    AmplitudeProfile,
    DegenerateProfileError,
    DensityProfile,
    RegimeWarning,
    WavepacketParams,
    amplitude_asymptotic,
    amplitude_exact,
    expectation_separation,
    j_max,
    j_sum_alternating,
    j_sum_direct,
    overlap_amplitude,
    separation_density,
)
from .specfun import (  # noqa: E402
    AngularMomentum,
    Helicity,
    clebsch_gordan,
    sph_bessel_j,
    wigner_D,
    wigner_small_d,
)

__all__ = [
    "BACKEND",
    "AmplitudeProfile",
    "AngularMomentum",
    "ChannelError",
    "DegenerateProfileError",
    "DensityProfile",
    "Helicity",
    "IntegralResult",
    "PhotonChannel",
    "QuadratureError",
    "RegimeWarning",
    "WavepacketParams",
    "amplitude_asymptotic",
    "amplitude_exact",
    "clebsch_gordan",
    "closure_defect",
    "expectation_separation",
    "integrate_windowed",
    "j_max",
    "j_sum_alternating",
    "j_sum_direct",
    "overlap_amplitude",
    "separation_density",
    "sph_bessel_j",
    "wigner_D",
    "wigner_small_d",
]
