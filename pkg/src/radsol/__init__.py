"""Bare-bones model of a radiating solitary wave.

A wave ``a(t) q(x - t)`` of fixed shape and speed drives a field of
oscillators ``psi(x, t)`` at frequency ``omega``; energy leaks from the wave
into a trailing ripple.  The package offers three routes to the decay of
``a(t)``: direct RK4 simulation (:mod:`radsol.sim_field`), a scalar renewal
equation (:mod:`radsol.sim_volterra`) and the Laplace-domain pole
(:mod:`radsol.spectral`).
"""

__version__ = "0.1.0"

from . import profiles, quadrature, spectral, sim_field, sim_volterra, asymptotics  # noqa: E402
from .profiles import Profile, from_name  # noqa: E402
from .spectral import ThetaResult, find_theta, theta_asymptotic  # noqa: E402

__all__ = [
    "profiles",
    "quadrature",
    "spectral",
    "sim_field",
    "sim_volterra",
    "asymptotics",
    "Profile",
    "from_name",
    "ThetaResult",
    "find_theta",
    "theta_asymptotic",
]
