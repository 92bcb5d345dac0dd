"""Laplace-domain analysis of the amplitude equation.

The amplitude obeys ``a' = j - k * a`` with memory kernel
``k(t) = cos(omega t) (q*q)(t)``.  Its Laplace transform ``K(z)`` controls
everything: the decay rate ``theta`` is minus the unique real zero of
``z + K(z)`` near the origin and ``r = 1 / (1 + K'(-theta))`` is the
residue of ``1 / (z + K(z))`` there.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from . import profiles as prof
from .profiles import Kind, Profile
from .quadrature import QuadSpec, laplace_horizon, laplace_trunc

logger = logging.getLogger(__name__)

__all__ = [
    "ThetaResult",
    "ConvergenceError",
    "K",
    "K_prime",
    "K_direct",
    "theta_asymptotic",
    "find_theta",
    "kernel_norm",
    "pole_probe",
    "deterioration_time",
    "DEFAULT_QUAD",
]

DEFAULT_QUAD = QuadSpec(step=1e-3, trunc_tol=1e-17)

# kernel envelope exponent relative to the profile's rho: absorbs the
# polynomial prefactor in q*q(t) ~ t exp(-rho t)
_KERNEL_RHO = 0.9

NEWTON_TOL = 1e-14
NEWTON_MAXITER = 50


class ConvergenceError(RuntimeError):
    """Neither Newton nor bisection located the decay-rate pole."""


@dataclass(frozen=True)
class ThetaResult:
    theta: float
    residue: float
    theta_asymptotic: float
    newton_iters: int
    final_residual: float
    k_prime: float = 0.0
    method: str = "newton"

    @property
    def pole(self) -> float:
        return -self.theta

    def c2_estimate(self, omega: float) -> float:
        """``omega |K'(-theta)|``, the constant in ``|K'| <= C2/omega``."""
        return omega * abs(self.k_prime)


def _check_strip(p: Profile, z: complex) -> None:
    if complex(z).real <= -p.rho / 2:
        raise ValueError(
            f"Re z = {complex(z).real:g} lies outside the validated strip Re z > {-p.rho / 2:g}"
        )


@lru_cache(maxsize=16)
def _custom_table(p: Profile, t_max: float, h: float):
    # direct (not FFT) Simpson-weighted correlation on an aligned grid
    radius = prof.support_radius(p, 1e-16)
    n = 2 * math.ceil(radius / h) + 1
    x = np.linspace(-radius, radius, n)
    hx = x[1] - x[0]
    q = np.asarray(prof.eval_q(p, x), dtype=float)
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    m = min(n - 1, math.ceil(t_max / hx) + 1)
    lags = np.arange(m + 1)
    vals = np.array([np.dot(w[: n - k] * q[: n - k], q[k:]) for k in lags]) * hx / 3.0
    return CubicSpline(lags * hx, vals, extrapolate=False)


def _autocorr_fn(p: Profile, t_max: float):
    if p.kind is not Kind.CUSTOM:
        return lambda t: prof.eval_autocorr(p, t)
    spline = _custom_table(p, float(t_max), 5e-3)
    return lambda t: np.nan_to_num(spline(np.abs(t)), nan=0.0)


def _kernel_setup(p: Profile, z: complex, spec: QuadSpec):
    """Truncation horizon and breakpoints for Laplace integrals of q*q."""
    if p.kind is Kind.TENT:
        return 2.0, (1.0,)
    rho_k = _KERNEL_RHO * p.rho
    T = laplace_horizon(complex(z).real, rho_k, spec.trunc_tol, kernel_norm(p, rho_k))
    T = min(T, prof.autocorr_support(p, spec.trunc_tol * 1e-3))
    return T, ()


@lru_cache(maxsize=64)
def kernel_norm(p: Profile, rho: float) -> float:
    """Sampled estimate of ``sup_t exp(rho t) |q*q(t)|``."""
    t = np.linspace(0.0, 3.0 * prof.support_radius(p, 1e-12), 4001)
    if p.kind is Kind.CUSTOM:
        vals = np.abs(_autocorr_fn(p, t[-1])(t))
    else:
        vals = np.abs(prof.eval_autocorr(p, t))
    return float(np.max(np.exp(rho * t) * vals))


def _shifted_pair(p, omega, z, spec, weight=None):
    T, bps = _kernel_setup(p, z, spec)
    qq = _autocorr_fn(p, T)
    f = qq if weight is None else (lambda t: weight(t) * qq(t))
    plus = laplace_trunc(f, z + 1j * omega, T, spec.step, bps)
    minus = laplace_trunc(f, z - 1j * omega, T, spec.step, bps)
    return 0.5 * (plus + minus)


def K(p: Profile, omega: float, z: complex, spec: QuadSpec = DEFAULT_QUAD) -> complex:
    """Laplace transform of ``cos(omega t) q*q(t)`` via frequency shifting."""
    _check_strip(p, z)
    return complex(_shifted_pair(p, omega, complex(z), spec))


def K_prime(p: Profile, omega: float, z: complex, spec: QuadSpec = DEFAULT_QUAD) -> complex:
    """``dK/dz`` from the moment identity ``L[t f] = -dL[f]/dz``."""
    _check_strip(p, z)
    return -complex(_shifted_pair(p, omega, complex(z), spec, weight=lambda t: t))


def K_direct(p: Profile, omega: float, z: complex, spec: QuadSpec = DEFAULT_QUAD) -> complex:
    """``K`` from the unshifted integrand, sampled at half the step.

    Cross-check for :func:`K`; not used by the solvers.
    """
    _check_strip(p, z)
    z = complex(z)
    T, bps = _kernel_setup(p, z, spec)
    qq = _autocorr_fn(p, T)
    h = min(spec.step, math.pi / (20.0 * omega)) / 2.0
    return complex(laplace_trunc(lambda t: np.cos(omega * t) * qq(t), z, T, h, bps))


def theta_asymptotic(p: Profile, omega: float) -> float:
    """Leading-order decay rate ``2 pi^2 q_hat(omega)^2``."""
    return 2.0 * math.pi ** 2 * float(prof.eval_hat(p, omega)) ** 2


def _g(p, omega, s, spec):
    return s + K(p, omega, s, spec).real


def _bisect(p, omega, lo, hi, spec):
    glo, ghi = _g(p, omega, lo, spec), _g(p, omega, hi, spec)
    if glo > 0 or ghi < 0:
        raise ConvergenceError(
            f"no sign change of s + K(s) on [{lo:g}, {hi:g}] (omega={omega:g}); "
            "omega is probably below the validated regime"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        gm = _g(p, omega, mid, spec)
        if gm == 0:
            return mid
        if gm < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * abs(mid) + 1e-300:
            break
    return 0.5 * (lo + hi)


def find_theta(p: Profile, omega: float, spec: QuadSpec = DEFAULT_QUAD) -> ThetaResult:
    """Locate the real pole ``-theta`` of ``1 / (z + K(z))``.

    Newton's method on ``s + K(s) = 0`` starting from ``-theta_asymptotic``;
    bisection on ``[-2 theta_asym - 1e-3, 0]`` if Newton leaves the strip or
    stalls.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    ta = theta_asymptotic(p, omega)
    k0 = abs(K(p, omega, 0.0, spec).real)
    tol = NEWTON_TOL * max(1.0, k0)
    # start inside the strip even when the asymptote is far off (small omega)
    s = max(-ta, -0.45 * p.rho)
    method = "newton"
    iters = 0
    converged = False
    for iters in range(1, NEWTON_MAXITER + 1):
        g = _g(p, omega, s, spec)
        kp = K_prime(p, omega, s, spec).real
        ds = g / (1.0 + kp)
        s_new = s - ds
        if not math.isfinite(s_new) or s_new <= -p.rho / 2:
            break
        s = s_new
        if abs(g) <= tol and (abs(ds) <= 1e-12 * abs(s) or abs(g) <= 1e-16):
            converged = True
            break
    if not converged:
        logger.info("Newton failed for omega=%g; falling back to bisection", omega)
        lo = -2.0 * ta - 1e-3
        if lo <= -p.rho / 2:
            lo = -0.499 * p.rho
        s = _bisect(p, omega, lo, 0.0, spec)
        method = "bisection"
    residual = abs(_g(p, omega, s, spec))
    if residual > 1e-12 * max(1.0, k0):
        raise ConvergenceError(f"pole residual {residual:g} too large at omega={omega:g}")
    kp = K_prime(p, omega, s, spec).real
    return ThetaResult(
        theta=-s,
        residue=1.0 / (1.0 + kp),
        theta_asymptotic=ta,
        newton_iters=iters,
        final_residual=residual,
        k_prime=kp,
        method=method,
    )


def deterioration_time(theta: float, fraction: float = 0.95) -> float:
    """Time for ``exp(-theta t)`` to fall to ``fraction``; ``inf`` if ``theta <= 0``."""
    if theta <= 0:
        return math.inf
    return math.log(1.0 / fraction) / theta


def pole_probe(p: Profile, omega: float, n_re: int = 40, n_im: int = 20,
               spec: QuadSpec = QuadSpec(step=1e-2, trunc_tol=1e-14)):
    """Tabulate ``|z + K(z)|`` over the box where poles can live.

    Returns ``(re, im, values)`` with ``values[i, j]`` at ``re[i] + 1j*im[j]``.
    Diagnostic only.
    """
    half = p.rho / 2
    rho_k = _KERNEL_RHO * p.rho
    height = 2.0 * kernel_norm(p, rho_k) / rho_k
    # open interval on the left keeps every sample inside the strip
    re = np.linspace(-half, half, n_re + 1)[1:]
    im = np.linspace(-height, height, n_im)
    vals = np.empty((re.size, im.size))
    for i, x in enumerate(re):
        for j, y in enumerate(im):
            z = complex(x, y)
            vals[i, j] = abs(z + K(p, omega, z, spec))
    return re, im, vals
