"""Field-free solver for the wave amplitude.

Eliminating the oscillator field leaves a scalar renewal equation

    a(t) = a0 + f(t) + int_0^t phi(t - s) a(s) ds,
    phi(t) = -int_0^t cos(omega s) (q*q)(s) ds,

which is solved here by trapezoidal product integration.  Because
``phi(0) = 0`` the recurrence is explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import profiles as prof
from .profiles import Profile
from .quadrature import integrate_piecewise
from .sim_field import TimeSeries
from .spectral import _autocorr_fn

__all__ = [
    "RenewalConfig",
    "phi",
    "phi_grid",
    "kernel_grid",
    "j_forcing",
    "forcing_grid",
    "solve_renewal",
    "solve_renewal_kernel",
    "residual_delay_ode",
]

# Simpson panels per time step when accumulating phi
_SUBPANELS = 4


@dataclass(frozen=True)
class RenewalConfig:
    profile: Profile
    omega: float
    a0: float = 1.0
    psi0: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)
    t_final: float = 200.0
    dt: Optional[float] = None

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.dt is not None and self.dt > math.pi / (10.0 * self.omega) * (1 + 1e-12):
            raise ValueError("dt must resolve the kernel: dt <= pi / (10 omega)")

    @property
    def step(self) -> float:
        return self.dt if self.dt is not None else math.pi / (20.0 * self.omega)

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.step))

    @property
    def times(self) -> np.ndarray:
        return self.step * np.arange(self.n_steps + 1)


def _kernel(p: Profile, omega: float, t_max: float):
    qq = _autocorr_fn(p, t_max)
    return lambda s: np.cos(omega * s) * qq(s)


def phi_grid(p: Profile, omega: float, dt: float, n: int) -> np.ndarray:
    """``phi`` at ``t_m = m dt`` for ``m = 0..n``.

    Each step interval is integrated by Simpson with ``_SUBPANELS`` panels,
    split at the kernel's kinks, then accumulated.
    """
    t_max = n * dt
    k = _kernel(p, omega, t_max + dt)
    kinks = _kernel_kinks(p)
    h = dt / _SUBPANELS
    # vectorised Simpson for all smooth intervals at once
    sub = np.arange(_SUBPANELS + 1) * h
    nodes = dt * np.arange(n)[:, None] + sub[None, :]
    w = np.full(_SUBPANELS + 1, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    pieces = (k(nodes) * w).sum(axis=1) * h / 3.0
    for c in kinks:
        m = int(c // dt)
        if 0 <= m < n and c > m * dt:
            a, b = m * dt, (m + 1) * dt
            pieces[m] = integrate_piecewise(k, [a, c, b], h).real
    out = np.empty(n + 1)
    out[0] = 0.0
    out[1:] = -np.cumsum(pieces)
    return out


def _kernel_kinks(p: Profile):
    if p.kind is prof.Kind.TENT:
        return (1.0, 2.0)
    return ()


def phi(p: Profile, omega: float, t: float, dt: Optional[float] = None) -> float:
    """``phi(t) = -int_0^t cos(omega s) q*q(s) ds``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return 0.0
    if dt is None:
        dt = math.pi / (20.0 * omega)
    n = max(1, math.ceil(t / dt - 1e-9))
    return float(phi_grid(p, omega, t / n, n)[-1])


def kernel_grid(p: Profile, omega: float, dt: float, n: int) -> np.ndarray:
    """``cos(omega t) q*q(t)`` at ``t_m = m dt``."""
    t = dt * np.arange(n + 1)
    return np.asarray(_kernel(p, omega, t[-1])(t), dtype=float)


def j_forcing(p: Profile, omega: float, psi0: Callable, t: float,
              psi0_radius: Optional[float] = None, step: float = 0.02) -> float:
    """Forcing ``-(1/omega) int Re[exp(i omega t) psi0(x)] q(x - t) dx``."""
    if psi0 is None:
        return 0.0
    rq = prof.support_radius(p, 1e-16)
    r0 = psi0_radius if psi0_radius is not None else rq
    lo, hi = max(t - rq, -r0), min(t + rq, r0)
    if hi <= lo:
        return 0.0
    phase = complex(math.cos(omega * t), math.sin(omega * t))
    edges = sorted({lo, hi, *(t + c for c in p.kinks if lo < t + c < hi)})

    def integrand(x):
        return (phase * np.asarray(psi0(x), dtype=complex)).real * prof.eval_q(p, x - t)

    return -integrate_piecewise(integrand, edges, step).real / omega


def forcing_grid(cfg: RenewalConfig, psi0_radius: Optional[float] = None):
    """``(j, f)`` on the solver grid; ``f`` is the running trapezoid of ``j``."""
    t = cfg.times
    if cfg.psi0 is None:
        z = np.zeros_like(t)
        return z, z.copy()
    j = np.array([j_forcing(cfg.profile, cfg.omega, cfg.psi0, tt, psi0_radius) for tt in t])
    f = np.zeros_like(j)
    f[1:] = np.cumsum(0.5 * cfg.step * (j[1:] + j[:-1]))
    return j, f


def solve_renewal_kernel(phi_vals: np.ndarray, a0: float, f: np.ndarray | float,
                         dt: float) -> np.ndarray:
    """Trapezoidal product integration for a sampled kernel.

    ``a_n = a0 + f_n + dt [phi_n a_0 / 2 + sum_{m=1}^{n-1} phi_{n-m} a_m + phi_0 a_n / 2]``,
    solved for ``a_n`` (explicit when ``phi_0 = 0``).
    """
    phi_vals = np.asarray(phi_vals, dtype=float)
    n_pts = phi_vals.size
    f = np.broadcast_to(np.asarray(f, dtype=float), (n_pts,))
    a = np.empty(n_pts)
    denom = 1.0 - 0.5 * dt * phi_vals[0]
    a[0] = a0 + f[0]
    rev = phi_vals[::-1]
    for n in range(1, n_pts):
        # phi_{n-m} for m = 1..n-1 is rev[N-n .. N-2] read forwards
        hist = np.sum(rev[n_pts - n: n_pts - 1] * a[1:n]) if n > 1 else 0.0
        s = 0.5 * phi_vals[n] * a[0] + hist
        a[n] = (a0 + f[n] + dt * s) / denom
        if not math.isfinite(a[n]):
            raise FloatingPointError(f"renewal solution non-finite at step {n}")
    return a


def solve_renewal(cfg: RenewalConfig) -> TimeSeries:
    t = cfg.times
    ph = phi_grid(cfg.profile, cfg.omega, cfg.step, cfg.n_steps)
    _, f = forcing_grid(cfg)
    a = solve_renewal_kernel(ph, cfg.a0, f, cfg.step)
    return TimeSeries(t, a)


def residual_delay_ode(a: TimeSeries, cfg: RenewalConfig) -> float:
    """Max mismatch of ``a`` in the differentiated (delay-ODE) form.

    Centered differences for ``a'`` against ``j - int_0^t k(t-s) a(s) ds``
    with the trapezoidal rule, over interior grid times.
    """
    vals = np.asarray(a.values, dtype=float)
    n_pts = vals.size
    if n_pts < 3:
        return 0.0
    dt = float(a.t[1] - a.t[0])
    k = kernel_grid(cfg.profile, cfg.omega, dt, n_pts - 1)
    if cfg.psi0 is None:
        j = np.zeros(n_pts)
    else:
        j = np.array([j_forcing(cfg.profile, cfg.omega, cfg.psi0, tt) for tt in a.t])
    rev = k[::-1]
    worst = 0.0
    for n in range(1, n_pts - 1):
        conv = 0.5 * (k[n] * vals[0] + k[0] * vals[n])
        if n > 1:
            conv += np.sum(rev[n_pts - n: n_pts - 1] * vals[1:n])
        conv *= dt
        deriv = (vals[n + 1] - vals[n - 1]) / (2.0 * dt)
        worst = max(worst, abs(deriv - (j[n] - conv)))
    return worst
