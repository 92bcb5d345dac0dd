"""Long-time behaviour: decay fits, the moving-frame profile and lab-frame limits."""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import profiles as prof
from .profiles import Profile
from .quadrature import integrate_piecewise, laplace_horizon, laplace_trunc, simpson_sum
from .sim_field import TimeSeries
from .spectral import ThetaResult

__all__ = [
    "SigmaProfile",
    "FitResult",
    "sigma",
    "sigma_profile",
    "fit_decay",
    "default_window",
    "compare_frame",
    "lab_frame_limit",
    "thread_count",
]

SIGMA_STEP = 2e-3
SIGMA_TOL = 1e-16


def thread_count() -> int:
    """Worker cap from ``RADSOL_THREADS`` (default 1)."""
    raw = os.environ.get("RADSOL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass
class SigmaProfile:
    l_grid: np.ndarray
    sigma: np.ndarray
    far_field_ref: complex
    near_field_ref: np.ndarray
    omega: float

    def left_edge_amplitude(self, n_periods: float = 1.0) -> float:
        """Max of ``|sigma|`` over the leftmost ``n_periods`` oscillation periods."""
        span = n_periods * 2.0 * math.pi / self.omega
        m = self.l_grid <= self.l_grid[0] + span
        return float(np.max(np.abs(self.sigma[m])))

    def far_field_error(self) -> float:
        """``|exp(i omega l) sigma(l) - 2 pi q_hat(-omega)|`` at the left edge."""
        l0 = self.l_grid[0]
        return abs(np.exp(1j * self.omega * l0) * self.sigma[0] - self.far_field_ref)


@dataclass
class FitResult:
    rate: float
    prefactor: float
    window: tuple
    rms_log_residual: float
    n_samples: int = 0
    used_envelope: bool = False


def sigma(p: Profile, theta: ThetaResult | float, omega: float, l: float,
          step: float = SIGMA_STEP, tol: float = SIGMA_TOL) -> complex:
    """``sigma(l) = int_0^inf exp((theta + i omega) t) q(t + l) dt``."""
    th = theta.theta if isinstance(theta, ThetaResult) else float(theta)
    if th >= p.rho:
        raise ValueError(f"theta={th:g} >= rho={p.rho:g}: the profile integral diverges")
    z = complex(-th, -omega)
    if p.compact:
        # q(t + l) vanishes outside t in [-l - 1, -l + 1]
        T = -l + 1.0
        if T <= 0:
            return 0j
    else:
        # ||q(. + l)||_rho <= C exp(-rho l)
        amp = p.amplitude * math.exp(min(-p.rho * l, 700.0))
        T = laplace_horizon(-th, p.rho, tol, amp)
    bps = [c - l for c in p.kinks]
    if not p.compact:
        start = -l - prof.support_radius(p, tol)
        if start > 0.0:
            # skip the stretch where q(t + l) is negligible
            inner = laplace_trunc(lambda t: prof.eval_q(p, t + start + l), z, T - start, step,
                                  [b - start for b in bps])
            return complex(np.exp(-z * start) * inner)
    return complex(laplace_trunc(lambda t: prof.eval_q(p, t + l), z, T, step, bps))


def sigma_profile(p: Profile, theta: ThetaResult | float, omega: float,
                  l_grid: Sequence[float], step: float = SIGMA_STEP) -> SigmaProfile:
    """Tabulate ``sigma`` on ``l_grid``; evaluation is spread over ``RADSOL_THREADS`` workers."""
    l_grid = np.asarray(l_grid, dtype=float)
    n_workers = thread_count()
    work = lambda l: sigma(p, theta, omega, float(l), step)
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as ex:
            values = list(ex.map(work, l_grid))
    else:
        values = [work(l) for l in l_grid]
    far = 2.0 * math.pi * float(prof.eval_hat(p, -omega))
    near = 1j * np.asarray(prof.eval_q(p, l_grid), dtype=float) / omega
    return SigmaProfile(l_grid, np.asarray(values, dtype=complex), complex(far), near, omega)


def default_window(t_final: float) -> tuple:
    return (0.2 * t_final, 0.9 * t_final)


def _local_maxima(t, y):
    inner = (y[1:-1] >= y[:-2]) & (y[1:-1] > y[2:])
    idx = np.nonzero(inner)[0] + 1
    return t[idx], y[idx]


def fit_decay(a: TimeSeries, window: Optional[tuple] = None) -> FitResult:
    """Least-squares fit of ``log a`` against ``t`` on ``window``.

    If ``a`` is not strictly positive on the window, the local maxima of
    ``|a|`` are fitted instead.
    """
    t = np.asarray(a.t, dtype=float)
    y = np.asarray(a.values, dtype=float)
    if window is None:
        window = default_window(t[-1])
    lo, hi = window
    m = (t >= lo) & (t <= hi)
    t, y = t[m], y[m]
    envelope = False
    if not np.all(y > 0):
        t, y = _local_maxima(t, np.abs(y))
        envelope = True
        keep = y > 0
        t, y = t[keep], y[keep]
    if t.size < 10:
        raise ValueError(f"only {t.size} usable samples in window {window}; need at least 10")
    logy = np.log(y)
    tm = t.mean()
    dt = t - tm
    slope = float(np.sum(dt * (logy - logy.mean())) / np.sum(dt * dt))
    intercept = float(logy.mean() - slope * tm)
    resid = logy - (intercept + slope * t)
    return FitResult(
        rate=-slope,
        prefactor=math.exp(intercept),
        window=(float(lo), float(hi)),
        rms_log_residual=float(np.sqrt(np.mean(resid ** 2))),
        n_samples=int(t.size),
        used_envelope=envelope,
    )


def compare_frame(l_grid: np.ndarray, psi: np.ndarray, theta: ThetaResult,
                  sp: SigmaProfile, t: float, a0: float, omega: float) -> float:
    """Sup-norm gap between a recorded frame and ``a0 omega r sigma(l) exp(-theta t)``.

    Normalised by the peak of the prediction.
    """
    l_grid = np.asarray(l_grid, dtype=float)
    psi = np.asarray(psi, dtype=complex)
    if l_grid.shape != sp.l_grid.shape or np.max(np.abs(l_grid - sp.l_grid), initial=0.0) > 1e-9:
        raise ValueError("frame and sigma profile are sampled on different l grids")
    if psi.shape != l_grid.shape:
        raise ValueError("frame values do not match its l grid")
    pred = a0 * omega * theta.residue * sp.sigma * math.exp(-theta.theta * t)
    scale = float(np.max(np.abs(pred)))
    gap = float(np.max(np.abs(psi - pred)))
    if scale == 0.0:
        return 0.0 if gap == 0.0 else math.inf
    return gap / scale


def lab_frame_limit(psi0: Optional[Callable], a: TimeSeries, p: Profile,
                    omega: float, x: float, tail_warn: float = 1e-6) -> complex:
    """``psi0(x) + omega int_0^T exp(-i omega s) a(s) q(x - s) ds`` from a sampled ``a``.

    Simpson over the samples of ``a`` where ``q(x - s)`` is not negligible.
    """
    t = np.asarray(a.t, dtype=float)
    vals = np.asarray(a.values, dtype=float)
    base = complex(psi0(np.asarray([x]))[0]) if psi0 is not None else 0j
    radius = prof.support_radius(p, 1e-17)
    idx = np.nonzero((t >= x - radius) & (t <= x + radius))[0]
    total = 0j
    if idx.size:
        i0, i1 = int(idx[0]), int(idx[-1])
        if (i1 - i0) % 2:
            if i1 + 1 < t.size:
                i1 += 1
            elif i0 > 0:
                i0 -= 1
            else:
                i1 -= 1
        if i1 - i0 >= 2:
            s = t[i0:i1 + 1]
            g = np.exp(-1j * omega * s) * vals[i0:i1 + 1] * prof.eval_q(p, x - s)
            total = complex(simpson_sum(g, s[1] - s[0]))
    # |int_T^inf a q| <= |a(T)| int_{-inf}^{x-T} |q| when |a| is non-increasing
    T = t[-1]
    u_hi = x - T
    if u_hi > -radius:
        mass = integrate_piecewise(lambda u: np.abs(prof.eval_q(p, u)),
                                   sorted({-radius, *[c for c in p.kinks if -radius < c < u_hi], u_hi}),
                                   1e-2).real
    else:
        mass = 0.0
    tail = omega * abs(vals[-1]) * mass
    if tail > tail_warn:
        warnings.warn(f"lab-frame limit truncation tail estimate {tail:.3g} exceeds {tail_warn:g}")
    return base + omega * total
