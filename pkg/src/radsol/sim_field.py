"""Lab-frame RK4 simulation of the oscillator field and the wave amplitude.

State is ``(a, psi)`` with ``psi`` sampled on a uniform grid whose spacing
equals the time step, so that the moving frame ``l = x - t`` is an exact
index shift.  The drive ``q(x - t)`` is evaluated in closed form at every
RK4 stage time.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from . import profiles as prof
from .profiles import Profile
from .quadrature import simpson_weights, _fsum

__all__ = [
    "Grid",
    "FieldState",
    "SimConfig",
    "TimeSeries",
    "Frame",
    "SimResult",
    "SimulationError",
    "make_grid",
    "rhs",
    "step_rk4",
    "energy",
    "run",
]

# drive is treated as zero once |q| drops below this
_DRIVE_TOL = 1e-18


class SimulationError(RuntimeError):
    """Non-finite values appeared during time stepping."""


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    dx: float
    n_points: int

    def __post_init__(self):
        if (self.n_points - 1) % 2:
            raise ValueError("grid must have an even number of intervals for Simpson")

    @cached_property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    @cached_property
    def weights(self) -> np.ndarray:
        return simpson_weights(self.n_points)

    def integrate(self, values: np.ndarray):
        return _fsum(values * self.weights) * self.dx / 3.0


def make_grid(p: Profile, t_final: float, dx: float) -> Grid:
    """Grid from ``-(R + 5)`` to ``t_final + R + 5`` with ``x = 0`` on a node."""
    radius = prof.support_radius(p, 1e-14)
    m = math.ceil((radius + 5.0) / dx)
    x_min = -m * dx
    n_int = math.ceil((t_final + radius + 5.0 - x_min) / dx - 1e-9)
    n_int += n_int % 2
    return Grid(x_min=x_min, x_max=x_min + n_int * dx, dx=dx, n_points=n_int + 1)


@dataclass(frozen=True)
class SimConfig:
    """Run parameters.

    ``dt`` defaults to ``pi / (10 omega)`` and also sets the grid spacing.
    ``frames`` is an ``(l_min, l_max)`` window recorded at each of
    ``frame_times`` (default: the final time).
    """

    profile: Profile
    omega: float
    a0: float = 1.0
    psi0: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)
    t_final: float = 200.0
    dt: Optional[float] = None
    sample_stride: int = 1
    frames: Optional[tuple] = None
    frame_times: Optional[tuple] = None

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if not self.t_final > 0:
            raise ValueError("t_final must be positive")
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be >= 1")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")

    @property
    def step(self) -> float:
        return self.dt if self.dt is not None else math.pi / (10.0 * self.omega)

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.step))

    @cached_property
    def grid(self) -> Grid:
        return make_grid(self.profile, self.t_final, self.step)

    @cached_property
    def _drive_radius(self) -> float:
        return prof.support_radius(self.profile, _DRIVE_TOL)


@dataclass
class FieldState:
    t: float
    a: float
    psi: np.ndarray


@dataclass
class TimeSeries:
    t: np.ndarray
    values: np.ndarray

    def __len__(self):
        return len(self.t)

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0])

    def window(self, t_lo: float, t_hi: float) -> "TimeSeries":
        m = (self.t >= t_lo) & (self.t <= t_hi)
        return TimeSeries(self.t[m], self.values[m])


@dataclass
class Frame:
    """``psi(t + l, t)`` on the moving-frame window at one time."""

    t: float
    l: np.ndarray
    psi: np.ndarray


@dataclass
class SimResult:
    a_series: TimeSeries
    energy_series: TimeSeries
    final: FieldState
    frames: list

    @property
    def energy_drift(self) -> float:
        e = self.energy_series.values
        if e[0] == 0:
            return float(np.max(np.abs(e)))
        return float(np.max(np.abs(e - e[0])) / abs(e[0]))


def _window(cfg: SimConfig, t_eval: float) -> slice:
    g = cfg.grid
    r = cfg._drive_radius
    lo = max(0, math.floor((t_eval - r - g.x_min) / g.dx))
    hi = min(g.n_points, math.ceil((t_eval + r - g.x_min) / g.dx) + 1)
    return slice(lo, max(lo, hi))


def rhs(state: FieldState, cfg: SimConfig, t_eval: float):
    """Time derivatives ``(da, dpsi)`` at stage time ``t_eval``."""
    g = cfg.grid
    w = cfg.omega
    win = _window(cfg, t_eval)
    drive = np.asarray(prof.eval_q(cfg.profile, g.x[win] - t_eval), dtype=float)
    dpsi = 1j * w * state.psi
    dpsi[win] += w * state.a * drive
    overlap = state.psi[win].real * drive * g.weights[win]
    da = -math.fsum(overlap.tolist()) * g.dx / (3.0 * w)
    if not math.isfinite(da):
        raise SimulationError(f"non-finite amplitude derivative at t={t_eval:g}")
    return da, dpsi


def step_rk4(state: FieldState, cfg: SimConfig, h: Optional[float] = None) -> FieldState:
    """One classical RK4 step of size ``h`` (default ``cfg.step``) on the grid of ``cfg``."""
    h = cfg.step if h is None else h
    t, a, psi = state.t, state.a, state.psi
    k1a, k1p = rhs(state, cfg, t)
    k2a, k2p = rhs(FieldState(t, a + 0.5 * h * k1a, psi + 0.5 * h * k1p), cfg, t + 0.5 * h)
    k3a, k3p = rhs(FieldState(t, a + 0.5 * h * k2a, psi + 0.5 * h * k2p), cfg, t + 0.5 * h)
    k4a, k4p = rhs(FieldState(t, a + h * k3a, psi + h * k3p), cfg, t + h)
    a_new = a + h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
    psi_new = psi + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
    return FieldState(t + h, a_new, psi_new)


def energy(state: FieldState, cfg: SimConfig) -> float:
    """``a^2/2 + (1 / 2 omega^2) int |psi|^2``."""
    psi = state.psi
    field_part = cfg.grid.integrate(psi.real ** 2 + psi.imag ** 2)
    return 0.5 * state.a ** 2 + field_part / (2.0 * cfg.omega ** 2)


def initial_state(cfg: SimConfig) -> FieldState:
    g = cfg.grid
    if cfg.psi0 is None:
        psi = np.zeros(g.n_points, dtype=complex)
    else:
        psi = np.asarray(cfg.psi0(g.x), dtype=complex).copy()
    return FieldState(0.0, float(cfg.a0), psi)


def _frame_indices(cfg: SimConfig, l_min: float, l_max: float, n: int):
    g = cfg.grid
    k_lo = math.ceil((l_min - g.x_min) / g.dx - 1e-9)
    k_hi = math.floor((l_max - g.x_min) / g.dx + 1e-9)
    k = np.arange(k_lo, k_hi + 1)
    j = k + n
    ok = (j >= 0) & (j < g.n_points)
    return g.x_min + k[ok] * g.dx, j[ok]


def run(cfg: SimConfig, state: Optional[FieldState] = None) -> SimResult:
    """Integrate to ``cfg.t_final``, sampling ``a`` and the energy."""
    g = cfg.grid
    reach = cfg.t_final + prof.support_radius(cfg.profile, 1e-14)
    if reach > g.x_max:
        warnings.warn(f"wave support reaches x={reach:g} beyond grid edge {g.x_max:g}")
    if state is None:
        state = initial_state(cfg)
    h = cfg.step
    n_steps = cfg.n_steps
    frame_steps = {}
    if cfg.frames is not None:
        times = cfg.frame_times if cfg.frame_times else (n_steps * h,)
        for ft in times:
            frame_steps[int(round(ft / h))] = None

    ts, avals, evals = [], [], []
    frames = []

    def record(n, st):
        if n % cfg.sample_stride == 0 or n == n_steps:
            if not np.all(np.isfinite(st.psi)):
                raise SimulationError(f"non-finite field at t={st.t:g}")
            ts.append(st.t)
            avals.append(st.a)
            evals.append(energy(st, cfg))
        if n in frame_steps:
            l, j = _frame_indices(cfg, cfg.frames[0], cfg.frames[1], n)
            frames.append(Frame(st.t, l, st.psi[j].copy()))

    record(0, state)
    for n in range(1, n_steps + 1):
        state = step_rk4(state, cfg)
        # pin the clock to n*h so stage times never drift off the grid
        state.t = n * h
        if not math.isfinite(state.a):
            raise SimulationError(f"amplitude became non-finite at t={state.t:g}")
        record(n, state)

    t_arr = np.asarray(ts)
    return SimResult(
        a_series=TimeSeries(t_arr, np.asarray(avals)),
        energy_series=TimeSeries(t_arr.copy(), np.asarray(evals)),
        final=state,
        frames=frames,
    )
