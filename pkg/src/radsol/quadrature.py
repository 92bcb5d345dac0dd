"""Composite Simpson quadrature.

All reductions go through :func:`math.fsum`, which returns the correctly
rounded sum of its inputs.  Results therefore do not depend on summation
order, thread count or BLAS configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "QuadSpec",
    "simpson",
    "simpson_weights",
    "simpson_sum",
    "integrate_piecewise",
    "integrate_line",
    "laplace_trunc",
    "laplace_horizon",
    "oscillation_step",
    "even_panels",
]


@dataclass(frozen=True)
class QuadSpec:
    """Sampling controls for truncated integrals."""

    step: float = 1e-3
    trunc_tol: float = 1e-16

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        if not 0 < self.trunc_tol < 1:
            raise ValueError("trunc_tol must lie in (0, 1)")


def even_panels(length: float, step: float) -> int:
    """Panel count for ``length`` at spacing ``<= step``, rounded up to even."""
    n = max(2, math.ceil(length / step - 1e-9))
    return n + (n % 2)


def oscillation_step(omega: float, step: float) -> float:
    """Cap ``step`` so that ``exp(i omega t)`` gets at least 40 samples per period."""
    if omega == 0:
        return step
    return min(step, math.pi / (20.0 * abs(omega)))


def simpson_weights(n_points: int) -> np.ndarray:
    """Unscaled weights ``1, 4, 2, ..., 2, 4, 1`` (multiply by ``h/3``)."""
    if n_points < 3 or n_points % 2 == 0:
        raise ValueError(f"Simpson needs an odd number >= 3 of points, got {n_points}")
    w = np.full(n_points, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w


def _fsum(values: np.ndarray) -> complex | float:
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))
    return math.fsum(values.tolist())


def simpson_sum(samples: np.ndarray, h: float, weights: np.ndarray | None = None):
    """Simpson value of pre-sampled, equally spaced data."""
    samples = np.asarray(samples)
    if weights is None:
        weights = simpson_weights(samples.size)
    return _fsum(samples * weights) * h / 3.0


def simpson(f: Callable, a: float, b: float, n_panels: int) -> complex:
    """Composite Simpson rule for ``f`` on ``[a, b]``.

    ``f`` must accept a numpy array of abscissae.
    """
    if n_panels <= 0 or n_panels % 2:
        raise ValueError(f"n_panels must be even and positive, got {n_panels}")
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    x = np.linspace(a, b, n_panels + 1)
    y = np.asarray(f(x))
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    if not np.all(np.isfinite(y)):
        raise ValueError("integrand produced non-finite samples")
    h = (b - a) / n_panels
    return complex(simpson_sum(y, h))


def integrate_piecewise(f: Callable, edges: Sequence[float], step: float) -> complex:
    """Sum of Simpson rules over consecutive ``edges``.

    Splitting at the non-smooth points of an integrand restores Simpson's
    fourth order.
    """
    total_re, total_im = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a <= 0:
            continue
        v = simpson(f, a, b, even_panels(b - a, step))
        total_re.append(v.real)
        total_im.append(v.imag)
    return complex(math.fsum(total_re), math.fsum(total_im))


def integrate_line(f: Callable, spec: QuadSpec, radius: float,
                   breakpoints: Sequence[float] = ()) -> complex:
    """Approximate ``int_R f`` by Simpson on ``[-radius, radius]``."""
    if not radius > 0:
        raise ValueError("radius must be positive")
    inner = sorted(b for b in set(breakpoints) if -radius < b < radius)
    return integrate_piecewise(f, [-radius, *inner, radius], spec.step)


def laplace_horizon(z_re: float, rho: float, trunc_tol: float,
                    amplitude: float = 1.0) -> float:
    """Truncation time making the neglected Laplace tail at most ``trunc_tol``.

    Uses ``|int_T^inf e^{-zt} f| <= ||f||_rho e^{-(Re z + rho) T} / (Re z + rho)``.
    """
    decay = z_re + rho
    if decay <= 0:
        raise ValueError("Laplace integral diverges: Re z + rho <= 0")
    return (math.log(1.0 / trunc_tol) + math.log1p(abs(amplitude))) / decay


def laplace_trunc(f: Callable, z: complex, T: float, step: float,
                  breakpoints: Sequence[float] = ()) -> complex:
    """Simpson approximation of ``int_0^T exp(-z t) f(t) dt``."""
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    h = oscillation_step(complex(z).imag, step)
    inner = sorted(b for b in set(breakpoints) if 0.0 < b < T)

    def g(t):
        return np.exp(-z * t) * f(t)

    return integrate_piecewise(g, [0.0, *inner, T], h)
