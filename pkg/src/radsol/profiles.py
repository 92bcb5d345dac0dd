"""Solitary-wave profile family.

Each profile carries a pointwise shape ``q(x)``, its Fourier transform
``q_hat(k) = (1/2pi) int exp(-ikx) q(x) dx`` and its autocorrelation
``(q*q)(t) = int q(x+t) q(x) dx``.  Closed forms are used for the four
built-in shapes; ``Custom`` profiles fall back to quadrature.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import quadrature

__all__ = [
    "Kind",
    "Profile",
    "sech",
    "gaussian",
    "peakon",
    "tent",
    "custom",
    "from_name",
    "PROFILE_NAMES",
    "eval_q",
    "eval_hat",
    "eval_autocorr",
    "numeric_hat",
    "numeric_autocorr",
    "support_radius",
    "autocorr_support",
]


class Kind(enum.Enum):
    SECH = "sech"
    GAUSSIAN = "gaussian"
    PEAKON = "peakon"
    TENT = "tent"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Profile:
    """A solitary-wave shape.

    Parameters
    ----------
    kind : Kind
    rho : float
        Decay exponent: ``exp(rho |x|) q(x)`` stays bounded.  For the tent
        this is a nominal value only, the support ``[-1, 1]`` is used instead.
    amplitude : float
        Bound ``C`` with ``|q(x)| <= C exp(-rho |x|)``.
    kinks : tuple of float
        Points where ``q`` is not smooth.  Quadrature splits there.
    custom_eval : callable, optional
        Vectorised ``q`` for ``Kind.CUSTOM``.
    """

    kind: Kind
    rho: float
    amplitude: float = 1.0
    kinks: tuple = ()
    custom_eval: Optional[Callable[[np.ndarray], np.ndarray]] = field(
        default=None, compare=False
    )

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def has_closed_hat(self) -> bool:
        return self.kind is not Kind.CUSTOM

    @property
    def has_closed_autocorr(self) -> bool:
        return self.kind is not Kind.CUSTOM

    @property
    def compact(self) -> bool:
        return self.kind is Kind.TENT

    def __call__(self, x):
        return eval_q(self, x)


def sech() -> Profile:
    return Profile(Kind.SECH, rho=1.0, amplitude=2.0)


def gaussian() -> Profile:
    # any rho works for exp(-x^2); 2 keeps the truncation bookkeeping uniform
    return Profile(Kind.GAUSSIAN, rho=2.0, amplitude=math.exp(1.0))


def peakon() -> Profile:
    return Profile(Kind.PEAKON, rho=1.0, amplitude=1.0, kinks=(0.0,))


def tent() -> Profile:
    return Profile(Kind.TENT, rho=1.0, amplitude=1.0, kinks=(-1.0, 0.0, 1.0))


def custom(func: Callable, rho: float, amplitude: float = 1.0,
           kinks: Sequence[float] = ()) -> Profile:
    """Wrap a user-supplied real, vectorised ``q``."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    return Profile(Kind.CUSTOM, rho=float(rho), amplitude=float(amplitude),
                   kinks=tuple(sorted(kinks)), custom_eval=func)


_FACTORIES = {
    "sech": sech,
    "gaussian": gaussian,
    "peakon": peakon,
    "tent": tent,
}
PROFILE_NAMES = tuple(_FACTORIES)


def from_name(name: str) -> Profile:
    try:
        return _FACTORIES[name.strip().lower()]()
    except KeyError:
        raise ValueError(
            f"unknown profile {name!r}; expected one of {', '.join(PROFILE_NAMES)}"
        ) from None


def _sech(x):
    # 2 e^{-|x|} / (1 + e^{-2|x|}) never overflows
    e = np.exp(-np.abs(x))
    return 2.0 * e / (1.0 + e * e)


def _scalar_or_array(out, x):
    if np.ndim(x) == 0:
        return out.item() if isinstance(out, np.ndarray) else out
    return out


def eval_q(p: Profile, x):
    x = np.asarray(x, dtype=float)
    if p.kind is Kind.SECH:
        out = _sech(x)
    elif p.kind is Kind.GAUSSIAN:
        out = np.exp(-x * x)
    elif p.kind is Kind.PEAKON:
        out = np.exp(-np.abs(x))
    elif p.kind is Kind.TENT:
        out = np.maximum(1.0 - np.abs(x), 0.0)
    else:
        out = np.asarray(p.custom_eval(x), dtype=float)
        if out.shape != x.shape:
            out = np.broadcast_to(out, x.shape).copy()
    return _scalar_or_array(out, x)


def _sinc(x):
    # unnormalised sin(x)/x
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0.0, 1.0, x)
    return np.where(x == 0.0, 1.0, np.sin(safe) / safe)


def eval_hat(p: Profile, k):
    """Fourier transform with the ``1/(2 pi)`` normalisation."""
    if p.kind is Kind.CUSTOM:
        if np.ndim(k) == 0:
            return numeric_hat(p, float(k))
        return np.array([numeric_hat(p, float(kk)) for kk in np.ravel(k)]).reshape(np.shape(k))
    k = np.asarray(k, dtype=float)
    if p.kind is Kind.SECH:
        out = 0.5 * _sech(0.5 * math.pi * k)
    elif p.kind is Kind.GAUSSIAN:
        out = np.exp(-0.25 * k * k) / (2.0 * math.sqrt(math.pi))
    elif p.kind is Kind.PEAKON:
        out = 1.0 / (math.pi * (1.0 + k * k))
    else:
        out = _sinc(0.5 * k) ** 2 / (2.0 * math.pi)
    return _scalar_or_array(out, k)


def _tent_autocorr(t):
    # cubic B-spline: the tent is box*box, so tent*tent is box^{*4}
    s = np.abs(t)
    inner = 2.0 / 3.0 - s * s + 0.5 * s ** 3
    outer = (2.0 - s) ** 3 / 6.0
    return np.where(s <= 1.0, inner, np.where(s < 2.0, outer, 0.0))


def _sech_autocorr(t):
    s = np.abs(t)
    small = s < 1e-6
    safe = np.where(small, 1.0, s)
    # 2t/sinh t = 4 t e^{-t} / (1 - e^{-2t}) avoids overflow of sinh
    big = 4.0 * safe * np.exp(-safe) / -np.expm1(-2.0 * safe)
    s2 = s * s
    series = 2.0 - s2 / 3.0 + 7.0 * s2 * s2 / 180.0
    return np.where(small, series, big)


def eval_autocorr(p: Profile, t):
    """Autocorrelation ``int q(x+t) q(x) dx``, evaluated at ``|t|``."""
    if p.kind is Kind.CUSTOM:
        if np.ndim(t) == 0:
            return numeric_autocorr(p, float(t))
        return np.array([numeric_autocorr(p, float(tt)) for tt in np.ravel(t)]).reshape(np.shape(t))
    t = np.abs(np.asarray(t, dtype=float))
    if p.kind is Kind.SECH:
        out = _sech_autocorr(t)
    elif p.kind is Kind.GAUSSIAN:
        out = math.sqrt(0.5 * math.pi) * np.exp(-0.5 * t * t)
    elif p.kind is Kind.PEAKON:
        out = (1.0 + t) * np.exp(-t)
    else:
        out = _tent_autocorr(t)
    return _scalar_or_array(out, t)


def support_radius(p: Profile, tol: float) -> float:
    """Radius ``R`` with ``|q(x)| <= tol`` whenever ``|x| >= R``."""
    if not 0.0 < tol < 1.0:
        raise ValueError(f"tol must lie in (0, 1), got {tol!r}")
    if p.kind is Kind.TENT:
        return 1.0
    if p.kind is Kind.SECH:
        return math.log(2.0 / tol)
    if p.kind is Kind.PEAKON:
        return -math.log(tol)
    if p.kind is Kind.GAUSSIAN:
        return math.sqrt(-math.log(tol))
    return max(math.log(max(p.amplitude, tol) / tol) / p.rho, 1.0)


def autocorr_support(p: Profile, tol: float) -> float:
    """Radius beyond which ``|q*q| <= tol`` (``2`` for the tent)."""
    if p.kind is Kind.TENT:
        return 2.0
    if p.kind is Kind.GAUSSIAN:
        return math.sqrt(2.0 * math.log(math.sqrt(0.5 * math.pi) / tol))
    # q*q decays like t e^{-rho t}; a 0.9 rho envelope absorbs the t factor
    bound = p.amplitude ** 2 * 4.0 / p.rho
    return math.log(max(bound, tol) / tol) / (0.9 * p.rho)


def _line_edges(p: Profile, radius: float, shifts=(0.0,)):
    edges = {-radius, radius}
    for s in shifts:
        for k in p.kinks:
            c = k + s
            if -radius < c < radius:
                edges.add(c)
    return sorted(edges)


def numeric_hat(p: Profile, k: float, step: float = 1e-3, tol: float = 1e-16) -> float:
    """Quadrature route to ``q_hat(k)``, independent of the closed forms."""
    radius = support_radius(p, tol)
    edges = _line_edges(p, radius)
    val = quadrature.integrate_piecewise(
        lambda x: np.cos(k * x) * eval_q(p, x), edges, step
    )
    return float(val.real) / (2.0 * math.pi)


def numeric_autocorr(p: Profile, t: float, step: float = 1e-3, tol: float = 1e-16) -> float:
    """Quadrature route to ``(q*q)(t)``."""
    t = abs(float(t))
    radius = support_radius(p, tol) + t
    edges = _line_edges(p, radius, shifts=(0.0, -t))
    val = quadrature.integrate_piecewise(
        lambda x: eval_q(p, x + t) * eval_q(p, x), edges, step
    )
    return float(val.real)
