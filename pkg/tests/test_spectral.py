import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, optimize

from radsol import profiles as prof
from radsol import spectral

NAMES = prof.PROFILE_NAMES
pytestmark = pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")


def quad_K(p, omega, s):
    """Oracle: int_0^inf exp(-s t) cos(omega t) (q*q)(t) dt on the real axis by scipy."""
    f = lambda t: math.exp(-s * t) * float(prof.eval_autocorr(p, t))
    # the tent autocorrelation is a spline with knots at 1 and 2
    edges = (0.0, 1.0, 2.0) if p.compact else (0.0, 80.0)
    return sum(integrate.quad(f, a, b, weight="cos", wvar=omega, limit=500,
                              epsabs=1e-15, epsrel=1e-12)[0]
               for a, b in zip(edges, edges[1:]))


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("omega", [1.0, 3.0])
@pytest.mark.parametrize("s", [-0.2, 0.0, 0.3])
def test_K_real_axis_matches_scipy(name, omega, s):
    p = prof.from_name(name)
    got = spectral.K(p, omega, s)
    ref = quad_K(p, omega, s)
    assert abs(got.imag) < 1e-14
    assert got.real == pytest.approx(ref, rel=1e-8, abs=1e-13)


@pytest.mark.parametrize("name", NAMES)
def test_K_at_zero_is_power_spectrum(name):
    p = prof.from_name(name)
    for omega in (1.5, 3.0):
        ref = 2 * math.pi ** 2 * prof.eval_hat(p, omega) ** 2
        assert spectral.K(p, omega, 0.0).real == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("name", ["sech", "peakon"])
def test_K_prime_matches_finite_difference(name):
    p = prof.from_name(name)
    z = complex(0.05, 0.4)
    h = 1e-4
    fd = (spectral.K(p, 2.0, z + h) - spectral.K(p, 2.0, z - h)) / (2 * h)
    assert abs(spectral.K_prime(p, 2.0, z) - fd) < 1e-7


@pytest.mark.parametrize("name", NAMES)
def test_K_direct_agrees(name):
    p = prof.from_name(name)
    z = complex(0.1, -0.7)
    assert abs(spectral.K(p, 2.5, z) - spectral.K_direct(p, 2.5, z)) < 1e-9


@settings(max_examples=25, deadline=None)
@given(name=st.sampled_from(NAMES), x=st.floats(-0.3, 1.0), y=st.floats(-3.0, 3.0),
       omega=st.floats(0.5, 6.0))
def test_K_conjugate_symmetry(name, x, y, omega):
    p = prof.from_name(name)
    spec = spectral.QuadSpec(step=1e-2, trunc_tol=1e-14)
    a = spectral.K(p, omega, complex(x, y), spec)
    b = spectral.K(p, omega, complex(x, -y), spec)
    assert abs(a - b.conjugate()) <= 1e-13 * max(1.0, abs(a))


def test_strip_is_enforced():
    with pytest.raises(ValueError):
        spectral.K(prof.sech(), 2.0, complex(-0.6, 0.0))


@pytest.mark.parametrize("omega", [2.0, 3.0, 4.0])
def test_find_theta_matches_brentq_oracle(omega):
    p = prof.sech()
    g = lambda s: s + quad_K(p, omega, s)
    root = optimize.brentq(g, -0.2, 0.0, xtol=1e-16, rtol=1e-14)
    res = spectral.find_theta(p, omega)
    assert res.theta == pytest.approx(-root, rel=1e-7)
    # residue from the oracle derivative
    h = 1e-5
    dK = (quad_K(p, omega, root + h) - quad_K(p, omega, root - h)) / (2 * h)
    assert res.residue == pytest.approx(1 / (1 + dK), rel=1e-6)


def test_theta_asymptotic_closed_forms():
    w = 3.0
    assert spectral.theta_asymptotic(prof.sech(), w) == pytest.approx(
        math.pi ** 2 / 2 / math.cosh(math.pi * w / 2) ** 2, rel=1e-14)
    assert spectral.theta_asymptotic(prof.gaussian(), w) == pytest.approx(
        math.pi / 2 * math.exp(-w * w / 2), rel=1e-14)
    assert spectral.theta_asymptotic(prof.peakon(), w) == pytest.approx(2 / (1 + w * w) ** 2, rel=1e-14)
    assert spectral.theta_asymptotic(prof.tent(), w) == pytest.approx(
        0.5 * (math.sin(w / 2) / (w / 2)) ** 4, rel=1e-14)


@pytest.mark.parametrize("name", NAMES)
def test_pole_is_root_with_diagnostics(name):
    p = prof.from_name(name)
    res = spectral.find_theta(p, 3.0)
    assert res.theta >= -1e-15
    assert res.final_residual <= 1e-12
    assert abs(-res.theta + spectral.K(p, 3.0, -res.theta)) <= 1e-12
    assert 0 < res.residue <= 1.0 + 1e-12
    assert res.pole == pytest.approx(-res.theta)


def test_tent_resonance_has_no_decay():
    for n in (1, 2):
        res = spectral.find_theta(prof.tent(), 2 * math.pi * n)
        assert abs(res.theta) <= 1e-15


def test_deterioration_time():
    assert spectral.deterioration_time(0.0) == math.inf
    assert spectral.deterioration_time(-1e-20) == math.inf
    assert spectral.deterioration_time(0.1) == pytest.approx(math.log(20 / 19) / 0.1)


def test_pole_probe_finds_single_small_minimum():
    re, im, vals = spectral.pole_probe(prof.sech(), 2.0, n_re=20, n_im=11)
    assert vals.shape == (20, 11)
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    assert abs(im[j]) <= (im[1] - im[0])
    assert np.all(np.isfinite(vals))


def test_reference_values():
    p = prof.sech()
    k0 = 2 * math.pi ** 2 / math.cosh(math.pi) ** 2 / 4
    assert k0 == pytest.approx(0.03672455, abs=1e-8)
    assert spectral.K(p, 2.0, 0.0).real == pytest.approx(k0, rel=1e-8)
    h = 1e-4
    fd = (spectral.K(p, 2.0, h) - spectral.K(p, 2.0, -h)) / (2 * h)
    assert abs(spectral.K_prime(p, 2.0, 0.0) - fd) <= 1e-6
    # quoted literals carry five or six figures; allow one unit in the last place
    assert spectral.theta_asymptotic(prof.gaussian(), 4.0) == pytest.approx(math.pi / 2 * math.exp(-8), rel=1e-14)
    assert spectral.theta_asymptotic(prof.gaussian(), 4.0) == pytest.approx(5.2690e-4, abs=1e-7)
    assert spectral.theta_asymptotic(prof.tent(), 3 * math.pi) == pytest.approx(0.5 * (2 / (3 * math.pi)) ** 4, rel=1e-14)
    assert spectral.theta_asymptotic(prof.tent(), 3 * math.pi) == pytest.approx(1.01393e-3, abs=1e-8)
    assert spectral.theta_asymptotic(prof.peakon(), 8.0) == pytest.approx(2 / 65 ** 2, rel=1e-14)


def test_tent_kernel_derivative_falls_like_one_over_omega():
    p = prof.tent()
    c2 = 2 * math.pi * abs(spectral.K_prime(p, 2 * math.pi, 0.0))
    mags = [abs(spectral.K_prime(p, 2 * math.pi * n, 0.0)) for n in (1, 2, 4)]
    assert mags[0] > mags[1] > mags[2]
    for n, m in zip((2, 4), mags[1:]):
        assert m <= c2 / (2 * math.pi * n)


def test_peakon_pole_matches_oracle():
    p = prof.peakon()
    root = optimize.brentq(lambda s: s + quad_K(p, 8.0, s), -2e-3, 0.0, xtol=1e-18, rtol=1e-13)
    res = spectral.find_theta(p, 8.0)
    assert res.theta == pytest.approx(-root, rel=1e-7)
    assert abs(res.theta / res.theta_asymptotic - 1) <= 0.5


def test_sech_pole_at_two_is_within_half_of_asymptote():
    res = spectral.find_theta(prof.sech(), 2.0)
    assert abs(res.theta / res.theta_asymptotic - 1) <= 0.5


def test_small_omega_starts_inside_strip():
    # theta_asymptotic(1) = 0.78 lies outside the strip; the root at -0.223 is still found
    p = prof.sech()
    root = optimize.brentq(lambda s: s + quad_K(p, 1.0, s), -0.45, -0.01, xtol=1e-15)
    assert spectral.find_theta(p, 1.0).theta == pytest.approx(-root, rel=1e-7)


def test_no_pole_in_strip_raises():
    with pytest.raises(spectral.ConvergenceError):
        spectral.find_theta(prof.sech(), 0.3)
