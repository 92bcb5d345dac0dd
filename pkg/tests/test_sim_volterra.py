import math

import numpy as np
import pytest
from scipy import integrate

from radsol import profiles as prof
from radsol.sim_field import SimConfig, run
from radsol.sim_volterra import (RenewalConfig, j_forcing, kernel_grid, phi, phi_grid,
                                 residual_delay_ode, solve_renewal, solve_renewal_kernel)

NAMES = prof.PROFILE_NAMES
pytestmark = pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")


@pytest.mark.parametrize("name", NAMES)
def test_phi_matches_scipy(name):
    p = prof.from_name(name)
    omega = 2.0
    for t in (0.7, 1.5, 3.2):
        pts = [c for c in (1.0, 2.0) if c < t] if p.compact else None
        ref, _ = integrate.quad(lambda s: math.cos(omega * s) * prof.eval_autocorr(p, s), 0, t,
                                points=pts, epsabs=1e-14, epsrel=1e-13, limit=200)
        # Simpson with panel dt / 4: error falls by 1e4 when dt shrinks tenfold
        coarse = abs(phi(p, omega, t) + ref)
        fine = abs(phi(p, omega, t, dt=math.pi / 400) + ref)
        assert coarse < 5e-8
        assert fine < 5e-12


def test_phi_grid_starts_at_zero_and_tends_to_minus_K0():
    p = prof.sech()
    omega = 2.0
    dt = math.pi / 40
    ph = phi_grid(p, omega, dt, 2000)
    assert ph[0] == 0.0
    k0 = 2 * math.pi ** 2 * prof.eval_hat(p, omega) ** 2
    assert ph[-1] == pytest.approx(-k0, rel=1e-10)


def test_kernel_grid_values():
    p = prof.gaussian()
    k = kernel_grid(p, 1.5, 0.1, 10)
    t = 0.1 * np.arange(11)
    np.testing.assert_allclose(k, np.cos(1.5 * t) * prof.eval_autocorr(p, t), rtol=1e-12)


def test_solver_against_harmonic_oracle():
    # phi(t) = -c t gives a'' = -c a, so a = a0 cos(sqrt(c) t)
    c, dt, n = 0.7, 0.01, 2000
    t = dt * np.arange(n + 1)
    a = solve_renewal_kernel(-c * t, 1.0, 0.0, dt)
    assert np.max(np.abs(a - np.cos(math.sqrt(c) * t))) < 5e-5


def test_solver_second_order():
    c = 0.7
    errs = []
    for dt in (0.02, 0.01):
        n = int(round(10 / dt))
        t = dt * np.arange(n + 1)
        a = solve_renewal_kernel(-c * t, 1.0, 0.0, dt)
        errs.append(np.max(np.abs(a - np.cos(math.sqrt(c) * t))))
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_constant_kernel_is_implicit_trapezoid():
    c, dt = 0.3, 0.05
    t = dt * np.arange(401)
    a = solve_renewal_kernel(np.full(t.size, -c), 1.0, 0.0, dt)
    g = (1 - 0.5 * c * dt) / (1 + 0.5 * c * dt)
    np.testing.assert_allclose(a, g ** np.arange(t.size), rtol=1e-12)


def test_renewal_config_checks_step():
    with pytest.raises(ValueError):
        RenewalConfig(prof.sech(), 2.0, dt=1.0)
    cfg = RenewalConfig(prof.sech(), 2.0, t_final=10.0)
    assert cfg.step == pytest.approx(math.pi / 40)
    assert cfg.times[-1] == pytest.approx(cfg.n_steps * cfg.step)


def test_delay_ode_residual_is_small():
    cfg = RenewalConfig(prof.sech(), 2.0, t_final=30.0, dt=math.pi / 160)
    a = solve_renewal(cfg)
    assert residual_delay_ode(a, cfg) < 1e-3


def test_renewal_agrees_with_field_at_short_times():
    p = prof.sech()
    fld = run(SimConfig(p, 2.0, t_final=20.0, dt=math.pi / 40)).a_series
    ren = solve_renewal(RenewalConfig(p, 2.0, t_final=20.5, dt=math.pi / 320))
    a_ren = np.interp(fld.t, ren.t, ren.values)
    assert np.max(np.abs(fld.values - a_ren)) < 1e-4


def test_forcing_from_initial_field():
    p = prof.sech()
    psi0 = lambda x: 0.3 * np.exp(-np.asarray(x) ** 2) + 0j
    # j(0) = -(1/omega) int Re psi0 q
    ref, _ = integrate.quad(lambda x: 0.3 * math.exp(-x * x) * prof.eval_q(p, x), -30, 30, epsabs=1e-14)
    assert j_forcing(p, 2.0, psi0, 0.0) == pytest.approx(-ref / 2.0, rel=1e-9)
    assert j_forcing(p, 2.0, None, 1.0) == 0.0

    fld = run(SimConfig(p, 2.0, psi0=psi0, t_final=15.0, dt=math.pi / 40)).a_series
    ren = solve_renewal(RenewalConfig(p, 2.0, psi0=psi0, t_final=15.5, dt=math.pi / 160))
    assert np.max(np.abs(fld.values - np.interp(fld.t, ren.t, ren.values))) < 2e-4


def test_reference_values():
    p = prof.sech()
    assert phi(p, 2.0, 0.0) == 0.0
    assert abs(phi(p, 2.0, 40.0) + 0.0367247) <= 1e-6
    for t in (2.0, 3.0, 7.5):
        assert abs(phi(prof.tent(), 2 * math.pi, t)) <= 1e-10
    q0 = lambda x: prof.eval_q(p, x) + 0j
    assert j_forcing(p, 2.0, q0, 0.0) == pytest.approx(-1.0, rel=1e-10)
    assert j_forcing(p, 2.0, lambda x: 1j * prof.eval_q(p, x), 0.0) == pytest.approx(0.0, abs=1e-15)
    assert j_forcing(p, 2.0, lambda x: np.zeros_like(x, dtype=complex), 3.0) == 0.0
    a = solve_renewal_kernel(np.zeros(50), 0.7, 0.0, 0.1)
    assert np.all(a == 0.7)


def test_renewal_decay_rate():
    from radsol import asymptotics as asym
    from radsol import spectral
    a = solve_renewal(RenewalConfig(prof.sech(), 2.0, t_final=100.0))
    th = spectral.find_theta(prof.sech(), 2.0)
    assert asym.fit_decay(a, (30.0, 100.0)).rate == pytest.approx(th.theta, rel=0.1)


def test_delay_ode_residual_at_default_step():
    cfg = RenewalConfig(prof.sech(), 2.0, t_final=100.0)
    assert residual_delay_ode(solve_renewal(cfg), cfg) <= 1e-3


def test_delay_ode_residual_is_second_order():
    res = []
    for dt in (math.pi / 40, math.pi / 80):
        cfg = RenewalConfig(prof.sech(), 2.0, t_final=100.0, dt=dt)
        res.append(residual_delay_ode(solve_renewal(cfg), cfg))
    assert res[0] / res[1] >= 3.5
    zero = RenewalConfig(prof.sech(), 2.0, a0=0.0, t_final=5.0)
    assert residual_delay_ode(solve_renewal(zero), zero) == 0.0
