# %% [markdown]
# The field seen from the wave
# ----------------------------
# In the frame l = x - t the field approaches a fixed shape times the decay:
#
#     psi(t + l, t) ~ a0 omega r sigma(l) exp(-theta t),
#     sigma(l) = int_0^inf exp((theta + i omega) t) q(t + l) dt.
#
# Near the wave sigma is close to i q(l) / omega (the field copies the wave);
# far behind it is a ripple of amplitude 2 pi |q_hat(omega)|.

# %%
import math

import numpy as np

from radsol import asymptotics as asym
from radsol import profiles as prof
from radsol import spectral
from radsol.sim_field import SimConfig, run

p, omega = prof.sech(), 2.0
res = run(SimConfig(p, omega, t_final=150.0, frames=(-40.0, 10.0)))
fr = res.frames[-1]
th = spectral.find_theta(p, omega)
sp = asym.sigma_profile(p, th, omega, fr.l)
print(f"relative sup-norm gap to the predicted profile: {asym.compare_frame(fr.l, fr.psi, th, sp, fr.t, 1.0, omega):.4f}")

# %%
for l in (-30.0, -10.0, 0.0, 3.0):
    j = int(np.argmin(np.abs(fr.l - l)))
    pred = omega * th.residue * sp.sigma[j] * math.exp(-th.theta * fr.t)
    print(f"l = {fr.l[j]:7.2f}: simulated {fr.psi[j]:.5f}  predicted {pred:.5f}")

# %% [markdown]
# The ripple amplitude behind the wave is not exactly 2 pi |q_hat(omega)|:
# sigma carries exp(theta |l|) growth from the decay, which matters when
# theta is not tiny.

# %%
far = abs(sp.far_field_ref)
for l in (-10.0, -30.0):
    print(f"|sigma({l})| = {abs(asym.sigma(p, th, omega, l)):.4f}  vs 2 pi |q_hat| = {far:.4f}"
          f"  (ratio {abs(asym.sigma(p, th, omega, l)) / far:.3f}, exp(theta |l|) = {math.exp(-th.theta * l):.3f})")

# %% [markdown]
# The near-field copy improves like 1/omega^2.

# %%
grid = np.linspace(-2, 2, 81)
for w in (4.0, 8.0):
    s = asym.sigma_profile(p, spectral.find_theta(p, w), w, grid)
    print(f"omega={w}: max |sigma - i q / omega| on [-2, 2] = {np.max(np.abs(s.sigma - s.near_field_ref)):.3e}")
