# %% [markdown]
# Switching radiation off
# -----------------------
# The tent profile has q_hat(2 pi n) = 0.  At those frequencies the pole sits
# at zero, the wave does not decay and nothing is left behind it.

# %%
import math

import numpy as np

from radsol import asymptotics as asym
from radsol import profiles as prof
from radsol import spectral
from radsol.sim_field import SimConfig, run

tent = prof.tent()
for omega in (2 * math.pi, 3 * math.pi, 4 * math.pi):
    th = spectral.find_theta(tent, omega)
    cfg = SimConfig(tent, omega, t_final=100.0, frames=(-40.0, 5.0))
    res = run(cfg)
    fit = asym.fit_decay(res.a_series)
    fr = res.frames[-1]
    behind = np.max(np.abs(fr.psi[fr.l < -5]))
    print(f"omega = {omega / math.pi:.0f} pi: theta = {th.theta:.2e}, fitted rate = {fit.rate:.2e}, "
          f"max |psi| behind the wave = {behind:.2e}")

# %% [markdown]
# Off resonance (3 pi) the tent radiates, with rate 1/2 sinc(omega/2)^4.
