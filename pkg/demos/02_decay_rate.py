# %% [markdown]
# The decay rate as a Laplace-domain pole
# ---------------------------------------
# Eliminating the field turns the amplitude equation into a convolution whose
# Laplace transform is 1 / (z + K(z)), with
#
#     K(z) = int_0^inf exp(-z t) cos(omega t) (q*q)(t) dt.
#
# The amplitude decays like r exp(-theta t) where -theta is the real root of
# z + K(z) = 0 and r = 1 / (1 + K'(-theta)).  For large omega,
# theta ~ 2 pi^2 |q_hat(omega)|^2 = K(0).

# %%
import math

from radsol import profiles as prof
from radsol import spectral

p = prof.sech()
print(" omega      theta        K(0)         theta/K(0)   residue  Newton its")
for omega in (1.0, 2.0, 4.0, 8.0, 10.0):
    res = spectral.find_theta(p, omega)
    print(f"{omega:6.1f}  {res.theta:.4e}  {res.theta_asymptotic:.4e}  {res.theta / res.theta_asymptotic:10.4f}"
          f"  {res.residue:.4f}  {res.newton_iters}")

# %% [markdown]
# The rate is exponentially small in omega for the sech profile, so the time
# for the wave to lose 5% of its amplitude grows explosively.  At omega = 10 it
# is of order 1e11.

# %%
res = spectral.find_theta(p, 10.0)
print(f"95% deterioration time at omega=10: {spectral.deterioration_time(res.theta):.3e}")

# %% [markdown]
# Profiles with a kink radiate much more: the peakon's rate only falls like
# omega^-4.

# %%
for omega in (4.0, 8.0, 16.0):
    r = spectral.find_theta(prof.peakon(), omega)
    print(f"peakon omega={omega:4.0f}: theta={r.theta:.4e}  2/(1+w^2)^2={2 / (1 + omega ** 2) ** 2:.4e}")

# %% [markdown]
# A map of |z + K(z)| over the strip shows the minimum sitting on the real
# axis next to the pole found above.

# %%
re, im, vals = spectral.pole_probe(p, 2.0, n_re=100, n_im=9)
i, j = divmod(int(vals.argmin()), vals.shape[1])
print(f"smallest |z + K(z)| = {vals[i, j]:.3e} at z = {re[i]:+.3f} {im[j]:+.3f}i; "
      f"pole at {-spectral.find_theta(p, 2.0).theta:+.4f}")
