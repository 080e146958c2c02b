# %% [markdown]
# # Heralding spin entanglement with one photon pair
#
# Each photon of a singlet pair reflects off a cavity holding one spin.
# The reflection imprints a spin-dependent phase, and detecting both photons
# in the H analyser leaves the spins in a superposition of two Bell states.

# %%
import math

import numpy as np

from faraday_bell import bell, protocol, qstate
from faraday_bell.protocol import InteractionParams

# %% Ideal rotation: a perfect singlet, heralded a quarter of the time
params = InteractionParams(math.pi / 2, math.pi / 2)
herald = protocol.evolve_and_herald(params)
print("p(H,H) =", round(herald.herald_probability, 6))
print("Bell coefficients:", {k: complex(np.round(v, 6)) for k, v in qstate.bell_coefficients(herald.state).items()})
print("CHSH max:", bell.horodecki_max(qstate.density_from_pure(herald.state)))

# %% Mismatched cavities mix in phi-minus
for delta in (0, math.pi / 50, math.pi / 20, math.pi / 10):
    p = InteractionParams.from_mean_delta(0.4 * math.pi, delta)
    h = protocol.evolve_and_herald(p)
    print(f"delta={delta:.4f}  p={h.herald_probability:.4f}  "
          f"concurrence={qstate.concurrence(h.state):.4f}  "
          f"CHSH={bell.heralded_chsh_max(p.mean_alpha, p.delta_alpha):.4f}")

# %% Spin decoherence: white noise with visibility exp(-t/tau)
state = herald.state
for x in (0.0, 0.1, 0.2, bell.SINGLET_THRESHOLD, 0.5):
    rho = protocol.decohere(state, x, 1.0)
    print(f"t/tau={x:.4f}  CHSH={bell.horodecki_max(rho):.4f}")
