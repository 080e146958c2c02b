# %% [markdown]
# # Where does the heralded state still violate CHSH?
#
# For each mismatch the critical delay is ln(1 + C^2)/2, where C is the
# contrast between the two Bell components. Compare it with a direct
# root-find on the noisy state.

# %%
import math

import numpy as np

from faraday_bell import bell, protocol
from faraday_bell.protocol import InteractionParams

rows = bell.figure2_curves()
table = {}
for d, m, x in rows:
    table.setdefault(d, []).append((m, x))

# %% A few points from each contour
for d, pts in table.items():
    pts = np.array(pts)
    picks = pts[:: len(pts) // 5]
    print(f"delta={d:.4f}:", "  ".join(f"({m:.3f}, {x:.4f})" for m, x in picks))

# %% Closed form against a numerical root
params = InteractionParams.from_mean_delta(0.4 * math.pi, math.pi / 10)
state = protocol.evolve_and_herald(params).state
print("closed form:", bell.violation_boundary(0.4 * math.pi, math.pi / 10))
print("root find:  ", bell.violation_boundary_numeric(state))
