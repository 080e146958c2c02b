# %% [markdown]
# # Device-independent key from telecom quantum dots
#
# The secret fraction depends on the CHSH value and the bit error rate;
# fibre loss then scales the herald rate by a decade every 33 km.

# %%
from faraday_bell import diqkd

inter = diqkd.telecom_dot_interaction()
for eta_c, eta_d in diqkd.FIG3_EFFICIENCIES:
    profile = diqkd.telecom_dot_profile(eta_c, eta_d)
    print(f"eta_c={eta_c} eta_d={eta_d}  CHSH={diqkd.modeled_chsh(profile, inter):.4f}")
    for pt in diqkd.figure3_sweep(profile, inter, [0, 25, 50, 75, 100, 125, 150]):
        print(f"  {pt.distance:5.0f} km  {pt.absolute_rate:10.4g} bit/s")

# %% Secret fraction against CHSH at the nominal error rate
q = diqkd.qber(inter.mean_alpha, inter.delta_alpha)
for s in (2.2, 2.4, 2.6, 2.8):
    print(f"S={s}  q={q:.4f}  R={diqkd.key_rate(s, q):.4f}")
