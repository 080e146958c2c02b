"""Device-independent QKD key rate against collective attacks, and its distance sweep."""

import math
from dataclasses import dataclass, replace

from . import bell, feasibility, protocol

FIG3_COLUMNS = ("distance_km", "eta_t", "herald_rate_hz", "key_rate_bits_per_herald",
                "key_rate_bits_per_s")
# Two (eta_c, eta_d) settings for the telecom quantum-dot link.
FIG3_EFFICIENCIES = ((0.3, 0.5), (0.5, 0.8))
TELECOM_DOT_MEAN_ALPHA = 0.1 * math.pi
TELECOM_DOT_DELTA_ALPHA = math.pi / 50


def binary_entropy(x):
    """``h(x) = -x log2 x - (1-x) log2(1-x)`` with ``h(0) = h(1) = 0``."""
    if not 0 <= x <= 1:
        raise ValueError(f"binary entropy argument {x} outside [0, 1]")
    if x == 0 or x == 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def qber(mean_alpha, delta_alpha):
    """Bit error rate of the heralded state, ``sin^2(delta) / N``."""
    n = protocol.normalization(mean_alpha, delta_alpha)
    if n < 1e-24:
        raise protocol.HeraldingError("no heralding possible: N = 0")
    return math.sin(delta_alpha) ** 2 / n


def key_rate(chsh, q):
    """Fractional key rate ``1 - h(q) - h((1 + sqrt((CHSH/2)^2 - 1))/2)`` in bits per herald.

    Negative values are returned unchanged.
    """
    if chsh > bell.TSIRELSON + 1e-9:
        raise ValueError(f"CHSH value {chsh} exceeds the Tsirelson bound")
    if chsh < 2 - 1e-12:
        raise ValueError(f"CHSH value {chsh} does not violate the inequality")
    if not 0 <= q <= 0.5:
        raise ValueError(f"QBER {q} outside [0, 1/2]")
    s = max(chsh / 2, 1.0)
    arg = (1 + math.sqrt(max(s * s - 1, 0.0))) / 2
    return 1 - binary_entropy(q) - binary_entropy(min(arg, 1.0))


@dataclass(frozen=True)
class RateCurvePoint:
    distance: float
    eta_t: float
    herald_rate: float
    fractional_key_rate: float
    absolute_rate: float

    def row(self):
        return (self.distance, self.eta_t, self.herald_rate, self.fractional_key_rate,
                self.absolute_rate)


def telecom_dot_profile(eta_c, eta_d, base=None):
    """Quantum-dot link at 1.3 um: 0.3 dB/km, 10 GHz source, 1e-3 pair probability."""
    base = feasibility.load_profile("dots") if base is None else base
    return base.with_overrides(
        name=f"dots-telecom-{eta_c:g}-{eta_d:g}", lambda_nm=1300, loss_db_per_km=0.3,
        source_rate_hz=10e9, pair_probability=1e-3, eta_c=eta_c, eta_d=eta_d)


def telecom_dot_interaction():
    return protocol.InteractionParams.from_mean_delta(
        TELECOM_DOT_MEAN_ALPHA, TELECOM_DOT_DELTA_ALPHA, protocol.Convention.TWO_TRANSITION)


def modeled_chsh(profile, interaction, t_over_tau=None):
    """Horodecki maximum of the heralded, decohered spin state.

    The delay defaults to the readout time, since with shielded labs only
    ``delta_t < tau`` is required.
    """
    params = replace(interaction, convention=profile.convention)
    x = profile.delta_t / profile.tau if t_over_tau is None else t_over_tau
    state = protocol.evolve_and_herald(params).state
    return bell.horodecki_max(protocol.decohere(state, x, 1.0))


def figure3_sweep(profile, interaction, distances_km, t_over_tau=None, chsh=None):
    """Key rate against total separation.

    Parameters
    ----------
    distances_km : sequence of float
    t_over_tau : float, optional
        Spin decoherence before measurement, default ``delta_t / tau``.
    chsh : float, optional
        Use this CHSH value instead of the modeled one.
    """
    distances_km = list(distances_km)
    if not distances_km:
        raise ValueError("empty distance list")
    params = replace(interaction, convention=profile.convention)
    value = modeled_chsh(profile, params, t_over_tau) if chsh is None else chsh
    fraction = key_rate(value, qber(*protocol.effective_angles(params)))
    points = []
    for km in distances_km:
        d = km * 1000
        eta_t = feasibility.channel_transmission(d, profile.loss_db_per_km)
        rate = feasibility.herald_rate(profile, params, d)
        points.append(RateCurvePoint(float(km), eta_t, rate, fraction, max(fraction, 0.0) * rate))
    return points
