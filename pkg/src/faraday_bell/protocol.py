"""Spin-photon Faraday interaction, heralding on (H, H) and spin decoherence.

A polarisation-entangled photon pair in the singlet state is sent to two
cavities, each holding a spin prepared in ``(|up> + |down>)/sqrt(2)``. Each
photon picks up a spin-dependent phase, is measured in the H/V basis, and
the (H, H) outcome heralds an entangled spin pair.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import qstate
from .qstate import DOWN, H, L, PSI_MINUS, R, UP

TWO_PI = 2 * math.pi


class HeraldingError(ValueError):
    """Raised when the (H, H) outcome has zero probability."""


class Convention(str, enum.Enum):
    """Which optical transitions the spin couples to.

    ``TWO_TRANSITION`` applies the interaction phase to ``|L, up>`` and
    ``|R, down>``. ``SINGLE_TRANSITION`` applies it to ``|L, up>`` only, the
    situation for NV centres and atoms whose ground states are split so that
    only one of them is resonant with the cavity.
    """

    TWO_TRANSITION = "two-transition"
    SINGLE_TRANSITION = "single-transition"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"two": cls.TWO_TRANSITION, "twotransition": cls.TWO_TRANSITION,
                   "single": cls.SINGLE_TRANSITION, "singletransition": cls.SINGLE_TRANSITION}
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown transition convention {value!r}") from None


# Detection patterns of the two photons behind their H/V analysers.
HERALD_PATTERNS = (("H", "H"), ("H", "V"), ("V", "H"), ("V", "V"))


@dataclass(frozen=True)
class InteractionParams:
    """Interaction strengths of Alice's and Bob's spin-photon interfaces (radians).

    Angles are wrapped into ``[0, 2*pi)`` on construction.
    """

    alpha_a: float
    alpha_b: float
    convention: Convention = Convention.TWO_TRANSITION

    def __post_init__(self):
        for name in ("alpha_a", "alpha_b"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value % TWO_PI)
        object.__setattr__(self, "convention", Convention.parse(self.convention))

    @classmethod
    def from_mean_delta(cls, mean_alpha, delta_alpha, convention=Convention.TWO_TRANSITION):
        return cls(mean_alpha + delta_alpha, mean_alpha - delta_alpha, convention)

    @property
    def mean_alpha(self):
        return (self.alpha_a + self.alpha_b) / 2

    @property
    def delta_alpha(self):
        return (self.alpha_a - self.alpha_b) / 2


@dataclass(frozen=True)
class HeraldResult:
    state: np.ndarray
    herald_probability: float


def effective_angles(params):
    """Return ``(mean_eff, delta_eff)``, the two-transition angles with the same physics.

    A single-transition interface at angle ``alpha`` is a two-transition
    interface at ``alpha/2`` up to local phases, so both angles are halved.
    """
    scale = 0.5 if params.convention is Convention.SINGLE_TRANSITION else 1.0
    return params.mean_alpha * scale, params.delta_alpha * scale


def normalization(mean_alpha, delta_alpha):
    return math.sin(delta_alpha) ** 2 + math.sin(mean_alpha) ** 2


def faraday_unitary(alpha, convention=Convention.TWO_TRANSITION):
    """Diagonal interaction unitary on photon (x) spin, basis ``[L up, L down, R up, R down]``."""
    convention = Convention.parse(convention)
    phase = np.exp(1j * alpha)
    diag = np.ones(4, dtype=complex)
    diag[0] = phase
    if convention is Convention.TWO_TRANSITION:
        diag[3] = phase
    return np.diag(diag)


def local_phase_factors(alpha):
    """Photon and spin diagonal unitaries relating the two conventions.

    ``faraday_unitary(alpha, SINGLE) == kron(P, S) @ faraday_unitary(alpha/2, TWO)``
    where ``(P, S)`` is the returned pair.
    """
    w = np.exp(0.25j * alpha)
    photon = np.diag([w, w.conjugate()])
    spin = np.diag([w, w.conjugate()])
    return photon, spin


def photon_singlet():
    """``(|R, L> - |L, R>)/sqrt(2)`` on photon_A (x) photon_B."""
    return (np.kron(R, L) - np.kron(L, R)) / np.sqrt(2)


def initial_state():
    """Photon singlet times both spins in ``(|up> + |down>)/sqrt(2)`` (16 amplitudes)."""
    plus = (UP + DOWN) / np.sqrt(2)
    return qstate.tensor(photon_singlet(), plus, plus)


def _global_unitary(params):
    """Apply U(alpha_A) to (photon_A, spin_A) and U(alpha_B) to (photon_B, spin_B)."""
    ua = np.diag(faraday_unitary(params.alpha_a, params.convention)).reshape(2, 2)
    ub = np.diag(faraday_unitary(params.alpha_b, params.convention)).reshape(2, 2)
    # axes: photon_A, photon_B, spin_A, spin_B
    return ua[:, None, :, None] * ub[None, :, None, :]


def evolve(params):
    """Photon-spin state after both interactions, reshaped to 16 amplitudes."""
    psi = initial_state().reshape(2, 2, 2, 2)
    return (psi * _global_unitary(params)).reshape(16)


def analyser_state(alpha, convention, analyser="compensated"):
    """Polarisation that a party's "H" detector projects onto.

    With ``analyser="fixed"`` this is always ``|H>``. With the default
    ``"compensated"``, single-transition parties rotate their analyser by the
    photon-local phase of :func:`local_phase_factors`, which makes the
    heralded state identical to the two-transition state at halved angles up
    to local spin phases.
    """
    convention = Convention.parse(convention)
    if analyser == "fixed" or convention is Convention.TWO_TRANSITION:
        return H
    if analyser != "compensated":
        raise ValueError(f"unknown analyser {analyser!r}")
    photon, _ = local_phase_factors(alpha)
    return photon @ H


def _fix_global_phase(s):
    """Make the |psi-> coefficient real and non-negative (first non-zero amplitude as fallback)."""
    c = np.vdot(PSI_MINUS, s)
    if abs(c) < 1e-14:
        c = s[np.flatnonzero(np.abs(s) > 1e-14)[0]]
    return s * (abs(c) / c)


def evolve_and_herald(params, pattern=("H", "H"), analyser="compensated"):
    """Run the interaction and condition on both photons being detected in H.

    Returns
    -------
    HeraldResult
        Normalized spin-pair state and the probability of the herald.

    Raises
    ------
    HeraldingError
        If the herald has zero probability (e.g. no interaction at all).
    """
    if tuple(pattern) != ("H", "H"):
        if tuple(pattern) in HERALD_PATTERNS:
            raise NotImplementedError(f"herald pattern {pattern} is not analysed")
        raise ValueError(f"unknown herald pattern {pattern!r}")
    psi = evolve(params).reshape(2, 2, 4)
    ha = analyser_state(params.alpha_a, params.convention, analyser)
    hb = analyser_state(params.alpha_b, params.convention, analyser)
    spins = np.einsum("a,b,abs->s", ha.conj(), hb.conj(), psi)
    prob = float(np.vdot(spins, spins).real)
    if prob < 1e-24:
        raise HeraldingError("no heralding possible: (H, H) has zero probability")
    return HeraldResult(_fix_global_phase(spins / math.sqrt(prob)), prob)


def heralded_state_closed_form(mean_alpha, delta_alpha):
    """``(sin(delta) |phi-> + sin(mean) |psi->)/sqrt(N)`` with the |psi-> coefficient >= 0."""
    n = normalization(mean_alpha, delta_alpha)
    if n < 1e-24:
        raise HeraldingError("no heralding possible: N = 0")
    s = (math.sin(delta_alpha) * qstate.PHI_MINUS + math.sin(mean_alpha) * PSI_MINUS) / math.sqrt(n)
    return _fix_global_phase(s)


def visibility(t, tau):
    if tau <= 0:
        raise ValueError("coherence time tau must be positive")
    if t < 0:
        raise ValueError("delay t must be non-negative")
    return math.exp(-t / tau)


def decohere(state, t, tau):
    """Mix the spin state with white noise: ``v |s><s| + (1 - v) I/4``, ``v = exp(-t/tau)``."""
    v = visibility(t, tau)
    return v * qstate.density_from_pure(state) + (1 - v) * qstate.MAXIMALLY_MIXED
