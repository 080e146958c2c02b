"""Reflection from a single-sided cavity holding one two-level emitter.

All rates are angular frequencies in rad/s. Table values quoted as
``rate/(2 pi)`` in MHz go through :meth:`CavityParams.from_mhz`.
"""

import enum
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

TWO_PI_MHZ = 2 * math.pi * 1e6
SWEEP_COLUMNS = ("ratio", "omega_at_max_rad_s", "sin_rotation_max", "r_hot_abs", "r_cold_abs")


class Regime(str, enum.Enum):
    STRONG = "strong"
    WEAK = "weak"


@dataclass(frozen=True)
class CavityParams:
    g: float
    kappa: float
    kappa_s: float
    gamma: float
    omega_c: float
    omega_d: float

    def __post_init__(self):
        for name in ("g", "kappa", "kappa_s", "gamma", "omega_c", "omega_d"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be a finite non-negative rate, got {value}")
        if self.kappa + self.kappa_s <= 0:
            raise ValueError("total cavity decay kappa + kappa_s must be positive")

    @classmethod
    def from_mhz(cls, g, kappa, kappa_s, gamma, omega_c, omega_d=None):
        """Build from ``rate/(2 pi)`` values in MHz; ``omega_c``/``omega_d`` stay in rad/s."""
        return cls(g * TWO_PI_MHZ, kappa * TWO_PI_MHZ, kappa_s * TWO_PI_MHZ,
                   gamma * TWO_PI_MHZ, omega_c, omega_c if omega_d is None else omega_d)

    @property
    def kappa_total(self):
        return self.kappa + self.kappa_s

    @property
    def q_factor(self):
        return self.omega_c / self.kappa_total

    @property
    def tau_c(self):
        """Cavity lifetime ``Q/omega_c``."""
        return 1 / self.kappa_total

    @property
    def cooperativity(self):
        if self.gamma == 0:
            return math.inf
        return 2 * self.g**2 / (self.kappa_total * self.gamma)

    @property
    def strongly_coupled(self):
        # g must beat the mean of the cavity and emitter half-widths
        return self.g > (self.kappa_total + self.gamma) / 4

    @property
    def hot_linewidth(self):
        """Half-width of the emitter-induced feature, Purcell broadened."""
        return self.gamma / 2 + 2 * self.g**2 / self.kappa_total


@dataclass(frozen=True)
class ReflectionPoint:
    omega: float
    r_hot: complex
    r_cold: complex
    rotation: float

    @property
    def sin_rotation(self):
        return math.sin(self.rotation)


def reflection(p, omega, coupled=True):
    """Complex reflection coefficient at angular frequency ``omega`` (scalar or array).

    ``coupled=False`` gives the empty ("cold") cavity, i.e. ``g = 0``.
    """
    omega = np.asarray(omega, dtype=float)
    g2 = p.g**2 if coupled else 0.0
    emitter = 1j * (p.omega_d - omega) + p.gamma / 2
    cav = 1j * (p.omega_c - omega) + p.kappa_total / 2
    den = emitter * cav + g2
    scale = max(p.kappa_total, p.gamma, p.g) ** 2
    if np.any(np.abs(den) <= 1e-300 + 1e-15 * scale):
        raise ZeroDivisionError("reflection denominator vanishes (lossless degenerate point)")
    r = 1 - p.kappa * emitter / den
    return complex(r) if np.ndim(r) == 0 else r


def _wrap(phase):
    """Wrap into ``(-pi, pi]``."""
    w = np.angle(np.exp(1j * np.asarray(phase)))
    return np.where(w <= -math.pi, w + 2 * math.pi, w)


def rotation_spectrum(p, omegas):
    """Arrays ``(r_hot, r_cold, rotation)`` over a frequency grid."""
    r_hot = reflection(p, omegas, True)
    r_cold = reflection(p, omegas, False)
    return r_hot, r_cold, _wrap(np.angle(r_hot) - np.angle(r_cold))


def faraday_rotation(p, omega):
    """Phase difference between the coupled and empty cavity at one frequency."""
    r_hot = reflection(p, omega, True)
    r_cold = reflection(p, omega, False)
    rot = float(_wrap(np.angle(r_hot) - np.angle(r_cold)))
    return ReflectionPoint(float(omega), complex(r_hot), complex(r_cold), rot)


def default_omega_grid(p, n=10_000):
    """Coarse grid over ``omega_c +- 5 kappa_T`` joined with a fine grid on the emitter feature.

    The emitter feature can be orders of magnitude narrower than ``kappa_T``
    in the weak-coupling regime, so the coarse grid alone would step over it.
    """
    coarse = p.omega_c + np.linspace(-5, 5, n) * p.kappa_total
    width = 20 * max(p.hot_linewidth, 1e-9 * p.kappa_total)
    fine = p.omega_d + np.linspace(-1, 1, n) * width
    return np.unique(np.concatenate([coarse, fine]))


def max_rotation(p, omega_grid=None):
    """Frequency maximising ``|sin(rotation)|``, refined between neighbouring grid points."""
    grid = default_omega_grid(p) if omega_grid is None else np.sort(np.asarray(omega_grid, float))
    if grid.size == 0:
        raise ValueError("empty frequency grid")
    _, _, rot = rotation_spectrum(p, grid)
    score = np.abs(np.sin(rot))
    i = int(np.argmax(score))
    best = grid[i]
    if grid.size >= 3:
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
        # work in a shifted coordinate so the optimiser sees O(1) numbers
        span = hi - lo

        def objective(x):
            return -abs(faraday_rotation(p, lo + x * span).sin_rotation)

        res = minimize_scalar(objective, bounds=(0.0, 1.0), method="bounded",
                              options={"xatol": 1e-12})
        if -res.fun > score[i]:
            best = lo + res.x * span
    return faraday_rotation(p, best)


def with_kappa_ratio(base, ratio):
    """Split ``kappa_T`` of ``base`` as ``kappa : kappa_s = ratio : 1`` (``inf`` means lossless)."""
    kt = base.kappa_total
    if ratio == math.inf:
        return replace(base, kappa=kt, kappa_s=0.0)
    if ratio <= 0:
        raise ValueError("kappa/kappa_s ratio must be positive")
    kappa = kt * ratio / (1 + ratio)
    return replace(base, kappa=kappa, kappa_s=kt - kappa)


def kappa_ratio_sweep(base, ratios, omega_grid=None):
    """Rows ``(ratio, omega_at_max, max |sin rotation|, |r_hot|, |r_cold|)`` at fixed ``kappa_T``."""
    ratios = list(ratios)
    if not ratios:
        raise ValueError("empty ratio list")
    if omega_grid is not None and len(omega_grid) == 0:
        raise ValueError("empty frequency grid")
    rows = []
    for ratio in ratios:
        pt = max_rotation(with_kappa_ratio(base, ratio), omega_grid)
        rows.append((float(ratio), pt.omega, abs(pt.sin_rotation), abs(pt.r_hot), abs(pt.r_cold)))
    return rows


@dataclass(frozen=True)
class ReadoutModel:
    """Spin readout by Faraday rotation of a weak probe.

    ``reflectivity`` is the intensity reflectivity ``|r|^2`` and only enters
    the weak-coupling bound.
    """

    n_tot: float
    alpha_bar: float
    tau_c: float
    tau_s: float | None = None
    regime: Regime = Regime.STRONG
    reflectivity: float | None = None

    def __post_init__(self):
        if self.n_tot < 1:
            raise ValueError("n_tot must be at least 1")
        if self.tau_c <= 0:
            raise ValueError("tau_c must be positive")
        object.__setattr__(self, "regime", Regime(self.regime))


def readout_time_min(m):
    """Lower bound on the spin readout time, ``10 tau / sin^2(alpha_bar)``.

    ``tau`` is the cavity lifetime under strong coupling and the emitter
    lifetime under weak coupling, where the bound is further divided by the
    reflectivity when one is given.
    """
    s2 = math.sin(m.alpha_bar) ** 2
    if s2 < 1e-30:
        raise ValueError("alpha_bar = 0 gives no readout signal")
    if m.regime is Regime.STRONG:
        return 10 * m.tau_c / s2
    if m.tau_s is None or m.tau_s <= 0:
        raise ValueError("weak-coupling readout needs a positive emitter lifetime tau_s")
    t = 10 * m.tau_s / s2
    if m.reflectivity is not None:
        if not 0 < m.reflectivity <= 1:
            raise ValueError("reflectivity must lie in (0, 1]")
        t /= m.reflectivity
    return t


def readout_counts_expectation(m, spin_up):
    """Mean H and V counts; their difference is ``+- n_tot sin(alpha_bar/2)``."""
    diff = m.n_tot * math.sin(m.alpha_bar / 2) * (1 if spin_up else -1)
    return (m.n_tot + diff) / 2, (m.n_tot - diff) / 2


def readout_snr(m):
    """Discrimination signal-to-noise ``sqrt(n_tot) sin(alpha_bar)``; readout is reliable when >> 1."""
    return math.sqrt(m.n_tot) * math.sin(m.alpha_bar)
