"""Platform profiles and the loophole-free timing and heralding budget.

A profile bundles one platform's cavity rates, interaction strength, spin
coherence time, readout time and the optical link. Profiles are read from
YAML files with a fixed set of keys; four are bundled (``atoms``, ``nv``,
``dots``, ``low-q``).
"""

import math
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from pathlib import Path

import yaml
from scipy.constants import c as SPEED_OF_LIGHT

from . import bell, cavity, protocol
from .protocol import Convention, InteractionParams

DEFAULT_LOGIC_DELAY = 100e-9
BUNDLED_PROFILES = ("atoms", "nv", "dots", "low-q")

PROFILE_KEYS = (
    "name", "g_mhz_over_2pi", "kappa_mhz_over_2pi", "kappa_s_mhz_over_2pi",
    "gamma_mhz_over_2pi", "alpha_bar_rad", "tau_us", "delta_t_ns", "convention",
    "lambda_nm", "loss_db_per_km", "eta_c", "eta_d", "source_rate_hz", "pair_probability",
)


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class PlatformProfile:
    """One platform, in SI units (seconds, metres, rad/s)."""

    name: str
    cavity: cavity.CavityParams
    alpha_bar: float
    tau: float
    delta_t: float
    convention: Convention
    wavelength: float
    loss_db_per_km: float
    eta_c: float
    eta_d: float
    source_rate: float
    pair_probability: float

    def __post_init__(self):
        object.__setattr__(self, "convention", Convention.parse(self.convention))
        for name in ("eta_c", "eta_d", "pair_probability"):
            if not 0 <= getattr(self, name) <= 1:
                raise ProfileError(f"{name} must lie in [0, 1]")
        for name in ("tau", "delta_t", "wavelength", "source_rate"):
            if not getattr(self, name) > 0:
                raise ProfileError(f"{name} must be positive")
        if self.loss_db_per_km < 0:
            raise ProfileError("loss_db_per_km must be non-negative")

    @classmethod
    def from_dict(cls, data):
        unknown = [k for k in data if k not in PROFILE_KEYS]
        if unknown:
            raise ProfileError(f"unknown profile key: {unknown[0]}")
        missing = [k for k in PROFILE_KEYS if k not in data]
        if missing:
            raise ProfileError(f"missing profile key: {missing[0]}")
        wavelength = float(data["lambda_nm"]) * 1e-9
        if wavelength <= 0:
            raise ProfileError("lambda_nm must be positive")
        omega_c = 2 * math.pi * SPEED_OF_LIGHT / wavelength
        cav = cavity.CavityParams.from_mhz(
            float(data["g_mhz_over_2pi"]), float(data["kappa_mhz_over_2pi"]),
            float(data["kappa_s_mhz_over_2pi"]), float(data["gamma_mhz_over_2pi"]), omega_c)
        return cls(
            name=str(data["name"]),
            cavity=cav,
            alpha_bar=float(data["alpha_bar_rad"]),
            tau=float(data["tau_us"]) * 1e-6,
            delta_t=float(data["delta_t_ns"]) * 1e-9,
            convention=data["convention"],
            wavelength=wavelength,
            loss_db_per_km=float(data["loss_db_per_km"]),
            eta_c=float(data["eta_c"]),
            eta_d=float(data["eta_d"]),
            source_rate=float(data["source_rate_hz"]),
            pair_probability=float(data["pair_probability"]),
        )

    def to_dict(self):
        """Inverse of :meth:`from_dict`, in the file units."""
        mhz = cavity.TWO_PI_MHZ
        data = {
            "name": self.name,
            "g_mhz_over_2pi": self.cavity.g / mhz,
            "kappa_mhz_over_2pi": self.cavity.kappa / mhz,
            "kappa_s_mhz_over_2pi": self.cavity.kappa_s / mhz,
            "gamma_mhz_over_2pi": self.cavity.gamma / mhz,
            "alpha_bar_rad": self.alpha_bar,
            "tau_us": self.tau * 1e6,
            "delta_t_ns": self.delta_t * 1e9,
            "convention": self.convention.value,
            "lambda_nm": self.wavelength * 1e9,
            "loss_db_per_km": self.loss_db_per_km,
            "eta_c": self.eta_c,
            "eta_d": self.eta_d,
            "source_rate_hz": self.source_rate,
            "pair_probability": self.pair_probability,
        }
        # undo unit-conversion round-off so files round-trip exactly
        converted = ("g_mhz_over_2pi", "kappa_mhz_over_2pi", "kappa_s_mhz_over_2pi",
                     "gamma_mhz_over_2pi", "tau_us", "delta_t_ns", "lambda_nm")
        for k in converted:
            data[k] = float(f"{data[k]:.12g}")
        return data

    def with_overrides(self, **overrides):
        """Copy with file-unit keys replaced, e.g. ``with_overrides(eta_d=0.5)``."""
        data = self.to_dict()
        data.update(overrides)
        return PlatformProfile.from_dict(data)

    def readout_model(self, n_tot=1):
        cav = self.cavity
        regime = cavity.Regime.STRONG if cav.strongly_coupled else cavity.Regime.WEAK
        tau_s = 1 / cav.gamma if cav.gamma > 0 else None
        return cavity.ReadoutModel(
            n_tot=n_tot, alpha_bar=self.alpha_bar, tau_c=cav.tau_c, tau_s=tau_s,
            regime=regime, reflectivity=self.eta_c if regime is cavity.Regime.WEAK else None)

    def interaction(self, delta_alpha=0.0):
        """Nominal interaction: the profile's mean angle split by ``+- delta_alpha``."""
        return InteractionParams.from_mean_delta(self.alpha_bar, delta_alpha, self.convention)


def load_profile(source):
    """Load a profile from a YAML path or a bundled profile name."""
    path = Path(str(source))
    if str(source) in BUNDLED_PROFILES and not path.exists():
        text = resources.files(__package__).joinpath("profiles", f"{source}.yaml").read_text()
    else:
        try:
            text = path.read_text()
        except OSError as exc:
            raise ProfileError(f"cannot read profile {source!r}: {exc}") from exc
    data = yaml.safe_load(text)
    if not isinstance(data, dict):
        raise ProfileError(f"profile {source!r} is not a mapping")
    return PlatformProfile.from_dict(data)


def bundled_profiles():
    return {name: load_profile(name) for name in BUNDLED_PROFILES}


def min_separation(delta_t):
    """Smallest station separation with the readout inside the light cone, ``c * delta_t``."""
    if delta_t < 0:
        raise ValueError("delta_t must be non-negative")
    return SPEED_OF_LIGHT * delta_t


def measurement_delay(d, t_logic=DEFAULT_LOGIC_DELAY):
    """Herald-to-measurement delay ``D/c + T_l``."""
    if d < 0:
        raise ValueError("separation must be non-negative")
    return d / SPEED_OF_LIGHT + t_logic


def channel_transmission(d, loss_db_per_km):
    """Transmission over the full separation ``d`` (metres) of both photon arms."""
    if loss_db_per_km < 0:
        raise ValueError("loss must be non-negative")
    if d < 0:
        raise ValueError("separation must be non-negative")
    return 10 ** (-loss_db_per_km * (d / 1000) / 10)


def herald_probability(profile, interaction, d):
    """``eta_t eta_c^2 eta_d^2 N_eff / 4`` per emitted pair.

    ``N_eff`` uses the effective angles of the profile's transition
    convention; the convention stored on ``interaction`` is overridden.
    """
    params = replace(interaction, convention=profile.convention)
    n_eff = protocol.normalization(*protocol.effective_angles(params))
    if n_eff < 1e-24:
        raise protocol.HeraldingError("no heralding possible: N = 0")
    eta_t = channel_transmission(d, profile.loss_db_per_km)
    return eta_t * profile.eta_c**2 * profile.eta_d**2 * n_eff / 4


def herald_rate(profile, interaction, d):
    return profile.source_rate * profile.pair_probability * herald_probability(profile, interaction, d)


@dataclass
class FeasibilityReport:
    profile: str
    distance: float
    min_d: float
    delta_t: float
    d_over_c: float
    readout_time_min: float | None
    t_delay: float
    t_readout: float | None
    t_twice_delta_t: float
    min_t: float
    t_over_tau: float
    chsh_expected: float | None
    eta_t: float
    herald_prob: float | None
    herald_rate: float | None
    n_runs: float
    acquisition_time: float | None
    constraints_ok: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def acquisition_time_for(self, n_runs):
        if not self.herald_rate:
            return math.inf
        return n_runs / self.herald_rate

    def as_dict(self):
        return asdict(self)


def plan(profile, interaction, d=None, n_runs=1e5, t_logic=DEFAULT_LOGIC_DELAY,
         dark_count_rate=None, readout_rtol=0.15, tau_margin=10.0):
    """Check the loophole-free constraints for one platform and budget the run.

    Parameters
    ----------
    profile : PlatformProfile
    interaction : InteractionParams
        Nominal angles; the profile's convention decides the effective angles.
    d : float, optional
        Station separation in metres, default ``min_separation(profile.delta_t)``.
    n_runs : float
        Number of heralded Bell runs to collect.
    dark_count_rate : float, optional
        Detector dark counts per second; adds a warning when the herald rate
        is not at least 1e4 times larger.
    readout_rtol : float
        Relative slack when comparing the profile readout time with the
        computed readout bound (profile times are rounded estimates).
    tau_margin : float
        ``D/c << tau`` is taken to mean ``D/c * tau_margin <= tau``.

    The delay used for the CHSH prediction is the larger of ``D/c + T_l`` and
    twice the minimum readout time. A failing sub-computation is recorded in
    ``errors`` and does not abort the report.
    """
    errors = {}
    min_d = min_separation(profile.delta_t)
    d = min_d if d is None else float(d)
    d_over_c = d / SPEED_OF_LIGHT
    t_delay = measurement_delay(d, t_logic)

    readout = None
    try:
        readout = cavity.readout_time_min(profile.readout_model())
    except (ValueError, ZeroDivisionError) as exc:
        errors["readout_time_min"] = str(exc)
    t_readout = None if readout is None else 2 * readout
    min_t = max(t_delay, t_readout or 0.0)
    t_over_tau = min_t / profile.tau

    params = replace(interaction, convention=profile.convention)
    chsh = None
    try:
        chsh = bell.heralded_chsh_max(*protocol.effective_angles(params), t_over_tau)
    except ValueError as exc:
        errors["chsh_expected"] = str(exc)

    eta_t = channel_transmission(d, profile.loss_db_per_km)
    p_herald = rate = acq = None
    try:
        p_herald = herald_probability(profile, interaction, d)
        rate = profile.source_rate * profile.pair_probability * p_herald
        acq = n_runs / rate if rate > 0 else math.inf
    except ValueError as exc:
        errors["herald_probability"] = str(exc)

    constraints = {
        "delta_t_le_d_over_c": profile.delta_t <= d_over_c * (1 + 1e-12),
        "d_over_c_ll_tau": d_over_c * tau_margin <= profile.tau,
        "readout_bound_met": None if readout is None else profile.delta_t >= (1 - readout_rtol) * readout,
        "chsh_violated": None if chsh is None else chsh > 2,
        "heralding_possible": None if rate is None else rate > 0,
    }
    warnings = []
    if dark_count_rate is not None and rate is not None and rate < 1e4 * dark_count_rate:
        warnings.append(
            f"herald rate {rate:.3g}/s is not large compared to {dark_count_rate:.3g}/s dark counts")

    return FeasibilityReport(
        profile=profile.name, distance=d, min_d=min_d, delta_t=profile.delta_t,
        d_over_c=d_over_c, readout_time_min=readout, t_delay=t_delay, t_readout=t_readout,
        t_twice_delta_t=2 * profile.delta_t, min_t=min_t, t_over_tau=t_over_tau,
        chsh_expected=chsh, eta_t=eta_t, herald_prob=p_herald, herald_rate=rate,
        n_runs=n_runs, acquisition_time=acq, constraints_ok=constraints,
        errors=errors, warnings=warnings)
