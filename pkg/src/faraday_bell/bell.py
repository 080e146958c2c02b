"""CHSH values, the Horodecki maximum and the CHSH = 2 decoherence boundary."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import protocol, qstate

TSIRELSON = 2 * math.sqrt(2)
SINGLET_THRESHOLD = math.log(math.sqrt(2))

DEFAULT_DELTA_ALPHAS = (0.0, math.pi / 50, math.pi / 20, math.pi / 10)
FIG2_COLUMNS = ("delta_alpha_rad", "mean_alpha_rad", "critical_t_over_tau")


@dataclass(frozen=True)
class MeasurementSettings:
    """Bloch axes of Alice's (a0, a1) and Bob's (b0, b1) two measurements."""

    a0: np.ndarray
    a1: np.ndarray
    b0: np.ndarray
    b1: np.ndarray

    def __post_init__(self):
        for name in ("a0", "a1", "b0", "b1"):
            object.__setattr__(self, name, _unit(getattr(self, name), name))

    def as_dict(self):
        return {k: getattr(self, k).tolist() for k in ("a0", "a1", "b0", "b1")}


@dataclass(frozen=True)
class ChshReport:
    value: float
    max_value: float
    violating: bool


def _unit(v, name="axis"):
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or abs(np.linalg.norm(v) - 1) > 1e-9:
        raise ValueError(f"{name} must be a unit 3-vector, got {v}")
    return v


def correlator(rho, a, b):
    """Correlation ``E = Tr[rho (a.sigma) (x) (b.sigma)] = a^T T b``."""
    a, b = _unit(a, "a"), _unit(b, "b")
    return float(a @ qstate.correlation_matrix(rho) @ b)


def chsh_value(rho, settings):
    """``E00 + E01 + E10 - E11`` for explicit settings."""
    T = qstate.correlation_matrix(rho)
    s = settings
    return float(s.a0 @ T @ (s.b0 + s.b1) + s.a1 @ T @ (s.b0 - s.b1))


def singlet_optimal_settings():
    x, z = np.eye(3)[0], np.eye(3)[2]
    return MeasurementSettings(z, x, -(z + x) / math.sqrt(2), (x - z) / math.sqrt(2))


def horodecki_max(rho, return_settings=False):
    """Maximal CHSH value ``2 sqrt(s1^2 + s2^2)`` over projective qubit measurements.

    ``s1 >= s2`` are the two largest singular values of the correlation
    matrix. With ``return_settings`` the optimal settings are built from the
    matching singular vectors: Alice measures along the two left singular
    vectors and Bob along ``(s1 v1 +- s2 v2)/norm``.
    """
    T = qstate.correlation_matrix(rho)
    u, s, vt = np.linalg.svd(T)
    s1, s2 = s[0], s[1]
    value = 2 * math.hypot(s1, s2)
    if not return_settings:
        return value
    a0, a1 = u[:, 0], u[:, 1]
    v1, v2 = vt[0], vt[1]
    norm = math.hypot(s1, s2)
    if norm < 1e-15:
        b0, b1 = v1, v2
    else:
        b0 = (s1 * v1 + s2 * v2) / norm
        b1 = (s1 * v1 - s2 * v2) / norm
    return value, MeasurementSettings(a0, a1, b0, b1)


def chsh_report(rho, settings=None):
    max_value, best = horodecki_max(rho, return_settings=True)
    value = chsh_value(rho, settings if settings is not None else best)
    return ChshReport(value, max_value, max_value > 2)


def entanglement_contrast(mean_alpha, delta_alpha):
    """``C = |sin^2(mean) - sin^2(delta)| / N``, the concurrence of the heralded state."""
    n = protocol.normalization(mean_alpha, delta_alpha)
    if n < 1e-24:
        raise protocol.HeraldingError("no heralding possible: N = 0")
    return abs(math.sin(mean_alpha) ** 2 - math.sin(delta_alpha) ** 2) / n


def heralded_chsh_max(mean_alpha, delta_alpha, t_over_tau=0.0):
    """Closed-form Horodecki maximum of the decohered heralded state."""
    c = entanglement_contrast(mean_alpha, delta_alpha)
    return 2 * math.sqrt(1 + c * c) * math.exp(-t_over_tau)


def violation_boundary(mean_alpha, delta_alpha):
    """Critical ``t/tau`` below which the heralded state violates CHSH: ``ln(1 + C^2)/2``.

    Angles are two-transition (effective) angles.
    """
    c = entanglement_contrast(mean_alpha, delta_alpha)
    return 0.5 * math.log1p(c * c)


def violation_boundary_numeric(state, xtol=1e-14):
    """Root of ``horodecki_max(decohere(state, t/tau)) = 2`` by bracketing.

    Works for any pure two-qubit state; returns 0 when the pure state does
    not violate.
    """
    def excess(x):
        return horodecki_max(protocol.decohere(state, x, 1.0)) - 2

    if excess(0.0) <= 0:
        return 0.0
    hi = 1.0
    while excess(hi) > 0:
        hi *= 2
    return brentq(excess, 0.0, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)


def default_mean_alpha_grid(n=200):
    """``n`` points on ``(0, pi/2]``; the origin is skipped because N = 0 there when delta = 0."""
    return np.linspace(0, math.pi / 2, n + 1)[1:]


def figure2_curves(delta_alphas=DEFAULT_DELTA_ALPHAS, mean_alpha_grid=None):
    """Rows ``(delta_alpha, mean_alpha, critical t/tau)`` of the CHSH = 2 contours.

    Points where no heralding is possible (N = 0) are dropped.
    """
    delta_alphas = list(delta_alphas)
    grid = default_mean_alpha_grid() if mean_alpha_grid is None else list(mean_alpha_grid)
    if not delta_alphas or len(grid) == 0:
        raise ValueError("figure2_curves needs non-empty grids")
    rows = []
    for d in delta_alphas:
        for m in grid:
            if protocol.normalization(m, d) < 1e-24:
                continue
            rows.append((float(d), float(m), violation_boundary(m, d)))
    return rows
