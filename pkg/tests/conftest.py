"""Shared fixtures and independent oracles for the test suite.

The oracles deliberately avoid the code paths they check: CHSH values are
computed from explicit operator traces instead of the correlation matrix,
and the heralding step uses a full 16x16 unitary built with Kronecker
products and a basis permutation.
"""

import math

import numpy as np
import pytest
from scipy.optimize import minimize

PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_density(rng, rank=None):
    """Random 4x4 density matrix of the given rank (full rank by default)."""
    k = rank or 4
    g = rng.normal(size=(4, k)) + 1j * rng.normal(size=(4, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_pure(rng, dim=4):
    s = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return s / np.linalg.norm(s)


def _axes(angles):
    theta, phi = angles[..., 0], angles[..., 1]
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], -1)


def _observable(n):
    return np.einsum("...i,ijk->...jk", n, PAULI)


def chsh_by_traces(rho, angles):
    """CHSH from explicit ``Tr[rho A (x) B]``; ``angles`` has shape (..., 4, 2)."""
    a0, a1, b0, b1 = (_observable(_axes(angles[..., i, :])) for i in range(4))

    def corr(a, b):
        op = np.einsum("...ab,...cd->...acbd", a, b).reshape(a.shape[:-2] + (4, 4))
        return np.real(np.einsum("ij,...ji->...", rho, op))

    return corr(a0, b0) + corr(a0, b1) + corr(a1, b0) - corr(a1, b1)


def brute_force_chsh_max(rho, rng, n_samples=4000, n_refine=6):
    """Dense random sampling of all four Bloch axes followed by BFGS refinement."""
    samples = np.stack([
        np.arccos(rng.uniform(-1, 1, size=(n_samples, 4))),
        rng.uniform(0, 2 * math.pi, size=(n_samples, 4)),
    ], axis=-1)
    values = chsh_by_traces(rho, samples)
    best = -np.inf
    for idx in np.argsort(values)[-n_refine:]:
        res = minimize(lambda x: -chsh_by_traces(rho, x.reshape(4, 2)), samples[idx].ravel(),
                       method="BFGS", options={"gtol": 1e-10})
        best = max(best, -res.fun, values[idx])
    return best


def herald_by_full_unitary(alpha_a, alpha_b, single=False, analyser_a=None, analyser_b=None):
    """Spin state and (H, H) probability from a full 16x16 unitary.

    Ordering of the returned state is spin_A (x) spin_B; photon basis [L, R].
    """
    Lk, Rk = np.array([1, 0], complex), np.array([0, 1], complex)
    up, down = np.array([1, 0], complex), np.array([0, 1], complex)
    H = (Lk + Rk) / math.sqrt(2)
    photons = (np.kron(Rk, Lk) - np.kron(Lk, Rk)) / math.sqrt(2)
    plus = (up + down) / math.sqrt(2)
    psi = np.kron(np.kron(photons, plus), plus)  # pA pB sA sB

    def local(alpha):
        proj_lu = np.kron(np.outer(Lk, Lk), np.outer(up, up))
        proj_rd = np.kron(np.outer(Rk, Rk), np.outer(down, down))
        gen = proj_lu if single else proj_lu + proj_rd
        return np.eye(4) + (np.exp(1j * alpha) - 1) * gen  # (photon, spin) of one party

    # U_A (x) U_B acts on pA sA pB sB; permute into pA pB sA sB
    big = np.kron(local(alpha_a), local(alpha_b))
    perm = np.zeros((16, 16))
    for pa in range(2):
        for sa in range(2):
            for pb in range(2):
                for sb in range(2):
                    src = ((pa * 2 + sa) * 2 + pb) * 2 + sb
                    dst = ((pa * 2 + pb) * 2 + sa) * 2 + sb
                    perm[dst, src] = 1
    U = perm @ big @ perm.T
    out = U @ psi
    ha = H if analyser_a is None else analyser_a
    hb = H if analyser_b is None else analyser_b
    proj = np.kron(np.kron(ha.conj(), hb.conj()), np.eye(4))
    spins = proj @ out
    p = float(np.vdot(spins, spins).real)
    return spins / math.sqrt(p) if p > 0 else spins, p


def fidelity(a, b):
    return abs(np.vdot(a, b)) ** 2


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
