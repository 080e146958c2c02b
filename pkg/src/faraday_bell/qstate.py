"""Two-qubit states, density matrices and correlation matrices.

States are plain complex numpy arrays. Composite systems are ordered
lexicographically over their factors, first factor most significant, so a
two-spin state is stored as ``[up-up, up-down, down-up, down-down]`` and the
16-dimensional photon-spin state of the heralding protocol is stored as
``photon_A (x) photon_B (x) spin_A (x) spin_B`` with photon order ``[L, R]``.
Every module in the package imports the basis vectors defined here.
"""

import numpy as np

ATOL = 1e-12

UP = np.array([1, 0], dtype=complex)
DOWN = np.array([0, 1], dtype=complex)
# photon polarisation basis: index 0 = left circular, 1 = right circular
L = np.array([1, 0], dtype=complex)
R = np.array([0, 1], dtype=complex)
H = (L + R) / np.sqrt(2)

SQRT_HALF = 1 / np.sqrt(2)
PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) * SQRT_HALF
PHI_MINUS = np.array([1, 0, 0, -1], dtype=complex) * SQRT_HALF
PSI_PLUS = np.array([0, 1, 1, 0], dtype=complex) * SQRT_HALF
PSI_MINUS = np.array([0, 1, -1, 0], dtype=complex) * SQRT_HALF
BELL_BASIS = {
    "phi_plus": PHI_PLUS,
    "phi_minus": PHI_MINUS,
    "psi_plus": PSI_PLUS,
    "psi_minus": PSI_MINUS,
}

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

MAXIMALLY_MIXED = np.eye(4, dtype=complex) / 4

_ALLOWED_DIMS = (2, 4, 8, 16)


def as_state(amps, dims=(4, 16)):
    """Return ``amps`` as a finite 1-d complex array of an allowed dimension."""
    s = np.asarray(amps, dtype=complex)
    if s.ndim != 1 or s.shape[0] not in dims:
        raise ValueError(f"state must be a vector of dimension {dims}, got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise ValueError("state has non-finite amplitudes")
    return s


def normalize(s):
    s = np.asarray(s, dtype=complex)
    n = np.linalg.norm(s)
    if n == 0:
        raise ValueError("cannot normalize the zero vector")
    return s / n


def tensor(*factors):
    """Kronecker product of state vectors in lexicographic order.

    The result must have dimension 4 or 16; intermediate factors may be
    single qubits or photon pairs.

    >>> tensor(UP, UP).real.tolist()
    [1.0, 0.0, 0.0, 0.0]
    """
    if not factors:
        raise ValueError("tensor needs at least one factor")
    out = np.ones(1, dtype=complex)
    for f in factors:
        f = np.asarray(f, dtype=complex)
        if f.ndim != 1 or f.shape[0] not in _ALLOWED_DIMS:
            raise ValueError(f"factor of dimension {f.shape} is not a qubit register")
        out = np.kron(out, f)
    if out.shape[0] not in (4, 16):
        raise ValueError(f"tensor product has dimension {out.shape[0]}, expected 4 or 16")
    return out


def density_from_pure(s):
    s = as_state(s, dims=(4,))
    if abs(np.vdot(s, s).real - 1) > 1e-9:
        raise ValueError("state is not normalized")
    return np.outer(s, s.conj())


def check_density(rho, atol=ATOL):
    """Validate Hermiticity, unit trace and positivity; return ``rho``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"density matrix must be 4x4, got {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError("density matrix has non-finite entries")
    if not np.allclose(rho, rho.conj().T, atol=atol, rtol=0):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > atol:
        raise ValueError("density matrix trace differs from 1")
    if np.linalg.eigvalsh(rho).min() < -1e-10:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def purity(rho):
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.trace(rho @ rho)))


def correlation_matrix(rho):
    """Pauli correlation matrix ``T[i, j] = Tr[rho sigma_i (x) sigma_j]``, order (x, y, z)."""
    rho = check_density(rho, atol=1e-9)
    T = np.empty((3, 3))
    for i, si in enumerate(PAULIS):
        for j, sj in enumerate(PAULIS):
            T[i, j] = np.real(np.trace(rho @ np.kron(si, sj)))
    return T


def bell_coefficients(s):
    """Overlaps ``<B|s>`` with the four Bell states, keyed by name."""
    s = as_state(s, dims=(4,))
    return {name: complex(np.vdot(b, s)) for name, b in BELL_BASIS.items()}


def concurrence(state_or_rho):
    """Wootters concurrence of a two-qubit pure state or density matrix."""
    x = np.asarray(state_or_rho, dtype=complex)
    if x.ndim == 1:
        s = as_state(x, dims=(4,))
        yy = np.kron(SIGMA_Y, SIGMA_Y)
        return float(abs(s @ yy @ s))
    rho = check_density(x, atol=1e-9)
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    rho_tilde = yy @ rho.conj() @ yy
    ev = np.linalg.eigvals(rho @ rho_tilde)
    lam = np.sort(np.sqrt(np.abs(ev.real)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_bell_superposition(c_phi, c_psi):
    """Concurrence of ``c_phi |phi-> + c_psi |psi->`` for real coefficients.

    Parameters
    ----------
    c_phi, c_psi : float
        Real amplitudes on the two Bell states; must satisfy
        ``c_phi**2 + c_psi**2 == 1`` within 1e-9.
    """
    if abs(c_phi**2 + c_psi**2 - 1) > 1e-9:
        raise ValueError("coefficients are not normalized")
    return abs(c_psi**2 - c_phi**2)
