"""Spectral time evolution, oscillator partial trace and purity.

Sectors are at most eight-dimensional, so evolution goes through a full
eigendecomposition once and then costs one small matrix-vector product per
time point, staying unitary to machine precision.

Reduced three-qubit density matrices are 8x8 arrays over the canonical qubit
order ``model.QUBIT_STRINGS`` (000, 001, 010, 100, 110, 101, 011, 111).  For
any state confined to one excitation sector the partial trace over the
oscillator couples only qubit strings with equal excitation count, so all
entries outside the 1+3+3+1 diagonal blocks are exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StateError
from .model import QUBIT_EXCITATIONS, SectorVector, sector_dimension

#: [i, j] True when canonical strings i, j have the same excitation count
SAME_EXCITATION = np.equal.outer(np.array(QUBIT_EXCITATIONS),
                                 np.array(QUBIT_EXCITATIONS))

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class Propagator:
    """Eigendecomposition of a sector Hamiltonian: ascending real energies
    and the unitary matrix of eigenvectors (columns)."""

    energies: np.ndarray
    vectors: np.ndarray
    n: int | None = None

    @property
    def dim(self) -> int:
        return self.energies.shape[0]


def diagonalize(h: np.ndarray, n: int | None = None) -> Propagator:
    """Spectral data of a Hermitian sector matrix.

    ``n`` tags the propagator with its excitation sector so that ``evolve``
    can reject vectors from a different sector; when omitted it is inferred
    from the dimension where unambiguous (d < 8).
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise StateError(f"expected a square matrix, got shape {h.shape}")
    if np.abs(h - h.conj().T).max() > HERMITICITY_TOL:
        raise StateError("matrix is not Hermitian within tolerance")
    if n is None:
        n = {1: 0, 4: 1, 7: 2}.get(h.shape[0])
    elif h.shape[0] != sector_dimension(n):
        raise StateError(
            f"matrix dimension {h.shape[0]} does not match sector n={n}")
    energies, vectors = np.linalg.eigh(h)
    return Propagator(energies, vectors, n)


def evolve(p: Propagator, v0: SectorVector, t: float) -> SectorVector:
    """exp(-i H t) applied to ``v0`` through the spectral decomposition."""
    if v0.data.shape[0] != p.dim:
        raise StateError(
            f"vector dimension {v0.data.shape[0]} does not match propagator "
            f"dimension {p.dim}")
    if p.n is not None and v0.n != p.n:
        raise StateError(f"sector mismatch: propagator n={p.n}, vector n={v0.n}")
    v0.require_normalized()
    phases = np.exp(-1j * p.energies * t)
    out = p.vectors @ (phases * (p.vectors.conj().T @ v0.data))
    return SectorVector(out, v0.n)


def evolve_many(p: Propagator, v0: SectorVector, times: np.ndarray) -> np.ndarray:
    """Amplitudes for a whole time grid at once; row k is the state at
    ``times[k]``."""
    if v0.data.shape[0] != p.dim:
        raise StateError("vector dimension does not match propagator")
    if p.n is not None and v0.n != p.n:
        raise StateError(f"sector mismatch: propagator n={p.n}, vector n={v0.n}")
    v0.require_normalized()
    coeff = p.vectors.conj().T @ v0.data
    phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), p.energies))
    return (p.vectors @ (phases * coeff).T).T


def partial_trace_oscillator(state) -> np.ndarray:
    """Trace the oscillator out of a sector state, returning the 8x8 reduced
    qubit density matrix in the canonical qubit order.

    ``state`` may be a SectorVector, a bare sector amplitude vector, or a
    sector density matrix.  Sector basis entries share a photon number
    exactly when their qubit strings have the same excitation count, so
    rho_q[i, j] = rho_sector[i, j] on those index pairs and exactly zero
    elsewhere.
    """
    if isinstance(state, SectorVector):
        arr = state.data
    else:
        arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        d = arr.shape[0]
        block = np.where(SAME_EXCITATION[:d, :d], np.outer(arr, arr.conj()), 0.0)
    elif arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
        d = arr.shape[0]
        block = np.where(SAME_EXCITATION[:d, :d], arr, 0.0)
    else:
        raise StateError(f"expected a sector vector or square matrix, "
                         f"got shape {arr.shape}")
    if d > 8:
        raise StateError(f"sector dimension {d} exceeds 8")
    rho = np.zeros((8, 8), dtype=complex)
    rho[:d, :d] = block
    return rho


def check_density(rho: np.ndarray, tol: float = 1e-10,
                  eig_floor: float = -1e-9) -> np.ndarray:
    """Validate an 8x8 density matrix (Hermitian, unit trace, eigenvalues
    above ``eig_floor``) and return it Hermitized."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (8, 8):
        raise StateError(f"expected an 8x8 density matrix, got {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise StateError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise StateError(f"density matrix trace {np.trace(rho).real} is not 1")
    rho = (rho + rho.conj().T) / 2.0
    if np.linalg.eigvalsh(rho)[0] < eig_floor:
        raise StateError("density matrix has a negative eigenvalue beyond tolerance")
    return rho


def purity(rho: np.ndarray) -> float:
    """tr(rho^2); 1 for pure states, 1/8 for the maximally mixed qubit state."""
    rho = check_density(rho)
    return float(np.trace(rho @ rho).real)
