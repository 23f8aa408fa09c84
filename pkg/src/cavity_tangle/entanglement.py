"""Multipartite concurrence: exact pure-state formula, quasi-pure lower bound
and a convex-roof upper-bound optimizer.

For an N-qubit pure state the concurrence is

    C(psi) = 2^(1-N/2) * sqrt((2^N - 2) - sum_S tr(rho_S^2))

with S running over the nonempty proper subsets of the qubits.  Subset
purities are evaluated two independent ways: from reduced density matrices,
and through the exchange identity tr(rho_S^2) = <psi x psi|SWAP_S|psi x psi>
contracted index-block by index-block (no doubled-space matrices are ever
formed).  The positive operator

    A = 2^(2-N) * sum_S (1 - SWAP_S)       =>   <psi x psi|A|psi x psi> = C^2

drives both mixed-state routines.  The quasi-pure bound needs one
diagonalization of rho: with chi_i = sqrt(mu_i) |phi_i> (eigenvalues
descending) form tau_mn = <chi_1 x chi_1|A|chi_m x chi_n> / sqrt(tau_11) and
return max(0, s_1 - sum_{i>1} s_i) over its singular values; the bound is
exact on pure states and never exceeds the convex roof.  The upper bound
minimizes the ensemble average sum_k p_k C(psi_k) over decompositions
|psi~_k> = sum_i U_ki chi_i generated by column-isometric mixing arrays U.

Three-qubit states (length-8 amplitude vectors, 8x8 density matrices) use
the package's canonical basis order ``model.QUBIT_STRINGS``; other qubit
counts use plain binary order.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from .errors import ParameterError, StateError
from .model import BINARY_INDEX

NORM_TOL = 1e-10
RANK_TOL = 1e-12
#: tau anchor below this is treated as an exactly separable dominant state
ANCHOR_TOL = 1e-14


def proper_subsets(n_qubits: int) -> list[tuple[int, ...]]:
    """Nonempty proper subsets of qubit indices 0..n_qubits-1."""
    out = []
    for size in range(1, n_qubits):
        out.extend(combinations(range(n_qubits), size))
    return out


def _as_tensor(state) -> np.ndarray:
    """Amplitudes as a (2,)*N tensor in binary index order; length-8 input is
    reindexed from the canonical three-qubit order."""
    psi = np.asarray(state, dtype=complex).ravel()
    n_qubits = int(round(math.log2(psi.size)))
    if psi.size != 2 ** n_qubits or n_qubits < 2:
        raise StateError(f"need 2^N amplitudes with N >= 2, got {psi.size}")
    if psi.size == 8:
        binary = np.empty(8, dtype=complex)
        binary[list(BINARY_INDEX)] = psi
        psi = binary
    return psi.reshape((2,) * n_qubits)


def _require_unit(t: np.ndarray):
    nrm = np.linalg.norm(t)
    if abs(nrm - 1.0) > NORM_TOL:
        raise StateError(f"state norm {nrm} is not 1 within {NORM_TOL}")


def _subset_purity_tensor(t: np.ndarray, subset: tuple[int, ...]) -> float:
    complement = tuple(q for q in range(t.ndim) if q not in subset)
    rho_s = np.tensordot(t, t.conj(), axes=(complement, complement))
    d = 2 ** len(subset)
    rho_s = rho_s.reshape(d, d)
    return float(np.trace(rho_s @ rho_s).real)


def _check_subset(subset, n_qubits: int) -> tuple[int, ...]:
    subset = tuple(sorted(set(int(q) for q in subset)))
    if not subset or len(subset) == n_qubits:
        raise ParameterError("subset must be nonempty and proper")
    if subset[0] < 0 or subset[-1] >= n_qubits:
        raise ParameterError(f"subset {subset} out of range for {n_qubits} qubits")
    return subset


def subset_purity(state, subset) -> float:
    """tr(rho_S^2) of the reduced state on qubit subset ``subset``
    (0-based indices), computed from the reduced density matrix."""
    t = _as_tensor(state)
    _require_unit(t)
    return _subset_purity_tensor(t, _check_subset(subset, t.ndim))


def concurrence_pure(state) -> float:
    """Multipartite concurrence of a pure state; 0 exactly for product
    states, 2/sqrt(3) for the three-qubit W state."""
    t = _as_tensor(state)
    _require_unit(t)
    n_qubits = t.ndim
    total = sum(_subset_purity_tensor(t, s) for s in proper_subsets(n_qubits))
    gap = max(0.0, (2 ** n_qubits - 2) - total)
    return float(2.0 ** (1.0 - n_qubits / 2.0) * math.sqrt(gap))


def concurrence_family_phi(alpha: float) -> float:
    """Closed form sin(2 alpha) for the two-atom superposition family."""
    return math.sin(2.0 * alpha)


def concurrence_family_psi(alpha: float) -> float:
    """Closed form (sin(alpha)/sqrt 2) sqrt(5 + 3 cos(2 alpha)) for the
    three-atom superposition family; maximal (2/sqrt 3) at arctan(sqrt 2)."""
    return math.sin(alpha) / math.sqrt(2.0) * math.sqrt(5.0 + 3.0 * math.cos(2.0 * alpha))


# ---------------------------------------------------------------------------
# exchange (SWAP_S) contractions on tensor index blocks

_LETTERS_I = "ABCDEFGH"
_LETTERS_J = "abcdefgh"


def _swap_spec(subset, n_qubits: int) -> tuple[str, str]:
    c_idx = "".join(_LETTERS_J[p] if p in subset else _LETTERS_I[p]
                    for p in range(n_qubits))
    d_idx = "".join(_LETTERS_I[p] if p in subset else _LETTERS_J[p]
                    for p in range(n_qubits))
    return c_idx, d_idx


def _swap_expectation_tensor(t: np.ndarray, subset: tuple[int, ...]) -> float:
    n_qubits = t.ndim
    ii, jj = _LETTERS_I[:n_qubits], _LETTERS_J[:n_qubits]
    c_idx, d_idx = _swap_spec(subset, n_qubits)
    val = np.einsum(f"{ii},{jj},{c_idx},{d_idx}->", t.conj(), t.conj(), t, t)
    return float(val.real)


def swap_expectation(state, subset) -> float:
    """<psi x psi|SWAP_S|psi x psi> by index-block exchange; equals the
    subset purity of a normalized pure state."""
    t = _as_tensor(state)
    return _swap_expectation_tensor(t, _check_subset(subset, t.ndim))


def a_expectation(state) -> float:
    """<psi x psi|A|psi x psi>: the squared pure concurrence, evaluated on
    the exchange-contraction path (independent of the reduced-density path)."""
    t = _as_tensor(state)
    n_qubits = t.ndim
    subsets = proper_subsets(n_qubits)
    ip = abs(np.vdot(t, t)) ** 2
    total = len(subsets) * ip - sum(_swap_expectation_tensor(t, s) for s in subsets)
    return float(2.0 ** (2.0 - n_qubits) * total)


def _exchange_anchor_matrix(chi_t: np.ndarray) -> np.ndarray:
    """T[m, n] = <chi_1 x chi_1|A|chi_m x chi_n> for the columns of ``chi_t``
    (shape (r, 2, 2, 2), chi_1 first), by batched exchange contractions."""
    n_qubits = chi_t.ndim - 1
    ii, jj = _LETTERS_I[:n_qubits], _LETTERS_J[:n_qubits]
    anchor = chi_t[0]
    overlaps = np.einsum(f"{ii},x{ii}->x", anchor.conj(), chi_t)
    t_mat = len(proper_subsets(n_qubits)) * np.outer(overlaps, overlaps)
    for subset in proper_subsets(n_qubits):
        c_idx, d_idx = _swap_spec(subset, n_qubits)
        t_mat = t_mat - np.einsum(f"{ii},{jj},x{c_idx},y{d_idx}->xy",
                                  anchor.conj(), anchor.conj(), chi_t, chi_t)
    return 2.0 ** (2.0 - n_qubits) * t_mat


def _exchange_tensor(chi_t: np.ndarray) -> np.ndarray:
    """A4[i, j, l, m] = <chi_i x chi_j|A|chi_l x chi_m> over all columns."""
    n_qubits = chi_t.ndim - 1
    ii, jj = _LETTERS_I[:n_qubits], _LETTERS_J[:n_qubits]
    ol = np.einsum(f"x{ii},y{ii}->xy", chi_t.conj(), chi_t)
    a4 = len(proper_subsets(n_qubits)) * np.einsum("il,jm->ijlm", ol, ol)
    for subset in proper_subsets(n_qubits):
        c_idx, d_idx = _swap_spec(subset, n_qubits)
        a4 = a4 - np.einsum(f"i{ii},j{jj},l{c_idx},m{d_idx}->ijlm",
                            chi_t.conj(), chi_t.conj(), chi_t, chi_t)
    return 2.0 ** (2.0 - n_qubits) * a4


# ---------------------------------------------------------------------------
# mixed states

def _spectral_columns(rho: np.ndarray):
    """Validate ``rho`` (canonical order) and return subnormalized spectral
    columns chi as an (r, 2, 2, 2) tensor stack, eigenvalues descending and
    weights below the rank tolerance dropped."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (8, 8):
        raise StateError(f"expected an 8x8 density matrix, got {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > NORM_TOL:
        raise StateError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > NORM_TOL:
        raise StateError(f"density matrix trace {np.trace(rho).real} is not 1")
    mu, vecs = np.linalg.eigh((rho + rho.conj().T) / 2.0)
    if mu[0] < -1e-9:
        raise StateError("density matrix has a negative eigenvalue beyond tolerance")
    mu = np.clip(mu[::-1], 0.0, None)
    vecs = vecs[:, ::-1]
    keep = mu > RANK_TOL
    chi = vecs[:, keep] * np.sqrt(mu[keep])
    perm = list(BINARY_INDEX)
    chi_bin = np.empty_like(chi)
    chi_bin[perm, :] = chi
    return chi_bin.T.reshape(-1, 2, 2, 2)


def quasipure_exchange_matrix(rho: np.ndarray) -> np.ndarray:
    """The anchored exchange matrix T_mn = <chi_1 x chi_1|A|chi_m x chi_n>
    of the spectral decomposition of ``rho`` (complex symmetric)."""
    return _exchange_anchor_matrix(_spectral_columns(rho))


def concurrence_quasipure(rho: np.ndarray) -> float:
    """Quasi-pure lower bound on the convex-roof concurrence.

    Coincides with ``concurrence_pure`` on pure states; returns 0 whenever
    the dominant eigenvector is separable (vanishing anchor).
    """
    t_mat = quasipure_exchange_matrix(rho)
    anchor = t_mat[0, 0].real
    if anchor <= ANCHOR_TOL:
        return 0.0
    tau = t_mat / math.sqrt(anchor)
    sing = np.linalg.svd(tau, compute_uv=False)
    return float(max(0.0, sing[0] - sing[1:].sum()))


# ---------------------------------------------------------------------------
# convex-roof upper bound

def _isometries(params: np.ndarray, k: int, r: int) -> np.ndarray:
    """Map batches of k*k real parameters to k x r column isometries through
    U = expm(i H) with H Hermitian, via a batched eigendecomposition."""
    batch = params.shape[:-1]
    h = np.zeros(batch + (k, k), dtype=complex)
    rng_d = np.arange(k)
    iu = np.triu_indices(k, 1)
    n_off = k * (k - 1) // 2
    h[..., rng_d, rng_d] = params[..., :k]
    h[..., iu[0], iu[1]] = (params[..., k:k + n_off]
                            + 1j * params[..., k + n_off:])
    h[..., iu[1], iu[0]] = (params[..., k:k + n_off]
                            - 1j * params[..., k + n_off:])
    lam, v = np.linalg.eigh(h)
    u = np.einsum("...ij,...j,...kj->...ik", v, np.exp(1j * lam), v.conj())
    return u[..., :, :r]


def _ensemble_concurrence(u: np.ndarray, a_flat: np.ndarray, r: int) -> np.ndarray:
    """sum_k p_k C(psi_k) for each isometry in the batch ``u`` (..., K, r),
    using the precomputed exchange tensor flattened to (r^2, r^2)."""
    pair = (u[..., :, :, None] * u[..., :, None, :]).reshape(u.shape[:-1] + (r * r,))
    quad = np.einsum("...ka,...ka->...k", pair.conj(), pair @ a_flat).real
    return np.sqrt(np.clip(quad, 0.0, None)).sum(axis=-1)


def concurrence_upper_bound(rho: np.ndarray, restarts: int, iterations: int,
                            seed: int = 0, ensemble_size: int | None = None) -> float:
    """Upper bound on the convex-roof concurrence by random-restart local
    descent over decompositions of ``rho``.

    Decompositions |psi~_k> = sum_i U_ki chi_i are parametrized by K x r
    column isometries U (K = ``ensemble_size``, default rank + 2) written as
    U = expm(iH)[:, :r]; the descent moves H by finite-difference gradients
    and the best ensemble average ever evaluated is returned, so the result
    is an upper bound regardless of convergence.  Deterministic for a given
    (seed, restarts, iterations).
    """
    if restarts <= 0 or iterations <= 0:
        raise ParameterError("restarts and iterations must be positive")
    chi_t = _spectral_columns(rho)
    r = chi_t.shape[0]
    k = ensemble_size if ensemble_size is not None else r + 2
    if k < r:
        raise ParameterError(f"ensemble_size {k} below the state rank {r}")
    a_flat = _exchange_tensor(chi_t).reshape(r * r, r * r)
    n_params = k * k
    probes = np.eye(n_params)
    fd_eps = 1e-7
    rng = np.random.default_rng(seed)
    best = math.inf
    for restart in range(restarts):
        x = (np.zeros(n_params) if restart == 0
             else rng.normal(scale=0.7, size=n_params))
        fx = float(_ensemble_concurrence(_isometries(x[None], k, r), a_flat, r)[0])
        best = min(best, fx)
        step = 0.1
        for _ in range(iterations):
            shifted = x[None, :] + fd_eps * probes
            vals = _ensemble_concurrence(_isometries(shifted, k, r), a_flat, r)
            grad = (vals - fx) / fd_eps
            norm = np.linalg.norm(grad)
            if norm < 1e-12:
                break
            candidate = x - step * (grad / norm)
            fc = float(_ensemble_concurrence(
                _isometries(candidate[None], k, r), a_flat, r)[0])
            if fc < fx:
                x, fx = candidate, fc
                best = min(best, fc)
                step *= 1.2
            else:
                step *= 0.5
                if step < 1e-12:
                    break
    return best
