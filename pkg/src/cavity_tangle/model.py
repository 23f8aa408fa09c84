"""Model definition: parameters, excitation-sector bases and operator builders.

Three two-level atoms couple to a single oscillator mode.  The Hamiltonian
(units of the cavity coupling, oscillator free dynamics removed in the
interaction picture) is

    H = sum_j delta_j/2 sz_j
      + sum_j g_j (a sp_j + a† sm_j)
      + sum_{pairs} kappa_jk (sm_j sp_k + sp_j sm_k)
      + sum_{pairs} J_jk sz_j sz_k

with sp|0> = |1>, sm|1> = |0>, sz|1> = +|1>, sz|0> = -|0>, a|m> = sqrt(m)|m-1>.
Pair sums run over ordered pairs (j != k, each unordered pair twice) by
default; ``pair_sum_convention="unordered"`` halves the effective weights.

Total excitation number (photons plus excited atoms) is conserved, so every
operator here is built on a fixed-excitation sector.  The sector basis order
is the canonical one used throughout the package:

    (n,000) (n-1,001) (n-1,010) (n-1,100) (n-2,110) (n-2,101) (n-2,011) (n-3,111)

truncated to entries with a nonnegative photon number, giving dimensions
1, 4, 7, 8 for n = 0, 1, 2, >=3.  The qubit strings in that fixed order are
also the basis order for reduced three-qubit density matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ResourceError, StateError

# Canonical qubit-string order; groups of equal excitation count are contiguous.
QUBIT_STRINGS = ("000", "001", "010", "100", "110", "101", "011", "111")
QUBIT_EXCITATIONS = tuple(s.count("1") for s in QUBIT_STRINGS)
#: position of each canonical string in the standard binary order 000..111
BINARY_INDEX = tuple(int(s, 2) for s in QUBIT_STRINGS)

#: unordered qubit pairs in storage order (kappa and ising triples)
PAIRS = ((0, 1), (0, 2), (1, 2))

#: oscillator-level cap for full-space construction (dense 8(n_max+1) matrix)
MAX_FULL_SPACE_LEVELS = 256


def _as_triple(value, name: str) -> tuple[float, float, float]:
    try:
        triple = tuple(float(v) for v in value)
    except TypeError:
        triple = (float(value),) * 3
    if len(triple) != 3:
        raise ParameterError(f"{name} needs exactly 3 entries, got {len(triple)}")
    if not all(math.isfinite(v) for v in triple):
        raise ParameterError(f"{name} entries must be finite, got {triple}")
    return triple


@dataclass(frozen=True)
class ModelParams:
    """Physical couplings.

    ``delta``: per-atom detunings; ``g``: per-atom cavity couplings;
    ``kappa``: dipole couplings and ``ising``: Ising couplings for the
    unordered pairs (1,2), (1,3), (2,3) in that order.
    """

    delta: tuple[float, float, float] = (0.0, 0.0, 0.0)
    g: tuple[float, float, float] = (1.0, 1.0, 1.0)
    kappa: tuple[float, float, float] = (0.0, 0.0, 0.0)
    ising: tuple[float, float, float] = (0.0, 0.0, 0.0)
    pair_sum_convention: str = "ordered"

    def __post_init__(self):
        object.__setattr__(self, "delta", _as_triple(self.delta, "delta"))
        object.__setattr__(self, "g", _as_triple(self.g, "g"))
        object.__setattr__(self, "kappa", _as_triple(self.kappa, "kappa"))
        object.__setattr__(self, "ising", _as_triple(self.ising, "ising"))
        if self.pair_sum_convention not in ("ordered", "unordered"):
            raise ParameterError(
                f"pair_sum_convention must be 'ordered' or 'unordered', "
                f"got {self.pair_sum_convention!r}")

    @property
    def pair_weight(self) -> float:
        """Multiplicity of each unordered pair in the interaction sums."""
        return 2.0 if self.pair_sum_convention == "ordered" else 1.0


def homogeneous_params(kappa: float, ising: float,
                       pair_sum_convention: str = "ordered") -> ModelParams:
    """All atoms alike: zero detuning, unit cavity coupling, uniform pair
    couplings ``kappa`` and ``ising``."""
    if not (math.isfinite(kappa) and math.isfinite(ising)):
        raise ParameterError("kappa and ising must be finite")
    return ModelParams(kappa=(kappa,) * 3, ising=(ising,) * 3,
                       pair_sum_convention=pair_sum_convention)


def quasi_homogeneous_params(kappa: float, ising: float,
                             pair_sum_convention: str = "ordered") -> ModelParams:
    """Homogeneous model plus one extra exchange term kappa*(sm_1 sp_2 + h.c.).

    The extra term is folded into the stored (1,2) dipole coefficient so that
    the built Hamiltonian equals the homogeneous one plus exactly that term:
    the builder weights pair (1,2) by ``pair_weight``, so the stored value is
    kappa*(1 + 1/pair_weight).
    """
    base = homogeneous_params(kappa, ising, pair_sum_convention)
    folded = kappa * (1.0 + 1.0 / base.pair_weight)
    return ModelParams(kappa=(folded, kappa, kappa), ising=base.ising,
                       pair_sum_convention=pair_sum_convention)


def sector_dimension(n: int) -> int:
    """Block size of the fixed-``n`` excitation sector: 1, 4, 7, then 8."""
    if n < 0:
        raise ParameterError(f"excitation count must be >= 0, got {n}")
    return (1, 4, 7)[n] if n < 3 else 8


def build_sector_basis(n: int) -> list[tuple[int, str]]:
    """Ordered (photon_number, qubit_string) basis of the n-excitation sector."""
    if n < 0:
        raise ParameterError(f"excitation count must be >= 0, got {n}")
    return [(n - p, s) for s, p in zip(QUBIT_STRINGS, QUBIT_EXCITATIONS) if n >= p]


@dataclass(frozen=True)
class SectorVector:
    """Complex amplitudes over the sector basis of ``build_sector_basis(n)``."""

    data: np.ndarray
    n: int

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        object.__setattr__(self, "data", data)
        if data.shape != (sector_dimension(self.n),):
            raise StateError(
                f"sector n={self.n} needs {sector_dimension(self.n)} amplitudes, "
                f"got shape {data.shape}")

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def require_normalized(self, tol: float = 1e-10) -> "SectorVector":
        if abs(self.norm() - 1.0) > tol:
            raise StateError(f"state norm {self.norm()} is not 1 within {tol}")
        return self


def _apply_terms(params: ModelParams, m: int, bits: list[int], emit):
    """Apply every Hamiltonian term to |m, bits> and emit (m', bits', amp)."""
    w = params.pair_weight
    diag = sum(params.delta[j] / 2 * (1 if bits[j] else -1) for j in range(3))
    for p, (j, k) in enumerate(PAIRS):
        sj = 1 if bits[j] else -1
        sk = 1 if bits[k] else -1
        diag += w * params.ising[p] * sj * sk
    emit(m, bits, diag)
    for j in range(3):
        if bits[j] == 0 and m >= 1:
            flipped = bits.copy()
            flipped[j] = 1
            emit(m - 1, flipped, params.g[j] * math.sqrt(m))
        elif bits[j] == 1:
            flipped = bits.copy()
            flipped[j] = 0
            emit(m + 1, flipped, params.g[j] * math.sqrt(m + 1))
    for p, (j, k) in enumerate(PAIRS):
        for lo, hi in ((j, k), (k, j)):
            if bits[lo] == 1 and bits[hi] == 0:
                flipped = bits.copy()
                flipped[lo] = 0
                flipped[hi] = 1
                emit(m, flipped, w * params.kappa[p])


def build_hamiltonian(params: ModelParams, n: int) -> np.ndarray:
    """Sector-``n`` Hamiltonian matrix, by direct application of each term
    to the sector basis.  Always Hermitian and real."""
    basis = build_sector_basis(n)
    index = {entry: i for i, entry in enumerate(basis)}
    h = np.zeros((len(basis), len(basis)), dtype=complex)

    for col, (m, s) in enumerate(basis):
        bits = [int(c) for c in s]

        def emit(m2, bits2, amp, col=col):
            if amp == 0.0:
                return
            target = index.get((m2, "".join(map(str, bits2))))
            if target is not None:
                h[target, col] += amp

        _apply_terms(params, m, bits, emit)
    return h


def _full_index(m: int, qubit_string: str) -> int:
    return 8 * m + QUBIT_STRINGS.index(qubit_string)


def build_full_hamiltonian(params: ModelParams, n_max: int) -> np.ndarray:
    """Hamiltonian on the truncated product space (oscillator levels
    0..n_max times three qubits), dimension 8(n_max+1).

    Matrix elements that would leave the truncated space are dropped, so
    sectors touching the top oscillator level carry truncation artifacts;
    compare against sector blocks only for n <= n_max - 3.
    """
    if n_max < 0:
        raise ParameterError(f"n_max must be >= 0, got {n_max}")
    if n_max > MAX_FULL_SPACE_LEVELS:
        raise ResourceError(
            f"n_max={n_max} exceeds the dense full-space cap "
            f"({MAX_FULL_SPACE_LEVELS} oscillator levels)")
    dim = 8 * (n_max + 1)
    h = np.zeros((dim, dim), dtype=complex)
    for m in range(n_max + 1):
        for s in QUBIT_STRINGS:
            col = _full_index(m, s)
            bits = [int(c) for c in s]

            def emit(m2, bits2, amp, col=col):
                if amp == 0.0 or not (0 <= m2 <= n_max):
                    return
                h[_full_index(m2, "".join(map(str, bits2))), col] += amp

            _apply_terms(params, m, bits, emit)
    return h


def build_number_operator(n_max: int) -> np.ndarray:
    """Excitation-number operator on the truncated product space: diagonal
    with eigenvalue photon_number + excited_qubits."""
    if n_max < 0:
        raise ParameterError(f"n_max must be >= 0, got {n_max}")
    if n_max > MAX_FULL_SPACE_LEVELS:
        raise ResourceError(
            f"n_max={n_max} exceeds the dense full-space cap "
            f"({MAX_FULL_SPACE_LEVELS} oscillator levels)")
    diag = [m + p for m in range(n_max + 1) for p in QUBIT_EXCITATIONS]
    return np.diag(np.array(diag, dtype=complex))


def sector_embedding_indices(n: int) -> list[int]:
    """Positions of the sector-``n`` basis states inside the full product
    space of ``build_full_hamiltonian``."""
    return [_full_index(m, s) for m, s in build_sector_basis(n)]


def _cycled(s: str) -> str:
    # qubit relabeling 1,2,3 -> 3,1,2
    return s[2] + s[0] + s[1]


def build_rotation_operator(n: int) -> np.ndarray:
    """Cyclic qubit-shift permutation |m>|i1 i2 i3> -> |m>|i3 i1 i2| on the
    sector basis.  Unitary with R^3 = identity."""
    basis = build_sector_basis(n)
    index = {entry: i for i, entry in enumerate(basis)}
    r = np.zeros((len(basis), len(basis)), dtype=complex)
    for col, (m, s) in enumerate(basis):
        r[index[(m, _cycled(s))], col] = 1.0
    return r


def build_symmetry_projectors(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Projectors onto the three eigenspaces of the rotation operator,
    P_k = (1/3) sum_m alpha^{-k m} R^m with alpha = exp(2 pi i / 3)."""
    r = build_rotation_operator(n)
    alpha = np.exp(2j * np.pi / 3)
    powers = [np.eye(r.shape[0], dtype=complex), r, r @ r]
    return tuple(
        sum(alpha ** (-k * m) * powers[m] for m in range(3)) / 3.0
        for k in range(3)
    )


@dataclass(frozen=True)
class InitialStateSpec:
    """Product initial state family: ``phi`` (two-atom superposition) or
    ``psi`` (three-atom superposition, the W state at alpha = arctan sqrt 2),
    with n-1 photons in the oscillator."""

    family: str
    alpha: float
    n: int

    def __post_init__(self):
        if self.family not in ("phi", "psi"):
            raise ParameterError(f"family must be 'phi' or 'psi', got {self.family!r}")
        if not math.isfinite(self.alpha):
            raise ParameterError(f"alpha must be finite, got {self.alpha}")
        if self.n < 1:
            raise ParameterError(
                f"both families need at least one excitation, got n={self.n}")


#: alpha at which the psi family reaches the W state
W_ALPHA = math.atan(math.sqrt(2.0))


def build_initial_state(spec: InitialStateSpec) -> SectorVector:
    """Amplitudes of the family state on the sector-``n`` basis.

    phi: sin(a) on (n-1,001), cos(a) on (n-1,010).
    psi: sin(a)/sqrt2 on (n-1,001), cos(a) on (n-1,010), sin(a)/sqrt2 on (n-1,100).
    """
    v = np.zeros(sector_dimension(spec.n), dtype=complex)
    s, c = math.sin(spec.alpha), math.cos(spec.alpha)
    if spec.family == "phi":
        v[1] = s
        v[2] = c
    else:
        v[1] = s / math.sqrt(2.0)
        v[2] = c
        v[3] = s / math.sqrt(2.0)
    return SectorVector(v, spec.n)
