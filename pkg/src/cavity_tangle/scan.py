"""CP-plane trajectories, reference-curve envelopes and (J, t) density scans.

A trajectory is the parametric curve t -> (purity, concurrence) of the
reduced three-qubit state; plotted against each other these trace the CP
plane.  The non-interacting model started in the W state (``red_curve``)
serves as the empirical upper envelope for interacting trajectories, and in
the homogeneous case the decoupled trajectory pins the lower frontier.

Density scans sweep the Ising coupling at fixed dipole coupling and record
purity (and optionally concurrence) on a (J, t) grid; ``critical_j`` locates
the coupling around which the time pattern departs from its large-J shape.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass

import numpy as np

from .dynamics import diagonalize, evolve_many, partial_trace_oscillator, purity
from .entanglement import concurrence_quasipure
from .errors import NoFeatureError, ParameterError
from .model import (InitialStateSpec, ModelParams, build_hamiltonian,
                    build_initial_state, homogeneous_params,
                    quasi_homogeneous_params)

ENVELOPE_BINS = 200


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    purity: float
    concurrence: float


def _time_grid(t_max: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise ParameterError(f"steps must be >= 2, got {steps}")
    if not t_max > 0:
        raise ParameterError(f"t_max must be positive, got {t_max}")
    return np.linspace(0.0, t_max, steps)


def _trajectory_arrays(params: ModelParams, spec: InitialStateSpec,
                       times: np.ndarray, with_concurrence: bool = True):
    prop = diagonalize(build_hamiltonian(params, spec.n), spec.n)
    states = evolve_many(prop, build_initial_state(spec), times)
    pur = np.empty(len(times))
    conc = np.zeros(len(times))
    for i in range(len(times)):
        rho = partial_trace_oscillator(states[i])
        pur[i] = purity(rho)
        if with_concurrence:
            conc[i] = concurrence_quasipure(rho)
    return pur, conc


def cp_trajectory(params: ModelParams, spec: InitialStateSpec,
                  t_max: float, steps: int) -> list[TrajectoryPoint]:
    """Evolve, trace out the oscillator and record (t, purity, quasi-pure
    concurrence) on a uniform grid over [0, t_max]."""
    times = _time_grid(t_max, steps)
    pur, conc = _trajectory_arrays(params, spec, times)
    return [TrajectoryPoint(float(t), float(p), float(c))
            for t, p, c in zip(times, pur, conc)]


def red_curve(n: int, t_max: float, steps: int) -> list[TrajectoryPoint]:
    """Reference trajectory: non-interacting atoms initially in the W state."""
    from .model import W_ALPHA
    return cp_trajectory(homogeneous_params(0.0, 0.0),
                         InitialStateSpec("psi", W_ALPHA, n), t_max, steps)


# ---------------------------------------------------------------------------
# envelope comparison

@dataclass(frozen=True)
class EnvelopeReport:
    """Signed comparison of a trajectory against a reference curve's purity
    envelopes.

    ``max_excess``: largest concurrence above the reference's upper envelope
    (negative when the bound holds everywhere).  ``min_margin``: smallest
    concurrence margin over the reference's lower envelope (negative when
    the trajectory dips below it).  Points whose purity falls outside the
    reference's purity range are excluded and counted in ``n_uncovered``.
    """

    max_excess: float
    min_margin: float
    n_uncovered: int


def _as_pc(trajectory) -> tuple[np.ndarray, np.ndarray]:
    pur = np.array([pt.purity for pt in trajectory])
    conc = np.array([pt.concurrence for pt in trajectory])
    if pur.size == 0:
        raise ParameterError("trajectory is empty")
    return pur, conc


def _bin_envelopes(ref_p: np.ndarray, ref_c: np.ndarray, query_p: np.ndarray,
                   bins: int):
    """Per-bin extrema of the reference, interpolated between bin centers and
    dominated by the containing bin so the reference never violates its own
    envelope."""
    lo, hi = ref_p.min(), ref_p.max()
    width = (hi - lo) / bins if hi > lo else 1.0
    idx = np.clip(((ref_p - lo) / width).astype(int), 0, bins - 1)
    upper = np.full(bins, -np.inf)
    lower = np.full(bins, np.inf)
    np.maximum.at(upper, idx, ref_c)
    np.minimum.at(lower, idx, ref_c)
    centers = lo + (np.arange(bins) + 0.5) * width
    filled = upper > -np.inf
    covered = (query_p >= lo - 1e-12) & (query_p <= hi + 1e-12)
    q_idx = np.clip(((query_p - lo) / width).astype(int), 0, bins - 1)
    up = np.maximum(np.interp(query_p, centers[filled], upper[filled]),
                    np.where(filled[q_idx], upper[q_idx], -np.inf))
    dn = np.minimum(np.interp(query_p, centers[filled], lower[filled]),
                    np.where(filled[q_idx], lower[q_idx], np.inf))
    return up, dn, covered


def envelope_check(trajectory, reference,
                   bins: int = ENVELOPE_BINS) -> EnvelopeReport:
    """Compare a trajectory against the binned purity envelopes of a
    reference curve; see EnvelopeReport for the two signed measures."""
    t_p, t_c = _as_pc(trajectory)
    r_p, r_c = _as_pc(reference)
    up, dn, covered = _bin_envelopes(r_p, r_c, t_p, bins)
    if not covered.any():
        raise ParameterError("no trajectory point lies in the reference's "
                             "purity range")
    excess = t_c[covered] - up[covered]
    margin = t_c[covered] - dn[covered]
    return EnvelopeReport(float(excess.max()), float(margin.min()),
                          int((~covered).sum()))


@dataclass(frozen=True)
class PathDeviationReport:
    """Purity deviation between two trajectories at matched times:
    ``max_below`` is how far the trajectory's purity drops under the
    reference's, ``max_above`` how far it rises over it."""

    max_below: float
    max_above: float


def purity_path_deviation(trajectory, reference) -> PathDeviationReport:
    """Time-matched purity comparison of two trajectories on the same grid.

    Both curves are parametric in t; when the reference pins the trajectory's
    purity path (homogeneous vs decoupled dynamics) both deviations vanish,
    while inhomogeneity lets the trajectory escape the reference path.
    """
    if len(trajectory) != len(reference):
        raise ParameterError("trajectories must share one time grid")
    t_p = np.array([pt.purity for pt in trajectory])
    r_p = np.array([pt.purity for pt in reference])
    diff = t_p - r_p
    return PathDeviationReport(float(max(0.0, -diff.min())),
                               float(max(0.0, diff.max())))


# ---------------------------------------------------------------------------
# (J, t) density scans

@dataclass(frozen=True)
class ScanGrid:
    """Row-major (J, t) layers: ``purity[a, k]`` is the value at
    ``j_values[a]``, ``t_values[k]``; ``concurrence`` is optional."""

    j_values: np.ndarray
    t_values: np.ndarray
    purity: np.ndarray
    concurrence: np.ndarray | None = None


_MODEL_BUILDERS = {
    "homogeneous": homogeneous_params,
    "quasi_homogeneous": quasi_homogeneous_params,
}


def density_scan(kappa: float, model: str, j_range: tuple[float, float, int],
                 t_range: tuple[float, int], spec: InitialStateSpec,
                 layers=("purity",), workers: int | None = None) -> ScanGrid:
    """Sweep the Ising coupling and tabulate purity (and optionally
    concurrence) over the time grid, column by column.

    Columns are independent; ``workers`` > 1 evaluates them in a thread pool
    with results placed by index, so output does not depend on scheduling.
    """
    try:
        builder = _MODEL_BUILDERS[model]
    except KeyError:
        raise ParameterError(f"model must be one of {sorted(_MODEL_BUILDERS)}, "
                             f"got {model!r}") from None
    layers = set(layers)
    unknown = layers - {"purity", "concurrence"}
    if unknown:
        raise ParameterError(f"unknown layers: {sorted(unknown)}")
    j_min, j_max, j_steps = j_range
    t_max, t_steps = t_range
    if j_steps < 2:
        raise ParameterError(f"j_steps must be >= 2, got {j_steps}")
    if not j_max > j_min:
        raise ParameterError("j_range must be increasing")
    j_values = np.linspace(j_min, j_max, int(j_steps))
    t_values = _time_grid(t_max, int(t_steps))
    with_conc = "concurrence" in layers
    pur = np.empty((len(j_values), len(t_values)))
    conc = np.empty_like(pur) if with_conc else None

    def column(a: int):
        p, c = _trajectory_arrays(builder(kappa, float(j_values[a])), spec,
                                  t_values, with_concurrence=with_conc)
        return a, p, c

    if workers is not None and workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            for a, p, c in pool.map(column, range(len(j_values))):
                pur[a] = p
                if with_conc:
                    conc[a] = c
    else:
        for a in range(len(j_values)):
            _, p, c = column(a)
            pur[a] = p
            if with_conc:
                conc[a] = c
    return ScanGrid(j_values, t_values, pur, conc)


def critical_statistic(grid: ScanGrid) -> np.ndarray:
    """Per-J departure of the purity time pattern from its large-J shape:
    the time-variance of (purity minus the mean pattern of the top decile
    of J columns)."""
    pur = np.asarray(grid.purity)
    k = max(1, pur.shape[0] // 10)
    baseline = pur[-k:].mean(axis=0)
    return (pur - baseline[None, :]).var(axis=1)


def critical_j(grid: ScanGrid) -> float:
    """Ising coupling at which the purity pattern departs most strongly from
    its large-J baseline."""
    stat = critical_statistic(grid)
    if stat.max() <= 1e-12:
        raise NoFeatureError("purity grid shows no departure from its "
                             "large-J baseline")
    return float(grid.j_values[int(np.argmax(stat))])


def critical_extent(grid: ScanGrid) -> float:
    """Width of the J interval on which the critical statistic exceeds half
    its peak value."""
    stat = critical_statistic(grid)
    peak = stat.max()
    if peak <= 1e-12:
        raise NoFeatureError("purity grid shows no departure from its "
                             "large-J baseline")
    above = np.nonzero(stat > peak / 2.0)[0]
    return float(grid.j_values[above[-1]] - grid.j_values[above[0]])
