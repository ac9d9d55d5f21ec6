"""Cooling schedules (bang-bang and logarithmic energy sweep) and execution.

A schedule is an ordered list of cooling steps.  The bang-bang schedule makes
one single-split (M=1) pass per qubit with the fridge energy set by the
commutator estimate, repeated R times.  The log-sweep schedule walks a
geometric ladder of fridge energies from the top of the band to the bottom,
iterating the coupling axis over X, Y, Z on every qubit at each rung so no
common symmetry can hide a transition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cooling import (
    CoolingStepParams,
    StepEngine,
    bangbang_gamma,
    commutator_gap_estimate,
    logsweep_trotter_number,
)
from .models import AXES, CouplingDescriptor, build_coupling_operator
from .operators import (
    DenseOperator,
    DensityMatrix,
    POSITIVITY_FLOOR,
    default_degeneracy_tol,
    entropy_from_eigenvalues,
    ground_manifold_projector,
    hermitian_eig,
)


@dataclass(frozen=True)
class Schedule:
    """Ordered cooling steps plus a provenance note for bookkeeping."""

    steps: tuple[CoolingStepParams, ...]
    provenance: str = "custom"

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class LogSweepConfig:
    """Energy-sweep settings: k rungs across the band (e_min, e_max).

    `linewidth_factor` converts a rung's linewidth delta_j = 1/t_j into its
    coupling gamma_j = linewidth_factor * delta_j.  The default pi keeps
    t = pi/gamma exact; the alternate reading gamma_j = delta_j/pi can be
    probed by passing 1/pi.
    """

    k: int
    e_min: float
    e_max: float
    linewidth_factor: float = math.pi
    axes: tuple[str, ...] = AXES
    nesting: str = "energy"

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if not (0 < self.e_min < self.e_max):
            raise ValueError(
                f"band must satisfy 0 < e_min < e_max, got ({self.e_min}, {self.e_max})"
            )
        if self.linewidth_factor <= 0:
            raise ValueError("linewidth_factor must be > 0")
        bad = [a for a in self.axes if a not in AXES]
        if bad or not self.axes:
            raise ValueError(f"axes must be a non-empty subset of {AXES}")
        if self.nesting not in ("energy", "site"):
            raise ValueError(f"nesting must be 'energy' or 'site', got {self.nesting!r}")


@dataclass(frozen=True)
class TrajectoryRecord:
    """Observables after a step (step 0 is the initial state)."""

    step: int
    fidelity: float
    energy: float
    entropy: float
    params: CoolingStepParams | None = None


def bangbang_schedule(h_s: DenseOperator, n: int, r: int) -> Schedule:
    """R passes of one M=1 step per qubit, Y coupling, commutator fridge energy."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if 2**n != h_s.dim:
        raise ValueError(f"{n} qubits do not match dimension {h_s.dim}")
    per_site = []
    for site in range(n):
        c = CouplingDescriptor("Y", site)
        eps = commutator_gap_estimate(h_s, build_coupling_operator(c, n))
        if eps <= 0.0:
            raise ValueError(
                f"Y on site {site} commutes with the Hamiltonian; no transition to target"
            )
        gamma = bangbang_gamma(eps)
        per_site.append(
            CoolingStepParams(eps=eps, gamma=gamma, coupling=c, trotter_m=1)
        )
    return Schedule(steps=tuple(per_site * r), provenance=f"bangbang(r={r})")


def logsweep_energies(cfg: LogSweepConfig) -> np.ndarray:
    """Geometric ladder from e_max down to e_min with k rungs."""
    j = np.arange(cfg.k, dtype=float)
    frac = j / (cfg.k - 1)
    return cfg.e_min**frac * cfg.e_max ** (1.0 - frac)


def logsweep_linewidths(
    energies: np.ndarray, linewidth_factor: float = math.pi
) -> tuple[np.ndarray, np.ndarray]:
    """Linewidths and couplings making adjacent rungs tile the band.

    With a geometric ladder of ratio r, delta_j = eps_j (1-r)/(1+r) is the
    unique linewidth proportional to eps_j satisfying
    eps_{j+1} + delta_{j+1} = eps_j - delta_j.
    """
    energies = np.asarray(energies, dtype=float)
    if len(energies) < 2 or np.any(np.diff(energies) >= 0):
        raise ValueError("energies must be strictly decreasing")
    ratios = energies[1:] / energies[:-1]
    if np.max(np.abs(ratios - ratios[0])) > 1e-10:
        raise ValueError("energies must form a geometric sequence")
    r = float(ratios[0])
    deltas = energies * (1.0 - r) / (1.0 + r)
    return deltas, linewidth_factor * deltas


def logsweep_schedule(h_s: DenseOperator, n: int, cfg: LogSweepConfig) -> Schedule:
    """len(axes)*n*k steps sweeping the fridge energy from e_max to e_min."""
    if 2**n != h_s.dim:
        raise ValueError(f"{n} qubits do not match dimension {h_s.dim}")
    energies = logsweep_energies(cfg)
    deltas, gammas = logsweep_linewidths(energies, cfg.linewidth_factor)
    rungs = []
    for eps_j, gamma_j in zip(energies, gammas):
        m_j = logsweep_trotter_number(eps_j, gamma_j, cfg.e_max)
        rungs.append((float(eps_j), float(gamma_j), m_j))

    def rung_steps(rung):
        eps_j, gamma_j, m_j = rung
        for site in range(n):
            for axis in cfg.axes:
                yield CoolingStepParams(
                    eps=eps_j,
                    gamma=gamma_j,
                    coupling=CouplingDescriptor(axis, site),
                    trotter_m=m_j,
                )

    steps: list[CoolingStepParams] = []
    if cfg.nesting == "energy":
        for rung in rungs:
            steps.extend(rung_steps(rung))
    else:
        for site in range(n):
            for rung in rungs:
                eps_j, gamma_j, m_j = rung
                for axis in cfg.axes:
                    steps.append(
                        CoolingStepParams(
                            eps=eps_j,
                            gamma=gamma_j,
                            coupling=CouplingDescriptor(axis, site),
                            trotter_m=m_j,
                        )
                    )
    provenance = f"logsweep(k={cfg.k}, e_min={cfg.e_min}, e_max={cfg.e_max})"
    return Schedule(steps=tuple(steps), provenance=provenance)


def default_energy_band(
    h_s: DenseOperator,
    couplings: tuple[CouplingDescriptor, ...],
    degeneracy_tol: float | None = None,
) -> tuple[float, float]:
    """(e_min, e_max) = (first gap above the ground manifold, largest reachable).

    e_min skips quasi-degenerate ground-manifold splittings; e_max is the
    maximum commutator estimate over the given couplings.
    """
    if not couplings:
        raise ValueError("at least one coupling descriptor is required")
    eig = hermitian_eig(h_s)
    tol = degeneracy_tol if degeneracy_tol is not None else default_degeneracy_tol(eig.eigenvalues)
    gaps = eig.eigenvalues - eig.eigenvalues[0]
    above = gaps[gaps > tol]
    if above.size == 0:
        raise ValueError("spectrum is fully degenerate; no transition to target")
    e_min = float(above[0])
    n = int(round(math.log2(h_s.dim)))
    e_max = max(
        commutator_gap_estimate(h_s, build_coupling_operator(c, n)) for c in couplings
    )
    if e_max < e_min:
        raise ValueError(f"couplings reach no transition: e_max {e_max} < e_min {e_min}")
    return e_min, e_max


def run_protocol(
    rho_0: DensityMatrix,
    schedule: Schedule,
    h_s: DenseOperator,
    degeneracy_tol: float | None = None,
    projector: DenseOperator | None = None,
    engine: StepEngine | None = None,
) -> list[TrajectoryRecord]:
    """Apply the schedule, recording fidelity, energy and entropy per step.

    Fidelity is the overlap with the ground manifold of h_s (or the supplied
    projector).  Positivity of the state is asserted after every step.
    """
    if rho_0.dim != h_s.dim:
        raise ValueError(f"dimension mismatch: state {rho_0.dim}, system {h_s.dim}")
    eng = engine if engine is not None else StepEngine(h_s)
    p = projector if projector is not None else ground_manifold_projector(h_s, degeneracy_tol)
    p_mat, h_mat = p.mat, h_s.mat

    def record(step: int, rho: np.ndarray, params) -> TrajectoryRecord:
        vals = np.linalg.eigvalsh(rho)
        if float(vals[0]) < POSITIVITY_FLOOR:
            raise ValueError(f"state lost positivity at step {step}: {vals[0]}")
        fid = float(np.real(np.einsum("ij,ji->", p_mat, rho)))
        return TrajectoryRecord(
            step=step,
            fidelity=min(max(fid, 0.0), 1.0),
            energy=float(np.real(np.einsum("ij,ji->", h_mat, rho))),
            entropy=entropy_from_eigenvalues(vals, rho.shape[0]),
            params=params,
        )

    rho = rho_0.mat
    records = [record(0, rho, None)]
    for k, step_params in enumerate(schedule.steps, start=1):
        rho = eng.apply(rho, step_params)
        records.append(record(k, rho, step_params))
    return records
