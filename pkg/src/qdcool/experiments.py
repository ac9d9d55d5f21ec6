"""Configuration-driven experiments emitting machine-readable tables.

Each experiment is a pure function of its config: sweep grids are
deterministic, sphere sampling uses a Fibonacci lattice by default, and grid
points can be evaluated in a thread pool without changing the output (rows
are assembled in grid order, never completion order).
"""
from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .cooling import (
    EXACT,
    CoolingStepParams,
    StepEngine,
    bangbang_gamma,
    commutator_gap_estimate,
    logsweep_trotter_number,
    simulate_1p1_probabilities,
    weak_coupling_trotter_number,
)
from .models import (
    CouplingDescriptor,
    build_coupling_operator,
    build_random_axis,
    build_tfim,
    build_two_level,
    tfim_from_ratio,
)
from .operators import (
    basis_state,
    expectation,
    hermitian_eig,
    maximally_mixed,
    pure_state,
)
from .protocols import (
    LogSweepConfig,
    bangbang_schedule,
    default_energy_band,
    logsweep_energies,
    logsweep_linewidths,
    logsweep_schedule,
    run_protocol,
)
from .tables import ResultTable

PHASE_NAMES = {0.2: "paramagnetic", 1.0: "critical", 5.0: "ferromagnetic"}

# column units in natural units (hbar = 1): times are reciprocal energies
TABLE_UNITS = {
    "trotter-curves": {
        "m": "count",
        "t": "1/energy",
        "p_cool": "probability",
        "p_reheat": "probability",
        "p_reheat_exact": "probability",
    },
    "detuning-curves": {
        "mode": "label",
        "gamma": "energy",
        "delta": "energy",
        "p_cool": "probability",
        "p_reheat": "probability",
    },
    "sphere-scan": {
        "sequence": "label",
        "nx": "dimensionless",
        "ny": "dimensionless",
        "nz": "dimensionless",
        "p_final": "probability",
    },
    "sphere-scan-summary": {
        "sequence": "label",
        "mean": "probability",
        "std": "probability",
        "min": "probability",
    },
    "energy-sweep": {
        "j_over_b": "dimensionless",
        "eps": "energy",
        "delta_e": "energy",
        "eps_star": "energy",
    },
    "bangbang-tfim-trajectories": {
        "n": "count",
        "j_over_b": "dimensionless",
        "initial_state": "label",
        "step": "count",
        "fidelity": "probability",
        "energy": "energy",
        "entropy": "bits",
    },
    "bangbang-tfim-final": {
        "n": "count",
        "j_over_b": "dimensionless",
        "f_final": "probability",
    },
    "logsweep-1p1-steps": {
        "j": "count",
        "eps_j": "energy",
        "linewidth_j": "energy",
        "gamma_j": "energy",
        "trotter_m": "count",
        "delta_sys": "energy",
        "p_cool_step": "probability",
        "p_reheat_step": "probability",
    },
    "logsweep-1p1-final": {"delta_sys": "energy", "p_final": "probability"},
    "logsweep-tfim": {
        "phase": "label",
        "n": "count",
        "k": "count",
        "f_final": "probability",
        "one_minus_f": "probability",
    },
}


def _table(name: str, columns: list[str], rows: list[tuple]) -> ResultTable:
    units = TABLE_UNITS[name]
    return ResultTable(
        name=name,
        columns=columns,
        rows=rows,
        meta={"units": [units[c] for c in columns]},
    )


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the field."""


def _phase_label(ratio: float) -> str:
    return PHASE_NAMES.get(float(ratio), f"j_over_b={ratio:g}")


def _map_units(fn: Callable, units: Sequence, threads: int) -> list:
    if threads <= 1 or len(units) <= 1:
        return [fn(u) for u in units]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, units))


def fibonacci_sphere(n: int) -> np.ndarray:
    """n deterministic, roughly uniform points on the unit sphere."""
    i = np.arange(n, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / n
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = i * math.pi * (3.0 - math.sqrt(5.0))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def random_sphere(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    z = rng.uniform(-1.0, 1.0, size=n)
    phi = rng.uniform(0.0, 2.0 * math.pi, size=n)
    r = np.sqrt(1.0 - z * z)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


# ---------------------------------------------------------------------------
# configs


@dataclass(frozen=True)
class TrotterCurvesConfig:
    eps: float = 1.0
    gamma: float = 0.1
    trotter_numbers: tuple[int, ...] = (2, 4, 8)
    t_min: float = 0.25
    t_max: float = 50.5
    t_points: int = 202

    def __post_init__(self):
        if self.eps <= 0:
            raise ConfigError("eps must be > 0")
        if self.gamma <= 0:
            raise ConfigError("gamma must be > 0")
        if not self.trotter_numbers or any(
            (not isinstance(m, int)) or m < 1 for m in self.trotter_numbers
        ):
            raise ConfigError("trotter_numbers must be positive integers")
        if not (0 < self.t_min < self.t_max) or self.t_points < 2:
            raise ConfigError("t grid must satisfy 0 < t_min < t_max, t_points >= 2")


@dataclass(frozen=True)
class DetuningCurvesConfig:
    eps: float = 1.0
    delta_min: float = -0.8
    delta_max: float = 0.8
    delta_points: int = 81
    weak_gammas: tuple[float, ...] = (0.5, 0.2, 0.1)

    def __post_init__(self):
        if self.eps <= 0:
            raise ConfigError("eps must be > 0")
        if self.delta_min >= self.delta_max or self.delta_points < 2:
            raise ConfigError("delta grid must satisfy delta_min < delta_max")
        if self.delta_min <= -self.eps:
            raise ConfigError("delta_min must keep the system gap positive")
        if not self.weak_gammas or any(g <= 0 for g in self.weak_gammas):
            raise ConfigError("weak_gammas must be positive")


@dataclass(frozen=True)
class SphereScanConfig:
    h: float = 1.0
    points: int = 400
    t_times_h: float = 10.0
    sequences: tuple[str, ...] = ("XXX", "XYX", "XYZ")
    sampling: str = "fibonacci"
    seed: int = 7

    def __post_init__(self):
        if self.h <= 0:
            raise ConfigError("h must be > 0")
        if self.points < 1:
            raise ConfigError("points must be >= 1")
        if self.t_times_h <= 0:
            raise ConfigError("t_times_h must be > 0")
        if not self.sequences or any(
            (not seq) or any(a not in "XYZ" for a in seq) for seq in self.sequences
        ):
            raise ConfigError("sequences must be non-empty strings over X, Y, Z")
        if self.sampling not in ("fibonacci", "random"):
            raise ConfigError("sampling must be 'fibonacci' or 'random'")


@dataclass(frozen=True)
class EnergySweepConfig:
    # the eps grid brackets the commutator estimate widely so the scan shows
    # the resonance basin and its silent high-energy tail
    n: int = 8
    ratios: tuple[float, ...] = (0.2, 1.0, 5.0)
    site: int = 3
    eps_points: int = 60
    eps_lo_factor: float = 0.05
    eps_hi_factor: float = 5.0

    def __post_init__(self):
        if self.n < 2:
            raise ConfigError("n must be >= 2")
        if not self.ratios or any(r < 0 for r in self.ratios):
            raise ConfigError("ratios must be >= 0")
        if not (0 <= self.site < self.n):
            raise ConfigError("site must lie in the chain")
        if self.eps_points < 2:
            raise ConfigError("eps_points must be >= 2")
        if not (0 < self.eps_lo_factor < self.eps_hi_factor):
            raise ConfigError("eps factors must satisfy 0 < lo < hi")


@dataclass(frozen=True)
class BangBangTfimConfig:
    n_values: tuple[int, ...] = (3, 4, 5, 6, 7, 8)
    ratios: tuple[float, ...] = (0.2, 1.0, 5.0)
    repetitions: int | None = None  # None means R = N
    degeneracy_tol: float | None = None

    def __post_init__(self):
        if not self.n_values or any(n < 2 for n in self.n_values):
            raise ConfigError("n_values must be >= 2")
        if not self.ratios or any(r < 0 for r in self.ratios):
            raise ConfigError("ratios must be >= 0")
        if self.repetitions is not None and self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")


@dataclass(frozen=True)
class LogSweep1p1Config:
    k: int = 5
    e_min: float = 1.0
    e_max: float = 5.0
    delta_points: int = 50
    linewidth_factor: float = math.pi

    def __post_init__(self):
        if self.k < 2:
            raise ConfigError("k must be >= 2")
        if not (0 < self.e_min < self.e_max):
            raise ConfigError("band must satisfy 0 < e_min < e_max")
        if self.delta_points < 2:
            raise ConfigError("delta_points must be >= 2")
        if self.linewidth_factor <= 0:
            raise ConfigError("linewidth_factor must be > 0")


@dataclass(frozen=True)
class LogSweepTfimConfig:
    k_values: tuple[int, ...] = (5, 10, 20, 40)
    n_fixed: int = 7
    n_values: tuple[int, ...] = (3, 4, 5, 6, 7)
    k_fixed: int = 40
    ratios: tuple[float, ...] = (0.2, 1.0, 5.0)
    linewidth_factor: float = math.pi
    degeneracy_tol: float | None = None

    def __post_init__(self):
        if not self.k_values or any(k < 2 for k in self.k_values):
            raise ConfigError("k_values must be >= 2")
        if self.n_fixed < 2 or self.k_fixed < 2:
            raise ConfigError("n_fixed and k_fixed must be >= 2")
        if any(n < 2 for n in self.n_values):
            raise ConfigError("n_values must be >= 2")
        if not self.ratios or any(r < 0 for r in self.ratios):
            raise ConfigError("ratios must be >= 0")
        if self.linewidth_factor <= 0:
            raise ConfigError("linewidth_factor must be > 0")


# ---------------------------------------------------------------------------
# experiments


def exp_trotter_curves(cfg: TrotterCurvesConfig, threads: int = 1) -> list[ResultTable]:
    """Digitized vs continuous transfer probabilities over the step time.

    Resonant two-level setting; one row per (trotter number, time) with the
    continuous-evolution reheating alongside as a baseline.  The working
    point t = pi/gamma is always part of the time grid.
    """
    ts = np.linspace(cfg.t_min, cfg.t_max, cfg.t_points)
    t_star = math.pi / cfg.gamma
    if cfg.t_min <= t_star <= cfg.t_max:
        ts = np.unique(np.append(ts, t_star))
    exact = [
        simulate_1p1_probabilities(cfg.eps, cfg.eps, cfg.gamma, float(t), EXACT)
        for t in ts
    ]

    def rows_for_m(m: int) -> list[tuple]:
        rows = []
        for t, ex in zip(ts, exact):
            p = simulate_1p1_probabilities(cfg.eps, cfg.eps, cfg.gamma, float(t), m)
            rows.append((m, float(t), p.p_cool, p.p_reheat, ex.p_reheat))
        return rows

    groups = _map_units(rows_for_m, list(cfg.trotter_numbers), threads)
    table = _table(
        "trotter-curves",
        ["m", "t", "p_cool", "p_reheat", "p_reheat_exact"],
        [row for group in groups for row in group],
    )
    return [table]


def exp_detuning_curves(cfg: DetuningCurvesConfig, threads: int = 1) -> list[ResultTable]:
    """Transfer probabilities against fridge-system detuning delta = gap - eps.

    The bang-bang mode keeps gamma = 2*eps with a single split; weak-coupling
    modes evolve continuously at each gamma in the list.
    """
    deltas = np.linspace(cfg.delta_min, cfg.delta_max, cfg.delta_points)

    def rows_for_mode(mode_gamma: tuple[str, float]) -> list[tuple]:
        mode, gamma = mode_gamma
        m = 1 if mode == "bangbang" else EXACT
        t = math.pi / gamma
        rows = []
        for d in deltas:
            p = simulate_1p1_probabilities(cfg.eps + float(d), cfg.eps, gamma, t, m)
            rows.append((mode, gamma, float(d), p.p_cool, p.p_reheat))
        return rows

    units: list[tuple[str, float]] = [("bangbang", bangbang_gamma(cfg.eps))]
    units += [("weak", g) for g in cfg.weak_gammas]
    groups = _map_units(rows_for_mode, units, threads)
    table = _table(
        "detuning-curves",
        ["mode", "gamma", "delta", "p_cool", "p_reheat"],
        [row for group in groups for row in group],
    )
    return [table]


def _sphere_point_final(axis: np.ndarray, h: float, t_times_h: float, seq: str) -> float:
    h_s = build_random_axis(h, axis)
    eig = hermitian_eig(h_s)
    eps = float(eig.eigenvalues[-1] - eig.eigenvalues[0])  # resonant with the gap
    t = t_times_h / h  # working point measured against the axis strength
    gamma = math.pi / t
    m = weak_coupling_trotter_number(eps, gamma)
    engine = StepEngine(h_s)
    rho = np.outer(eig.eigenvectors[:, 1], eig.eigenvectors[:, 1].conj())
    for axis_name in seq:
        params = CoolingStepParams(
            eps=eps, gamma=gamma, coupling=CouplingDescriptor(axis_name, 0), trotter_m=m
        )
        rho = engine.apply(rho, params)
    ground = eig.eigenvectors[:, 0]
    return float(np.real(ground.conj() @ rho @ ground))


def exp_sphere_scan(cfg: SphereScanConfig, threads: int = 1) -> list[ResultTable]:
    """Cooling of a random-axis qubit under alternating coupling axes.

    For every direction on a deterministic sphere grid, starts in the excited
    eigenstate and reports the ground-state population after one digitized
    weak-coupling step per axis in the sequence.  The fridge energy is the
    spectral gap of the instance; the step time is t_times_h / h.
    """
    if cfg.sampling == "fibonacci":
        points = fibonacci_sphere(cfg.points)
    else:
        points = random_sphere(cfg.points, cfg.seed)

    def rows_for_seq(seq: str) -> list[tuple]:
        return [
            (
                seq,
                float(p[0]),
                float(p[1]),
                float(p[2]),
                _sphere_point_final(p, cfg.h, cfg.t_times_h, seq),
            )
            for p in points
        ]

    groups = _map_units(rows_for_seq, list(cfg.sequences), threads)
    main = _table(
        "sphere-scan",
        ["sequence", "nx", "ny", "nz", "p_final"],
        [row for group in groups for row in group],
    )
    summary_rows = []
    for seq, group in zip(cfg.sequences, groups):
        finals = np.array([row[4] for row in group])
        summary_rows.append(
            (seq, float(np.mean(finals)), float(np.std(finals)), float(np.min(finals)))
        )
    summary = _table(
        "sphere-scan-summary", ["sequence", "mean", "std", "min"], summary_rows
    )
    return [main, summary]


def exp_energy_sweep(cfg: EnergySweepConfig, threads: int = 1) -> list[ResultTable]:
    """Energy change of one M=1 step on the maximally mixed chain vs eps.

    The grid brackets the commutator estimate eps*, which is echoed per row so
    the minimum's placement can be checked against it.
    """

    def rows_for_ratio(ratio: float) -> list[tuple]:
        h_s = build_tfim(tfim_from_ratio(cfg.n, ratio))
        coupling = CouplingDescriptor("Y", cfg.site)
        eps_star = commutator_gap_estimate(h_s, build_coupling_operator(coupling, cfg.n))
        engine = StepEngine(h_s)
        rho_mixed = maximally_mixed(cfg.n)
        e_before = expectation(rho_mixed, h_s)
        eps_grid = np.linspace(
            cfg.eps_lo_factor * eps_star, cfg.eps_hi_factor * eps_star, cfg.eps_points
        )
        rows = []
        for eps in eps_grid:
            params = CoolingStepParams(
                eps=float(eps),
                gamma=bangbang_gamma(float(eps)),
                coupling=coupling,
                trotter_m=1,
            )
            rho_after = engine.apply(rho_mixed.mat, params)
            e_after = float(np.real(np.einsum("ij,ji->", h_s.mat, rho_after)))
            rows.append((float(ratio), float(eps), e_after - e_before, eps_star))
        return rows

    groups = _map_units(rows_for_ratio, list(cfg.ratios), threads)
    table = _table(
        "energy-sweep",
        ["j_over_b", "eps", "delta_e", "eps_star"],
        [row for group in groups for row in group],
    )
    return [table]


def exp_bangbang_tfim(cfg: BangBangTfimConfig, threads: int = 1) -> list[ResultTable]:
    """Bang-bang protocol on transverse-field Ising chains.

    Emits per-step trajectories from the maximally mixed state and from the
    ground state (the reheating baseline), plus final fidelities of the
    mixed-state runs.
    """

    def run_instance(unit: tuple[int, float]) -> tuple[list[tuple], tuple]:
        n, ratio = unit
        h_s = build_tfim(tfim_from_ratio(n, ratio))
        r = cfg.repetitions if cfg.repetitions is not None else n
        schedule = bangbang_schedule(h_s, n, r)
        engine = StepEngine(h_s)
        traj_rows: list[tuple] = []
        finals = {}
        eig = hermitian_eig(h_s)
        starts = {
            "mixed": maximally_mixed(n),
            "ground": pure_state(eig.eigenvectors[:, 0]),
        }
        for tag, rho_0 in starts.items():
            records = run_protocol(
                rho_0,
                schedule,
                h_s,
                degeneracy_tol=cfg.degeneracy_tol,
                engine=engine,
            )
            for rec in records:
                traj_rows.append(
                    (n, float(ratio), tag, rec.step, rec.fidelity, rec.energy, rec.entropy)
                )
            finals[tag] = records[-1].fidelity
        return traj_rows, (n, float(ratio), finals["mixed"])

    units = [(n, r) for n in cfg.n_values for r in cfg.ratios]
    results = _map_units(run_instance, units, threads)
    trajectories = _table(
        "bangbang-tfim-trajectories",
        ["n", "j_over_b", "initial_state", "step", "fidelity", "energy", "entropy"],
        [row for traj, _ in results for row in traj],
    )
    final = _table(
        "bangbang-tfim-final",
        ["n", "j_over_b", "f_final"],
        [fin for _, fin in results],
    )
    return [trajectories, final]


def _logsweep_1p1_schedule(cfg: LogSweep1p1Config) -> list[CoolingStepParams]:
    """K single-coupling (X) sweep steps for the two-level target."""
    energies = logsweep_energies(LogSweepConfig(k=cfg.k, e_min=cfg.e_min, e_max=cfg.e_max))
    _, gammas = logsweep_linewidths(energies, cfg.linewidth_factor)
    steps = []
    for eps_j, gamma_j in zip(energies, gammas):
        m_j = logsweep_trotter_number(float(eps_j), float(gamma_j), cfg.e_max)
        steps.append(
            CoolingStepParams(
                eps=float(eps_j),
                gamma=float(gamma_j),
                coupling=CouplingDescriptor("X", 0),
                trotter_m=m_j,
            )
        )
    return steps


def exp_logsweep_1p1(cfg: LogSweep1p1Config, threads: int = 1) -> list[ResultTable]:
    """Energy sweep against a two-level system of unknown gap inside the band.

    The steps table holds each sweep step alone (band tiling plus transfer
    probabilities per system gap); the final table holds the ground-state
    population after the whole sweep is applied in order to the excited state.
    """
    energies = logsweep_energies(LogSweepConfig(k=cfg.k, e_min=cfg.e_min, e_max=cfg.e_max))
    deltas_lw, gammas = logsweep_linewidths(energies, cfg.linewidth_factor)
    steps = _logsweep_1p1_schedule(cfg)
    gap_grid = np.linspace(cfg.e_min, cfg.e_max, cfg.delta_points)

    def rows_for_gap(gap: float) -> tuple[list[tuple], tuple]:
        step_rows = []
        for j, p in enumerate(steps, start=1):
            probs = simulate_1p1_probabilities(gap, p.eps, p.gamma, p.time, p.trotter_m)
            step_rows.append(
                (
                    j,
                    p.eps,
                    float(deltas_lw[j - 1]),
                    p.gamma,
                    int(p.trotter_m),
                    float(gap),
                    probs.p_cool,
                    probs.p_reheat,
                )
            )
        h_s = build_two_level(float(gap))
        engine = StepEngine(h_s)
        rho = basis_state(2, 1).mat
        for p in steps:
            rho = engine.apply(rho, p)
        return step_rows, (float(gap), float(np.real(rho[0, 0])))

    results = _map_units(rows_for_gap, [float(g) for g in gap_grid], threads)
    steps_table = _table(
        "logsweep-1p1-steps",
        [
            "j",
            "eps_j",
            "linewidth_j",
            "gamma_j",
            "trotter_m",
            "delta_sys",
            "p_cool_step",
            "p_reheat_step",
        ],
        [row for step_rows, _ in results for row in step_rows],
    )
    final_table = _table(
        "logsweep-1p1-final", ["delta_sys", "p_final"], [fin for _, fin in results]
    )
    return [steps_table, final_table]


def exp_logsweep_tfim(cfg: LogSweepTfimConfig, threads: int = 1) -> list[ResultTable]:
    """Final ground-manifold fidelity of the energy sweep on Ising chains.

    Sweeps the rung count at fixed size and the size at fixed rung count for
    each phase, starting from the maximally mixed state.  The band is derived
    per instance: smallest gap above the ground manifold up to the largest
    commutator estimate over all single-qubit couplings.
    """

    def run_instance(unit: tuple[float, int, int]) -> tuple:
        ratio, n, k = unit
        h_s = build_tfim(tfim_from_ratio(n, ratio))
        couplings = tuple(
            CouplingDescriptor(axis, site) for site in range(n) for axis in "XYZ"
        )
        e_min, e_max = default_energy_band(h_s, couplings, cfg.degeneracy_tol)
        sweep = LogSweepConfig(
            k=k, e_min=e_min, e_max=e_max, linewidth_factor=cfg.linewidth_factor
        )
        schedule = logsweep_schedule(h_s, n, sweep)
        records = run_protocol(
            maximally_mixed(n), schedule, h_s, degeneracy_tol=cfg.degeneracy_tol
        )
        f_final = records[-1].fidelity
        return (_phase_label(ratio), n, k, f_final, 1.0 - f_final)

    units = [(r, cfg.n_fixed, k) for r in cfg.ratios for k in cfg.k_values]
    covered = {(cfg.n_fixed, k) for k in cfg.k_values}
    units += [
        (r, n, cfg.k_fixed)
        for r in cfg.ratios
        for n in cfg.n_values
        if (n, cfg.k_fixed) not in covered
    ]
    rows = _map_units(run_instance, units, threads)
    table = _table(
        "logsweep-tfim", ["phase", "n", "k", "f_final", "one_minus_f"], rows
    )
    return [table]


# ---------------------------------------------------------------------------
# registry

EXPERIMENTS: dict[str, tuple[type, Callable]] = {
    "trotter-curves": (TrotterCurvesConfig, exp_trotter_curves),
    "detuning-curves": (DetuningCurvesConfig, exp_detuning_curves),
    "sphere-scan": (SphereScanConfig, exp_sphere_scan),
    "energy-sweep": (EnergySweepConfig, exp_energy_sweep),
    "bangbang-tfim": (BangBangTfimConfig, exp_bangbang_tfim),
    "logsweep-1p1": (LogSweep1p1Config, exp_logsweep_1p1),
    "logsweep-tfim": (LogSweepTfimConfig, exp_logsweep_tfim),
}


def config_from_dict(experiment: str, data: dict):
    """Build an experiment config from parsed key-value data.

    Unknown keys are errors; sequence values are normalized to tuples.
    """
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    cls = EXPERIMENTS[experiment][0]
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"unknown config key {unknown[0]!r} for {experiment}")
    kwargs = {}
    for key, value in data.items():
        if isinstance(value, list):
            value = tuple(value)
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def run_experiment(experiment: str, cfg, threads: int = 1) -> list[ResultTable]:
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    return EXPERIMENTS[experiment][1](cfg, threads=threads)
