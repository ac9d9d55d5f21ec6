"""Single cooling step: parameter solvers, digitized evolution, channels.

One cooling step couples the system to a fresh fridge qubit in |0>, evolves
the joint register for t = pi/gamma (so a resonant transition is transferred
with probability one), and traces the fridge back out.  The digitized
evolution splits exp(-iHt) into M symmetric coupling-drift-coupling cycles

    U = [A_half B A_half]^M,  A_half = exp(-i H_C t/(2M)),
                              B = exp(-i (H_S+H_B) t/M),

whose M = 1 limit is the bang-bang sandwich.  The half-step placement of the
coupling factors makes the product second order in 1/M, which the
convergence contract of `build_step_unitary` relies on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .models import (
    PAULI_X,
    CouplingDescriptor,
    assemble_full_hamiltonian,
    build_coupling_operator,
    build_two_level,
)
from .operators import (
    DenseOperator,
    DensityMatrix,
    EigenSystem,
    append_fridge_ground,
    conjugate,
    evolve,
    hermitian,
    hermitian_eig,
    trace_out_fridge,
)

EXACT = "exact"

# Trotter-number formulas are lower bounds; the minimal compliant integer is
# ceil up to round-off, so exact-limit values like 2.0 + 1e-12 stay at 2.
_CEIL_TOL = 1e-9


def _ceil_bound(x: float) -> int:
    return max(1, math.ceil(x - _CEIL_TOL))


def coupling_time(gamma: float) -> float:
    """Step duration t = pi/gamma that maximizes the resonant transfer."""
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    return math.pi / gamma


def rabi_frequency(gamma: float, eps: float) -> float:
    """Off-resonant oscillation frequency sqrt(gamma^2/4 + eps^2)."""
    return math.sqrt(gamma * gamma / 4.0 + eps * eps)


class TransitionProbabilities(NamedTuple):
    p_cool: float
    p_reheat: float


def analytic_resonant_probabilities(
    gamma: float, eps: float, t: float
) -> TransitionProbabilities:
    """Closed-form transfer probabilities when the fridge matches the gap.

    The de-excitation channel oscillates at gamma/2; the excitation channel
    is detuned by 2*eps and bounded by gamma^2 / (4 Omega^2).
    """
    omega = rabi_frequency(gamma, eps)
    p_cool = math.sin(gamma * t / 2.0) ** 2
    p_reheat = (gamma * math.sin(t * omega)) ** 2 / (4.0 * omega * omega)
    return TransitionProbabilities(p_cool=p_cool, p_reheat=p_reheat)


def strong_coupling_gamma(eps: float) -> float:
    """Coupling that makes the excitation channel complete a full 2*pi cycle.

    At gamma = (2/sqrt(3)) eps the product Omega * t equals pi, which pins
    the reheating probability of the continuous evolution to zero.
    """
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    return 2.0 / math.sqrt(3.0) * eps


def bangbang_gamma(eps: float) -> float:
    """Coupling gamma = 2*eps used by the single-split (M=1) step."""
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    return 2.0 * eps


def weak_coupling_trotter_number(eps: float, gamma: float) -> int:
    """Smallest M >= 2*sqrt(1 + eps^2/gamma^2).

    Keeps the working point t = pi/gamma before the M/2-th off-resonant
    oscillation, where the first-order split still tracks the continuum.
    """
    if eps <= 0 or gamma <= 0:
        raise ValueError("eps and gamma must be > 0")
    return _ceil_bound(2.0 * math.sqrt(1.0 + (eps / gamma) ** 2))


def logsweep_trotter_number(eps_j: float, gamma_j: float, e_max: float) -> int:
    """Trotter number for a sweep step that may sit below the largest gap.

    M >= 2*sqrt(1 + ((eps_j + e_max)/2)^2 / gamma_j^2) guards against
    digitization reheating of transitions as high as e_max.
    """
    if eps_j <= 0 or gamma_j <= 0 or e_max <= 0:
        raise ValueError("eps_j, gamma_j and e_max must be > 0")
    mid = (eps_j / 2.0 + e_max / 2.0) ** 2
    return _ceil_bound(2.0 * math.sqrt(1.0 + mid / gamma_j**2))


def perpendicular_norm(o: DenseOperator) -> float:
    """Half the spectral spread of a Hermitian operator.

    Equals the largest off-diagonal element the operator can have in any
    basis: max over orthonormal pairs of |<phi|O|psi>|.
    """
    if o.role != "hermitian":
        raise ValueError("perpendicular_norm requires a hermitian operator")
    vals = np.linalg.eigvalsh(o.mat)
    return float(vals[-1] - vals[0]) / 2.0


def commutator_gap_estimate(h_s: DenseOperator, v_s: DenseOperator) -> float:
    """Largest transition energy the coupling v_s reaches with O(1) weight.

    Computed as the perpendicular norm of i[v_s, h_s]; used as the fridge
    energy of single-shot de-excitation steps.
    """
    if h_s.dim != v_s.dim:
        raise ValueError(f"dimension mismatch: {h_s.dim} vs {v_s.dim}")
    if h_s.role != "hermitian" or v_s.role != "hermitian":
        raise ValueError("both operators must be hermitian-tagged")
    comm = 1j * (v_s.mat @ h_s.mat - h_s.mat @ v_s.mat)
    return perpendicular_norm(hermitian(comm))


@dataclass(frozen=True)
class CoolingStepParams:
    """Parameters of one cooling step.

    `time` defaults to pi/gamma and is validated against it; `trotter_m` is a
    positive Trotter number or the string "exact" for continuous evolution.
    """

    eps: float
    gamma: float
    coupling: CouplingDescriptor
    trotter_m: int | str = EXACT
    time: float | None = None

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError(f"eps must be > 0, got {self.eps}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.trotter_m != EXACT:
            if not isinstance(self.trotter_m, int) or self.trotter_m < 1:
                raise ValueError("trotter_m must be a positive int or 'exact'")
        t_star = coupling_time(self.gamma)
        if self.time is None:
            object.__setattr__(self, "time", t_star)
        elif abs(self.time - t_star) > 1e-12 * t_star:
            raise ValueError(f"time {self.time} violates t = pi/gamma = {t_star}")


def _coupling_unitary_mat(vx: np.ndarray, gamma: float, tau: float) -> np.ndarray:
    # (v (x) X)^2 = 1 for a Pauli coupling, so the exponential closes in
    # {1, v (x) X}.
    theta = gamma * tau / 2.0
    return math.cos(theta) * np.eye(vx.shape[0]) - 1j * math.sin(theta) * vx


def _system_fridge_unitary_mat(
    eig_s: EigenSystem, eps: float, tau: float
) -> np.ndarray:
    u_s = (eig_s.eigenvectors * np.exp(-1j * eig_s.eigenvalues * tau)[None, :]) @ (
        eig_s.eigenvectors.conj().T
    )
    # exp(-i(-eps/2 Z) tau) on the fridge qubit
    u_f = np.diag([np.exp(1j * eps * tau / 2.0), np.exp(-1j * eps * tau / 2.0)])
    return np.kron(u_s, u_f)


def _trotter_product(a_half: np.ndarray, a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    # [A_half B A_half]^M with interior half-step pairs merged into full steps
    inner = np.linalg.matrix_power(b @ a, m - 1) if m > 1 else np.eye(a.shape[0])
    return a_half @ inner @ b @ a_half


def _step_unitary_mat(
    h_s: DenseOperator,
    coupling: CouplingDescriptor,
    eps: float,
    gamma: float,
    t: float,
    trotter_m: int | str,
) -> np.ndarray:
    n = int(round(math.log2(h_s.dim)))
    v_s = build_coupling_operator(coupling, n)
    if trotter_m == EXACT:
        h_full = assemble_full_hamiltonian(h_s, eps, gamma, v_s)
        return evolve(h_full, t).mat
    m = int(trotter_m)
    vx = np.kron(v_s.mat, PAULI_X)
    a_half = _coupling_unitary_mat(vx, gamma, t / (2 * m))
    a = _coupling_unitary_mat(vx, gamma, t / m)
    b = _system_fridge_unitary_mat(hermitian_eig(h_s), eps, t / m)
    return _trotter_product(a_half, a, b, m)


def build_step_unitary(h_s: DenseOperator, params: CoolingStepParams) -> DenseOperator:
    """Joint unitary of one step, exact or digitized per `params.trotter_m`."""
    mat = _step_unitary_mat(
        h_s, params.coupling, params.eps, params.gamma, params.time, params.trotter_m
    )
    return DenseOperator(mat, role="unitary")


def cooling_step(
    rho_s: DensityMatrix, h_s: DenseOperator, params: CoolingStepParams
) -> DensityMatrix:
    """Append the fridge in |0>, evolve jointly, trace the fridge out."""
    if rho_s.dim != h_s.dim:
        raise ValueError(f"dimension mismatch: state {rho_s.dim}, system {h_s.dim}")
    joint = append_fridge_ground(rho_s)
    joint = conjugate(joint, build_step_unitary(h_s, params))
    return trace_out_fridge(joint)


def _apply_channel(u: np.ndarray, rho: np.ndarray) -> np.ndarray:
    # Equivalent to append |0><0|, conjugate by u, trace out the fridge:
    # rho' = sum_f K_f rho K_f+ with K_f = <f| u |0>_F.
    k0 = u[0::2, 0::2]
    k1 = u[1::2, 0::2]
    return k0 @ rho @ k0.conj().T + k1 @ rho @ k1.conj().T


class StepEngine:
    """Caches step unitaries and the system eigenbasis for repeated steps.

    Equivalent to `cooling_step` (validated in tests) but keeps factor and
    step unitaries keyed on the step parameters, which pays off when the same
    schedule is replayed from several initial states.
    """

    def __init__(self, h_s: DenseOperator, max_cache_entries: int | None = None):
        if h_s.role != "hermitian":
            raise ValueError("system Hamiltonian must be hermitian-tagged")
        self.h_s = h_s
        self.n = int(round(math.log2(h_s.dim)))
        self._eig = hermitian_eig(h_s)
        if max_cache_entries is None:
            # bound the cache by roughly 64 MiB of unitaries
            max_cache_entries = max(4, 2**22 // (h_s.dim * h_s.dim))
        self._max = max_cache_entries
        self._unitaries: dict[tuple, np.ndarray] = {}
        self._couplings: dict[tuple[str, int], np.ndarray] = {}

    def _vx(self, c: CouplingDescriptor) -> np.ndarray:
        key = (c.axis, c.site)
        if key not in self._couplings:
            v_s = build_coupling_operator(c, self.n)
            self._couplings[key] = np.kron(v_s.mat, PAULI_X)
        return self._couplings[key]

    def step_unitary(self, p: CoolingStepParams) -> np.ndarray:
        key = (p.eps, p.gamma, p.time, p.trotter_m, p.coupling.axis, p.coupling.site)
        cached = self._unitaries.get(key)
        if cached is not None:
            return cached
        if p.trotter_m == EXACT:
            v_s = build_coupling_operator(p.coupling, self.n)
            h_full = assemble_full_hamiltonian(self.h_s, p.eps, p.gamma, v_s)
            u = evolve(h_full, p.time).mat
        else:
            m = int(p.trotter_m)
            vx = self._vx(p.coupling)
            a_half = _coupling_unitary_mat(vx, p.gamma, p.time / (2 * m))
            a = _coupling_unitary_mat(vx, p.gamma, p.time / m)
            b = _system_fridge_unitary_mat(self._eig, p.eps, p.time / m)
            u = _trotter_product(a_half, a, b, m)
        if len(self._unitaries) >= self._max:
            self._unitaries.pop(next(iter(self._unitaries)))
        self._unitaries[key] = u
        return u

    def apply(self, rho: np.ndarray, p: CoolingStepParams) -> np.ndarray:
        return _apply_channel(self.step_unitary(p), rho)


def simulate_1p1_probabilities(
    delta_system: float,
    eps: float,
    gamma: float,
    t: float,
    trotter_m: int | str = EXACT,
) -> TransitionProbabilities:
    """Two-level transfer probabilities measured through the full channel.

    p_cool is the ground-state population after one step applied to the
    excited state |1><1|; p_reheat the excited-state population when starting
    from the ground state |0><0|.  The time is free here (it is swept in the
    digitization and detuning diagnostics), unlike in schedule steps.
    """
    if delta_system <= 0 or eps <= 0 or gamma <= 0 or t <= 0:
        raise ValueError("all parameters must be > 0")
    h_s = build_two_level(delta_system)
    u = _step_unitary_mat(
        h_s, CouplingDescriptor("X", 0), eps, gamma, t, trotter_m
    )
    excited = np.array([[0, 0], [0, 1]], dtype=complex)
    ground = np.array([[1, 0], [0, 0]], dtype=complex)
    p_cool = float(np.real(_apply_channel(u, excited)[0, 0]))
    p_reheat = float(np.real(_apply_channel(u, ground)[1, 1]))
    return TransitionProbabilities(
        p_cool=min(max(p_cool, 0.0), 1.0),
        p_reheat=min(max(p_reheat, 0.0), 1.0),
    )
