"""Hamiltonian and coupling-operator constructors.

Sign convention: the reset state |0> of any qubit that plays the role of an
energy reservoir is its *ground* state.  The two-level builder and the fridge
term of the joint Hamiltonian therefore carry ``-(energy/2) Z`` with the
standard Pauli Z = diag(1, -1), so that exciting a qubit |0> -> |1> absorbs
one quantum.  Multi-qubit model Hamiltonians are built exactly as written,
with open boundaries and hbar = 1 throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import DenseOperator, hermitian

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = {"X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}
AXES = ("X", "Y", "Z")


@dataclass(frozen=True)
class TfimParams:
    """Transverse-field Ising chain parameters: n sites, field b, bond j."""

    n: int
    b: float
    j: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")


def tfim_from_ratio(n: int, ratio: float) -> TfimParams:
    """Normalized chain parameters with b**2 + j**2 = 1 and j/b = ratio."""
    if ratio < 0:
        raise ValueError(f"ratio must be >= 0, got {ratio}")
    b = 1.0 / math.sqrt(1.0 + ratio * ratio)
    return TfimParams(n=n, b=b, j=ratio * b)


@dataclass(frozen=True)
class CouplingDescriptor:
    """Single-qubit Pauli coupling: `axis` in {X, Y, Z} acting on `site`."""

    axis: str
    site: int

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if self.site < 0:
            raise ValueError(f"site must be >= 0, got {self.site}")


def build_two_level(gap: float) -> DenseOperator:
    """Single-qubit system with spectral gap `gap`.

    |0> is the ground state at -gap/2 and |1> the excited state at +gap/2,
    matching the fridge-reset convention of the cooling channel.
    """
    if gap <= 0:
        raise ValueError(f"gap must be > 0, got {gap}")
    return hermitian(-(gap / 2.0) * PAULI_Z)


def build_random_axis(h: float, axis) -> DenseOperator:
    """h * (n . sigma) for a unit vector n; eigenvalues are -h and +h."""
    if h <= 0:
        raise ValueError(f"h must be > 0, got {h}")
    n = np.asarray(axis, dtype=float).ravel()
    if n.shape != (3,):
        raise ValueError(f"axis must be a 3-vector, got shape {n.shape}")
    if abs(float(np.linalg.norm(n)) - 1.0) > 1e-12:
        raise ValueError("axis must be a unit vector")
    return hermitian(h * (n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z))


def _single_site(op: np.ndarray, site: int, n: int) -> np.ndarray:
    full = np.eye(1, dtype=complex)
    for i in range(n):
        full = np.kron(full, op if i == site else PAULI_I)
    return full


def build_tfim(p: TfimParams) -> DenseOperator:
    """Open-boundary chain: sum_i b*X_i + sum_i j*Z_i Z_{i+1}."""
    dim = 2**p.n
    h = np.zeros((dim, dim), dtype=complex)
    for i in range(p.n):
        h += p.b * _single_site(PAULI_X, i, p.n)
    for i in range(p.n - 1):
        h += p.j * (_single_site(PAULI_Z, i, p.n) @ _single_site(PAULI_Z, i + 1, p.n))
    return hermitian(h)


def build_coupling_operator(c: CouplingDescriptor, n: int) -> DenseOperator:
    """Pauli `c.axis` on qubit `c.site` of an n-qubit register."""
    if c.site >= n:
        raise ValueError(f"site {c.site} out of range for {n} qubits")
    return hermitian(_single_site(PAULIS[c.axis], c.site, n))


def assemble_full_hamiltonian(
    h_s: DenseOperator, eps: float, gamma: float, v_s: DenseOperator
) -> DenseOperator:
    """Joint system-fridge Hamiltonian with the fridge as the last qubit.

    H = h_s (x) 1  -  (eps/2) 1 (x) Z_F  +  (gamma/2) v_s (x) X_F.

    The fridge term's sign places the reset state |0>_F at energy -eps/2, so
    a fridge excitation absorbs the quantum eps from the system.
    """
    if v_s.role != "hermitian":
        raise ValueError("coupling term must be hermitian-tagged")
    if v_s.dim != h_s.dim:
        raise ValueError(f"dimension mismatch: system {h_s.dim}, coupling {v_s.dim}")
    eye_s = np.eye(h_s.dim, dtype=complex)
    h = (
        np.kron(h_s.mat, PAULI_I)
        - (eps / 2.0) * np.kron(eye_s, PAULI_Z)
        + (gamma / 2.0) * np.kron(v_s.mat, PAULI_X)
    )
    return hermitian(h)
