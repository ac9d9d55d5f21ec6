"""Dense operator and density-matrix primitives for qubit-register simulation.

Register convention: qubit 0 is the most significant bit of the basis index.
An ancilla ("fridge") qubit, when present, is always the last qubit and hence
the least significant bit, which keeps appending and partial tracing
contiguous-stride operations.

All matrix exponentials go through a Hermitian eigendecomposition, so evolved
operators are unitary by construction instead of up to a series truncation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITIAN_RTOL = 1e-12
UNITARY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_FLOOR = -1e-10
ENTROPY_FLOOR = 1e-12

_ROLES = ("general", "hermitian", "unitary")


def _as_square_matrix(mat) -> np.ndarray:
    a = np.array(mat, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    a.flags.writeable = False
    return a


def max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_hermitian(mat: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    scale = max_abs(mat)
    return max_abs(mat - mat.conj().T) <= rtol * max(scale, 1e-300)


def is_unitary(mat: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    eye = np.eye(mat.shape[0])
    return max_abs(mat @ mat.conj().T - eye) <= tol


@dataclass(frozen=True)
class DenseOperator:
    """Square complex matrix over a qubit register, tagged with its role.

    The role tag is validated at construction: a ``hermitian`` operator must
    equal its conjugate transpose to 1e-12 (relative), a ``unitary`` one must
    satisfy ``U U+ = 1`` to 1e-10 in max-entry norm.
    """

    mat: np.ndarray
    role: str = "general"

    def __post_init__(self):
        object.__setattr__(self, "mat", _as_square_matrix(self.mat))
        if self.role not in _ROLES:
            raise ValueError(f"unknown operator role {self.role!r}")
        if self.role == "hermitian" and not is_hermitian(self.mat):
            raise ValueError("operator tagged hermitian is not Hermitian")
        if self.role == "unitary" and not is_unitary(self.mat):
            raise ValueError("operator tagged unitary is not unitary")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


def hermitian(mat) -> DenseOperator:
    return DenseOperator(mat, role="hermitian")


def unitary(mat) -> DenseOperator:
    return DenseOperator(mat, role="unitary")


def identity(dim: int) -> DenseOperator:
    return DenseOperator(np.eye(dim, dtype=complex), role="unitary")


@dataclass(frozen=True)
class DensityMatrix:
    """Quantum state rho: unit trace, Hermitian, positive semidefinite.

    Positivity is asserted at construction, never repaired; an eigenvalue
    below -1e-10 is treated as a bug in the producing channel, not as data
    to clip.
    """

    mat: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mat", _as_square_matrix(self.mat))
        tr = complex(np.trace(self.mat))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr} is not 1")
        if not is_hermitian(self.mat):
            raise ValueError("density matrix is not Hermitian")
        lo = float(np.min(np.linalg.eigvalsh(self.mat)))
        if lo < POSITIVITY_FLOOR:
            raise ValueError(f"density matrix has negative eigenvalue {lo}")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def n_qubits(self) -> int:
        return int(round(math.log2(self.dim)))


def pure_state(vec) -> DensityMatrix:
    """|v><v| for a normalized state vector."""
    v = np.asarray(vec, dtype=complex).ravel()
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"state vector norm {norm} is not 1")
    return DensityMatrix(np.outer(v, v.conj()))


def basis_state(dim: int, index: int) -> DensityMatrix:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return DensityMatrix(np.outer(v, v.conj()))


def maximally_mixed(n_qubits: int) -> DensityMatrix:
    dim = 2**n_qubits
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and the matching unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def kron(a: DenseOperator, b: DenseOperator) -> DenseOperator:
    """Tensor product a (x) b; the right factor is the low-order register."""
    role = "general"
    if a.role == b.role and a.role in ("hermitian", "unitary"):
        role = a.role
    return DenseOperator(np.kron(a.mat, b.mat), role=role)


def hermitian_eig(h: DenseOperator) -> EigenSystem:
    """Eigendecomposition of a Hermitian operator, eigenvalues ascending."""
    if h.role != "hermitian":
        raise ValueError("hermitian_eig requires a hermitian-tagged operator")
    vals, vecs = np.linalg.eigh(h.mat)
    return EigenSystem(eigenvalues=vals, eigenvectors=vecs)


def _evolve_mat(eig: EigenSystem, t: float) -> np.ndarray:
    phases = np.exp(-1j * eig.eigenvalues * t)
    return (eig.eigenvectors * phases[None, :]) @ eig.eigenvectors.conj().T


def evolve(h: DenseOperator, t: float, eig: EigenSystem | None = None) -> DenseOperator:
    """exp(-i h t) via the eigendecomposition of h (unitary by construction)."""
    if eig is None:
        eig = hermitian_eig(h)
    return DenseOperator(_evolve_mat(eig, t), role="unitary")


def conjugate(rho: DensityMatrix, u: DenseOperator) -> DensityMatrix:
    """U rho U+ for unitary U; trace and spectrum are preserved."""
    if u.role != "unitary":
        raise ValueError("conjugate requires a unitary-tagged operator")
    if u.dim != rho.dim:
        raise ValueError(f"dimension mismatch: state {rho.dim}, unitary {u.dim}")
    return DensityMatrix(u.mat @ rho.mat @ u.mat.conj().T)


def append_fridge_ground(rho_s: DensityMatrix) -> DensityMatrix:
    """rho_S (x) |0><0| with the fridge as the last (least significant) qubit."""
    fridge = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    return DensityMatrix(np.kron(rho_s.mat, fridge))


def trace_out_fridge(rho: DensityMatrix) -> DensityMatrix:
    """Partial trace over the last qubit."""
    if rho.dim % 2 != 0:
        raise ValueError(f"state of dimension {rho.dim} has no fridge qubit")
    half = rho.dim // 2
    blocks = rho.mat.reshape(half, 2, half, 2)
    return DensityMatrix(np.einsum("ifjf->ij", blocks))


def default_degeneracy_tol(eigenvalues: np.ndarray) -> float:
    """Energy window treated as degenerate: 1e-3 of the spectral range."""
    return 1e-3 * float(eigenvalues[-1] - eigenvalues[0])


def ground_manifold_projector(
    h: DenseOperator, degeneracy_tol: float | None = None
) -> DenseOperator:
    """Projector onto all eigenstates within `degeneracy_tol` of the lowest.

    With the default tolerance (1e-3 of the spectral range) a quasi-degenerate
    low-lying doublet counts as ground manifold while true excitations do not.
    """
    eig = hermitian_eig(h)
    if degeneracy_tol is None:
        degeneracy_tol = default_degeneracy_tol(eig.eigenvalues)
    sel = eig.eigenvalues - eig.eigenvalues[0] <= degeneracy_tol
    vecs = eig.eigenvectors[:, sel]
    return DenseOperator(vecs @ vecs.conj().T, role="hermitian")


def fidelity(rho: DensityMatrix, p: DenseOperator) -> float:
    """Trace[P rho] for an orthogonal projector P, clamped into [0, 1]."""
    val = float(np.real(np.einsum("ij,ji->", p.mat, rho.mat)))
    return min(max(val, 0.0), 1.0)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in bits; eigenvalues below 1e-12 contribute nothing."""
    vals = np.linalg.eigvalsh(rho.mat)
    vals = vals[vals > ENTROPY_FLOOR]
    s = float(-np.sum(vals * np.log2(vals)))
    return min(max(s, 0.0), math.log2(rho.dim))


def entropy_from_eigenvalues(vals: np.ndarray, dim: int) -> float:
    vals = vals[vals > ENTROPY_FLOOR]
    s = float(-np.sum(vals * np.log2(vals)))
    return min(max(s, 0.0), math.log2(dim))


def expectation(rho: DensityMatrix, o: DenseOperator) -> float:
    """Trace[O rho] for Hermitian O."""
    if o.role != "hermitian":
        raise ValueError("expectation requires a hermitian-tagged observable")
    if o.dim != rho.dim:
        raise ValueError(f"dimension mismatch: state {rho.dim}, observable {o.dim}")
    val = complex(np.einsum("ij,ji->", o.mat, rho.mat))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"expectation value has imaginary part {val.imag}")
    return float(val.real)
