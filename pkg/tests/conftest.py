"""Shared test helpers: random states/unitaries and independent oracles."""
from __future__ import annotations

import math

import numpy as np
import pytest

from qdcool.operators import DensityMatrix, DenseOperator


def random_density(rng: np.random.Generator, dim: int) -> DensityMatrix:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho))


def random_unitary(rng: np.random.Generator, dim: int) -> DenseOperator:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))[None, :]
    return DenseOperator(q, role="unitary")


def random_hermitian(rng: np.random.Generator, dim: int) -> DenseOperator:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return DenseOperator((g + g.conj().T) / 2.0, role="hermitian")


def jacobi_eigenvalues(a: np.ndarray, sweeps: int = 100, tol: float = 1e-13) -> np.ndarray:
    """Textbook cyclic Jacobi diagonalization for real symmetric matrices.

    Deliberately independent of LAPACK so it can vouch for eigensolver-based
    code paths.
    """
    a = np.array(a, dtype=float)
    if not np.allclose(a, a.T):
        raise ValueError("jacobi oracle requires a real symmetric matrix")
    n = a.shape[0]
    for _ in range(sweeps):
        off = math.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                theta = 0.5 * math.atan2(2.0 * a[p, q], a[q, q] - a[p, p])
                c, s = math.cos(theta), math.sin(theta)
                rot = np.eye(n)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    return np.sort(np.diagonal(a))


def trotter_block_transfer(split: float, kappa: float, t: float, m) -> float:
    """Transfer probability of a driven two-level block.

    H restricted to the block is (split/2) sz + kappa sx; the digitized
    evolution is the symmetric product [A_half B A_half]^m and m == "exact"
    uses the continuous evolution.  Written against 2x2 matrices only,
    independent of the channel machinery it checks.
    """
    sz = np.diag([1.0 + 0j, -1.0])
    sx = np.array([[0, 1], [1, 0]], dtype=complex)

    def expm2(h: np.ndarray, tau: float) -> np.ndarray:
        vals, vecs = np.linalg.eigh(h)
        return (vecs * np.exp(-1j * vals * tau)[None, :]) @ vecs.conj().T

    if m == "exact":
        u = expm2((split / 2.0) * sz + kappa * sx, t)
    else:
        a_half = expm2(kappa * sx, t / (2 * m))
        cycle = a_half @ expm2((split / 2.0) * sz, t / m) @ a_half
        u = np.linalg.matrix_power(cycle, m)
    return float(abs(u[1, 0]) ** 2)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
