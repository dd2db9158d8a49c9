"""Dense complex linear algebra for 2x2 and 4x4 Hermitian matrices.

Everything in this module is a pure function on immutable inputs; matrices
are plain complex128 ndarrays in the fixed two-qubit basis
|00>, |01>, |10>, |11>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
IDENTITY_4 = np.eye(4, dtype=complex)

#: convergence threshold (relative to the largest entry) and sweep cap for
#: the cyclic Jacobi eigensolver
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def as_matrix(m, dim: int | None = None) -> np.ndarray:
    """Coerce to a square complex128 array, optionally enforcing a dimension."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] not in (2, 4):
        raise ValueError(f"only 2x2 and 4x4 matrices are supported, got {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise ValueError(f"expected a {dim}x{dim} matrix, got {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermitian_defect(m: np.ndarray) -> float:
    """Max-norm distance from the Hermitian part, ||m - m^dag||_max."""
    return float(np.abs(m - dagger(m)).max())


def kron(a, b) -> np.ndarray:
    """Kronecker product of two 2x2 matrices.

    The (first factor, second factor) ordering maps onto the basis order
    |00>, |01>, |10>, |11>, so kron(sigma_z, identity) acts on the first
    qubit.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError(f"kron expects two 2x2 matrices, got {a.shape} and {b.shape}")
    return np.kron(a, b)


@dataclass(frozen=True)
class HermitianEigen:
    """Eigendecomposition of a Hermitian matrix.

    eigenvalues are real and ascending; eigenvectors are the matching
    orthonormal columns, so m = V diag(w) V^dag.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eigen(m, tol: float = 1e-9) -> HermitianEigen:
    """Diagonalize a Hermitian 2x2 or 4x4 matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    m : array_like
        Hermitian matrix; inputs with ||m - m^dag||_max > tol are rejected.
    tol : float
        Allowed Hermiticity defect of the input.  The defect is averaged
        away before diagonalizing.

    Deterministic: fixed sweep order, no pivoting heuristics.
    """
    a = as_matrix(m)
    scale = float(np.abs(a).max())
    if hermitian_defect(a) > tol * max(1.0, scale):
        raise ValueError(
            f"matrix is not Hermitian within tol={tol:g} "
            f"(defect {hermitian_defect(a):.3e})"
        )
    n = a.shape[0]
    a = 0.5 * (a + dagger(a))
    v = np.eye(n, dtype=complex)
    if scale == 0.0:
        return HermitianEigen(np.zeros(n), v)

    threshold = JACOBI_TOL * scale
    for _ in range(JACOBI_MAX_SWEEPS):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off = max(off, abs(a[p, q]))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= threshold:
                    continue
                # absorb the phase so the 2x2 block becomes real symmetric
                phase = apq / abs(apq)
                tau = (a[q, q].real - a[p, p].real) / (2.0 * abs(apq))
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0.0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # unitary rotation in the (p, q) plane
                rp = c * a[:, p] - s * np.conj(phase) * a[:, q]
                rq = s * phase * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rp, rq
                rp = c * a[p, :] - s * phase * a[q, :]
                rq = s * np.conj(phase) * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rp, rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = c * v[:, p] - s * np.conj(phase) * v[:, q]
                vq = s * phase * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = vp, vq

    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return HermitianEigen(w[order], v[:, order])


def singular_values(m) -> np.ndarray:
    """Singular values (descending) by one-sided Jacobi column rotations.

    Small singular values come out with absolute accuracy near machine
    epsilon (no sqrt-of-Gram amplification), which the spin-flip
    concurrence needs to certify separability at the 1e-10 level.
    """
    a = as_matrix(m).copy()
    n = a.shape[0]
    scale = float(np.abs(a).max())
    if scale == 0.0:
        return np.zeros(n)
    for _ in range(JACOBI_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                app = float(np.real(a[:, p].conj() @ a[:, p]))
                aqq = float(np.real(a[:, q].conj() @ a[:, q]))
                apq = complex(a[:, p].conj() @ a[:, q])
                norm = np.sqrt(app * aqq)
                if norm == 0.0 or abs(apq) <= JACOBI_TOL * norm:
                    continue
                rotated = True
                phase = apq / abs(apq)
                tau = (aqq - app) / (2.0 * abs(apq))
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) \
                    if tau != 0.0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                col_p = c * a[:, p] - s * np.conj(phase) * a[:, q]
                col_q = s * phase * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = col_p, col_q
        if not rotated:
            break
    sv = np.sqrt(np.real(np.einsum("ij,ij->j", a.conj(), a)))
    return np.sort(sv)[::-1]


def diag_power(d, s: float) -> np.ndarray:
    """Entrywise power of a diagonal matrix with nonnegative real diagonal."""
    a = as_matrix(d)
    off = a - np.diag(np.diag(a))
    scale = max(1.0, float(np.abs(a).max()))
    if np.abs(off).max() > 1e-14 * scale:
        raise ValueError("diag_power expects a diagonal matrix")
    diag = np.diag(a)
    if np.abs(diag.imag).max() > 1e-14 * scale:
        raise ValueError("diag_power expects real diagonal entries")
    vals = diag.real
    if vals.min() < 0.0:
        raise ValueError("kinetic operator not positive-definite")
    return np.diag((vals ** s).astype(complex))


def trace_distance(a, b) -> float:
    """Trace distance (1/2) sum |eig(a - b)| between two density matrices."""
    a = as_matrix(a)
    b = as_matrix(b)
    for name, rho in (("a", a), ("b", b)):
        if abs(np.trace(rho).real - 1.0) > 1e-8 or abs(np.trace(rho).imag) > 1e-8:
            raise ValueError(f"trace_distance: argument {name} is not unit-trace")
        if hermitian_defect(rho) > 1e-8:
            raise ValueError(f"trace_distance: argument {name} is not Hermitian")
    eig = hermitian_eigen(a - b, tol=1e-7)
    # summing |eigenvalues| in sorted order makes the symmetry d(a,b) =
    # d(b,a) exact (the spectra differ only by sign)
    return 0.5 * float(np.sort(np.abs(eig.eigenvalues)).sum())
