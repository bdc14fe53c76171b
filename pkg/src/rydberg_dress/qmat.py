"""Small dense complex linear algebra.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; the Hilbert
spaces here never exceed a few dozen dimensions, so everything is dense.
The Hermitian eigensolver is a cyclic Jacobi iteration, which is slow in
the asymptotic sense but unconditionally stable at these sizes.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NegativeEigenvalue, NotHermitian, TraceDrift

HERMITIAN_RTOL = 1e-12
PSD_CLAMP = 1e-8


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a ⊗ b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a) -> np.ndarray:
    return np.conj(as_matrix(a)).T


def hermiticity_error(a) -> float:
    """``max|A - A†|`` relative to ``max|A|`` (0 for the zero matrix)."""
    m = as_matrix(a)
    scale = np.max(np.abs(m)) if m.size else 0.0
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)) / scale)


def is_hermitian(a, rtol: float = HERMITIAN_RTOL) -> bool:
    m = as_matrix(a)
    return m.shape[0] == m.shape[1] and hermiticity_error(m) <= rtol


def herm_eig(a, rtol: float = 1e-10, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : array_like
        Square Hermitian matrix.
    rtol : float
        Hermiticity tolerance, relative to ``max|a|``.

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in ascending order.
    eigenvectors : ndarray
        Unitary matrix whose columns are the matching eigenvectors, so that
        ``a = V diag(λ) V†``.
    """
    m = as_matrix(a)
    n = m.shape[0]
    if m.shape[1] != n:
        raise DimensionMismatch(f"matrix must be square, got {m.shape}")
    if hermiticity_error(m) > rtol:
        raise NotHermitian(f"hermiticity error {hermiticity_error(m):.3e} exceeds {rtol:.1e}")
    A = 0.5 * (m + m.conj().T)
    V = np.eye(n, dtype=np.complex128)
    scale = np.max(np.abs(A)) if n else 0.0
    if scale == 0.0:
        return np.zeros(n), V
    # stop once the off-diagonal mass is at round-off level; summed directly,
    # since subtracting the diagonal from the total norm cancels catastrophically
    threshold = (1e-15 * scale) ** 2
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = np.sum(np.abs(A[offdiag]) ** 2)
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                phase = apq / r
                theta = (A[q, q].real - A[p, p].real) / (2.0 * r)
                if theta == 0.0:
                    t = 1.0
                elif abs(theta) > 1e150:  # θ² would overflow
                    t = 0.5 / theta
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # rotation G acts on columns p, q: A <- G† A G
                gpp, gpq = c, s
                gqp, gqq = -s * np.conj(phase), c * np.conj(phase)
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = colp * gpp + colq * gqp
                A[:, q] = colp * gpq + colq * gqq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = np.conj(gpp) * rowp + np.conj(gqp) * rowq
                A[q, :] = np.conj(gpq) * rowp + np.conj(gqq) * rowq
                A[p, q] = 0.0
                A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = vp * gpp + vq * gqp
                V[:, q] = vp * gpq + vq * gqq
    evals = np.real(np.diag(A)).copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], V[:, order]


def psd_sqrt(a, clamp: float = PSD_CLAMP) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in ``[-clamp, 0)`` are treated as round-off and set to zero;
    anything more negative raises :class:`NegativeEigenvalue`.
    """
    evals, vecs = herm_eig(a)
    if evals.size and evals[0] < -clamp:
        raise NegativeEigenvalue(f"eigenvalue {evals[0]:.3e} below -{clamp:.0e}")
    roots = np.sqrt(np.clip(evals, 0.0, None))
    return (vecs * roots) @ vecs.conj().T


def partial_trace(rho, keep: int, dims: tuple[int, int]) -> np.ndarray:
    """Reduced state of one subsystem of a bipartite density matrix.

    ``keep=0`` returns the first (control) factor, ``keep=1`` the second
    (target) factor.
    """
    m = as_matrix(rho)
    d1, d2 = dims
    if m.shape != (d1 * d2, d1 * d2):
        raise DimensionMismatch(f"state of shape {m.shape} does not factor as {d1}x{d2}")
    t = m.reshape(d1, d2, d1, d2)
    if keep == 0:
        return np.einsum("ijkj->ik", t)
    if keep == 1:
        return np.einsum("ijil->jl", t)
    raise DimensionMismatch(f"keep must be 0 or 1, got {keep}")


def check_density_matrix(rho, herm_tol: float = 1e-10, trace_tol: float = 1e-8,
                         eig_tol: float = 1e-8) -> None:
    """Raise if ``rho`` is not a valid density matrix within the given slack."""
    m = as_matrix(rho)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"density matrix must be square, got {m.shape}")
    err = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if err > herm_tol:
        raise NotHermitian(f"density matrix hermiticity error {err:.3e}")
    tr = np.trace(m).real
    if abs(tr - 1.0) > trace_tol:
        raise TraceDrift(f"trace {tr:.12f} differs from 1")
    lo = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
    if lo < -eig_tol:
        raise NegativeEigenvalue(f"density matrix eigenvalue {lo:.3e}")


def pure_state(vec) -> np.ndarray:
    """Projector ``|ψ⟩⟨ψ|`` for a (normalized on the fly) state vector."""
    v = np.asarray(vec, dtype=np.complex128).ravel()
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def basis_projector(dim: int, index: int) -> np.ndarray:
    m = np.zeros((dim, dim), dtype=np.complex128)
    m[index, index] = 1.0
    return m

