"""Dense complex matrix kernel.

Matrices are plain ``numpy.ndarray`` objects; subsystem structure is passed
explicitly as a ``dims`` sequence. Factors are ordered row-major: the first
entry of ``dims`` is the slowest-varying index.
"""
from typing import NamedTuple, Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
CLAMP_TOL = 1e-9


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray   # real, non-increasing
    eigenvectors: np.ndarray  # columns match eigenvalue order


def dag(m):
    return np.conj(np.asarray(m)).T


def _square(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _check_dims(m, dims):
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != m.shape[0]:
        raise ValueError(f"dims {dims} do not match side length {m.shape[0]}")
    return dims


def _check_indices(indices, n):
    indices = sorted(set(int(i) for i in indices))
    for i in indices:
        if not 0 <= i < n:
            raise IndexError(f"subsystem index {i} out of range for {n} factors")
    return indices


def kron(m, n, dims_m=None, dims_n=None):
    """Tensor product of two square matrices.

    Returns the product and its subsystem dims (the concatenation of the two
    factor dims; a factor without dims counts as a single subsystem).
    """
    m, n = _square(m), _square(n)
    dm = _check_dims(m, dims_m) if dims_m is not None else (m.shape[0],)
    dn = _check_dims(n, dims_n) if dims_n is not None else (n.shape[0],)
    return np.kron(m, n), dm + dn


def partial_trace(m, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    The kept factors stay in their original order.
    """
    m = _square(m)
    dims = _check_dims(m, dims)
    keep = _check_indices(keep, len(dims))
    n = len(dims)
    t = m.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # trace from the highest index down so lower axis numbers stay valid
    for count, i in enumerate(sorted(traced, reverse=True)):
        nleft = n - count
        t = np.trace(t, axis1=i, axis2=i + nleft)
    side = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(side, side)


def partial_transpose(m, dims: Sequence[int], subsystems: Sequence[int]) -> np.ndarray:
    """Transpose the listed subsystems, leaving the others untouched."""
    m = _square(m)
    dims = _check_dims(m, dims)
    subsystems = _check_indices(subsystems, len(dims))
    n = len(dims)
    perm = list(range(2 * n))
    for i in subsystems:
        perm[i], perm[i + n] = perm[i + n], perm[i]
    return m.reshape(dims + dims).transpose(perm).reshape(m.shape)


def hermiticity_gap(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - dag(m)))) if m.size else 0.0


def hermitian_eig(m) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues in decreasing order."""
    m = _square(m)
    gap = hermiticity_gap(m)
    if gap >= HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (max |M - M^dag| = {gap:.3e})")
    w, v = np.linalg.eigh((m + dag(m)) / 2)
    return EigenDecomposition(w[::-1], v[:, ::-1])


def sqrt_psd(m) -> np.ndarray:
    """Positive square root of a positive semidefinite matrix.

    Eigenvalues in ``[-1e-9, 0)`` are treated as rounding noise and clamped to
    zero; anything more negative raises ``ValueError``.
    """
    w, v = hermitian_eig(m)
    if w[-1] < -CLAMP_TOL:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w[-1]:.3e})")
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root) @ dag(v)


def is_psd(m, tol: float = CLAMP_TOL) -> bool:
    return bool(hermitian_eig(m).eigenvalues[-1] >= -tol)


def min_eigenvalue(m) -> float:
    return float(hermitian_eig(m).eigenvalues[-1])
