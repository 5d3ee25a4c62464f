"""Choi operators of cloning maps, PPT and covariance checks.

Choi operators use the unit-trace convention

    S = (1/d) sum_xy |x><y| (x) Lambda(|x><y|),

so a trace-preserving map satisfies ``Tr_out S = I/d``. All Choi operators are
expressed in the computational basis, with factor order (input, outputs...).
"""
import csv
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import qmat
from .cloner import ClonerCoefficients, clone_states_magic, tensor_from_coeffs
from .states import MAGIC, concurrence_mixed, magic_to_computational, random_product_state, to_magic

CONVENTION = "unit-trace"
PPT_TOL = 1e-9


@dataclass(frozen=True)
class ChoiOperator:
    matrix: np.ndarray
    dims: Tuple[int, ...]
    labels: Tuple[str, ...]
    convention: str = CONVENTION

    def __post_init__(self):
        if int(np.prod(self.dims)) != self.matrix.shape[0]:
            raise ValueError(f"dims {self.dims} do not match matrix of side {self.matrix.shape[0]}")
        if len(self.labels) != len(self.dims):
            raise ValueError("one label per factor required")

    @property
    def input_dim(self) -> int:
        return self.dims[0]


@dataclass(frozen=True)
class PPTReport:
    is_ppt: bool
    min_eigenvalue: float
    self_transpose_gap: float


def joint_state_from_tensor(s) -> np.ndarray:
    """|S> on (reference, a, b, ancilla) in the computational basis, unit norm up to the map's scale.

    The reference factor is written with the conjugate magic basis so that
    ``sum_l conj(e_l) (x) e_l`` is the standard maximally entangled vector.
    """
    s = np.asarray(s)
    t = np.einsum("ijkl,xi,yj,rl->rxyk", s, MAGIC, MAGIC, MAGIC.conj(), optimize=True)
    return t / 2


def choi_from_tensor(s, normalize: bool = False) -> ChoiOperator:
    """Choi operator on (input, a, b) for any cloning tensor.

    With ``normalize`` the result is rescaled to unit trace, which lets
    non-isometric (e.g. perturbed) tensors be inspected.
    """
    t = joint_state_from_tensor(s)
    mat = np.einsum("rxyk,szwk->rxyszw", t, t.conj()).reshape(64, 64)
    if normalize:
        mat = mat / np.trace(mat).real
    return ChoiOperator(mat, (4, 4, 4), ("in", "a", "b"))


def choi_from_coeffs(co: ClonerCoefficients) -> ChoiOperator:
    if not co.is_normalized():
        raise ValueError(f"cloner coefficients violate normalization ({co.normalization():.12f} != 1)")
    return choi_from_tensor(tensor_from_coeffs(co))


def reduced_choi(s: ChoiOperator, which: str) -> ChoiOperator:
    """Choi operator of the map from the input to a single clone (``"a"`` or ``"b"``)."""
    if s.labels != ("in", "a", "b"):
        raise ValueError(f"expected a cloning Choi operator, got factors {s.labels}")
    if which not in ("a", "b"):
        raise ValueError(f"clone label must be 'a' or 'b', got {which!r}")
    keep = [0, 1] if which == "a" else [0, 2]
    return ChoiOperator(qmat.partial_trace(s.matrix, s.dims, keep), (4, 4), ("in", which))


def trace_preservation_gap(s: ChoiOperator) -> float:
    """max |Tr_out S - I/d_in|."""
    marginal = qmat.partial_trace(s.matrix, s.dims, [0])
    return float(np.max(np.abs(marginal - np.eye(s.input_dim) / s.input_dim)))


def choi_min_eigenvalue(s: ChoiOperator) -> float:
    return qmat.min_eigenvalue(s.matrix)


def ppt_check(s_reduced: ChoiOperator, tol: float = PPT_TOL) -> PPTReport:
    """Partial transpose on the first qubit of the input and of the clone."""
    if s_reduced.matrix.shape != (16, 16):
        raise ValueError(f"expected a 16x16 single-clone Choi operator, got {s_reduced.matrix.shape}")
    m = s_reduced.matrix
    pt = qmat.partial_transpose(m, (2, 2, 2, 2), [0, 2])
    lam = qmat.min_eigenvalue(pt)
    gap = float(np.max(np.abs(pt - m)))
    return PPTReport(bool(lam >= -tol), float(lam), gap)


def fidelities_from_choi(s: ChoiOperator, n):
    """Clone fidelities for input magic coefficients ``n``, read off the Choi operator.

    Uses ``F_x = d Tr[(rho^T (x) rho) S_x]`` with ``rho`` the input projector.
    """
    phi = MAGIC @ np.asarray(n, dtype=complex)
    rho = np.outer(phi, phi.conj())
    d = s.input_dim
    out = []
    for which in ("a", "b"):
        sx = reduced_choi(s, which).matrix
        out.append(float(np.real(d * np.trace(np.kron(rho.T, rho) @ sx))))
    return tuple(out)


def random_so4(seed=None) -> np.ndarray:
    """Haar-random rotation in SO(4)."""
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.normal(size=(4, 4)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def rotate_tensor(s, r) -> np.ndarray:
    """Apply ``R`` to all four indices of ``s``."""
    return np.einsum("ia,jb,kc,ld,abcd->ijkl", r, r, r, r, np.asarray(s))


def covariance_check(t, trials: int = 50, seed=None, rotations=None) -> float:
    """Largest max-norm change of the tensor under random ``R^(x4)``, R in SO(4)."""
    if rotations is None:
        if trials < 1:
            raise ValueError("trials must be at least 1")
        ss = np.random.SeedSequence(seed)
        rotations = [random_so4(child) for child in ss.spawn(trials)]
    t = np.asarray(t)
    return max(float(np.max(np.abs(rotate_tensor(t, r) - t))) for r in rotations)


def perturbed_tensor(co: ClonerCoefficients, size: float = 0.1, seed=None, single_entry: bool = False):
    """Invariant tensor plus a non-invariant term of the given max-norm size."""
    s = tensor_from_coeffs(co).astype(complex)
    if single_entry:
        s[0, 1, 2, 3] += size
        return s
    rng = np.random.default_rng(seed)
    noise = rng.normal(size=s.shape) + 1j * rng.normal(size=s.shape)
    return s + size * noise / np.max(np.abs(noise))


def clone_states_for_product(s, state):
    """Clone density matrices (computational basis) for an arbitrary two-qubit pure input."""
    n = to_magic(state)
    psi = np.einsum("ijkl,l->ijk", np.asarray(s), n)
    return tuple(magic_to_computational(r) for r in clone_states_magic(psi))


def separability_scan(co: ClonerCoefficients, trials: int = 1000, seed=None) -> float:
    """Largest clone concurrence over random pure product inputs."""
    if not co.is_normalized():
        raise ValueError("cloner coefficients violate normalization")
    s = tensor_from_coeffs(co)
    worst = 0.0
    for child in np.random.SeedSequence(seed).spawn(trials):
        for rho in clone_states_for_product(s, random_product_state(child)):
            worst = max(worst, concurrence_mixed(rho))
    return worst


def save_choi_csv(s: ChoiOperator, path) -> None:
    """Row-major CSV: header ``dims,<d1>,<d2>,...`` then one row per matrix row of re,im pairs."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dims", *s.dims])
        for row in s.matrix:
            fields = []
            for z in row:
                fields.extend((repr(float(z.real)), repr(float(z.imag))))
            writer.writerow(fields)


def load_choi_csv(path, labels=None) -> ChoiOperator:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][0] != "dims":
        raise ValueError("missing 'dims' header row")
    dims = tuple(int(x) for x in rows[0][1:])
    side = int(np.prod(dims))
    body = np.array([[float(x) for x in row] for row in rows[1:]])
    if body.shape != (side, 2 * side):
        raise ValueError(f"expected {side} rows of {2 * side} fields, got {body.shape}")
    mat = body[:, 0::2] + 1j * body[:, 1::2]
    if labels is None:
        labels = ("in", "a", "b") if len(dims) == 3 else tuple(f"f{i}" for i in range(len(dims)))
    return ChoiOperator(mat, dims, tuple(labels))
