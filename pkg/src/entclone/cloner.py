"""Covariant cloners of maximally entangled two-qubit states.

A cloner is fixed by three coefficients ``(A, B, C)`` of the SO(4)-invariant
tensor ``s_ijkl = A d_il d_jk + B d_jl d_ik + C d_kl d_ij``. Indices are magic
basis labels of clone ``a`` (i), clone ``b`` (j), ancilla (k) and input (l);
the isometry sends ``|e_l>`` to ``sum_ijk s_ijkl |i>_a |j>_b |k>_anc``.
"""
from dataclasses import dataclass

import numpy as np

from . import qmat
from .states import (
    MAGIC,
    concurrence_pure,
    from_magic,
    magic_to_computational,
    projector,
    to_magic,
)

NORMALIZATION_TOL = 1e-9
OUTPUT_NORM_TOL = 1e-9

# quadratic forms in (A, B, C): normalization and the two clone fidelities
NORM_FORM = np.array([[4.0, 1, 1], [1, 4, 1], [1, 1, 4]])
FA_FORM = np.array([[4.0, 1, 1], [1, 1, 1], [1, 1, 1]])
FB_FORM = np.array([[1.0, 1, 1], [1, 4, 1], [1, 1, 1]])

F_OPTIMAL = (5 + np.sqrt(13)) / 12


@dataclass(frozen=True)
class ClonerCoefficients:
    a: complex
    b: complex
    c: complex

    @property
    def vector(self):
        return np.array([self.a, self.b, self.c], dtype=complex)

    def normalization(self) -> float:
        """``4(|A|^2+|B|^2+|C|^2) + 2 Re(AB* + AC* + BC*)``; equals 1 for a valid cloner."""
        x = self.vector
        return float(np.real(np.conj(x) @ NORM_FORM @ x))

    def is_normalized(self, tol: float = NORMALIZATION_TOL) -> bool:
        return abs(self.normalization() - 1.0) <= tol

    def normalized(self):
        scale = np.sqrt(self.normalization())
        return ClonerCoefficients(self.a / scale, self.b / scale, self.c / scale)

    def swapped(self):
        """The same machine with the roles of the two clones exchanged."""
        return ClonerCoefficients(self.b, self.a, self.c)


@dataclass
class ClonePair:
    rho_a: np.ndarray  # computational basis
    rho_b: np.ndarray
    f_a: float
    f_b: float


def _require_normalized(co):
    if not co.is_normalized():
        raise ValueError(f"cloner coefficients violate normalization ({co.normalization():.12f} != 1)")


def random_coeffs(seed=None, real: bool = False) -> ClonerCoefficients:
    rng = np.random.default_rng(seed)
    x = rng.normal(size=3)
    if not real:
        x = x + 1j * rng.normal(size=3)
    return ClonerCoefficients(*x).normalized()


def tensor_from_coeffs(co: ClonerCoefficients) -> np.ndarray:
    d = np.eye(4)
    return (co.a * np.einsum("il,jk->ijkl", d, d)
            + co.b * np.einsum("jl,ik->ijkl", d, d)
            + co.c * np.einsum("kl,ij->ijkl", d, d))


def coeffs_from_tensor(s) -> ClonerCoefficients:
    """Read ``(A, B, C)`` back from an invariant tensor (s_0110, s_1010, s_1100)."""
    s = np.asarray(s)
    return ClonerCoefficients(complex(s[0, 1, 1, 0]), complex(s[1, 0, 1, 0]), complex(s[1, 1, 0, 0]))


def isometry(s) -> np.ndarray:
    """64x4 matrix of the cloning map; rows ordered (a, b, ancilla)."""
    return np.asarray(s).reshape(64, 4)


def optimal_symmetric_coeffs() -> ClonerCoefficients:
    a = np.sqrt(0.5 + 1 / np.sqrt(13)) / 3
    c = a * (np.sqrt(13) - 3) / 2
    return ClonerCoefficients(a, a, c)


def apply_cloner(n, co: ClonerCoefficients) -> np.ndarray:
    """Joint output state of (clone a, clone b, ancilla), magic-indexed, flattened to 64."""
    _require_normalized(co)
    n = np.asarray(n, dtype=complex)
    if abs(np.linalg.norm(n) - 1) > 1e-10:
        raise ValueError("input magic coefficients are not normalized")
    out = np.einsum("ijkl,l->ijk", tensor_from_coeffs(co), n).reshape(64)
    norm = np.linalg.norm(out)
    if abs(norm - 1) > OUTPUT_NORM_TOL:
        raise ArithmeticError(f"cloner output norm {norm:.12f} != 1")
    return out


def clone_states_magic(psi):
    """Reduced states of clones a and b (magic indices) from a 64-dim output."""
    t = np.asarray(psi).reshape(4, 4, 4)
    rho_a = np.einsum("ijk,mjk->im", t, t.conj())
    rho_b = np.einsum("ijk,imk->jm", t, t.conj())
    return rho_a, rho_b


def clone_pair(n, co: ClonerCoefficients) -> ClonePair:
    """Both clones of the input with magic coefficients ``n``, in the computational basis."""
    rho_a, rho_b = (magic_to_computational(r) for r in clone_states_magic(apply_cloner(n, co)))
    phi = from_magic(n)
    f_a = float(np.real(phi.conj() @ rho_a @ phi))
    f_b = float(np.real(phi.conj() @ rho_b @ phi))
    return ClonePair(rho_a, rho_b, f_a, f_b)


def fidelities_closed_form(co: ClonerCoefficients):
    """``(F_a, F_b)`` for maximally entangled inputs.

    F_a = 4|A|^2 + |B|^2 + |C|^2 + 2 Re(AB* + AC* + BC*), F_b with A and B exchanged.
    """
    x = co.vector
    f_a = np.real(np.conj(x) @ FA_FORM @ x)
    f_b = np.real(np.conj(x) @ FB_FORM @ x)
    return float(f_a), float(f_b)


def tradeoff_fa(b_coeff: float, f_b: float, tol: float = 1e-12) -> float:
    """Fidelity of clone a for real coefficients, given B and the fidelity of clone b.

    ``A`` and ``C`` are eliminated with the normalization condition. Raises
    ``ValueError`` when no real ``(A, C)`` exists for the pair; radicands in
    ``[-tol, 0)`` count as zero.
    """
    b, f_b = float(b_coeff), float(f_b)
    if not 0.25 - tol <= f_b <= 1 + tol:
        raise ValueError(f"F_b = {f_b} outside [1/4, 1]")
    outer = f_b - 3 * b * b
    if outer < -tol:
        raise ValueError(f"infeasible (B={b}, F_b={f_b}): F_b - 3B^2 < 0")
    root = np.sqrt(max(outer, 0.0))
    inner = 18 * b * b + 18 * b * root - 15 * f_b + 6
    if inner < -tol:
        raise ValueError(f"infeasible (B={b}, F_b={f_b}): no real A, C")
    return float(-3 * b * b + (f_b + 1) / 2 + (root - b) / 2 * np.sqrt(max(inner, 0.0)))


def depolarize_qubit(rho, qubit: int, eta: float):
    """Shrink the Bloch vector of one qubit of a two-qubit state by ``eta``."""
    rho = np.asarray(rho, dtype=complex)
    other = 1 - qubit
    reduced = qmat.partial_trace(rho, (2, 2), [other])
    mixed = np.kron(np.eye(2) / 2, reduced) if qubit == 0 else np.kron(reduced, np.eye(2) / 2)
    return eta * rho + (1 - eta) * mixed


LOCAL_SHRINK = 2.0 / 3.0


def local_clone_pair(n) -> ClonePair:
    """Baseline: the optimal universal qubit cloner applied to each qubit separately.

    Each clone of that machine is the input with its Bloch vector shrunk by
    2/3, so both two-qubit clones equal the input with each qubit depolarized.
    """
    phi = from_magic(n)
    rho = projector(phi)
    for q in (0, 1):
        rho = depolarize_qubit(rho, q, LOCAL_SHRINK)
    f = float(np.real(phi.conj() @ rho @ phi))
    return ClonePair(rho, rho.copy(), f, f)


def bell_measure_reprepare(n):
    """Measure the input in the magic (Bell) basis and prepare two copies of the outcome.

    Returns ``[(probability, clone_pair_state), ...]`` for the outcomes with
    non-zero probability; each clone-pair state is ``e_i (x) e_i`` as a
    16-dim vector in the computational basis of (clone a, clone b).
    """
    n = np.asarray(n, dtype=complex)
    probs = np.abs(n) ** 2
    if abs(probs.sum() - 1) > 1e-10:
        raise ValueError("input magic coefficients are not normalized")
    ensemble = []
    for i, p in enumerate(probs):
        if p > 1e-15:
            e = MAGIC[:, i]
            ensemble.append((float(p), np.kron(e, e)))
    return ensemble


def reprepare_branch_concurrence(n) -> float:
    """Average over measurement outcomes of the concurrence of clone a in that outcome."""
    total = 0.0
    for p, pair in bell_measure_reprepare(n):
        clone_a = qmat.partial_trace(projector(pair), (4, 4), [0])
        w, v = qmat.hermitian_eig(clone_a)
        total += p * concurrence_pure(to_magic(v[:, 0]))
    return total
