"""Two-qubit states, the magic basis, concurrence and entanglement of formation.

Pure states are length-4 complex vectors in computational order
``(00, 01, 10, 11)``. Magic coefficients are length-4 vectors ``n`` with
``|psi> = sum_i n_i |e_i>``.
"""
import numpy as np

from . import qmat

NORM_TOL = 1e-10
DENSITY_TOL = 1e-9

_R2 = np.sqrt(2.0)

BELL = {
    "phi+": np.array([1, 0, 0, 1], dtype=complex) / _R2,
    "phi-": np.array([1, 0, 0, -1], dtype=complex) / _R2,
    "psi+": np.array([0, 1, 1, 0], dtype=complex) / _R2,
    "psi-": np.array([0, 1, -1, 0], dtype=complex) / _R2,
}

# columns are e_0 = |phi+>, e_1 = i|phi->, e_2 = i|psi+>, e_3 = |psi->
MAGIC = np.column_stack([BELL["phi+"], 1j * BELL["phi-"], 1j * BELL["psi+"], BELL["psi-"]])

_SIGMA_Y = np.array([[0, -1j], [1j, 0]])
_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


def magic_basis():
    """The four magic-basis vectors e_0..e_3 as computational-basis amplitudes."""
    return [MAGIC[:, i].copy() for i in range(4)]


def _unit(v, what="state"):
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape != (4,):
        raise ValueError(f"{what} must have 4 amplitudes, got {v.shape}")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"{what} is not normalized (norm {norm:.12f})")
    return v


def to_magic(state):
    """Magic-basis coefficients ``n_i = <e_i|state>``."""
    return qmat.dag(MAGIC) @ _unit(state)


def from_magic(n):
    return MAGIC @ _unit(n, "magic coefficients")


def magic_to_computational(rho):
    """Change a 4x4 operator from magic-basis to computational-basis indices."""
    return MAGIC @ np.asarray(rho) @ qmat.dag(MAGIC)


def computational_to_magic(rho):
    return qmat.dag(MAGIC) @ np.asarray(rho) @ MAGIC


def projector(state):
    state = np.asarray(state, dtype=complex).reshape(-1)
    return np.outer(state, state.conj())


def concurrence_pure(n) -> float:
    """Concurrence ``|sum_i n_i^2|`` of a pure state given by magic coefficients."""
    n = _unit(n, "magic coefficients")
    return float(min(1.0, abs(np.sum(n * n))))


def _check_density(rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if abs(np.trace(rho) - 1.0) > DENSITY_TOL:
        raise ValueError(f"density matrix trace is {np.trace(rho).real:.12f}, not 1")
    if not qmat.is_psd(rho, DENSITY_TOL):
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def wootters_lambdas(rho):
    """Decreasing eigenvalues of ``sqrt(sqrt(rho) rho~ sqrt(rho))``.

    ``rho~`` is the complex conjugate of ``rho`` in the magic basis. With
    ``rho = X X^dag`` and ``X`` written in magic coordinates, these are the
    singular values of the symmetric matrix ``X^T X``; evaluating them that
    way avoids square roots of eigenvalues at rounding-noise level.
    """
    rho = _check_density(rho)
    w, v = qmat.hermitian_eig(rho)
    factor = qmat.dag(MAGIC) @ (v * np.sqrt(np.clip(w, 0.0, None)))
    return np.linalg.svd(factor.T @ factor, compute_uv=False)


def concurrence_margin(rho) -> float:
    """``lambda_1 - lambda_2 - lambda_3 - lambda_4`` before the clamp at zero.

    Positive exactly when the state is entangled; used for root finding.
    """
    lam = wootters_lambdas(rho)
    return float(lam[0] - lam[1:].sum())


def concurrence_mixed(rho) -> float:
    """Concurrence of a two-qubit density matrix (magic-basis conjugation)."""
    return float(min(1.0, max(0.0, concurrence_margin(rho))))


def concurrence_spin_flip(rho) -> float:
    """Concurrence from the computational-basis spin flip ``(Y x Y) rho* (Y x Y)``.

    Evaluates ``sqrt(sqrt(rho) rho~ sqrt(rho))`` literally with
    :func:`qmat.sqrt_psd`; it shares no code path with
    :func:`concurrence_mixed` and serves as its cross-check.
    """
    rho = _check_density(rho)
    rho_tilde = _YY @ np.conj(rho) @ _YY
    root = qmat.sqrt_psd(rho)
    inner = root @ rho_tilde @ root
    lam = qmat.hermitian_eig(qmat.sqrt_psd((inner + qmat.dag(inner)) / 2)).eigenvalues
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def binary_entropy(x) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy argument {x} outside [0, 1]")
    if x in (0.0, 1.0):
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


def eof_from_concurrence(c) -> float:
    """Entanglement of formation (ebits) for concurrence ``c``."""
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"concurrence {c} outside [0, 1]")
    return binary_entropy(0.5 + 0.5 * np.sqrt(1.0 - c * c))


def entanglement_of_formation(rho) -> float:
    return eof_from_concurrence(concurrence_mixed(rho))


def werner_state(f, i: int = 0):
    """``f |e_i><e_i| + (1-f)/3 sum_{j != i} |e_j><e_j|`` in the computational basis."""
    f = float(f)
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"Werner weight {f} outside [0, 1]")
    if i not in range(4):
        raise ValueError(f"magic basis index {i} not in 0..3")
    weights = np.full(4, (1.0 - f) / 3.0)
    weights[i] = f
    return magic_to_computational(np.diag(weights).astype(complex))


def random_me_state(seed=None):
    """Magic coefficients of a maximally entangled state, uniform over real unit 4-vectors."""
    rng = np.random.default_rng(seed)
    n = rng.normal(size=4)
    return (n / np.linalg.norm(n)).astype(complex)


def random_qubit(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def random_product_state(seed=None):
    rng = np.random.default_rng(seed)
    return np.kron(random_qubit(rng), random_qubit(rng))


def random_density_matrix(seed=None, rank: int = 4):
    """Ginibre-distributed 4x4 density matrix of the given rank."""
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = g @ qmat.dag(g)
    return rho / np.trace(rho).real
