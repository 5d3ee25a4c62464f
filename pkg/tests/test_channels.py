import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entclone import channels, cloner, qmat, states
from entclone.states import MAGIC


def choi_by_definition(co):
    """(1/4) sum_xy |x><y| (x) Tr_anc[V |x><y| V^dag], V in the computational basis."""
    v = cloner.isometry(cloner.tensor_from_coeffs(co)).reshape(4, 4, 4, 4)
    # outputs to computational basis, input from computational basis
    v = np.einsum("ijkl,xi,yj,ml->xykm", v, MAGIC, MAGIC, MAGIC.conj())
    s = np.zeros((64, 64), dtype=complex)
    for x in range(4):
        for y in range(4):
            out_x, out_y = v[..., x].reshape(16, 4), v[..., y].reshape(16, 4)
            block = out_x @ out_y.conj().T
            s += np.kron(np.outer(np.eye(4)[x], np.eye(4)[y]), block)
    return s / 4


@pytest.mark.parametrize("seed", range(5))
def test_choi_matches_definition(seed):
    co = cloner.random_coeffs(seed)
    assert np.allclose(channels.choi_from_coeffs(co).matrix, choi_by_definition(co), atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_choi_is_a_valid_channel(seed):
    s = channels.choi_from_coeffs(cloner.random_coeffs(seed))
    assert channels.choi_min_eigenvalue(s) >= -1e-9
    assert channels.trace_preservation_gap(s) < 1e-9
    assert np.isclose(np.trace(s.matrix).real, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_single_clone_choi_is_self_transpose(seed, real):
    s = channels.choi_from_coeffs(cloner.random_coeffs(seed, real=real))
    for which in ("a", "b"):
        report = channels.ppt_check(channels.reduced_choi(s, which))
        assert report.self_transpose_gap < 1e-10
        assert report.is_ppt


def test_fidelities_from_choi():
    co = cloner.random_coeffs(11)
    s = channels.choi_from_coeffs(co)
    f = cloner.fidelities_closed_form(co)
    for seed in range(10):
        assert np.allclose(channels.fidelities_from_choi(s, states.random_me_state(seed)), f, atol=1e-12)


def test_choi_validation():
    s = channels.choi_from_coeffs(cloner.optimal_symmetric_coeffs())
    with pytest.raises(ValueError, match="clone label"):
        channels.reduced_choi(s, "c")
    with pytest.raises(ValueError, match="16x16"):
        channels.ppt_check(s)
    with pytest.raises(ValueError, match="normalization"):
        channels.choi_from_coeffs(cloner.ClonerCoefficients(1, 0, 0))
    with pytest.raises(ValueError, match="dims"):
        channels.ChoiOperator(np.eye(4), (2, 3), ("x", "y"))


def test_normalize_option_rescales_trace():
    s = cloner.tensor_from_coeffs(cloner.ClonerCoefficients(1.0, 0.5, 0.0))
    assert np.isclose(np.trace(channels.choi_from_tensor(s, normalize=True).matrix).real, 1)


def test_ppt_check_flags_an_entanglement_creating_map():
    # a clone map that discards its input and prepares |Phi+> has Choi
    # operator I/4 (x) |Phi+><Phi+|, whose partial transpose is not positive
    phi = states.BELL["phi+"]
    m = np.kron(np.eye(4) / 4, states.projector(phi))
    report = channels.ppt_check(channels.ChoiOperator(m, (4, 4), ("in", "a")))
    assert not report.is_ppt
    assert report.min_eigenvalue < -0.1


@pytest.mark.parametrize("seed", range(3))
def test_invariant_tensor_is_covariant(seed):
    t = cloner.tensor_from_coeffs(cloner.random_coeffs(seed))
    assert channels.covariance_check(t, trials=20, seed=seed) < 1e-10


def test_perturbed_tensor_is_not_covariant():
    co = cloner.optimal_symmetric_coeffs()
    assert channels.covariance_check(channels.perturbed_tensor(co, seed=1), trials=10, seed=0) > 1e-2
    assert channels.covariance_check(channels.perturbed_tensor(co, single_entry=True), trials=10, seed=0) > 1e-2


def test_random_so4():
    r = channels.random_so4(3)
    assert np.allclose(r @ r.T, np.eye(4))
    assert np.isclose(np.linalg.det(r), 1)


def test_local_unitaries_act_as_so4():
    # U (x) V in the magic basis is a real orthogonal matrix
    rng = np.random.default_rng(0)
    u = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    w = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    u, w = u / np.sqrt(np.linalg.det(u)), w / np.sqrt(np.linalg.det(w))
    o = MAGIC.conj().T @ np.kron(u, w) @ MAGIC
    assert np.allclose(o.imag, 0, atol=1e-12)
    assert np.allclose(o.real @ o.real.T, np.eye(4))


def test_separability_scan_optimal_cloner():
    assert channels.separability_scan(cloner.optimal_symmetric_coeffs(), trials=200, seed=5) < 1e-9


def test_clone_states_for_product_are_valid_states():
    s = cloner.tensor_from_coeffs(cloner.optimal_symmetric_coeffs())
    for rho in channels.clone_states_for_product(s, states.random_product_state(2)):
        assert np.isclose(np.trace(rho).real, 1)
        assert qmat.is_psd(rho)


def test_csv_round_trip(tmp_path):
    s = channels.choi_from_coeffs(cloner.random_coeffs(3))
    path = tmp_path / "choi.csv"
    channels.save_choi_csv(s, path)
    back = channels.load_choi_csv(path)
    assert back.dims == s.dims and back.labels == ("in", "a", "b")
    assert np.array_equal(back.matrix, s.matrix)


def test_csv_load_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n")
    with pytest.raises(ValueError, match="dims"):
        channels.load_choi_csv(bad)
    bad.write_text("dims,2\n1,0,0,0\n")
    with pytest.raises(ValueError, match="expected 2 rows"):
        channels.load_choi_csv(bad)
