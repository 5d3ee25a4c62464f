import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import linalg as slinalg

from entclone import cloner, optimize, states
from entclone.cloner import F_OPTIMAL, FA_FORM, FB_FORM, NORM_FORM


def test_optimize_symmetric():
    co = optimize.optimize_symmetric()
    assert co.is_normalized(1e-10)
    assert abs(cloner.fidelities_closed_form(co)[0] - F_OPTIMAL) < 1e-8
    ref = cloner.optimal_symmetric_coeffs()
    assert abs(co.a - ref.a) < 1e-6 and abs(co.c - ref.c) < 1e-6


@pytest.mark.parametrize("p,f_a,f_b", [(1.0, 1.0, 0.25), (0.0, 0.25, 1.0)])
def test_optimize_weighted_endpoints(p, f_a, f_b):
    res = optimize.optimize_weighted(p)
    assert abs(res.extras["f_a"] - f_a) < 1e-7
    assert abs(res.extras["f_b"] - f_b) < 1e-7
    assert res.converged


def test_optimize_weighted_symmetric_point():
    res = optimize.optimize_weighted(0.5)
    assert abs(res.objective_value - F_OPTIMAL) < 1e-7
    assert np.isclose(np.asarray(res.parameters) @ NORM_FORM @ np.asarray(res.parameters), 1)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 1.0))
def test_optimize_weighted_matches_generalized_eigenvalue(p):
    # independent oracle: the maximum of a quadratic form on an ellipsoid
    top = slinalg.eigh(p * FA_FORM + (1 - p) * FB_FORM, NORM_FORM, eigvals_only=True)[-1]
    assert abs(optimize.optimize_weighted(p, starts=6).objective_value - top) < 1e-8
    assert abs(optimize.weighted_optimum(p) - top) < 1e-12


def test_optimize_weighted_rejects_bad_weight():
    with pytest.raises(ValueError):
        optimize.optimize_weighted(1.5)


@pytest.mark.parametrize("p", [0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95])
def test_two_routes_to_the_tradeoff_frontier(p):
    res = optimize.optimize_weighted(p)
    f_a_curve, _ = optimize.max_tradeoff_fa(res.extras["f_b"])
    assert abs(f_a_curve - res.extras["f_a"]) < 1e-5


def test_fig1_grid_contains_symmetric_point():
    grid = optimize.fig1_grid(200)
    assert len(grid) == 200
    assert grid[0] == 0.25 and grid[-1] == 1.0
    assert np.all(np.diff(grid) > 0)
    assert np.any(grid == F_OPTIMAL)
    with pytest.raises(ValueError):
        optimize.fig1_grid(1)


def test_sweep_fig1():
    pts = optimize.sweep_fig1(200)
    assert abs(pts[0].f_a - 1) < 1e-9
    assert abs(pts[-1].f_a - 0.25) < 1e-9
    sym = min(pts, key=lambda pt: abs(pt.f_b - F_OPTIMAL))
    assert abs(sym.f_a - sym.f_b) < 1e-6
    assert abs(sym.e_a - 0.2847) < 5e-4
    for pt in pts:
        assert pt.e_sum <= 1 + 1e-9
        assert pt.e_a == optimize.werner_eof(pt.f_a)
    # the frontier is decreasing
    assert np.all(np.diff([pt.f_a for pt in pts]) < 1e-12)


def test_single_point_frontier_at_fb_one():
    f_a, b = optimize.max_tradeoff_fa(1.0)
    assert abs(f_a - 0.25) < 1e-9 and abs(b - 0.5) < 1e-9


def test_fb_where_ea_vanishes():
    f = optimize.find_fb_where_ea_vanishes()
    assert abs(f - 0.8984) < 1e-3
    assert optimize.tradeoff_point(f + 0.01).e_a == 0
    assert optimize.tradeoff_point(f - 0.01).e_a > 0


def test_sweep_fig2():
    rows = optimize.sweep_fig2(200)
    e_in = [r[0] for r in rows]
    e_out = [r[1] for r in rows]
    assert e_in[0] == 0 and abs(e_in[-1] - 1) < 1e-12
    assert np.all(np.diff(e_in) >= 0)
    assert np.all(np.diff(e_out) >= -1e-12)
    assert abs(e_out[-1] - 0.2847) < 5e-4
    assert e_out[0] == 0
    assert all(eo == 0 for ei, eo in rows if ei < 0.15)


def test_critical_input_entanglement():
    e = optimize.find_critical_input_entanglement()
    assert abs(e - 0.161) < 1e-3
    # clones at E_in = 0.30 are entangled and at 0.05 are not
    co = cloner.optimal_symmetric_coeffs()
    for e_in, entangled in ((0.30, True), (0.05, False)):
        alpha = _alpha_for_eof(e_in)
        rho_a, _ = optimize._fig2_clone(alpha, co)
        assert (states.concurrence_mixed(rho_a) > 0) == entangled


def _alpha_for_eof(e):
    from scipy.optimize import brentq
    return brentq(lambda a: states.eof_from_concurrence(2 * a * np.sqrt(1 - a * a)) - e, 1 / np.sqrt(2), 1)


# --------------------------------------------------------------------------
# isometry search
# --------------------------------------------------------------------------

def _random_v(seed):
    return optimize.random_isometry(np.random.default_rng(seed)).reshape(4, 4, 4, 4)


def test_average_fidelity_matches_sampling():
    v = _random_v(0)
    value, _ = optimize._avg_fidelity_a(v)
    fids = []
    for seed in range(4000):
        n = states.random_me_state(seed)
        psi = np.einsum("ijkl,l->ijk", v, n)
        rho_a = cloner.clone_states_magic(psi)[0]
        fids.append(np.real(n.conj() @ rho_a @ n))
    assert abs(np.mean(fids) - value) < 4 * np.std(fids) / np.sqrt(len(fids))


def test_average_fidelity_of_covariant_cloner_is_its_fidelity():
    co = cloner.random_coeffs(3)
    v = cloner.tensor_from_coeffs(co)
    fa, fb = cloner.fidelities_closed_form(co)
    assert abs(optimize.weighted_fidelity_objective(1.0)(v)[0] - fa) < 1e-12
    assert abs(optimize.weighted_fidelity_objective(0.0)(v)[0] - fb) < 1e-12


@pytest.mark.parametrize("objective", [
    optimize.weighted_fidelity_objective(0.3),
    optimize.clone_concurrence_objective(50.0, 10.0),
])
def test_analytic_gradient_matches_finite_differences(objective):
    v = _random_v(7)
    _, grad = objective(v)
    fd = optimize.finite_difference_gradient(objective, v)
    assert np.max(np.abs(grad - fd)) < 1e-6


def test_ppt_penalty_gradient_matches_finite_differences():
    v = _random_v(2)
    penalty = lambda x: optimize.symmetric_ppt_penalty(x)[:2]
    value, grad = penalty(v)
    assert value > 0
    assert np.max(np.abs(grad - optimize.finite_difference_gradient(penalty, v))) < 1e-6


def test_symmetric_margins_match_concurrence():
    v = _random_v(4)
    inputs = optimize.design_inputs()[:6]
    margins, _ = optimize.symmetric_margins(v, inputs)
    for m, n in zip(margins, inputs):
        rho = optimize._symmetric_clone_computational(v, n)
        assert abs(states.concurrence_margin(rho / np.trace(rho).real) - m) < 1e-10


def test_design_inputs_are_unit_and_balanced():
    pts = optimize.design_inputs()
    assert pts.shape == (24, 4)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1)
    # second moments are isotropic
    assert np.allclose(pts.T @ pts / 24, np.eye(4) / 4)


def test_riemannian_ascent_stays_on_the_manifold():
    rng = np.random.default_rng(1)
    v0 = optimize.random_isometry(rng)
    value0 = optimize.weighted_fidelity_objective(0.5)(v0.reshape(4, 4, 4, 4))[0]
    value, v, iters, _ = optimize.riemannian_ascent(optimize.weighted_fidelity_objective(0.5), v0, max_iter=50)
    assert np.allclose(v.conj().T @ v, np.eye(4), atol=1e-12)
    assert value > value0
    assert iters == 50


def test_isometry_fidelity_search_single_restart_is_deterministic():
    r1 = optimize.optimize_isometry("fidelity", restarts=1, seed=3, max_iter=300)
    r2 = optimize.optimize_isometry("fidelity", restarts=1, seed=3, max_iter=300)
    assert r1.objective_value == r2.objective_value
    assert np.array_equal(r1.parameters, r2.parameters)
    assert r1.objective_value <= F_OPTIMAL + 1e-5
    v = optimize.isometry_from_parameters(r1.parameters)
    assert np.allclose(v.conj().T @ v, np.eye(4), atol=1e-10)


def test_isometry_search_validation():
    with pytest.raises(ValueError):
        optimize.optimize_isometry("fidelity", restarts=0)
    with pytest.raises(ValueError):
        optimize.optimize_isometry("entropy")


@pytest.mark.parametrize("p", [0.25, 0.5])
def test_isometry_search_never_beats_the_covariant_optimum(p):
    res = optimize.optimize_isometry("fidelity", p=p, restarts=3, seed=0)
    assert res.objective_value <= optimize.weighted_optimum(p) + 1e-5
    assert res.objective_value >= optimize.weighted_optimum(p) - 1e-3


def test_repaired_clone_concurrence_on_covariant_cloner():
    v = cloner.tensor_from_coeffs(cloner.optimal_symmetric_coeffs())
    value, eps, lam = optimize.repaired_clone_concurrence(v, optimize.design_inputs())
    assert eps == 0 and lam >= 0
    assert abs(value - optimize.C_OPTIMAL) < 1e-9
    assert abs(optimize.min_clone_concurrence(v, optimize.design_inputs()) - optimize.C_OPTIMAL) < 1e-9
