import math

import numpy as np
import pytest

import endemic_delay as ed


def baseline_kernels():
    return ed.KernelDensity.shifted_exponential(10.0, 0.1), ed.KernelDensity.shifted_exponential(5.0, 0.2)


def test_mu_matches_closed_form():
    assert ed.derive_mu(0.1, 0.425) == pytest.approx(0.1 * 0.425 / 0.575, rel=1e-15)
    assert ed.ModelParams.baseline().mu == pytest.approx(0.0739, abs=5e-5)


def test_comb_accounts_for_all_mass():
    phi, _ = baseline_kernels()
    comb = ed.discretize(phi, 86.0, 20)
    assert len(comb) == 20
    assert comb.total_weight() + comb.truncation_mass == pytest.approx(1.0, abs=1e-14)
    assert comb.truncation_mass == pytest.approx(math.exp(-0.1 * 76.0), rel=1e-14)
    assert np.allclose(comb.nodes, 10.0 + 3.8 * (np.arange(20) + 0.5))


def test_uniform_comb_is_equal_weights():
    comb = ed.discretize(ed.KernelDensity.uniform(2.0, 6.0), 6.0, 8, ed.NodeRule.LEFT)
    assert np.allclose(comb.weights, 0.125)
    assert comb.nodes[0] == 2.0


def test_initial_conditions_sum_to_population():
    params = ed.ModelParams(beta0=2e-8, gamma=0.2, i_fr=0.3, p=0.7, n0=5e6)
    x0 = ed.initial_conditions(params, ed.HistoryData(c_i=50.0), psi_mean=7.0, phi_mean=30.0)
    assert sum(x0.values()) == pytest.approx(5e6, rel=1e-14)
    assert x0["D"] == 0.0


def test_discrete_solve_conserves_population():
    phi, psi = baseline_kernels()
    params = ed.ModelParams.baseline()
    traj = ed.solve_discrete(params, ed.HistoryData(10.0), ed.discretize(phi, 86.0, 20), ed.discretize(psi, 86.0, 10),
                             t_end=60.0, step=0.05)
    assert traj.t_end == 60.0
    assert traj.values.shape == (len(traj), 6)
    totals = traj.values.sum(axis=1)
    assert np.max(np.abs(totals - totals[0])) <= 1e-9 * params.n0
    grid = np.linspace(0.0, 60.0, 7)
    assert np.all(traj.eval(grid, "I") >= 0.0)
    assert traj.eval(-1.0, "I") == 10.0


def test_reference_solvers_agree():
    phi, psi = baseline_kernels()
    params, hist = ed.ModelParams.baseline(), ed.HistoryData(10.0)
    quad = ed.solve_reference(params, hist, phi, psi, t_end=40.0, step=0.05)
    chain = ed.solve_chain_oracle(params, hist, phi, psi, t_end=40.0, step=0.05)
    assert chain.components[-2:] == ["G", "H"]
    err = ed.sup_norm_error(quad, chain, 0.0, 40.0)
    assert err[2] <= 1e-8 * max(chain.eval(np.linspace(0, 40, 401), "I"))


def test_sweep_orders_pairs_and_reports_errors():
    report = ed.convergence_sweep([(10, 20), (1, 2)], t_end=60.0, step=0.05, threads=1)
    assert [(e.n_tau, e.n_rho) for e in report.entries] == [(1, 2), (10, 20)]
    assert all(e.ok() for e in report.entries)
    assert report.entries[0].rel_sup_err[2] > report.entries[1].rel_sup_err[2]


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        ed.KernelDensity.shifted_exponential(-1.0, 0.1)
    with pytest.raises(ValueError):
        ed.truncation_bound(ed.KernelDensity.uniform(1.0, 2.0), 100.0)
