import numpy as np
import pytest
from hypothesis import given

from conftest import random_network, seeds
from netohm import generators as gen
from netohm.network import build_network, dirichlet_solve, gradient
from netohm.thermal import (
    CovarianceSet,
    ThermalConfig,
    boundary_response,
    covariance_analytic,
    covariance_set,
    interior_restricted_power,
    power_from_thermal,
    run_thermal_experiment,
    sample_noise_currents,
)


def fig_det():
    net = gen.fig_det_grid(4)
    return net, np.ones(net.n_edges), gen.fig_det_bc(net)


# -- noise currents ---------------------------------------------------------


def test_noise_moments():
    net, sigma, _ = fig_det()
    J = sample_noise_currents(net, sigma, 1.0, 42, size=100_000)
    assert abs(J[:, 0].mean()) <= 4 / np.sqrt(1e5)
    assert J[:, 0].var() == pytest.approx(1.0, rel=0.05)
    assert abs(np.corrcoef(J[:, 0], J[:, 1])[0, 1]) <= 0.02


def test_noise_variance_scales_with_temperature_and_conductance():
    net, _, _ = fig_det()
    sigma = np.full(net.n_edges, 2.0)
    J = sample_noise_currents(net, sigma, 3.0, 1, kappa=2 * np.pi, size=100_000)
    assert J[:, 0].var() == pytest.approx(12.0, rel=0.05)


def test_noise_rejects_nonpositive_inputs():
    net, sigma, _ = fig_det()
    with pytest.raises(ValueError):
        sample_noise_currents(net, sigma, 0.0, 1)


# -- boundary response ------------------------------------------------------


def test_response_is_linear_and_kills_boundary_edges():
    net, sigma, _ = fig_det()
    rng = np.random.default_rng(0)
    J1, J2 = rng.standard_normal((2, net.n_edges))
    np.testing.assert_allclose(boundary_response(net, sigma, J1 + J2),
                               boundary_response(net, sigma, J1) + boundary_response(net, sigma, J2), atol=1e-13)
    assert np.all(boundary_response(net, sigma, np.zeros(net.n_edges)) == 0)
    bb = np.flatnonzero(net.boundary_edge_mask())
    assert bb.size > 0
    J = np.zeros(net.n_edges)
    J[bb] = 1.0
    np.testing.assert_allclose(boundary_response(net, sigma, J), 0, atol=1e-14)


# -- covariances ------------------------------------------------------------


@given(seeds)
def test_analytic_covariance_psd(seed):
    net, rng = random_network(seed, n_min=4)
    C = covariance_analytic(net, rng.uniform(0.5, 2, net.n_edges), rng.uniform(0.5, 3, net.n_edges))
    assert np.array_equal(C, C.T)
    assert np.linalg.eigvalsh(C).min() >= -1e-12 * max(np.trace(C), 1e-300)


def test_zero_temperature_gives_zero_covariance():
    net, sigma, _ = fig_det()
    assert np.all(covariance_analytic(net, sigma, 0.0) == 0)


def test_differential_covariance_rank_one_psd():
    net, sigma, _ = fig_det()
    covs = covariance_set(net, sigma, ThermalConfig())
    for D in covs.heated - covs.baseline[None]:
        ev = np.linalg.eigvalsh(D)
        assert ev.min() >= -1e-10 * max(ev.max(), 1e-300)
        assert np.sum(ev > 1e-10 * max(ev.max(), 1e-300)) <= 1


def test_empirical_covariance_close_to_analytic():
    net, sigma, _ = fig_det()
    cfg = ThermalConfig(realizations=10_000, seed=11)
    emp = covariance_set(net, sigma, cfg, mode="mc")
    ref = covariance_set(net, sigma, cfg)
    err = np.linalg.norm(emp.baseline - ref.baseline) / np.linalg.norm(ref.baseline)
    assert err <= 0.10


def test_seed_determinism_and_thread_independence():
    net, sigma, _ = fig_det()
    cfg = ThermalConfig(realizations=5000, seed=3)
    a = covariance_set(net, sigma, cfg, mode="mc", threads=1)
    b = covariance_set(net, sigma, cfg, mode="mc", threads=4)
    c = covariance_set(net, sigma, cfg, mode="mc", threads=4)
    assert np.array_equal(a.baseline, b.baseline) and np.array_equal(a.heated, b.heated)
    assert np.array_equal(b.heated, c.heated)
    d = covariance_set(net, sigma, ThermalConfig(realizations=5000, seed=4), mode="mc", threads=1)
    assert not np.array_equal(a.baseline, d.baseline)


def test_thread_cap_from_environment(monkeypatch):
    net, sigma, _ = fig_det()
    cfg = ThermalConfig(realizations=100, seed=0)
    monkeypatch.setenv("NETOHM_THREADS", "1")
    a = covariance_set(net, sigma, cfg, mode="mc")
    monkeypatch.setenv("NETOHM_THREADS", "3")
    b = covariance_set(net, sigma, cfg, mode="mc")
    assert np.array_equal(a.heated, b.heated)


# -- power recovery ---------------------------------------------------------


@given(seeds)
def test_power_identity_analytic(seed):
    net, rng = random_network(seed, n_min=4)
    sigma = rng.uniform(0.5, 2, net.n_edges)
    f = rng.standard_normal(net.n_boundary)
    cfg = ThermalConfig(t0=rng.uniform(0.5, 2), dt=rng.uniform(1, 100), kappa=rng.uniform(1, 5))
    est = power_from_thermal(covariance_set(net, sigma, cfg), f, cfg.dt, cfg.kappa)
    ref = interior_restricted_power(net, sigma, dirichlet_solve(net, sigma, f))
    assert np.linalg.norm(est - ref) <= 1e-10 * max(np.linalg.norm(ref), 1e-300) + 1e-14


def test_restricted_power_on_boundary_touching_edges():
    net = build_network([1, 2, 3, 4], [True, True, False, False], [(1, 2), (1, 3), (3, 4), (2, 4)])
    sigma = np.array([1.0, 2.0, 1.5, 1.0])
    f = np.array([1.0, 0.0])
    u = dirichlet_solve(net, sigma, f)
    est = power_from_thermal(covariance_set(net, sigma, ThermalConfig()), f, 100.0)
    # boundary-boundary edge: structurally zero
    assert abs(est[0]) <= 1e-14
    # one interior endpoint: sigma * u(interior)^2
    assert est[1] == pytest.approx(sigma[1] * u[2] ** 2, rel=1e-10)
    # interior-interior edge: the true dissipated power
    assert est[2] == pytest.approx(sigma[2] * gradient(net, u)[2] ** 2, rel=1e-10)


def test_analytic_report_error_tiny():
    net, sigma, f = fig_det()
    rep = run_thermal_experiment(net, sigma, f, ThermalConfig())
    assert rep.errors["interior_edges"] <= 1e-10 and rep.errors["all_edges"] <= 1e-10
    assert len(rep.to_dict(net)["edges"]) == net.n_edges


def test_guards():
    net, sigma, f = fig_det()
    covs = covariance_set(net, sigma, ThermalConfig())
    with pytest.raises(ValueError):
        power_from_thermal(covs, f, 0.0)
    with pytest.raises(ValueError):
        ThermalConfig(dt=0.0)
    with pytest.raises(ValueError):
        ThermalConfig(t0=0.0)
    bad = CovarianceSet(covs.baseline, covs.heated.copy())
    bad.heated[0, 0, 0] = np.nan
    with pytest.raises(ValueError):
        power_from_thermal(bad, f, 100.0)
    with pytest.raises(ValueError):
        covariance_set(net, sigma, ThermalConfig(), mode="bogus")
