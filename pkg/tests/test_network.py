import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_network, seeds
from netohm import generators as gen
from netohm.errors import (
    DanglingEndpointError,
    DuplicateEdgeError,
    EmptyPartitionError,
    LoopEdgeError,
    SingularOperatorError,
)
from netohm.forward import ProblemSpec, solve_states
from netohm.linearize import sign_field
from netohm.network import (
    blocks,
    build_network,
    dirichlet_solve,
    divergence,
    field_pseudoinverse,
    gradient,
    laplacian,
    schrodinger_solve,
    support,
)


# -- construction -----------------------------------------------------------


def test_smallest_network():
    net = build_network([1, 2], [True, False], [(1, 2)])
    assert net.n_nodes == 2 and net.n_edges == 1
    assert net.boundary.tolist() == [0] and net.interior.tolist() == [1]


def test_loop_rejected():
    with pytest.raises(LoopEdgeError):
        build_network([1, 2, 3], [True, False, False], [(1, 2), (3, 3)])


def test_duplicate_rejected_in_either_orientation():
    with pytest.raises(DuplicateEdgeError):
        build_network([1, 2], [True, False], [(1, 2), (2, 1)])


def test_empty_partition_rejected():
    with pytest.raises(EmptyPartitionError):
        build_network([1, 2], [True, True], [(1, 2)])
    with pytest.raises(EmptyPartitionError):
        build_network([1, 2], [False, False], [(1, 2)])


def test_dangling_endpoint_rejected():
    with pytest.raises(DanglingEndpointError):
        build_network([1, 2], [True, False], [(1, 7)])


def test_orientation_is_kept():
    net = build_network([1, 2], [True, False], [(2, 1)])
    assert gradient(net, np.array([1.0, 0.0])).tolist() == [-1.0]
    assert net.edge_orientation(2, 1) == 1 and net.edge_orientation(1, 2) == -1


def test_grid_counts():
    net = gen.grid_network(10)
    assert (net.n_nodes, net.n_boundary, net.n_edges) == (100, 36, 180)


# -- operators --------------------------------------------------------------


def test_gradient_examples():
    net = build_network([1, 2], [True, False], [(1, 2)])
    assert gradient(net, np.array([1.0, 0.0])).tolist() == [1.0]
    g1, _ = gen.g1()
    assert np.all(gradient(g1, np.full(4, 2.5)) == 0)


def test_single_edge_laplacian():
    net = build_network([1, 2], [True, False], [(1, 2)])
    assert np.array_equal(laplacian(net, np.array([3.0])), [[3.0, -3.0], [-3.0, 3.0]])


@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
def test_g2_interior_blocks(mu):
    net, sigma = gen.g2(mu)
    assert blocks(net, laplacian(net, sigma))[3][0, 0] == pytest.approx(2 * (1 + mu))
    u = dirichlet_solve(net, sigma, gen.g2_bc()[0])
    s = sign_field(net, u, "real_conductivity")
    assert np.array_equal(s == -1, gen.g2_vertical_mask(net))
    assert blocks(net, laplacian(net, s * sigma))[3][0, 0] == pytest.approx(2 * (mu - 1))


def test_g2_currents_along_vertical_edges():
    net, sigma = gen.g2(1.7)
    u = dirichlet_solve(net, sigma, gen.g2_bc()[0])
    assert u[net.index_of(9)] == pytest.approx(0.5)
    g = np.abs(gradient(net, u))
    vert = gen.g2_vertical_mask(net)
    np.testing.assert_allclose(g[vert], 0.5, atol=1e-14)
    np.testing.assert_allclose(g[~vert], 0.0, atol=1e-14)
    assert np.array_equal(support(gradient(net, u)), np.flatnonzero(vert))


@given(seeds)
def test_gradient_divergence_adjoint(seed):
    net, rng = random_network(seed)
    u = rng.standard_normal(net.n_nodes)
    J = rng.standard_normal(net.n_edges)
    lhs = gradient(net, u) @ J
    rhs = u @ divergence(net, J)
    assert abs(lhs - rhs) <= 1e-12 * np.linalg.norm(u) * np.linalg.norm(J)


@given(seeds, st.booleans())
def test_laplacian_symmetric_zero_row_sums(seed, complex_weights):
    net, rng = random_network(seed)
    w = rng.standard_normal(net.n_edges)
    if complex_weights:
        w = w + 1j * rng.standard_normal(net.n_edges)
    L = laplacian(net, w)
    assert np.array_equal(L, L.T)
    np.testing.assert_allclose(L.sum(axis=1), 0, atol=1e-12)


@given(seeds)
def test_laplacian_psd_for_positive_weights(seed):
    net, rng = random_network(seed)
    L = laplacian(net, rng.uniform(0.1, 3.0, net.n_edges))
    assert np.linalg.eigvalsh(L).min() >= -1e-12 * np.trace(L)


@given(seeds)
def test_laplacian_is_edge_permutation_equivariant(seed):
    net, rng = random_network(seed)
    w = rng.uniform(0.5, 2, net.n_edges)
    perm = rng.permutation(net.n_edges)
    pairs = [tuple(int(net.ids[k]) for k in net.edges[e]) for e in perm]
    other = build_network(net.ids.tolist(), net.boundary_mask.tolist(), pairs)
    # other's edges follow perm order (default edge ids are list positions)
    np.testing.assert_allclose(laplacian(other, w[perm]), laplacian(net, w), atol=1e-14)
    u = rng.standard_normal(net.n_nodes)
    np.testing.assert_array_equal(gradient(other, u), gradient(net, u)[perm])


# -- solvers ----------------------------------------------------------------


def test_g1_closed_form():
    net, sigma = gen.g1()
    u = dirichlet_solve(net, sigma, np.array([1.0, 0, 0]))
    assert abs(u[net.index_of(4)] - 1 / 3) <= 1e-14


@pytest.mark.parametrize("eps", [1e-1, 1e-3])
def test_g3_eps_closed_form(eps):
    net, sigma = gen.g3_eps(eps)
    u = dirichlet_solve(net, sigma, gen.g3_eps_bc()[0])
    assert u[net.index_of(5)] == pytest.approx((4 + 3 * eps) / (8 + 3 * eps), abs=1e-12)
    assert u[net.index_of(6)] == pytest.approx((4 + 2 * eps) / (8 + 3 * eps), abs=1e-12)


@given(seeds, st.floats(-5, 5))
def test_constant_boundary_gives_constant_state(seed, c):
    net, rng = random_network(seed)
    u = dirichlet_solve(net, rng.uniform(0.5, 2, net.n_edges), np.full(net.n_boundary, c))
    np.testing.assert_allclose(u, c, atol=1e-12 * (1 + abs(c)))


@given(seeds)
def test_maximum_principle(seed):
    net, rng = random_network(seed)
    f = rng.standard_normal(net.n_boundary)
    u = dirichlet_solve(net, rng.uniform(0.5, 2, net.n_edges), f)
    tol = 1e-12 * (1 + np.abs(f).max())
    assert np.all(u >= f.min() - tol) and np.all(u <= f.max() + tol)


@given(seeds, st.booleans())
def test_interior_residual_small(seed, with_q):
    net, rng = random_network(seed)
    sigma = rng.uniform(0.5, 2, net.n_edges)
    f = rng.standard_normal(net.n_boundary)
    L = laplacian(net, sigma)
    if with_q:
        q = rng.uniform(0.1, 1.0, net.n_interior)
        u = schrodinger_solve(net, sigma, q, f)
        r = L[net.interior] @ u + q * u[net.interior]
    else:
        u = dirichlet_solve(net, sigma, f)
        r = L[net.interior] @ u
    assert np.linalg.norm(r) <= 1e-10 * max(np.linalg.norm(f), 1.0)
    np.testing.assert_array_equal(u[net.boundary], f)


def test_schrodinger_examples():
    net, sigma = gen.g1()
    f = np.array([1.0, 0, 0])
    np.testing.assert_array_equal(schrodinger_solve(net, sigma, np.zeros(1), f), dirichlet_solve(net, sigma, f))
    assert schrodinger_solve(net, sigma, np.array([1.0]), f)[3] == pytest.approx(0.25, abs=1e-15)
    with pytest.raises(SingularOperatorError) as info:
        schrodinger_solve(net, sigma, np.array([-3.0]), f)
    assert info.value.smallest == pytest.approx(0.0, abs=1e-12)


def test_singular_error_is_tagged_with_experiment():
    net, sigma = gen.g1()
    spec = ProblemSpec("real_schrodinger", net, sigma, [np.array([1.0, 0, 0])] * 2, q=np.array([-3.0]))
    with pytest.raises(SingularOperatorError) as info:
        solve_states(spec)
    assert info.value.experiment == 0


def test_complex_weights_solve():
    net, sp, spp = gen.g3()
    u = dirichlet_solve(net, sp + 1j * spp, np.array([1.0, 0, 0, 0]))
    L = laplacian(net, sp + 1j * spp)
    np.testing.assert_allclose(L[net.interior] @ u, 0, atol=1e-13)


# -- supports ---------------------------------------------------------------


def test_pseudoinverse_examples():
    np.testing.assert_array_equal(field_pseudoinverse(np.array([2.0, 0, -4]), 0.0), [0.5, 0, -0.25])
    np.testing.assert_array_equal(field_pseudoinverse(np.zeros(3)), np.zeros(3))
    np.testing.assert_array_equal(field_pseudoinverse(np.array([1.0, 1e-15]), 1e-12), [1.0, 0.0])


def test_support_examples():
    assert support(np.array([0.0, 3.0, 0.0])).tolist() == [1]
    assert support(np.zeros(4)).size == 0


def test_sign_field_trivial_cases():
    net, sigma = gen.g1()
    assert np.all(sign_field(net, np.zeros(4), "real_conductivity") == 1)
    u = np.array([1.0, 2.0, 3.0, 0.5])
    assert np.all(sign_field(net, u, "real_conductivity") == -1)
    assert np.all(sign_field(net, u, "real_schrodinger") == -1)
