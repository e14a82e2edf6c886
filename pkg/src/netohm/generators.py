"""
Example networks and their standard boundary conditions.

Node numbering follows the usual convention for these examples: boundary
nodes first, interior nodes last, ids starting at 1.
"""

from __future__ import annotations

import numpy as np

from .network import Network, build_network


def g1() -> tuple[Network, np.ndarray]:
    """Star with boundary {1, 2, 3}, interior {4}, unit conductivities."""
    net = build_network([1, 2, 3, 4], [True, True, True, False], [(1, 4), (2, 4), (3, 4)])
    return net, np.ones(3)


def g1_bc() -> list[np.ndarray]:
    return [np.array([1.0, 0.0, 0.0])]


# 3x3 grid: top row 1 2 3, middle row 4 9 5, bottom row 6 7 8
_G2_COORDS = {
    1: (0.0, 1.0), 2: (0.5, 1.0), 3: (1.0, 1.0),
    4: (0.0, 0.5), 9: (0.5, 0.5), 5: (1.0, 0.5),
    6: (0.0, 0.0), 7: (0.5, 0.0), 8: (1.0, 0.0),
}
_G2_HORIZONTAL = [(1, 2), (2, 3), (4, 9), (9, 5), (6, 7), (7, 8)]
_G2_VERTICAL = [(1, 4), (4, 6), (2, 9), (9, 7), (3, 5), (5, 8)]


def g2(mu: float = 1.0) -> tuple[Network, np.ndarray]:
    """3x3 grid with a single interior node 9.

    Vertical edges have conductivity 1, horizontal edges `mu`.
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    ids = list(range(1, 10))
    edges = _G2_HORIZONTAL + _G2_VERTICAL
    net = build_network(ids, [i != 9 for i in ids], edges, coords=[_G2_COORDS[i] for i in ids])
    sigma = np.array([mu] * len(_G2_HORIZONTAL) + [1.0] * len(_G2_VERTICAL))
    return net, sigma


def g2_vertical_mask(net: Network) -> np.ndarray:
    """True on the vertical edges of :func:`g2`."""
    mask = np.zeros(net.n_edges, dtype=bool)
    for a, b in _G2_VERTICAL:
        mask[net.edge_index(a, b)] = True
    return mask


def g2_bc() -> list[np.ndarray]:
    """Boundary data on nodes 1..8: a vertical and a horizontal linear ramp."""
    return [
        np.array([1, 1, 1, 0.5, 0.5, 0, 0, 0]),
        np.array([1, 0.5, 0, 1, 0, 1, 0.5, 0]),
    ]


def g2_degenerate_directions(net: Network) -> tuple[np.ndarray, np.ndarray]:
    """Conductivity perturbations that are invisible to the linearized data at mu = 1.

    ``v1`` is +1 on 2~9 and -1 on 9~7; ``v2`` is +1 on 4~9 and -1 on 9~5.
    """
    v1 = np.zeros(net.n_edges)
    v2 = np.zeros(net.n_edges)
    v1[net.edge_index(2, 9)] = net.edge_orientation(2, 9)
    v1[net.edge_index(9, 7)] = -net.edge_orientation(9, 7)
    v2[net.edge_index(4, 9)] = net.edge_orientation(4, 9)
    v2[net.edge_index(9, 5)] = -net.edge_orientation(9, 5)
    return v1, v2


G3_SIGMA_REAL = np.array([2.0, 1.0, 1.0, 3.0, 1.0])
G3_SIGMA_IMAG = np.array([2.0, 1.0, 1.0, 2.0, 3.0])


def g3() -> tuple[Network, np.ndarray, np.ndarray]:
    """Two interior nodes {5, 6} joined by an edge, each fed by two boundary nodes.

    Edges 1~5, 2~5, 3~6, 4~6, 5~6. Returns ``(net, sigma_real, sigma_imag)``
    with the weights used for the two-frequency rank experiment.
    """
    net = build_network(
        [1, 2, 3, 4, 5, 6],
        [True, True, True, True, False, False],
        [(1, 5), (2, 5), (3, 6), (4, 6), (5, 6)],
    )
    return net, G3_SIGMA_REAL.copy(), G3_SIGMA_IMAG.copy()


def g3_bc(n: int) -> list[np.ndarray]:
    """Unit boundary voltages ``delta_1 .. delta_n`` on nodes 1..4."""
    if not 1 <= n <= 4:
        raise ValueError("g3 has 4 boundary nodes; n must be in 1..4")
    return [np.eye(4)[j] for j in range(n)]


def g3_eps(eps: float) -> tuple[Network, np.ndarray]:
    """Variant of :func:`g3` whose 5~6 current is O(eps) for ``f = (1, 1, 0, 0)``.

    Edges 1~5, 3~5, 2~6, 4~6, 5~6 with ``sigma(1~5) = 1 + eps``, all others 1.
    Then ``u(5) = (4+3 eps)/(8+3 eps)`` and ``u(6) = (4+2 eps)/(8+3 eps)``.
    """
    if not abs(eps) < 1:
        raise ValueError("|eps| must be < 1")
    net = build_network(
        [1, 2, 3, 4, 5, 6],
        [True, True, True, True, False, False],
        [(1, 5), (3, 5), (2, 6), (4, 6), (5, 6)],
    )
    sigma = np.ones(5)
    sigma[net.edge_index(1, 5)] = 1.0 + eps
    return net, sigma


def g3_eps_bc() -> list[np.ndarray]:
    return [np.array([1.0, 1.0, 0.0, 0.0])]


def grid_network(n: int) -> Network:
    """n x n grid on the unit square with every perimeter node on the boundary.

    Ids run row by row from the top-left corner; ``x`` grows to the right
    and ``y`` grows upwards.
    """
    if n < 3:
        raise ValueError("grid needs n >= 3")
    ids, flags, coords, edges = [], [], [], []
    h = 1.0 / (n - 1)
    for r in range(n):
        for c in range(n):
            ids.append(r * n + c + 1)
            flags.append(r in (0, n - 1) or c in (0, n - 1))
            coords.append((c * h, 1.0 - r * h))
    for r in range(n):
        for c in range(n - 1):
            edges.append((r * n + c + 1, r * n + c + 2))
    for r in range(n - 1):
        for c in range(n):
            edges.append((r * n + c + 1, (r + 1) * n + c + 1))
    return build_network(ids, flags, edges, coords=coords)


def grid_bc(net: Network) -> list[np.ndarray]:
    """``x + y`` and ``x - y`` restricted to the boundary nodes."""
    xy = net.coords[net.boundary]
    return [xy[:, 0] + xy[:, 1], xy[:, 0] - xy[:, 1]]


def smooth_conductivity(net: Network) -> np.ndarray:
    """A smooth positive conductivity evaluated at edge midpoints.

    ``1 + 0.5 * exp(-8 |p - (0.6, 0.4)|^2) + 0.25 * sin(pi x) * cos(pi y)``,
    which stays within roughly [0.75, 1.75] on the unit square.
    """
    mid = 0.5 * (net.coords[net.edges[:, 0]] + net.coords[net.edges[:, 1]])
    x, y = mid[:, 0], mid[:, 1]
    bump = np.exp(-8.0 * ((x - 0.6) ** 2 + (y - 0.4) ** 2))
    return 1.0 + 0.5 * bump + 0.25 * np.sin(np.pi * x) * np.cos(np.pi * y)


def fig_det_grid(n: int = 4) -> Network:
    """Grid used for the thermal-noise experiment (same layout as :func:`grid_network`)."""
    return grid_network(n)


def fig_det_bc(net: Network) -> np.ndarray:
    """Top and right sides at 1 V, bottom and left at 0 V.

    Corners sit on two sides; top/right wins, so only the bottom-left
    corner is grounded.
    """
    xy = net.coords[net.boundary]
    hi = (np.isclose(xy[:, 1], 1.0)) | (np.isclose(xy[:, 0], 1.0))
    return hi.astype(float)


def path_network(n_interior: int = 2) -> tuple[Network, np.ndarray]:
    """Path with two boundary endpoints and `n_interior` interior nodes."""
    n = n_interior + 2
    ids = list(range(1, n + 1))
    # ids 1 and 2 are the endpoints, interior nodes follow
    order = [1] + list(range(3, n + 1)) + [2]
    edges = list(zip(order[:-1], order[1:]))
    net = build_network(ids, [i <= 2 for i in ids], edges)
    return net, np.ones(len(edges))
