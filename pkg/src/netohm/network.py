"""
Resistor networks on graphs
===========================

Graph representation, the discrete gradient and weighted Laplacian, and the
Dirichlet / Schrodinger forward solvers. Everything is dense: the networks
this package targets have at most a few hundred nodes.

Node ids are arbitrary positive integers chosen by the caller; internally
nodes are indexed ``0..n-1`` in sorted-id order. Edge orientation
``(tail, head)`` is fixed at construction, and ``(grad u)(e) = u[tail] - u[head]``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import (
    DanglingEndpointError,
    DuplicateEdgeError,
    EmptyPartitionError,
    LoopEdgeError,
    NetworkError,
    SingularOperatorError,
)

#: default relative threshold for supports and field pseudoinverses
SUPPORT_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Network:
    """Undirected graph with a boundary/interior node partition.

    Use :func:`build_network` rather than calling this directly; it validates
    the invariants.

    Attributes
    ----------
    ids : (n,) int array
        Sorted external node ids.
    boundary_mask : (n,) bool array
        True for boundary nodes.
    edges : (m, 2) int array
        ``(tail, head)`` internal node indices, one row per edge.
    coords : (n, 2) float array or None
        Optional planar coordinates, used by generators and demos only.
    edge_ids : (m,) int array
        External edge ids.
    """

    ids: np.ndarray
    boundary_mask: np.ndarray
    edges: np.ndarray
    coords: np.ndarray | None = None
    edge_ids: np.ndarray | None = None
    _grad: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        m, n = len(self.edges), len(self.ids)
        D = np.zeros((m, n))
        rows = np.arange(m)
        D[rows, self.edges[:, 0]] = 1.0
        D[rows, self.edges[:, 1]] = -1.0
        D.setflags(write=False)
        object.__setattr__(self, "_grad", D)
        if self.edge_ids is None:
            object.__setattr__(self, "edge_ids", np.arange(m))
        for arr in (self.ids, self.boundary_mask, self.edges, self.edge_ids, self.coords):
            if arr is not None:
                arr.setflags(write=False)

    @property
    def n_nodes(self) -> int:
        return len(self.ids)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def boundary(self) -> np.ndarray:
        """Internal indices of boundary nodes (ascending)."""
        return np.flatnonzero(self.boundary_mask)

    @property
    def interior(self) -> np.ndarray:
        """Internal indices of interior nodes (ascending)."""
        return np.flatnonzero(~self.boundary_mask)

    @property
    def n_boundary(self) -> int:
        return int(self.boundary_mask.sum())

    @property
    def n_interior(self) -> int:
        return self.n_nodes - self.n_boundary

    @property
    def grad_matrix(self) -> np.ndarray:
        """The (m, n) incidence matrix representing the discrete gradient."""
        return self._grad

    def index_of(self, node_id: int) -> int:
        """Internal index of an external node id."""
        k = int(np.searchsorted(self.ids, node_id))
        if k >= len(self.ids) or self.ids[k] != node_id:
            raise KeyError(node_id)
        return k

    def edge_index(self, tail_id: int, head_id: int) -> int:
        """Index of the edge joining two node ids, in either orientation."""
        a, b = self.index_of(tail_id), self.index_of(head_id)
        hit = np.flatnonzero(
            ((self.edges[:, 0] == a) & (self.edges[:, 1] == b))
            | ((self.edges[:, 0] == b) & (self.edges[:, 1] == a))
        )
        if len(hit) == 0:
            raise KeyError((tail_id, head_id))
        return int(hit[0])

    def edge_orientation(self, tail_id: int, head_id: int) -> int:
        """+1 if the stored edge runs tail_id -> head_id, -1 if reversed."""
        k = self.edge_index(tail_id, head_id)
        return 1 if self.ids[self.edges[k, 0]] == tail_id else -1

    def interior_edge_mask(self) -> np.ndarray:
        """True for edges whose two endpoints are interior nodes."""
        inner = ~self.boundary_mask
        return inner[self.edges[:, 0]] & inner[self.edges[:, 1]]

    def boundary_edge_mask(self) -> np.ndarray:
        """True for edges whose two endpoints are boundary nodes."""
        return self.boundary_mask[self.edges[:, 0]] & self.boundary_mask[self.edges[:, 1]]

    def same_as(self, other: "Network") -> bool:
        def eq(a, b):
            if a is None or b is None:
                return a is None and b is None
            return a.shape == b.shape and np.array_equal(a, b)

        return (
            eq(self.ids, other.ids)
            and eq(self.boundary_mask, other.boundary_mask)
            and eq(self.edges, other.edges)
            and eq(self.edge_ids, other.edge_ids)
            and eq(self.coords, other.coords)
        )


def build_network(
    vertices: Sequence[int],
    boundary_flags: Sequence[bool] | dict,
    edges: Iterable[tuple[int, int]],
    coords=None,
    edge_ids: Sequence[int] | None = None,
) -> Network:
    """Validate and build a :class:`Network`.

    Parameters
    ----------
    vertices : sequence of int
        External node ids (positive integers, any order).
    boundary_flags : sequence of bool or dict
        One flag per vertex (aligned with `vertices`) or a mapping id -> flag.
    edges : iterable of (tail_id, head_id)
        Oriented edges given by external ids.
    coords : sequence of (x, y), optional
        Aligned with `vertices`.
    edge_ids : sequence of int, optional
        External edge ids; edges are stored in sorted edge-id order.
    """
    vertices = [int(v) for v in vertices]
    if len(set(vertices)) != len(vertices):
        raise NetworkError("duplicate vertex ids")
    if any(v <= 0 for v in vertices):
        raise NetworkError("vertex ids must be positive integers")
    if isinstance(boundary_flags, dict):
        missing = [v for v in vertices if v not in boundary_flags]
        if missing:
            raise NetworkError(f"no boundary flag for vertices {missing}")
        flags = [bool(boundary_flags[v]) for v in vertices]
    else:
        flags = [bool(b) for b in boundary_flags]
        if len(flags) != len(vertices):
            raise NetworkError("need exactly one boundary flag per vertex")

    order = np.argsort(vertices, kind="stable")
    ids = np.asarray(vertices, dtype=np.int64)[order]
    mask = np.asarray(flags, dtype=bool)[order]
    if not mask.any() or mask.all():
        raise EmptyPartitionError("boundary and interior node sets must both be non-empty")

    xy = None
    if coords is not None:
        xy = np.asarray(coords, dtype=float).reshape(len(vertices), 2)[order]

    edge_list = [(int(a), int(b)) for a, b in edges]
    if edge_ids is None:
        eids = np.arange(len(edge_list), dtype=np.int64)
    else:
        eids = np.asarray(edge_ids, dtype=np.int64)
        if len(eids) != len(edge_list) or len(set(eids.tolist())) != len(eids):
            raise NetworkError("edge ids must be unique, one per edge")
    eorder = np.argsort(eids, kind="stable")

    lookup = {v: k for k, v in enumerate(ids.tolist())}
    seen = set()
    index_edges = []
    for k in eorder:
        a, b = edge_list[k]
        if a == b:
            raise LoopEdgeError(f"loop edge ({a}, {b})")
        if a not in lookup or b not in lookup:
            raise DanglingEndpointError(f"edge ({a}, {b}) references an unknown vertex")
        key = frozenset((a, b))
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge ({a}, {b})")
        seen.add(key)
        index_edges.append((lookup[a], lookup[b]))

    return Network(
        ids=ids,
        boundary_mask=mask,
        edges=np.asarray(index_edges, dtype=np.int64).reshape(-1, 2),
        coords=xy,
        edge_ids=eids[eorder],
    )


def _check_len(x, n, what):
    x = np.asarray(x)
    if x.shape != (n,):
        raise ValueError(f"{what} must have shape ({n},), got {x.shape}")
    return x


def gradient(net: Network, u) -> np.ndarray:
    """Per-edge difference ``u[tail] - u[head]``."""
    u = _check_len(u, net.n_nodes, "vertex field")
    return u[net.edges[:, 0]] - u[net.edges[:, 1]]


def divergence(net: Network, J) -> np.ndarray:
    """Adjoint of :func:`gradient`: ``(grad^T J)(i)``, net current leaving node i."""
    J = _check_len(J, net.n_edges, "edge field")
    out = np.zeros(net.n_nodes, dtype=np.result_type(J.dtype, float))
    np.add.at(out, net.edges[:, 0], J)
    np.subtract.at(out, net.edges[:, 1], J)
    return out


def laplacian(net: Network, w) -> np.ndarray:
    """Weighted Laplacian ``grad^T diag(w) grad`` as a dense (n, n) matrix.

    Weights may be sign-indefinite or complex; the result is symmetric
    (not Hermitian) in the complex case.
    """
    w = _check_len(w, net.n_edges, "edge weights")
    D = net.grad_matrix
    return D.T @ (w[:, None] * D)


def blocks(net: Network, M: np.ndarray):
    """Split a vertex-by-vertex matrix into its (BB, BI, IB, II) blocks."""
    b, i = net.boundary, net.interior
    return M[np.ix_(b, b)], M[np.ix_(b, i)], M[np.ix_(i, b)], M[np.ix_(i, i)]


def smallest_singular_value(M: np.ndarray) -> tuple[float, float]:
    """(smallest, largest) singular value of a square matrix."""
    s = np.linalg.svd(M, compute_uv=False)
    return float(s[-1]), float(s[0])


def is_numerically_singular(M: np.ndarray) -> bool:
    """Standard SVD rank rule: ``s_min <= n * eps * s_max``."""
    if M.size == 0:
        return False
    smin, smax = smallest_singular_value(M)
    return smax == 0.0 or smin <= max(M.shape) * np.finfo(float).eps * smax


def solve_interior(K: np.ndarray, rhs: np.ndarray, what: str = "interior operator") -> np.ndarray:
    """Solve ``K x = rhs`` by LU with partial pivoting, refusing singular `K`.

    The SVD check only runs when the LU factor has a suspiciously small pivot.
    """
    with warnings.catch_warnings():
        # exact-zero pivots are handled below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(K, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= 1e-8 * max(pivots.max(), np.finfo(float).tiny):
        if is_numerically_singular(K):
            smin, smax = smallest_singular_value(K)
            raise SingularOperatorError(f"{what} is numerically singular", smin, smax)
    return scipy.linalg.lu_solve((lu, piv), rhs)


def dirichlet_solve(net: Network, w, f) -> np.ndarray:
    """Voltages with ``u_B = f`` and Kirchhoff's law ``(L_w u)_I = 0``.

    Works for real or complex weights and boundary data; output is real when
    both are real.
    """
    return schrodinger_solve(net, w, np.zeros(net.n_interior), f)


def schrodinger_solve(net: Network, sigma, q, f) -> np.ndarray:
    """Solve ``(L_sigma u)_I + q * u_I = 0`` with ``u_B = f``.

    `q` is an interior field (length ``n_interior``), possibly complex.
    """
    sigma = _check_len(sigma, net.n_edges, "conductivity")
    q = _check_len(q, net.n_interior, "potential")
    f = _check_len(f, net.n_boundary, "boundary data")
    L = laplacian(net, sigma)
    _, _, L_ib, L_ii = blocks(net, L)
    K = L_ii + np.diag(q)
    dtype = np.result_type(sigma.dtype, q.dtype, f.dtype, float)
    u = np.zeros(net.n_nodes, dtype=dtype)
    u[net.boundary] = f
    u[net.interior] = -solve_interior(K, L_ib @ f)
    return u


def field_pseudoinverse(f, tau: float = SUPPORT_RTOL) -> np.ndarray:
    """Entrywise reciprocal on the numerical support, zero elsewhere."""
    f = np.asarray(f)
    out = np.zeros_like(f, dtype=np.result_type(f.dtype, float))
    idx = support(f, tau)
    out[idx] = 1.0 / f[idx]
    return out


def support(f, tau: float = SUPPORT_RTOL) -> np.ndarray:
    """Indices with ``|f(x)| > tau * max|f|``; empty for the zero field."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    a = np.abs(np.asarray(f))
    if a.size == 0 or a.max() == 0.0:
        return np.array([], dtype=np.int64)
    return np.flatnonzero(a > tau * a.max())


def indicator(n: int, idx) -> np.ndarray:
    out = np.zeros(n)
    out[np.asarray(idx, dtype=np.int64)] = 1.0
    return out
